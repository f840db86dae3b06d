#pragma once

// Integral group ring Z[F^x]: finitely supported integer combinations of
// units, with the augmentation map and the generators <<a>> = <a> - 1 of the
// augmentation ideal.

#include <map>
#include <sstream>
#include <string>

#include "mwkit/field.hpp"

namespace mwkit {

struct GroupRingElem {
    FieldSpec field;
    std::map<UnitRep, Int> terms;  // canonical order, no zero coefficients

    bool is_zero() const { return terms.empty(); }
    bool operator==(const GroupRingElem& o) const { return field == o.field && terms == o.terms; }
    bool operator!=(const GroupRingElem& o) const { return !(*this == o); }
};

inline GroupRingElem gr_zero(const FieldSpec& f) { return GroupRingElem{f, {}}; }

inline GroupRingElem gr_basis(const UnitRep& a) {
    GroupRingElem e{a.field, {}};
    e.terms[a] = 1;
    return e;
}

inline GroupRingElem gr_int(const FieldSpec& f, const Int& n) {
    GroupRingElem e{f, {}};
    if (n != 0) e.terms[unit_one(f)] = n;
    return e;
}

inline GroupRingElem gr_one(const FieldSpec& f) { return gr_int(f, 1); }

inline void gr_accumulate(GroupRingElem& e, const UnitRep& u, const Int& c) {
    if (c == 0) return;
    auto it = e.terms.find(u);
    if (it == e.terms.end()) {
        e.terms.emplace(u, c);
    } else {
        it->second += c;
        if (it->second == 0) e.terms.erase(it);
    }
}

inline GroupRingElem gr_add(const GroupRingElem& x, const GroupRingElem& y) {
    require_same_field(x.field, y.field);
    GroupRingElem e = x;
    for (const auto& [u, c] : y.terms) gr_accumulate(e, u, c);
    return e;
}

inline GroupRingElem gr_neg(const GroupRingElem& x) {
    GroupRingElem e = x;
    for (auto& [u, c] : e.terms) c = -c;
    return e;
}

inline GroupRingElem gr_sub(const GroupRingElem& x, const GroupRingElem& y) { return gr_add(x, gr_neg(y)); }

inline GroupRingElem gr_scale(const GroupRingElem& x, const Int& n) {
    GroupRingElem e{x.field, {}};
    if (n == 0) return e;
    for (const auto& [u, c] : x.terms) e.terms[u] = c * n;
    return e;
}

inline GroupRingElem gr_mul(const GroupRingElem& x, const GroupRingElem& y) {
    require_same_field(x.field, y.field);
    GroupRingElem e{x.field, {}};
    for (const auto& [u, c] : x.terms)
        for (const auto& [v, d] : y.terms) gr_accumulate(e, unit_mul(u, v), c * d);
    return e;
}

// <<a>> = <a> - 1
inline GroupRingElem gr_pfister_gen(const UnitRep& a) {
    return gr_sub(gr_basis(a), gr_one(a.field));
}

inline Int augment(const GroupRingElem& x) {
    Int s = 0;
    for (const auto& [u, c] : x.terms) s += c;
    return s;
}

// Rendering used by the CLI printer, e.g. "3<2> - <5> + 1".
inline std::string gr_to_string(const GroupRingElem& x) {
    if (x.terms.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [u, c] : x.terms) {
        Int a = c < 0 ? Int(-c) : c;
        if (first) {
            if (c < 0) os << "-";
            first = false;
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        if (u.is_one()) {
            os << a.str();
        } else {
            if (a != 1) os << a.str();
            os << "<" << unit_to_string(u) << ">";
        }
    }
    return os.str();
}

}  // namespace mwkit
