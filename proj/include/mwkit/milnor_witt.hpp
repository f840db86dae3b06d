#pragma once

// Milnor-Witt K-theory. An element of K^MW_n is stored as the compatible
// pair (Milnor class, class in I^n), the fiber product over i^n; in
// nonpositive degrees only the Witt part remains (K^MW_{-n} = W via eta).
// Expressions are integer combinations of words in [a] and eta with optional
// <a> / <<a>> prefixes; normalization pushes every word through the two
// projections and checks the compatibility invariant.

#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mwkit/milnor.hpp"

namespace mwkit {

struct MWWordGen {
    bool is_eta = false;
    UnitRep a;  // meaningful when !is_eta

    static MWWordGen eta() { return {true, {}}; }
    static MWWordGen bracket(const UnitRep& u) { return {false, u}; }
};

struct MWGWFactor {
    bool pfister = false;  // <<a>> when true, <a> otherwise
    UnitRep a;
};

struct MWTerm {
    Int coeff = 1;
    std::vector<MWGWFactor> prefix;
    std::vector<MWWordGen> word;

    int degree() const {
        int d = 0;
        for (const auto& g : word) d += g.is_eta ? -1 : 1;
        return d;
    }
};

struct MWExpr {
    FieldSpec field;
    std::vector<MWTerm> terms;
};

struct MWClass {
    FieldSpec field;
    int degree = 0;
    std::optional<MilnorClass> milnor;  // present iff degree >= 0
    WittClass witt;                     // class of I^max(degree,0) inside W

    bool is_zero() const { return (!milnor || milnor->is_zero()) && witt.is_zero(); }

    bool operator==(const MWClass& o) const {
        return field == o.field && degree == o.degree && milnor == o.milnor && witt == o.witt;
    }
    bool operator!=(const MWClass& o) const { return !(*this == o); }

    std::string to_string() const {
        std::ostringstream os;
        os << "deg " << degree << ": ";
        if (milnor) os << "[" << milnor->to_string() << "] ";
        os << "witt " << witt.to_string();
        return os.str();
    }
};

inline MWClass mwk_zero(const FieldSpec& f, int degree) {
    MWClass c;
    c.field = f;
    c.degree = degree;
    if (degree >= 0) c.milnor = milnor_zero(f, degree);
    c.witt = witt_zero(f);
    return c;
}

// Hard invariant from the cartesian square: the mod-2 Milnor part must agree
// with the Witt part in I^n/I^{n+1}.
inline void mwk_check_compatible(const MWClass& c) {
    if (c.degree < 0 || !c.milnor) return;
    GWClass p = mod2_to_in(*c.milnor);
    if (!in_fundamental_power(witt_sub(c.witt, p.witt), c.degree + 1))
        throw std::logic_error("Milnor-Witt compatibility invariant violated");
}

inline MWClass mwk_normalize(const MWExpr& e, std::optional<int> expected_degree = std::nullopt) {
    if (e.terms.empty() && !expected_degree) throw std::invalid_argument("empty expression without a degree");
    int degree = expected_degree ? *expected_degree : e.terms.front().degree();
    GWClass total = gw_zero(e.field);
    std::vector<MilnorTerm> milnor_terms;
    for (const auto& t : e.terms) {
        if (t.degree() != degree) throw std::invalid_argument("mixed degrees in Milnor-Witt expression");
        GWClass g = gw_one(e.field);
        Int prefix_rank = 1;
        for (const auto& f : t.prefix) {
            require_same_field(e.field, f.a.field);
            g = gw_mul(g, f.pfister ? pfister({f.a}) : gw_basis_class(f.a));
            if (f.pfister) prefix_rank = 0;
        }
        bool has_eta = false;
        std::vector<UnitRep> brackets;
        for (const auto& w : t.word) {
            if (w.is_eta) {
                has_eta = true;
            } else {
                require_same_field(e.field, w.a.field);
                g = gw_mul(g, pfister({w.a}));
                brackets.push_back(w.a);
            }
        }
        total = gw_add(total, gw_scale(g, t.coeff));
        if (degree >= 1 && !has_eta && prefix_rank != 0) milnor_terms.push_back({brackets, t.coeff * prefix_rank});
    }
    MWClass c;
    c.field = e.field;
    c.degree = degree;
    c.witt = total.witt;
    if (degree == 0) {
        MilnorClass m0 = milnor_zero(e.field, 0);
        m0.n0 = total.rank;
        c.milnor = m0;
    } else if (degree >= 1) {
        c.milnor = milnor_normalize(e.field, degree, milnor_terms);
    }
    mwk_check_compatible(c);
    return c;
}

inline MWClass mwk_add(const MWClass& x, const MWClass& y) {
    require_same_field(x.field, y.field);
    if (x.degree != y.degree) throw std::invalid_argument("degree mismatch");
    MWClass c = x;
    if (c.milnor) c.milnor = milnor_add(*x.milnor, *y.milnor);
    c.witt = witt_add(x.witt, y.witt);
    mwk_check_compatible(c);
    return c;
}

inline MWClass mwk_neg(const MWClass& x) {
    MWClass c = x;
    if (c.milnor) c.milnor = milnor_neg(*x.milnor);
    c.witt = witt_neg(x.witt);
    return c;
}

inline MWClass mwk_sub(const MWClass& x, const MWClass& y) { return mwk_add(x, mwk_neg(y)); }

inline MWClass mwk_scale(const MWClass& x, const Int& n) {
    MWClass c = x;
    if (c.milnor) c.milnor = milnor_scale(*x.milnor, n);
    c.witt = witt_scale(x.witt, n);
    mwk_check_compatible(c);
    return c;
}

inline MWClass mwk_mul(const MWClass& x, const MWClass& y) {
    require_same_field(x.field, y.field);
    MWClass c;
    c.field = x.field;
    c.degree = x.degree + y.degree;
    if (c.degree >= 0) {
        if (x.degree >= 0 && y.degree >= 0)
            c.milnor = milnor_mul(*x.milnor, *y.milnor);
        else
            c.milnor = milnor_zero(c.field, c.degree);  // eta factors die in K^M
    }
    c.witt = witt_mul(x.witt, y.witt);
    mwk_check_compatible(c);
    return c;
}

// GW(F)-module action; on the Milnor side GW acts through its rank.
inline MWClass gw_act(const GWClass& g, const MWClass& x) {
    require_same_field(g.field, x.field);
    MWClass c = x;
    if (c.milnor) c.milnor = milnor_scale(*x.milnor, g.rank);
    c.witt = witt_mul(g.witt, x.witt);
    mwk_check_compatible(c);
    return c;
}

inline MWClass mwk_eta(const FieldSpec& f) {
    MWClass c;
    c.field = f;
    c.degree = -1;
    c.witt = witt_class_of_entries(f, {unit_one(f)});
    return c;
}

inline MWClass mwk_bracket(const UnitRep& a) {
    MWExpr e{a.field, {MWTerm{1, {}, {MWWordGen::bracket(a)}}}};
    return mwk_normalize(e);
}

inline MWExpr mw_word(const FieldSpec& f, const std::vector<UnitRep>& brackets, const Int& coeff = 1) {
    MWTerm t;
    t.coeff = coeff;
    for (const auto& a : brackets) t.word.push_back(MWWordGen::bracket(a));
    return MWExpr{f, {t}};
}

// --- the two short exact sequences of the fiber product ---

// I^{n+1} -> K^MW_n, <<a_1,...,a_{n+1}>> -> eta [a_1]...[a_{n+1}]
inline MWClass incl_pfister(const std::vector<UnitRep>& units) {
    if (units.empty()) throw std::invalid_argument("incl_pfister needs at least one unit");
    MWTerm t;
    t.word.push_back(MWWordGen::eta());
    for (const auto& a : units) t.word.push_back(MWWordGen::bracket(a));
    return mwk_normalize(MWExpr{units.front().field, {t}});
}

// 2K^M_n -> K^MW_n, 2{a_1,...,a_n} -> h[a_1]...[a_n] = [a_1^2][a_2]...[a_n]
inline MWClass incl_2milnor(const std::vector<UnitRep>& symbol) {
    if (symbol.empty()) throw std::invalid_argument("incl_2milnor needs degree >= 1");
    std::vector<UnitRep> brackets = symbol;
    brackets[0] = unit_mul(symbol[0], symbol[0]);
    return mwk_normalize(mw_word(symbol.front().field, brackets));
}

inline MilnorClass proj_milnor(const MWClass& x) {
    if (x.degree < 0) throw std::invalid_argument("degree mismatch: K^M vanishes in negative degrees");
    return *x.milnor;
}

inline WittClass proj_ipower(const MWClass& x) { return x.witt; }

}  // namespace mwkit
