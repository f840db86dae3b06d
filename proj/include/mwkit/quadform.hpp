#pragma once

// Diagonal symmetric bilinear forms and their classification: Hilbert
// symbols over Q, canonical Witt class tuples for F_p and Q, Grothendieck-
// Witt classes as (rank, Witt class) pairs, Pfister forms and membership in
// the powers of the fundamental ideal.
//
// A Witt class carries a small reduced representative form alongside its
// invariant tuple; equality and hashing use the tuple only, while ring
// arithmetic concatenates/tensors representatives and reclassifies.

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mwkit/field.hpp"
#include "mwkit/group_ring.hpp"

namespace mwkit {

struct Place {
    enum class Kind { Infinity, Two, Odd };
    Kind kind = Kind::Infinity;
    int64_t p = 0;

    static Place infinity() { return {Kind::Infinity, 0}; }
    static Place two() { return {Kind::Two, 2}; }
    static Place odd(int64_t p) {
        if (p < 3 || p % 2 == 0 || !is_prime_u64(p)) throw std::invalid_argument("invalid place");
        return {Kind::Odd, p};
    }

    auto key() const { return std::pair<int, int64_t>(static_cast<int>(kind), p); }
    bool operator<(const Place& o) const { return key() < o.key(); }
    bool operator==(const Place& o) const { return key() == o.key(); }

    std::string to_string() const {
        switch (kind) {
            case Kind::Infinity: return "inf";
            case Kind::Two: return "2";
            default: return std::to_string(p);
        }
    }
};

namespace detail {
// odd part of a rational unit modulo 8
inline int odd_part_mod8(const UnitRep& u) {
    int r = u.sign < 0 ? 7 : 1;
    for (const auto& [q, e] : u.exps) {
        if (q == 2) continue;
        if (e % 2 != 0) r = static_cast<int>(r * (q % 8) % 8);
    }
    return r;
}
inline int eps4(int umod8) { return (umod8 % 4 == 1) ? 0 : 1; }          // (u-1)/2 mod 2
inline int omega8(int umod8) { return (umod8 == 1 || umod8 == 7) ? 0 : 1; }  // (u^2-1)/8 mod 2
}  // namespace detail

inline int hilbert_symbol(const UnitRep& a, const UnitRep& b, const Place& v) {
    if (!a.field.is_q() || !b.field.is_q()) throw std::invalid_argument("hilbert symbol needs rational units");
    switch (v.kind) {
        case Place::Kind::Infinity:
            return (a.sign < 0 && b.sign < 0) ? -1 : 1;
        case Place::Kind::Two: {
            int alpha = unit_valuation(a, 2), beta = unit_valuation(b, 2);
            int u = detail::odd_part_mod8(a), w = detail::odd_part_mod8(b);
            int e = detail::eps4(u) * detail::eps4(w) + alpha * detail::omega8(w) + beta * detail::omega8(u);
            return e % 2 == 0 ? 1 : -1;
        }
        default: {
            int64_t p = v.p;
            int alpha = unit_valuation(a, p), beta = unit_valuation(b, p);
            uint64_t u = unit_part_mod(a, p), w = unit_part_mod(b, p);
            int s = 1;
            if ((alpha & 1) && (beta & 1) && legendre(p - 1, p) < 0) s = -s;
            if (beta & 1) s *= legendre(u, p);
            if (alpha & 1) s *= legendre(w, p);
            return s;
        }
    }
}

struct DiagForm {
    FieldSpec field;
    std::vector<UnitRep> entries;
};

inline DiagForm make_form(const FieldSpec& f, std::vector<UnitRep> entries) {
    for (const auto& e : entries) require_same_field(f, e.field);
    return DiagForm{f, std::move(entries)};
}

// Witt class over F_p: (dim parity, twisted discriminant square class).
struct ResidueClassFp {
    int parity = 0;
    bool disc_square = true;

    bool trivial() const { return parity == 0 && disc_square; }
    auto key() const { return std::pair<int, bool>(parity, disc_square); }
    bool operator==(const ResidueClassFp& o) const { return key() == o.key(); }
    bool operator<(const ResidueClassFp& o) const { return key() < o.key(); }
};

// Classify a list of nonzero residues mod p as a W(F_p) class.
inline ResidueClassFp classify_fp(const std::vector<uint64_t>& entries, uint32_t p) {
    ResidueClassFp c;
    size_t k = entries.size();
    c.parity = static_cast<int>(k % 2);
    uint64_t det = 1;
    for (uint64_t e : entries) det = det * (e % p) % p;
    // twisted discriminant (-1)^{k(k-1)/2} det
    if ((k * (k - 1) / 2) % 2 == 1) det = det * (p - 1) % p;
    c.disc_square = (k == 0) || legendre(det, p) == 1;
    return c;
}

// Canonical Witt invariants. Over F_p only `fp` is meaningful; over Q the
// class is the tuple (signature, second residues at odd primes, dim parity,
// discriminant class, stabilized dyadic Hasse invariant). The representative
// form is carried for arithmetic and excluded from comparisons.
struct WittClass {
    FieldSpec field;
    ResidueClassFp fp;
    Int signature = 0;
    int parity = 0;
    UnitRep disc;  // twisted disc square class (squarefree), Q only
    int hasse2 = 1;
    std::map<int64_t, ResidueClassFp> residues;  // only nontrivial entries
    std::vector<UnitRep> rep;

    bool is_zero() const {
        if (!field.is_q()) return fp.trivial();
        return signature == 0 && parity == 0 && disc.is_one() && hasse2 == 1 && residues.empty();
    }

    auto key() const { return std::tie(fp, signature, parity, disc, hasse2, residues); }
    bool operator==(const WittClass& o) const { return field == o.field && key() == o.key(); }
    bool operator!=(const WittClass& o) const { return !(*this == o); }
    bool operator<(const WittClass& o) const { return key() < o.key(); }

    std::string to_string() const {
        if (!field.is_q()) {
            std::ostringstream os;
            os << "(parity " << fp.parity << ", disc " << (fp.disc_square ? "sq" : "ns") << ")";
            return os.str();
        }
        std::ostringstream os;
        os << "(sig " << signature.str() << ", parity " << parity << ", disc " << unit_to_string(disc)
           << ", hasse2 " << hasse2;
        for (const auto& [p, r] : residues)
            os << ", d" << p << " (" << r.parity << "," << (r.disc_square ? "sq" : "ns") << ")";
        os << ")";
        return os.str();
    }
};

namespace detail {

// Square-class-normalize the entries and cancel <a> + <-a> pairs, which
// vanish in W(F).
inline std::vector<UnitRep> reduce_rep(const FieldSpec& f, const std::vector<UnitRep>& entries) {
    std::vector<UnitRep> out;
    for (const UnitRep& e : entries) {
        UnitRep s = unit_square_class(e);
        UnitRep n = unit_square_class(unit_neg(s));
        auto it = std::find(out.begin(), out.end(), n);
        if (it != out.end())
            out.erase(it);
        else
            out.push_back(s);
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline int hasse_at(const std::vector<UnitRep>& entries, const Place& v) {
    int s = 1;
    for (size_t i = 0; i < entries.size(); ++i)
        for (size_t j = i + 1; j < entries.size(); ++j) s *= hilbert_symbol(entries[i], entries[j], v);
    return s;
}

// Witt-stable dyadic invariant: the raw Hasse symbol at 2 corrected by the
// discriminant so that adding hyperbolic planes does not change it.
inline int stable_hasse2(const std::vector<UnitRep>& entries) {
    size_t d = entries.size();
    int s = hasse_at(entries, Place::two());
    static const int alpha[4] = {1, 0, 0, 1};           // d mod 4
    static const int beta[8] = {0, 0, 0, 1, 1, 1, 1, 0};  // d mod 8
    if (alpha[d % 4]) {
        UnitRep det = unit_one(FieldSpec::rationals());
        for (const auto& e : entries) det = unit_mul(det, e);
        s *= hilbert_symbol(det, unit_minus_one(FieldSpec::rationals()), Place::two());
    }
    if (beta[d % 8]) s = -s;
    return s;
}

}  // namespace detail

inline WittClass witt_class_of_entries(const FieldSpec& f, const std::vector<UnitRep>& entries) {
    WittClass w;
    w.field = f;
    w.disc = unit_one(f);
    if (!f.is_q()) {
        std::vector<uint64_t> res;
        for (const auto& e : entries) res.push_back(e.residue);
        w.fp = classify_fp(res, f.p);
        w.rep = detail::reduce_rep(f, entries);
        return w;
    }
    size_t k = entries.size();
    w.parity = static_cast<int>(k % 2);
    UnitRep disc = unit_one(f);
    for (const auto& e : entries) {
        disc = unit_mul(disc, e);
        w.signature += e.sign;
    }
    if ((k * (k - 1) / 2) % 2 == 1) disc = unit_neg(disc);
    w.disc = unit_square_class(disc);
    w.hasse2 = detail::stable_hasse2(entries);
    // second residues at the odd primes meeting the entries
    std::map<int64_t, std::vector<uint64_t>> res_entries;
    for (const auto& e : entries)
        for (const auto& [q, ex] : e.exps)
            if (q != 2 && ex % 2 != 0) res_entries[q].push_back(unit_part_mod(e, q));
    for (const auto& [p, list] : res_entries) {
        ResidueClassFp c = classify_fp(list, static_cast<uint32_t>(p));
        if (!c.trivial()) w.residues[p] = c;
    }
    w.rep = detail::reduce_rep(f, entries);
    return w;
}

inline WittClass witt_class(const DiagForm& f) { return witt_class_of_entries(f.field, f.entries); }

inline WittClass witt_zero(const FieldSpec& f) { return witt_class_of_entries(f, {}); }

inline WittClass witt_add(const WittClass& a, const WittClass& b) {
    require_same_field(a.field, b.field);
    std::vector<UnitRep> entries = a.rep;
    entries.insert(entries.end(), b.rep.begin(), b.rep.end());
    return witt_class_of_entries(a.field, entries);
}

inline WittClass witt_neg(const WittClass& a) {
    std::vector<UnitRep> entries;
    for (const auto& e : a.rep) entries.push_back(unit_neg(e));
    return witt_class_of_entries(a.field, entries);
}

inline WittClass witt_sub(const WittClass& a, const WittClass& b) { return witt_add(a, witt_neg(b)); }

inline WittClass witt_mul(const WittClass& a, const WittClass& b) {
    require_same_field(a.field, b.field);
    std::vector<UnitRep> entries;
    for (const auto& x : a.rep)
        for (const auto& y : b.rep) entries.push_back(unit_mul(x, y));
    return witt_class_of_entries(a.field, entries);
}

inline WittClass witt_scale(const WittClass& a, const Int& n) {
    std::vector<UnitRep> entries;
    Int cnt = n < 0 ? Int(-n) : n;
    for (Int i = 0; i < cnt; ++i)
        for (const auto& e : a.rep) entries.push_back(n < 0 ? unit_neg(e) : e);
    return witt_class_of_entries(a.field, entries);
}

// GW(F) as the pullback Z x_{Z/2} W(F): rank and Witt class, arithmetic
// componentwise.
struct GWClass {
    FieldSpec field;
    Int rank = 0;
    WittClass witt;

    bool is_zero() const { return rank == 0 && witt.is_zero(); }
    bool operator==(const GWClass& o) const { return field == o.field && rank == o.rank && witt == o.witt; }
    bool operator!=(const GWClass& o) const { return !(*this == o); }

    std::string to_string() const { return "rank " + rank.str() + ", witt " + witt.to_string(); }
};

inline GWClass gw_zero(const FieldSpec& f) { return {f, 0, witt_zero(f)}; }
inline GWClass gw_basis_class(const UnitRep& a) { return {a.field, 1, witt_class_of_entries(a.field, {a})}; }
inline GWClass gw_one(const FieldSpec& f) { return gw_basis_class(unit_one(f)); }

inline GWClass gw_add(const GWClass& x, const GWClass& y) {
    require_same_field(x.field, y.field);
    return {x.field, x.rank + y.rank, witt_add(x.witt, y.witt)};
}
inline GWClass gw_neg(const GWClass& x) { return {x.field, -x.rank, witt_neg(x.witt)}; }
inline GWClass gw_sub(const GWClass& x, const GWClass& y) { return gw_add(x, gw_neg(y)); }
inline GWClass gw_mul(const GWClass& x, const GWClass& y) {
    require_same_field(x.field, y.field);
    return {x.field, x.rank * y.rank, witt_mul(x.witt, y.witt)};
}
inline GWClass gw_int(const FieldSpec& f, const Int& n) {
    return {f, n, witt_scale(witt_class_of_entries(f, {unit_one(f)}), n)};
}
inline GWClass gw_scale(const GWClass& x, const Int& n) { return {x.field, x.rank * n, witt_scale(x.witt, n)}; }

// h = <1> + <-1>
inline GWClass gw_h(const FieldSpec& f) { return gw_add(gw_basis_class(unit_one(f)), gw_basis_class(unit_minus_one(f))); }

inline GWClass gw_form_class(const DiagForm& f) {
    return {f.field, Int(f.entries.size()), witt_class(f)};
}

// Pfister class <<a_1,...,a_n>> = (<a_1>-1)...(<a_n>-1); rank 0 for n >= 1.
inline GWClass pfister(const std::vector<UnitRep>& units) {
    if (units.empty()) throw std::invalid_argument("pfister needs at least one unit");
    GWClass acc = gw_one(units.front().field);
    for (const auto& a : units) acc = gw_mul(acc, gw_sub(gw_basis_class(a), gw_one(a.field)));
    return acc;
}

struct FormInvariants {
    int rank = 0;
    UnitRep discriminant;  // square class of the product of the entries
    std::optional<Int> signature;
    std::vector<std::pair<Place, int>> hasse;  // Q only
};

inline FormInvariants form_invariants(const DiagForm& f) {
    FormInvariants inv;
    inv.rank = static_cast<int>(f.entries.size());
    UnitRep det = unit_one(f.field);
    for (const auto& e : f.entries) det = unit_mul(det, e);
    inv.discriminant = unit_square_class(det);
    if (f.field.is_q()) {
        Int sig = 0;
        std::vector<Place> places = {Place::infinity(), Place::two()};
        std::map<int64_t, bool> odd;
        for (const auto& e : f.entries) {
            sig += e.sign;
            for (const auto& [q, ex] : e.exps)
                if (q != 2) odd[q] = true;
        }
        inv.signature = sig;
        for (const auto& [q, unused] : odd) places.push_back(Place::odd(q));
        for (const auto& v : places) inv.hasse.emplace_back(v, detail::hasse_at(f.entries, v));
    }
    return inv;
}

// Membership in I^n. Over F_p: n=1 needs even parity, n>=2 the zero class.
// Over Q: n=2 additionally trivial discriminant; n>=3 additionally trivial
// residues and dyadic invariant and signature divisible by 2^n.
inline bool in_fundamental_power(const WittClass& w, int n) {
    if (n < 0) throw std::invalid_argument("negative fundamental-ideal power");
    if (n == 0) return true;
    if (!w.field.is_q()) {
        if (n == 1) return w.fp.parity == 0;
        return w.fp.trivial();
    }
    if (w.parity != 0) return false;
    if (n == 1) return true;
    if (!w.disc.is_one()) return false;
    if (n == 2) return true;
    if (!w.residues.empty() || w.hasse2 != 1) return false;
    Int mod = Int(1) << n;
    return w.signature % mod == 0;
}

inline bool in_fundamental_power(const GWClass& g, int n) {
    if (n < 0) throw std::invalid_argument("negative fundamental-ideal power");
    if (n == 0) return true;
    return g.rank == 0 && in_fundamental_power(g.witt, n);
}

}  // namespace mwkit
