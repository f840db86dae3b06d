#pragma once

// Coefficient fields for the workbench: odd prime fields F_p and Q. Units of
// Q are kept in factored form (sign and prime exponents); units of F_p as
// residues. Everything downstream (group rings, forms, symbols) is built on
// these representations.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "mwkit/bigint.hpp"

namespace mwkit {

inline bool is_prime_u64(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

struct SamplingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FieldSpec {
    enum class Kind { Fp, Q };
    Kind kind = Kind::Q;
    uint32_t p = 0;

    static FieldSpec rationals() { return FieldSpec{Kind::Q, 0}; }
    static FieldSpec prime_field(uint32_t p) {
        if (p < 3 || p % 2 == 0 || !is_prime_u64(p)) throw std::invalid_argument("field characteristic must be an odd prime >= 3");
        return FieldSpec{Kind::Fp, p};
    }

    bool is_q() const { return kind == Kind::Q; }
    bool operator==(const FieldSpec& o) const { return kind == o.kind && p == o.p; }
    bool operator!=(const FieldSpec& o) const { return !(*this == o); }

    std::string to_string() const { return is_q() ? "Q" : "F" + std::to_string(p); }
};

inline void require_same_field(const FieldSpec& a, const FieldSpec& b) {
    if (a != b) throw std::invalid_argument("field mismatch");
}

inline uint64_t pow_mod(uint64_t base, uint64_t exp, uint64_t mod) {
    uint64_t r = 1 % mod;
    base %= mod;
    while (exp) {
        if (exp & 1) r = r * base % mod;
        base = base * base % mod;
        exp >>= 1;
    }
    return r;
}

inline uint64_t inv_mod(uint64_t a, uint64_t p) { return pow_mod(a % p, p - 2, p); }

// Legendre symbol of a nonzero residue.
inline int legendre(uint64_t a, uint64_t p) {
    a %= p;
    if (a == 0) throw std::invalid_argument("legendre symbol of zero");
    return pow_mod(a, (p - 1) / 2, p) == 1 ? 1 : -1;
}

inline std::map<int64_t, int32_t> factor_abs(Int n) {
    if (n < 0) n = -n;
    if (n == 0) throw std::invalid_argument("cannot factor zero");
    std::map<int64_t, int32_t> f;
    for (int64_t d = 2; Int(d) * d <= n; d == 2 ? d = 3 : d += 2) {
        while (n % d == 0) {
            ++f[d];
            n /= d;
        }
    }
    if (n > 1) {
        if (n > Int(INT64_MAX)) throw std::invalid_argument("factor out of supported range");
        ++f[static_cast<int64_t>(n)];
    }
    return f;
}

// A unit of the field. F_p: residue in [1, p-1]. Q: sign together with the
// finitely supported prime exponent vector of the absolute value.
struct UnitRep {
    FieldSpec field;
    uint32_t residue = 1;               // Fp only
    int sign = 1;                       // Q only
    std::map<int64_t, int32_t> exps;    // Q only, nonzero exponents

    bool is_one() const {
        return field.is_q() ? (sign > 0 && exps.empty()) : residue == 1;
    }

    auto key() const { return std::tie(residue, sign, exps); }
    bool operator==(const UnitRep& o) const { return key() == o.key(); }
    bool operator<(const UnitRep& o) const { return key() < o.key(); }
};

inline UnitRep unit_one(const FieldSpec& f) {
    UnitRep u;
    u.field = f;
    return u;
}

inline UnitRep make_unit_fp(const FieldSpec& f, Int n) {
    Int r = n % f.p;
    if (r < 0) r += f.p;
    if (r == 0) throw std::invalid_argument("zero is not a unit");
    UnitRep u;
    u.field = f;
    u.residue = static_cast<uint32_t>(r);
    return u;
}

inline UnitRep make_unit_q(Int num, Int den = 1) {
    if (num == 0 || den == 0) throw std::invalid_argument("zero is not a unit");
    UnitRep u;
    u.field = FieldSpec::rationals();
    u.sign = ((num < 0) != (den < 0)) ? -1 : 1;
    for (const auto& [q, e] : factor_abs(num)) u.exps[q] += e;
    for (const auto& [q, e] : factor_abs(den)) u.exps[q] -= e;
    for (auto it = u.exps.begin(); it != u.exps.end();)
        it = it->second == 0 ? u.exps.erase(it) : std::next(it);
    return u;
}

inline UnitRep make_unit(const FieldSpec& f, const Int& num, const Int& den = 1) {
    if (f.is_q()) return make_unit_q(num, den);
    if (den != 1) {
        Int d = den % f.p;
        if (d < 0) d += f.p;
        if (d == 0) throw std::invalid_argument("zero denominator");
        return make_unit_fp(f, num * Int(inv_mod(static_cast<uint64_t>(d), f.p)));
    }
    return make_unit_fp(f, num);
}

inline UnitRep unit_mul(const UnitRep& a, const UnitRep& b) {
    require_same_field(a.field, b.field);
    UnitRep u;
    u.field = a.field;
    if (a.field.is_q()) {
        u.sign = a.sign * b.sign;
        u.exps = a.exps;
        for (const auto& [q, e] : b.exps) {
            u.exps[q] += e;
            if (u.exps[q] == 0) u.exps.erase(q);
        }
    } else {
        u.residue = static_cast<uint32_t>(static_cast<uint64_t>(a.residue) * b.residue % a.field.p);
    }
    return u;
}

inline UnitRep unit_inv(const UnitRep& a) {
    UnitRep u;
    u.field = a.field;
    if (a.field.is_q()) {
        u.sign = a.sign;
        for (const auto& [q, e] : a.exps) u.exps[q] = -e;
    } else {
        u.residue = static_cast<uint32_t>(inv_mod(a.residue, a.field.p));
    }
    return u;
}

inline UnitRep unit_pow(const UnitRep& a, int64_t e) {
    UnitRep r = unit_one(a.field);
    UnitRep base = e < 0 ? unit_inv(a) : a;
    uint64_t k = e < 0 ? -e : e;
    while (k--) r = unit_mul(r, base);
    return r;
}

inline UnitRep unit_neg(const UnitRep& a) {
    UnitRep u = a;
    if (a.field.is_q())
        u.sign = -a.sign;
    else
        u.residue = a.field.p - a.residue;
    return u;
}

inline UnitRep unit_minus_one(const FieldSpec& f) { return unit_neg(unit_one(f)); }

// Exact rational value (num, den > 0); Q units only.
inline std::pair<Int, Int> unit_rational(const UnitRep& u) {
    if (!u.field.is_q()) throw std::invalid_argument("rational value of a prime-field unit");
    Int num = u.sign, den = 1;
    for (const auto& [q, e] : u.exps) {
        for (int32_t i = 0; i < (e > 0 ? e : -e); ++i) {
            if (e > 0)
                num *= q;
            else
                den *= q;
        }
    }
    return {num, den};
}

inline std::string unit_to_string(const UnitRep& u) {
    if (!u.field.is_q()) return std::to_string(u.residue);
    auto [num, den] = unit_rational(u);
    return den == 1 ? num.str() : num.str() + "/" + den.str();
}

// p-adic valuation of a rational unit at an odd prime.
inline int32_t unit_valuation(const UnitRep& u, int64_t p) {
    auto it = u.exps.find(p);
    return it == u.exps.end() ? 0 : it->second;
}

// Residue mod p of the p-free part of a rational unit.
inline uint64_t unit_part_mod(const UnitRep& u, int64_t p) {
    uint64_t r = u.sign < 0 ? p - 1 : 1;
    for (const auto& [q, e] : u.exps) {
        if (q == p) continue;
        uint64_t qe = e >= 0 ? pow_mod(q % p, e, p) : inv_mod(pow_mod(q % p, -e, p), p);
        r = r * qe % p;
    }
    return r;
}

inline bool unit_is_square(const UnitRep& u) {
    if (u.field.is_q()) {
        if (u.sign < 0) return false;
        for (const auto& [q, e] : u.exps)
            if (e % 2 != 0) return false;
        return true;
    }
    return legendre(u.residue, u.field.p) == 1;
}

// Canonical square-class representative: squarefree kernel over Q, residue 1
// or the least nonresidue over F_p.
inline UnitRep unit_square_class(const UnitRep& u) {
    UnitRep s;
    s.field = u.field;
    if (u.field.is_q()) {
        s.sign = u.sign;
        for (const auto& [q, e] : u.exps)
            if (e % 2 != 0) s.exps[q] = 1;
    } else {
        if (unit_is_square(u)) return unit_one(u.field);
        uint32_t n0 = 2;
        while (legendre(n0, u.field.p) == 1) ++n0;
        s.residue = n0;
    }
    return s;
}

// 1 - a when nonzero; Q only throws on a == 1, F_p throws on a == 1.
inline UnitRep unit_one_minus(const UnitRep& a) {
    if (a.is_one()) throw std::invalid_argument("1 - a vanishes");
    if (a.field.is_q()) {
        auto [num, den] = unit_rational(a);
        return make_unit_q(den - num, den);
    }
    return make_unit_fp(a.field, Int(a.field.p + 1) - a.residue);
}

inline std::vector<uint32_t> fp_units(const FieldSpec& f) {
    std::vector<uint32_t> v;
    for (uint32_t a = 1; a < f.p; ++a) v.push_back(a);
    return v;
}

}  // namespace mwkit
