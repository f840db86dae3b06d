#pragma once

// Milnor K-theory normal forms. Over F_p: Z, F_p^x, then zero. Over Q: Z,
// Q^x in factored form, then in degree 2 the pair (dyadic Hilbert bit, tame
// symbols at odd primes), and in degree >= 3 a single Z/2 detected at the
// real place. mod2_to_in realizes the mod-2 class as a sum of Pfister forms.

#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mwkit/quadform.hpp"

namespace mwkit {

struct MilnorClass {
    FieldSpec field;
    int degree = 0;
    Int n0 = 0;                        // degree 0
    UnitRep u1;                        // degree 1
    int dyadic = 0;                    // Q, degree 2
    std::map<int64_t, uint32_t> tame;  // Q, degree 2: odd p -> class in F_p^x, 1 omitted
    int real_bit = 0;                  // Q, degree >= 3

    bool is_zero() const {
        switch (degree_kind()) {
            case 0: return n0 == 0;
            case 1: return u1.is_one();
            case 2: return dyadic == 0 && tame.empty();
            default: return real_bit == 0;
        }
    }

    // 0,1,2,3+ for Q; F_p collapses degrees >= 2 to the zero group
    int degree_kind() const {
        if (degree <= 0) return 0;
        if (degree == 1) return 1;
        if (!field.is_q()) return 9;  // trivial group
        return degree == 2 ? 2 : 3;
    }

    auto key() const { return std::tie(degree, n0, u1, dyadic, tame, real_bit); }
    bool operator==(const MilnorClass& o) const { return field == o.field && key() == o.key(); }
    bool operator!=(const MilnorClass& o) const { return !(*this == o); }

    std::string to_string() const {
        std::ostringstream os;
        os << "K" << degree << ": ";
        switch (degree_kind()) {
            case 0: os << n0.str(); break;
            case 1: os << unit_to_string(u1); break;
            case 2:
                os << "dyadic " << dyadic;
                for (const auto& [p, t] : tame) os << ", tame" << p << " " << t;
                break;
            case 9: os << "0"; break;
            default: os << "real " << real_bit; break;
        }
        return os.str();
    }
};

inline MilnorClass milnor_zero(const FieldSpec& f, int degree) {
    MilnorClass c;
    c.field = f;
    c.degree = degree;
    c.u1 = unit_one(f);
    return c;
}

namespace detail {

// tame symbol of {a, b} at an odd prime: (-1)^{v(a)v(b)} a^{v(b)} b^{-v(a)} mod p
inline uint64_t tame_pair(const UnitRep& a, const UnitRep& b, int64_t p) {
    int32_t va = unit_valuation(a, p), vb = unit_valuation(b, p);
    uint64_t r = 1;
    if ((va & 1) && (vb & 1)) r = p - 1;
    uint64_t ua = unit_part_mod(a, p), ub = unit_part_mod(b, p);
    auto powsig = [&](uint64_t base, int64_t e) {
        uint64_t m = pow_mod(base, static_cast<uint64_t>(e < 0 ? -e : e), p);
        return e < 0 ? inv_mod(m, p) : m;
    };
    r = r * powsig(ua, vb) % p;
    r = r * powsig(ub, -static_cast<int64_t>(va)) % p;
    return r;
}

inline int real_symbol(const std::vector<UnitRep>& symbol) {
    for (const auto& a : symbol)
        if (a.sign > 0) return 0;
    return 1;
}

}  // namespace detail

// The real-place coordinate of a class, mod 2. In degree >= 3 this is the
// whole group; in degree 2 it is determined by the dyadic bit and the tame
// data through the Hilbert product formula.
inline int milnor_real_coordinate(const MilnorClass& c) {
    switch (c.degree_kind()) {
        case 0: return static_cast<int>(c.n0 % 2 != 0);
        case 1: return c.u1.sign < 0 ? 1 : 0;
        case 2: {
            int bit = c.dyadic;
            for (const auto& [p, t] : c.tame)
                if (legendre(t, p) < 0) bit ^= 1;
            return bit;
        }
        case 9: return 0;
        default: return c.real_bit;
    }
}

using MilnorTerm = std::pair<std::vector<UnitRep>, Int>;

inline MilnorClass milnor_normalize(const FieldSpec& f, int degree, const std::vector<MilnorTerm>& terms) {
    if (degree < 0) throw std::invalid_argument("milnor degree must be nonnegative");
    MilnorClass c = milnor_zero(f, degree);
    for (const auto& [symbol, mult] : terms) {
        if (static_cast<int>(symbol.size()) != degree) throw std::invalid_argument("symbol degree mismatch");
        for (const auto& a : symbol) require_same_field(f, a.field);
        if (mult == 0) continue;
        switch (c.degree_kind()) {
            case 0:
                c.n0 += mult;
                break;
            case 1: {
                // torsion-free over Q; cyclic of order p-1 over F_p
                int64_t e;
                if (f.is_q())
                    e = static_cast<int64_t>(mult);
                else {
                    Int mm = mult % (f.p - 1);
                    if (mm < 0) mm += f.p - 1;
                    e = static_cast<int64_t>(mm);
                }
                c.u1 = unit_mul(c.u1, unit_pow(symbol[0], e));
                break;
            }
            case 2: {
                if (mult % 2 != 0 && hilbert_symbol(symbol[0], symbol[1], Place::two()) < 0) c.dyadic ^= 1;
                std::map<int64_t, bool> supp;
                for (const auto& a : symbol)
                    for (const auto& [q, e] : a.exps)
                        if (q != 2) supp[q] = true;
                for (const auto& [p, unused] : supp) {
                    uint64_t t = detail::tame_pair(symbol[0], symbol[1], p);
                    Int mm = mult % (p - 1);
                    if (mm < 0) mm += p - 1;
                    uint64_t tm = pow_mod(t, static_cast<uint64_t>(mm), p);
                    uint64_t cur = c.tame.count(p) ? c.tame[p] : 1;
                    uint64_t nv = cur * tm % p;
                    if (nv == 1)
                        c.tame.erase(p);
                    else
                        c.tame[p] = static_cast<uint32_t>(nv);
                }
                break;
            }
            case 9:
                break;
            default:
                if (mult % 2 != 0) c.real_bit ^= detail::real_symbol(symbol);
                break;
        }
    }
    return c;
}

inline MilnorClass milnor_add(const MilnorClass& a, const MilnorClass& b) {
    require_same_field(a.field, b.field);
    if (a.degree != b.degree) throw std::invalid_argument("milnor degree mismatch");
    MilnorClass c = a;
    switch (c.degree_kind()) {
        case 0: c.n0 += b.n0; break;
        case 1: c.u1 = unit_mul(c.u1, b.u1); break;
        case 2: {
            c.dyadic ^= b.dyadic;
            for (const auto& [p, t] : b.tame) {
                uint64_t cur = c.tame.count(p) ? c.tame[p] : 1;
                uint64_t nv = cur * t % p;
                if (nv == 1)
                    c.tame.erase(p);
                else
                    c.tame[p] = static_cast<uint32_t>(nv);
            }
            break;
        }
        case 9: break;
        default: c.real_bit ^= b.real_bit; break;
    }
    return c;
}

inline MilnorClass milnor_scale(const MilnorClass& a, const Int& n) {
    MilnorClass c = milnor_zero(a.field, a.degree);
    switch (a.degree_kind()) {
        case 0: c.n0 = a.n0 * n; break;
        case 1: {
            if (a.field.is_q()) {
                c.u1 = unit_pow(a.u1, static_cast<int64_t>(n));
            } else {
                Int m = n % (a.field.p - 1);
                if (m < 0) m += a.field.p - 1;
                c.u1 = unit_pow(a.u1, static_cast<int64_t>(m));
            }
            break;
        }
        case 2: {
            if (n % 2 != 0) c.dyadic = a.dyadic;
            for (const auto& [p, t] : a.tame) {
                Int m = n % (p - 1);
                if (m < 0) m += p - 1;
                uint64_t nv = pow_mod(t, static_cast<uint64_t>(m), p);
                if (nv != 1) c.tame[p] = static_cast<uint32_t>(nv);
            }
            break;
        }
        case 9: break;
        default: c.real_bit = (n % 2 != 0) ? a.real_bit : 0; break;
    }
    return c;
}

inline MilnorClass milnor_neg(const MilnorClass& a) { return milnor_scale(a, -1); }
inline MilnorClass milnor_sub(const MilnorClass& a, const MilnorClass& b) { return milnor_add(a, milnor_neg(b)); }

inline MilnorClass milnor_mul(const MilnorClass& a, const MilnorClass& b) {
    require_same_field(a.field, b.field);
    int deg = a.degree + b.degree;
    if (a.degree == 0) return milnor_scale(b, a.n0);
    if (b.degree == 0) return milnor_scale(a, b.n0);
    if (!a.field.is_q()) return milnor_zero(a.field, deg);  // K^M_{>=2}(F_p) = 0
    if (a.degree == 1 && b.degree == 1)
        return milnor_normalize(a.field, 2, {{{a.u1, b.u1}, 1}});
    // target degree >= 3: the real place detects everything
    MilnorClass c = milnor_zero(a.field, deg);
    c.real_bit = milnor_real_coordinate(a) & milnor_real_coordinate(b);
    return c;
}

// Residue map at an odd prime, one degree down, with values over F_p.
inline MilnorClass tame_symbol(const std::vector<UnitRep>& symbol, int64_t p) {
    if (p == 2) throw std::invalid_argument("unsupported place");
    if (!is_prime_u64(static_cast<uint64_t>(p)) || p < 3) throw std::invalid_argument("unsupported place");
    if (symbol.empty()) throw std::invalid_argument("tame symbol needs degree >= 1");
    for (const auto& a : symbol)
        if (!a.field.is_q()) throw std::invalid_argument("tame symbol needs rational entries");
    FieldSpec fp = FieldSpec::prime_field(static_cast<uint32_t>(p));
    int n = static_cast<int>(symbol.size());
    MilnorClass c = milnor_zero(fp, n - 1);
    if (n == 1) {
        c.n0 = unit_valuation(symbol[0], p);
    } else if (n == 2) {
        uint64_t t = detail::tame_pair(symbol[0], symbol[1], p);
        c.u1 = make_unit_fp(fp, Int(t));
    }
    // degree >= 3 lands in K^M_{>=2}(F_p) = 0
    return c;
}

// Theorem of Voevodsky et al.: k^M_n = I^n/I^{n+1}, {a} -> <<a>>. Produces a
// Pfister-form representative of the coset of the mod-2 reduction.
inline GWClass mod2_to_in(const MilnorClass& c) {
    const FieldSpec& f = c.field;
    switch (c.degree_kind()) {
        case 0: return c.n0 % 2 != 0 ? gw_one(f) : gw_zero(f);
        case 1: return c.u1.is_one() ? gw_zero(f) : pfister({c.u1});
        case 9: return gw_zero(f);
        case 2: {
            GWClass g = gw_zero(f);
            std::map<int64_t, uint32_t> work = c.tame;
            int dy = c.dyadic;
            // peel tame targets from the largest prime down; lifts only
            // contaminate smaller primes, so this terminates
            for (;;) {
                int64_t p = 0;
                for (const auto& [q, t] : work)
                    if (legendre(t, q) < 0) p = std::max(p, q);
                if (p == 0) break;
                uint32_t u = 2;
                while (legendre(u, p) > 0) ++u;
                UnitRep up = make_unit_q(Int(u));
                UnitRep pp = make_unit_q(Int(p));
                g = gw_add(g, pfister({up, pp}));
                MilnorClass delta = milnor_normalize(f, 2, {{{up, pp}, 1}});
                // subtract the mod-2 footprint of {u, p}
                dy ^= delta.dyadic;
                for (const auto& [q, t] : delta.tame) {
                    uint64_t cur = work.count(q) ? work[q] : 1;
                    uint64_t nv = cur * inv_mod(t, q) % q;
                    if (nv == 1)
                        work.erase(q);
                    else
                        work[q] = static_cast<uint32_t>(nv);
                }
            }
            if (dy) {
                UnitRep m1 = unit_minus_one(f);
                g = gw_add(g, pfister({m1, m1}));
            }
            return g;
        }
        default: {
            if (c.real_bit == 0) return gw_zero(f);
            std::vector<UnitRep> units(c.degree, unit_minus_one(f));
            return pfister(units);
        }
    }
}

}  // namespace mwkit
