#pragma once

// Randomized identity suites over K^MW. Every trial draws its own generator
// stream from (seed, index), builds both sides of an identity as expressions,
// normalizes, and compares; failures are reported with both normal forms.

#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "mwkit/milnor_witt.hpp"
#include "mwkit/rng.hpp"

namespace mwkit {

struct VerifyFailure {
    std::string instance;
    std::string lhs;
    std::string rhs;
};

struct VerifyReport {
    std::string suite;
    std::string field;
    int trials = 0;
    uint64_t seed = 0;
    long checks = 0;
    std::vector<VerifyFailure> failures;

    bool pass() const { return failures.empty(); }
};

inline UnitRep sample_unit(const FieldSpec& f, Rng& rng, int64_t bound = 50) {
    if (f.is_q()) {
        Int num = rng.range(1, bound) * (rng.flip() ? 1 : -1);
        Int den = rng.range(1, bound);
        return make_unit_q(num, den);
    }
    return make_unit_fp(f, Int(rng.range(1, f.p - 1)));
}

inline UnitRep sample_unit_not_one(const FieldSpec& f, Rng& rng, int64_t bound = 50) {
    for (;;) {
        UnitRep u = sample_unit(f, rng, bound);
        if (!u.is_one()) return u;
    }
}

inline std::vector<UnitRep> sample_distinct_units(const FieldSpec& f, int n, Rng& rng, int64_t bound = 50) {
    if (!f.is_q() && static_cast<int>(f.p) - 1 < n)
        throw SamplingError("not enough distinct units in F_" + std::to_string(f.p));
    std::vector<UnitRep> out;
    while (static_cast<int>(out.size()) < n) {
        UnitRep u = sample_unit(f, rng, bound);
        bool dup = false;
        for (const auto& v : out) dup = dup || v == u;
        if (!dup) out.push_back(u);
    }
    return out;
}

namespace detail {

inline MWTerm word_term(const std::vector<UnitRep>& units, Int coeff = 1, int leading_etas = 0) {
    MWTerm t;
    t.coeff = std::move(coeff);
    for (int i = 0; i < leading_etas; ++i) t.word.push_back(MWWordGen::eta());
    for (const auto& a : units) t.word.push_back(MWWordGen::bracket(a));
    return t;
}

inline std::string units_str(const std::vector<UnitRep>& us) {
    std::string s = "(";
    for (size_t i = 0; i < us.size(); ++i) s += (i ? "," : "") + unit_to_string(us[i]);
    return s + ")";
}

class Checker {
  public:
    Checker(VerifyReport& rep) : rep_(rep) {}

    void check(const std::string& instance, const MWExpr& lhs, const MWExpr& rhs,
               std::optional<int> degree = std::nullopt) {
        ++rep_.checks;
        MWClass l = mwk_normalize(lhs, degree);
        MWClass r = mwk_normalize(rhs, degree);
        if (!(l == r)) rep_.failures.push_back({instance, l.to_string(), r.to_string()});
    }

    void check_classes(const std::string& instance, const MWClass& l, const MWClass& r) {
        ++rep_.checks;
        if (!(l == r)) rep_.failures.push_back({instance, l.to_string(), r.to_string()});
    }

  private:
    VerifyReport& rep_;
};

}  // namespace detail

// Morel-Hopkins presentation relations (a)-(d).
inline VerifyReport verify_mw_relations(const FieldSpec& f, int trials, uint64_t seed) {
    VerifyReport rep{"mw-relations", f.to_string(), trials, seed};
    detail::Checker ck(rep);
    using detail::word_term;
    for (int t = 0; t < trials; ++t) {
        Rng rng = trial_rng(seed, t);
        UnitRep a = sample_unit(f, rng), b = sample_unit(f, rng);
        std::string inst = "a=" + unit_to_string(a) + ", b=" + unit_to_string(b);

        // (a) [ab] = [a] + [b] + eta [a][b]
        MWExpr lhs{f, {word_term({unit_mul(a, b)})}};
        MWExpr rhs{f, {word_term({a}), word_term({b}), word_term({a, b}, 1, 1)}};
        ck.check("(a) " + inst, lhs, rhs);

        // (b) [a][1-a] = 0 for a != 1
        UnitRep a1 = a.is_one() ? sample_unit_not_one(f, rng) : a;
        MWExpr st{f, {word_term({a1, unit_one_minus(a1)})}};
        ck.check("(b) a=" + unit_to_string(a1), st, MWExpr{f, {}}, 2);

        // (c) eta [a] = [a] eta
        MWTerm lt;
        lt.word = {MWWordGen::eta(), MWWordGen::bracket(a)};
        MWTerm rt;
        rt.word = {MWWordGen::bracket(a), MWWordGen::eta()};
        ck.check("(c) " + inst, MWExpr{f, {lt}}, MWExpr{f, {rt}});

        // (d) eta h = eta (eta [-1] + 2) = 0
        MWTerm d1;
        d1.word = {MWWordGen::eta(), MWWordGen::eta(), MWWordGen::bracket(unit_minus_one(f))};
        MWTerm d2;
        d2.coeff = 2;
        d2.word = {MWWordGen::eta()};
        ck.check("(d)", MWExpr{f, {d1, d2}}, MWExpr{f, {}}, -1);
    }
    return rep;
}

// Identities of the elementary lemma: [a][-1]=[a][a], [ab]=[a]+<a>[b],
// [a][b] = -<-1>[b][a].
inline VerifyReport verify_lemma_2_3(const FieldSpec& f, int trials, uint64_t seed) {
    VerifyReport rep{"lemma-2.3", f.to_string(), trials, seed};
    detail::Checker ck(rep);
    using detail::word_term;
    for (int t = 0; t < trials; ++t) {
        Rng rng = trial_rng(seed, t);
        UnitRep a = sample_unit(f, rng), b = sample_unit(f, rng);
        std::string inst = "a=" + unit_to_string(a) + ", b=" + unit_to_string(b);

        ck.check("(1) " + inst, MWExpr{f, {word_term({a, unit_minus_one(f)})}},
                 MWExpr{f, {word_term({a, a})}});

        MWTerm scaled = word_term({b});
        scaled.prefix = {MWGWFactor{false, a}};
        ck.check("(2) " + inst, MWExpr{f, {word_term({unit_mul(a, b)})}},
                 MWExpr{f, {word_term({a}), scaled}});

        MWTerm sw = word_term({b, a}, -1);
        sw.prefix = {MWGWFactor{false, unit_minus_one(f)}};
        ck.check("(3) " + inst, MWExpr{f, {word_term({a, b})}}, MWExpr{f, {sw}});
    }
    return rep;
}

// [b_1]...[b_n] = sum_i [b_1-b_i]...[b_i]...[b_n-b_i] for distinct b_i.
inline VerifyReport verify_lemma_3_9(const FieldSpec& f, int trials, uint64_t seed,
                                     const std::vector<int>& degrees = {2, 3, 4}) {
    VerifyReport rep{"lemma-3.9", f.to_string(), trials, seed};
    detail::Checker ck(rep);
    using detail::word_term;
    for (int t = 0; t < trials; ++t) {
        Rng rng = trial_rng(seed, t);
        int n = degrees[t % degrees.size()];
        auto b = sample_distinct_units(f, n, rng);
        MWExpr lhs{f, {word_term(b)}};
        MWExpr rhs{f, {}};
        for (int i = 0; i < n; ++i) {
            // entries are b_j - b_i except b_i itself at slot i
            std::vector<UnitRep> w;
            for (int j = 0; j < n; ++j) {
                if (j == i) {
                    w.push_back(b[i]);
                } else if (f.is_q()) {
                    auto [nj, dj] = unit_rational(b[j]);
                    auto [ni, di] = unit_rational(b[i]);
                    w.push_back(make_unit_q(nj * di - ni * dj, dj * di));
                } else {
                    w.push_back(make_unit_fp(f, Int(b[j].residue) - Int(b[i].residue)));
                }
            }
            rhs.terms.push_back(word_term(w));
        }
        ck.check("n=" + std::to_string(n) + " b=" + detail::units_str(b), lhs, rhs);
    }
    return rep;
}

// Generalized Matsumoto-Moore relations (i)-(v) in a given degree.
inline VerifyReport verify_matsumoto_moore(const FieldSpec& f, int trials, uint64_t seed,
                                           const std::vector<int>& degrees = {2, 3}) {
    VerifyReport rep{"matsumoto-moore", f.to_string(), trials, seed};
    detail::Checker ck(rep);
    using detail::word_term;
    for (int t = 0; t < trials; ++t) {
        Rng rng = trial_rng(seed, t);
        int n = degrees[t % degrees.size()];
        std::vector<UnitRep> a;
        for (int i = 0; i < n; ++i) a.push_back(sample_unit(f, rng));
        UnitRep bn = sample_unit(f, rng);
        std::string inst = "n=" + std::to_string(n) + " a=" + detail::units_str(a);

        // (i) a slot equal to 1 kills the generator
        {
            auto w = a;
            w[rng.below(n)] = unit_one(f);
            ck.check("(i) " + inst, MWExpr{f, {word_term(w)}}, MWExpr{f, {}}, n);
        }
        // (ii) [..][a_{i-1}][a_i][..] = [..][a_i^{-1}][a_{i-1}][..]
        {
            int i = 1 + static_cast<int>(rng.below(n - 1));  // swap slots i-1, i
            auto w = a;
            auto v = a;
            v[i - 1] = unit_inv(a[i]);
            v[i] = a[i - 1];
            ck.check("(ii) i=" + std::to_string(i) + " " + inst, MWExpr{f, {word_term(w)}},
                     MWExpr{f, {word_term(v)}});
        }
        // (iii) [..a_{n-1}][a_n b_n] + [.. ^][a_n][b_n] = [..a_{n-1}a_n][b_n] + [..a_{n-1}][a_n]
        // with (a_{n-1}, a_n) sitting in the last two slots of `a`
        {
            std::vector<UnitRep> lhs1 = a;
            lhs1[n - 1] = unit_mul(a[n - 1], bn);
            std::vector<UnitRep> lhs2(a.begin(), a.end() - 2);
            lhs2.push_back(a[n - 1]);
            lhs2.push_back(bn);
            std::vector<UnitRep> rhs1(a.begin(), a.end() - 2);
            rhs1.push_back(unit_mul(a[n - 2], a[n - 1]));
            rhs1.push_back(bn);
            std::vector<UnitRep> rhs2 = a;
            ck.check("(iii) " + inst + " b=" + unit_to_string(bn),
                     MWExpr{f, {word_term(lhs1), word_term(lhs2)}},
                     MWExpr{f, {word_term(rhs1), word_term(rhs2)}});
        }
        // (iv) [..][a_n] = [..][-a_{n-1} a_n]
        {
            auto v = a;
            v[n - 1] = unit_neg(unit_mul(a[n - 2], a[n - 1]));
            ck.check("(iv) " + inst, MWExpr{f, {word_term(a)}}, MWExpr{f, {word_term(v)}});
        }
        // (v) [..][a_n] = [..][(1-a_{n-1}) a_n], needs a_{n-1} != 1
        {
            auto w = a;
            if (w[n - 2].is_one()) w[n - 2] = sample_unit_not_one(f, rng);
            auto v = w;
            v[n - 1] = unit_mul(unit_one_minus(w[n - 2]), w[n - 1]);
            ck.check("(v) " + inst, MWExpr{f, {word_term(w)}}, MWExpr{f, {word_term(v)}});
        }
    }
    return rep;
}

}  // namespace mwkit
