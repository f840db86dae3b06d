#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "mwkit/intmatrix.hpp"
#include "mwkit/milnor.hpp"
#include "mwkit/rng.hpp"

using namespace mwkit;

namespace {

const FieldSpec Q = FieldSpec::rationals();

UnitRep qu(int64_t n, int64_t d = 1) { return make_unit_q(n, d); }

UnitRep random_qunit(Rng& rng, int64_t bound = 50) {
    Int num = rng.range(1, bound) * (rng.flip() ? 1 : -1);
    Int den = rng.range(1, bound);
    return make_unit_q(num, den);
}

MilnorClass sym(std::vector<UnitRep> entries) {
    int deg = static_cast<int>(entries.size());
    return milnor_normalize(Q, deg, {{entries, 1}});
}

}  // namespace

TEST_CASE("steinberg relation and basic vanishing") {
    for (uint64_t t = 0; t < 100; ++t) {
        Rng rng = trial_rng(51, t);
        UnitRep a = random_qunit(rng);
        while (a.is_one()) a = random_qunit(rng);
        REQUIRE(sym({a, unit_one_minus(a)}).is_zero());
    }

    auto f7 = FieldSpec::prime_field(7);
    auto c = milnor_normalize(f7, 2, {{{make_unit(f7, 3), make_unit(f7, 5)}, 1}});
    REQUIRE(c.is_zero());

    REQUIRE_FALSE(sym({qu(-1), qu(-1), qu(-1)}).is_zero());
}

TEST_CASE("degree-2 vanishing over prime fields") {
    for (uint32_t p : {5u, 7u, 13u}) {
        auto f = FieldSpec::prime_field(p);
        for (uint64_t t = 0; t < 500; ++t) {
            Rng rng = trial_rng(52 + p, t);
            auto a = make_unit(f, Int(rng.range(1, p - 1)));
            auto b = make_unit(f, Int(rng.range(1, p - 1)));
            REQUIRE(milnor_normalize(f, 2, {{{a, b}, 1}}).is_zero());
        }
    }
}

TEST_CASE("tame symbols") {
    auto d = tame_symbol({qu(3), qu(5)}, 3);
    REQUIRE(d.degree == 1);
    REQUIRE(d.u1 == make_unit(FieldSpec::prime_field(3), 2));

    REQUIRE(tame_symbol({qu(2), qu(3)}, 5).is_zero());

    for (int64_t p : {3, 5, 7, 11}) {
        auto r = tame_symbol({qu(p), qu(p)}, p);
        REQUIRE(r.u1 == make_unit(FieldSpec::prime_field(static_cast<uint32_t>(p)), Int(p - 1)));
    }

    auto v = tame_symbol({qu(18)}, 3);
    REQUIRE(v.degree == 0);
    REQUIRE(v.n0 == 2);

    REQUIRE(tame_symbol({qu(3), qu(5), qu(7)}, 3).is_zero());  // lands in K_2(F_3) = 0
    REQUIRE_THROWS_AS(tame_symbol({qu(3), qu(5)}, 2), std::invalid_argument);
}

TEST_CASE("bilinearity of the degree-2 normal form") {
    for (uint64_t t = 0; t < 500; ++t) {
        Rng rng = trial_rng(53, t);
        auto a = random_qunit(rng), b = random_qunit(rng), c = random_qunit(rng);
        auto lhs = sym({unit_mul(a, b), c});
        auto rhs = milnor_add(sym({a, c}), sym({b, c}));
        REQUIRE(lhs == rhs);
    }
}

TEST_CASE("skew-symmetry consequence {a,a} = {a,-1}") {
    for (uint64_t t = 0; t < 200; ++t) {
        Rng rng = trial_rng(54, t);
        auto a = random_qunit(rng);
        REQUIRE(sym({a, a}) == sym({a, qu(-1)}));
    }
}

TEST_CASE("multiplication through the real coordinate agrees with direct normalization") {
    for (uint64_t t = 0; t < 300; ++t) {
        Rng rng = trial_rng(55, t);
        auto a = random_qunit(rng, 20), b = random_qunit(rng, 20), c = random_qunit(rng, 20), d = random_qunit(rng, 20);
        REQUIRE(milnor_mul(sym({a}), sym({b, c})) == sym({a, b, c}));
        REQUIRE(milnor_mul(sym({a, b}), sym({c, d})) == sym({a, b, c, d}));
        REQUIRE(milnor_mul(sym({a}), sym({b})) == sym({a, b}));
    }
}

TEST_CASE("mod-2 comparison map into the fundamental ideal filtration") {
    for (uint64_t t = 0; t < 100; ++t) {
        Rng rng = trial_rng(56, t);
        auto a = random_qunit(rng);
        REQUIRE(mod2_to_in(sym({a})) == pfister({a}));
    }
    REQUIRE(mod2_to_in(milnor_zero(Q, 2)).is_zero());

    auto img = mod2_to_in(sym({qu(-1), qu(-1)}));
    auto target = pfister({qu(-1), qu(-1)});
    REQUIRE(in_fundamental_power(gw_sub(img, target), 3));
    REQUIRE(img.witt.signature % 8 == 4);

    // products: image of {a,b} and <<a>><<b>> agree mod I^3
    for (uint64_t t = 0; t < 100; ++t) {
        Rng rng = trial_rng(57, t);
        auto a = random_qunit(rng), b = random_qunit(rng);
        auto viaK = mod2_to_in(sym({a, b}));
        auto direct = pfister({a, b});
        CAPTURE(unit_to_string(a), unit_to_string(b));
        REQUIRE(in_fundamental_power(gw_sub(viaK, direct), 3));
    }
}

TEST_CASE("degree-2 model validated by the Steinberg closure on a bounded support") {
    // Presentation of the symbols on the unit subgroup U = <-1,2,3,5>:
    // generators e_{ij} over the four generators of U, relations from the
    // 2-torsion of -1 and all Steinberg instances {a,1-a} with a, 1-a in U.
    // The model must kill every relation and carry the presented group
    // isomorphically onto its image.
    std::vector<UnitRep> gens = {qu(-1), qu(2), qu(3), qu(5)};
    auto index = [](int i, int j) { return 4 * i + j; };

    // unit of U from exponent vector (e0 mod 2, e1, e2, e3)
    auto unit_of = [&](const std::array<int, 4>& e) {
        UnitRep u = unit_one(Q);
        for (int i = 0; i < 4; ++i) u = unit_mul(u, unit_pow(gens[i], e[i]));
        return u;
    };
    auto exps_of = [&](const UnitRep& u) -> std::optional<std::array<int, 4>> {
        std::array<int, 4> e{u.sign < 0 ? 1 : 0, 0, 0, 0};
        for (const auto& [q, ex] : u.exps) {
            if (q == 2)
                e[1] = ex;
            else if (q == 3)
                e[2] = ex;
            else if (q == 5)
                e[3] = ex;
            else
                return std::nullopt;
        }
        return e;
    };

    std::vector<std::vector<Int>> relations;
    auto push_relation = [&](const std::array<int, 4>& x, const std::array<int, 4>& y) {
        std::vector<Int> row(16, 0);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) row[index(i, j)] += Int(x[i]) * y[j];
        relations.push_back(std::move(row));
    };
    // torsion of the -1 slot
    for (int j = 0; j < 4; ++j) {
        std::vector<Int> r1(16, 0), r2(16, 0);
        r1[index(0, j)] = 2;
        r2[index(j, 0)] = 2;
        relations.push_back(r1);
        relations.push_back(r2);
    }
    // Steinberg instances with bounded exponents
    int found = 0;
    std::array<int, 4> e{};
    for (e[0] = 0; e[0] <= 1; ++e[0])
        for (e[1] = -3; e[1] <= 3; ++e[1])
            for (e[2] = -2; e[2] <= 2; ++e[2])
                for (e[3] = -2; e[3] <= 2; ++e[3]) {
                    UnitRep a = unit_of(e);
                    if (a.is_one()) continue;
                    auto omin = exps_of(unit_one_minus(a));
                    if (!omin) continue;
                    push_relation(e, *omin);
                    ++found;
                    // the model must kill the instance
                    REQUIRE(sym({a, unit_one_minus(a)}).is_zero());
                }
    REQUIRE(found > 20);

    SparseIntMatrix m(16, static_cast<int>(relations.size()));
    for (size_t c = 0; c < relations.size(); ++c)
        for (int r = 0; r < 16; ++r)
            if (relations[c][r] != 0) m.set(r, static_cast<int>(c), relations[c][r]);
    auto presented = cokernel(m);
    REQUIRE(presented.free_rank == 0);  // enough instances to close the group
    Int presented_order = 1;
    for (const Int& t : presented.torsion) presented_order *= t;

    // order of the image subgroup inside Z/2 x F_3^x x F_5^x (the model's
    // components on this support): BFS over the finite product group
    auto model_img = [&](int i, int j) { return sym({gens[i], gens[j]}); };
    std::set<std::tuple<int, uint32_t, uint32_t>> reached;
    std::vector<std::tuple<int, uint32_t, uint32_t>> frontier = {{0, 1, 1}};
    reached.insert(frontier[0]);
    auto step = [&](std::tuple<int, uint32_t, uint32_t> s, const MilnorClass& g) {
        auto [dy, t3, t5] = s;
        dy ^= g.dyadic;
        uint32_t g3 = g.tame.count(3) ? g.tame.at(3) : 1;
        uint32_t g5 = g.tame.count(5) ? g.tame.at(5) : 1;
        return std::tuple<int, uint32_t, uint32_t>{dy, t3 * g3 % 3, t5 * g5 % 5};
    };
    while (!frontier.empty()) {
        std::vector<std::tuple<int, uint32_t, uint32_t>> next;
        for (const auto& s : frontier)
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) {
                    auto n = step(s, model_img(i, j));
                    if (reached.insert(n).second) next.push_back(n);
                }
        frontier = std::move(next);
    }
    // soundness + equal cardinality => the presented group maps
    // isomorphically onto the model image
    REQUIRE(presented_order == Int(reached.size()));
}
