#include <catch2/catch_amalgamated.hpp>

#include "mwkit/group_ring.hpp"
#include "mwkit/rng.hpp"

using namespace mwkit;

namespace {

UnitRep random_unit(const FieldSpec& f, Rng& rng) {
    if (f.is_q()) {
        Int num = rng.range(1, 50) * (rng.flip() ? 1 : -1);
        Int den = rng.range(1, 50);
        return make_unit_q(num, den);
    }
    return make_unit_fp(f, Int(rng.range(1, f.p - 1)));
}

GroupRingElem random_gr(const FieldSpec& f, Rng& rng) {
    GroupRingElem e = gr_zero(f);
    int n = 1 + static_cast<int>(rng.below(4));
    for (int i = 0; i < n; ++i)
        e = gr_add(e, gr_scale(gr_basis(random_unit(f, rng)), Int(rng.range(-5, 5))));
    return e;
}

}  // namespace

TEST_CASE("unit representation basics") {
    auto q = FieldSpec::rationals();
    auto u = make_unit_q(6, 4);  // 3/2
    REQUIRE(unit_to_string(u) == "3/2");
    REQUIRE(unit_is_square(make_unit_q(9, 4)));
    REQUIRE_FALSE(unit_is_square(make_unit_q(-9, 4)));
    REQUIRE(unit_mul(u, unit_inv(u)).is_one());
    REQUIRE(unit_to_string(unit_one_minus(make_unit_q(3))) == "-2");
    REQUIRE_THROWS_AS(make_unit_q(0), std::invalid_argument);
    REQUIRE_THROWS_AS(make_unit(q, 0), std::invalid_argument);

    auto f7 = FieldSpec::prime_field(7);
    REQUIRE(make_unit(f7, 10).residue == 3);
    REQUIRE(make_unit(f7, -1).residue == 6);
    REQUIRE_THROWS_AS(make_unit(f7, 14), std::invalid_argument);
    REQUIRE_THROWS_AS(FieldSpec::prime_field(9), std::invalid_argument);
    REQUIRE(unit_square_class(make_unit(f7, 4)).is_one());
}

TEST_CASE("group ring generators") {
    auto f7 = FieldSpec::prime_field(7);
    auto e = gr_basis(make_unit(f7, 5));
    REQUIRE(e.terms.size() == 1);
    REQUIRE(e.terms.at(make_unit(f7, 5)) == 1);

    auto q = FieldSpec::rationals();
    REQUIRE(gr_pfister_gen(unit_one(q)).is_zero());

    // <<2>><<3>> = <6> - <2> - <3> + <1>
    auto prod = gr_mul(gr_pfister_gen(make_unit_q(2)), gr_pfister_gen(make_unit_q(3)));
    auto expect = gr_add(gr_sub(gr_sub(gr_basis(make_unit_q(6)), gr_basis(make_unit_q(2))),
                                gr_basis(make_unit_q(3))),
                         gr_one(q));
    REQUIRE(prod == expect);
}

TEST_CASE("group ring multiplication examples") {
    auto q = FieldSpec::rationals();
    REQUIRE(gr_mul(gr_basis(make_unit_q(2)), gr_basis(make_unit_q(3))) == gr_basis(make_unit_q(6)));

    auto f5 = FieldSpec::prime_field(5);
    auto x = gr_sub(gr_basis(make_unit(f5, 2)), gr_one(f5));
    auto y = gr_add(gr_basis(make_unit(f5, 2)), gr_one(f5));
    REQUIRE(gr_mul(x, y) == gr_sub(gr_basis(make_unit(f5, 4)), gr_one(f5)));

    for (uint64_t t = 0; t < 100; ++t) {
        Rng rng = trial_rng(31, t);
        auto e = random_gr(q, rng);
        REQUIRE(gr_mul(e, gr_one(q)) == e);
    }

    REQUIRE_THROWS_AS(gr_mul(gr_one(q), gr_one(f5)), std::invalid_argument);
}

TEST_CASE("augmentation") {
    auto q = FieldSpec::rationals();
    auto e = gr_sub(gr_scale(gr_basis(make_unit_q(2)), 3), gr_basis(make_unit_q(5)));
    REQUIRE(augment(e) == 2);
    REQUIRE(gr_to_string(e) == "3<2> - <5>");
    REQUIRE(augment(gr_one(q)) == 1);

    for (uint64_t t = 0; t < 50; ++t) {
        Rng rng = trial_rng(32, t);
        auto a = random_unit(q, rng), b = random_unit(q, rng);
        REQUIRE(augment(gr_mul(gr_pfister_gen(a), gr_pfister_gen(b))) == 0);
    }
}

TEST_CASE("ring axioms on random triples") {
    for (FieldSpec f : {FieldSpec::rationals(), FieldSpec::prime_field(7)}) {
        for (uint64_t t = 0; t < 500; ++t) {
            Rng rng = trial_rng(33, t);
            auto x = random_gr(f, rng), y = random_gr(f, rng), z = random_gr(f, rng);
            REQUIRE(gr_mul(gr_mul(x, y), z) == gr_mul(x, gr_mul(y, z)));
            REQUIRE(gr_mul(x, gr_add(y, z)) == gr_add(gr_mul(x, y), gr_mul(x, z)));
            REQUIRE(gr_mul(x, y) == gr_mul(y, x));
            REQUIRE(augment(gr_mul(x, y)) == augment(x) * augment(y));
        }
    }
}

TEST_CASE("unit group torsion in F_p") {
    for (uint32_t p : {7u, 13u}) {
        auto f = FieldSpec::prime_field(p);
        for (uint32_t a = 1; a < p; ++a) {
            GroupRingElem pw = gr_one(f);
            for (uint32_t i = 0; i < p - 1; ++i) pw = gr_mul(pw, gr_basis(make_unit(f, a)));
            REQUIRE(pw == gr_one(f));
        }
    }
}

TEST_CASE("group ring rendering") {
    auto q = FieldSpec::rationals();
    auto e = gr_add(gr_sub(gr_scale(gr_basis(make_unit_q(2)), 3), gr_basis(make_unit_q(5))), gr_one(q));
    REQUIRE(gr_to_string(e) == "1 + 3<2> - <5>");
    REQUIRE(gr_to_string(gr_zero(q)) == "0");
}
