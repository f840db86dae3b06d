#include <catch2/catch_amalgamated.hpp>

#include "mwkit/intmatrix.hpp"
#include "mwkit/rng.hpp"

using namespace mwkit;

namespace {

SparseIntMatrix from_rows(int rows, int cols, std::initializer_list<std::initializer_list<int>> data) {
    SparseIntMatrix m(rows, cols);
    int r = 0;
    for (const auto& row : data) {
        int c = 0;
        for (int v : row) {
            if (v != 0) m.set(r, c, v);
            ++c;
        }
        ++r;
    }
    return m;
}

SparseIntMatrix random_matrix(Rng& rng, int rows, int cols, int lo, int hi) {
    SparseIntMatrix m(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            int64_t v = rng.range(lo, hi);
            if (v != 0) m.set(r, c, Int(v));
        }
    return m;
}

}  // namespace

TEST_CASE("smith normal form on classical small inputs") {
    auto d23 = from_rows(2, 2, {{2, 0}, {0, 3}});
    auto s = smith_normal_form(d23);
    REQUIRE(s.diag == std::vector<Int>{1, 6});

    auto zero = SparseIntMatrix(3, 3);
    REQUIRE(smith_normal_form(zero).diag.empty());

    auto m = from_rows(2, 2, {{2, 4}, {6, 8}});
    // hand row reduction: (2,4;6,8) -> (2,4;0,-4) -> (2,0;0,-4) -> diag(2,4)
    REQUIRE(smith_normal_form(m).diag == std::vector<Int>{2, 4});

    REQUIRE(smith_normal_form(SparseIntMatrix(0, 0)).diag.empty());
    REQUIRE(smith_normal_form(SparseIntMatrix(0, 5)).diag.empty());
}

TEST_CASE("smith transforms reconstruct and divisibility holds on random matrices") {
    for (uint64_t trial = 0; trial < 60; ++trial) {
        Rng rng = trial_rng(1234, trial);
        int rows = 1 + static_cast<int>(rng.below(12));
        int cols = 1 + static_cast<int>(rng.below(12));
        auto m = random_matrix(rng, rows, cols, -9, 9);
        auto s = smith_normal_form(m, true);
        CAPTURE(trial, rows, cols);
        REQUIRE(smith_reconstructs(m, s));
        for (size_t i = 0; i + 1 < s.diag.size(); ++i) REQUIRE(s.diag[i + 1] % s.diag[i] == 0);
        for (const Int& d : s.diag) REQUIRE(d > 0);
    }
}

TEST_CASE("cokernel invariant factors") {
    SparseIntMatrix col2(1, 1);
    col2.set(0, 0, 2);
    auto g = cokernel(col2);
    REQUIRE(g.free_rank == 0);
    REQUIRE(g.torsion == std::vector<Int>{2});

    auto id2 = from_rows(2, 2, {{1, 0}, {0, 1}});
    auto t = cokernel(id2);
    REQUIRE(t.free_rank == 0);
    REQUIRE(t.torsion.empty());

    // columns {(2,0),(0,0)} in Z^2 -> Z + Z/2
    auto m = from_rows(2, 2, {{2, 0}, {0, 0}});
    auto g2 = cokernel(m);
    REQUIRE(g2.free_rank == 1);
    REQUIRE(g2.torsion == std::vector<Int>{2});
    REQUIRE(g2.invariant_string() == "Z^1 + Z/2");
}

TEST_CASE("cokernel invariants unchanged by permutations and zero columns") {
    for (uint64_t trial = 0; trial < 30; ++trial) {
        Rng rng = trial_rng(77, trial);
        int rows = 1 + static_cast<int>(rng.below(7));
        int cols = 1 + static_cast<int>(rng.below(7));
        auto m = random_matrix(rng, rows, cols, -5, 5);
        auto base = cokernel(m);

        std::vector<int> rp(rows), cp(cols);
        for (int i = 0; i < rows; ++i) rp[i] = i;
        for (int j = 0; j < cols; ++j) cp[j] = j;
        for (int i = rows - 1; i > 0; --i) std::swap(rp[i], rp[rng.below(i + 1)]);
        for (int j = cols - 1; j > 0; --j) std::swap(cp[j], cp[rng.below(j + 1)]);

        SparseIntMatrix perm(rows, cols + 2);  // two extra zero columns
        for (const auto& [rc, v] : m.entries()) perm.set(rp[rc.first], cp[rc.second], v);
        auto re = cokernel(perm);
        REQUIRE(groups_isomorphic(base, re));
    }
}

TEST_CASE("group isomorphism by invariant factors") {
    // Z/2 + Z vs Z + Z/2 presented differently
    auto a = cokernel(from_rows(2, 1, {{2}, {0}}));
    auto b = cokernel(from_rows(2, 1, {{0}, {2}}));
    REQUIRE(groups_isomorphic(a, b));

    auto z4 = cokernel(from_rows(1, 1, {{4}}));
    auto z22 = cokernel(from_rows(2, 2, {{2, 0}, {0, 2}}));
    REQUIRE_FALSE(groups_isomorphic(z4, z22));

    auto d23 = cokernel(from_rows(2, 2, {{2, 0}, {0, 3}}));
    auto z6 = cokernel(from_rows(1, 1, {{6}}));
    REQUIRE(groups_isomorphic(d23, z6));
}

TEST_CASE("lattice membership with certificates") {
    SparseIntMatrix m(1, 1);
    m.set(0, 0, 2);
    auto r = lattice_membership({Int(4)}, m);
    REQUIRE(r.member);
    REQUIRE(r.certificate == std::vector<Int>{2});
    REQUIRE_FALSE(lattice_membership({Int(1)}, m).member);

    auto cols = from_rows(2, 2, {{1, 2}, {2, 1}});
    auto s = lattice_membership({Int(3), Int(3)}, cols);
    REQUIRE(s.member);
    REQUIRE(s.certificate == std::vector<Int>({1, 1}));

    REQUIRE_THROWS_AS(lattice_membership({Int(1)}, cols), std::invalid_argument);
}

TEST_CASE("membership certificates are exact preimages on random instances") {
    for (uint64_t trial = 0; trial < 40; ++trial) {
        Rng rng = trial_rng(990, trial);
        int rows = 1 + static_cast<int>(rng.below(6));
        int cols = 1 + static_cast<int>(rng.below(6));
        auto m = random_matrix(rng, rows, cols, -6, 6);
        LatticeSolver solver(m);
        // v = m*x for random x must be a member with an exact certificate
        std::vector<Int> x(cols);
        for (int j = 0; j < cols; ++j) x[j] = rng.range(-4, 4);
        auto v = m.apply(x);
        auto res = solver.contains(v);
        REQUIRE(res.member);
        REQUIRE(m.apply(res.certificate) == v);
    }
}

TEST_CASE("column reduction recovers rank and integer kernel") {
    for (uint64_t trial = 0; trial < 30; ++trial) {
        Rng rng = trial_rng(55, trial);
        int rows = 1 + static_cast<int>(rng.below(8));
        int cols = 1 + static_cast<int>(rng.below(10));
        auto m = random_matrix(rng, rows, cols, -4, 4);

        std::vector<ColumnReducer::Col> cs(cols), shadow(cols);
        for (const auto& [rc, v] : m.entries()) cs[rc.second].emplace_back(rc.first, v);
        for (int j = 0; j < cols; ++j) shadow[j].emplace_back(j, Int(1));  // identity shadow
        ColumnReducer red(rows, cs, shadow);
        auto out = red.run(cols);

        REQUIRE(out.rank == smith_normal_form(m).rank());
        // every projected kernel column is a genuine kernel vector
        for (int j = 0; j < out.projected_kernel.cols(); ++j) {
            std::vector<Int> k(cols, 0);
            for (const auto& [rc, v] : out.projected_kernel.entries())
                if (rc.second == j) k[rc.first] = v;
            auto img = m.apply(k);
            for (const Int& e : img) REQUIRE(e == 0);
        }
        REQUIRE(out.rank + out.projected_kernel.cols() == cols);
        // pivot columns span the same lattice: same Smith form
        REQUIRE(smith_normal_form(out.pivot_columns).diag == smith_normal_form(m).diag);
    }
}
