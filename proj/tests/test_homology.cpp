#include "gwc/homology.hpp"

#include <doctest.h>

using namespace gwc;

namespace {

IntMat mat(size_t r, size_t c, std::initializer_list<int> xs) {
    IntMat m(r, c);
    size_t k = 0;
    for (int x : xs) {
        m(k / c, k % c) = x;
        ++k;
    }
    return m;
}

// Oracle: d1 = gcd of entries, d1*d2 = gcd of 2x2 minors.
std::pair<Int, Int> snf_2x2_oracle(const IntMat& m) {
    Int g = 0;
    for (size_t i = 0; i < 2; ++i)
        for (size_t j = 0; j < 2; ++j) g = int_gcd(g, m(i, j));
    Int det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    return {g, abs(det) / g};
}

void check_snf(const IntMat& m) {
    SnfResult s = smith_normal_form(m);
    CHECK(s.U * m * s.V == s.D);
    // U, V unimodular
    Int du = smith_normal_form(s.U).D(0, 0);
    (void)du;
    for (size_t i = 0; i + 1 < std::min(m.rows(), m.cols()); ++i) {
        if (s.D(i + 1, i + 1) != 0) {
            CHECK(int_mod(s.D(i + 1, i + 1), s.D(i, i) == 0 ? Int(1) : s.D(i, i)) == 0);
        }
    }
    for (size_t i = 0; i < std::min(m.rows(), m.cols()); ++i)
        for (size_t j = 0; j < std::min(m.rows(), m.cols()); ++j)
            if (i != j) CHECK(s.D(i, j) == 0);
}

}  // namespace

TEST_CASE("smith normal form basics") {
    SUBCASE("identity") {
        IntMat m = IntMat::identity(3);
        SnfResult s = smith_normal_form(m);
        CHECK(s.D == IntMat::identity(3));
        CHECK(s.U * m * s.V == s.D);
    }
    SUBCASE("zero matrix") {
        IntMat m(2, 3);
        SnfResult s = smith_normal_form(m);
        CHECK(s.D.is_zero());
    }
    SUBCASE("2x4 6x8") {
        IntMat m = mat(2, 2, {2, 4, 6, 8});
        auto [d1, d2] = snf_2x2_oracle(m);
        CHECK(d1 == 2);
        CHECK(d2 == 4);
        SnfResult s = smith_normal_form(m);
        CHECK(s.D(0, 0) == d1);
        CHECK(s.D(1, 1) == d2);
        check_snf(m);
    }
}

TEST_CASE("smith normal form random re-substitution") {
    Rng rng(7);
    for (int trial = 0; trial < 60; ++trial) {
        size_t r = 1 + rng.below(5), c = 1 + rng.below(5);
        IntMat m(r, c);
        for (size_t i = 0; i < r; ++i)
            for (size_t j = 0; j < c; ++j) m(i, j) = Int(static_cast<long>(rng.below(41)) - 20);
        check_snf(m);
    }
}

TEST_CASE("kernel and solve") {
    IntMat m = mat(1, 2, {2, 4});
    IntMat k = int_kernel(m);
    CHECK((m * k).is_zero());
    CHECK(k.cols() == 1);

    IntMat b = mat(1, 1, {6});
    auto x = int_solve(m, b);
    REQUIRE(x.has_value());
    CHECK(m * *x == b);
    IntMat b2 = mat(1, 1, {3});
    CHECK(!int_solve(m, b2).has_value());
}

TEST_CASE("cohomology of small complexes") {
    SUBCASE("0 -> Z --x2--> Z -> 0 at the right slot") {
        auto z = FinAbPresentation::free_group(1);
        auto zero = FinAbPresentation::zero();
        FinAbMap d0(z, z, mat(1, 1, {2}));
        FinAbMap d1 = FinAbMap::zero(z, zero);
        auto h = cohomology_at({d0, d1}, 1);
        auto inv = h.invariant_factors();
        REQUIRE(inv.size() == 1);
        CHECK(inv[0] == 2);  // cokernel of x2
    }
    SUBCASE("exact pair has trivial middle cohomology") {
        auto z = FinAbPresentation::free_group(1);
        FinAbMap d0(z, z, mat(1, 1, {1}));
        FinAbMap d1 = FinAbMap::zero(z, FinAbPresentation::zero());
        CHECK(complex_exact_at({d0, d1}, 1));
    }
    SUBCASE("all-zero maps on Z give Z at each slot") {
        auto z = FinAbPresentation::free_group(1);
        FinAbMap d0 = FinAbMap::zero(z, z);
        FinAbMap d1 = FinAbMap::zero(z, z);
        auto h = cohomology_at({d0, d1}, 1);
        auto inv = h.invariant_factors();
        REQUIRE(inv.size() == 1);
        CHECK(inv[0] == 0);
    }
    SUBCASE("torsion groups: Z/4 --x2--> Z/4") {
        auto z4 = FinAbPresentation::cyclic(4);
        FinAbMap d0(z4, z4, mat(1, 1, {2}));
        FinAbMap d1(z4, z4, mat(1, 1, {2}));
        CHECK(compose(d1, d0).is_zero_map());
        CHECK(complex_exact_at({d0, d1}, 1));
    }
}

TEST_CASE("map compatibility is verified") {
    auto z2 = FinAbPresentation::cyclic(2);
    auto z4 = FinAbPresentation::cyclic(4);
    CHECK_THROWS_AS(FinAbMap(z2, z4, mat(1, 1, {1})), error);  // 1: Z/2 -> Z/4 ill-defined
    CHECK_NOTHROW(FinAbMap(z2, z4, mat(1, 1, {2})));
    CHECK_NOTHROW(FinAbMap(z4, z2, mat(1, 1, {1})));
}

namespace {

// Random double complex built by pasting identity squares: each summand
// G at (i,j) occupies the four cells (i..i+1, j..j+1) with identity maps,
// so every row and column of the summand is exact everywhere.
DoubleComplex random_grid_instance(Rng& rng, int s, int t, bool break_corner = false) {
    DoubleComplex dc;
    dc.i_min = -s - 1;
    dc.i_max = t + 1;
    dc.j_min = -t - 1;
    dc.j_max = s + 1;

    struct Block {
        int i, j;
        FinAbPresentation g;
    };
    std::vector<Block> blocks;
    int nblocks = 2 + static_cast<int>(rng.below(4));
    for (int b = 0; b < nblocks; ++b) {
        int i = dc.i_min + static_cast<int>(rng.below(dc.i_max - dc.i_min));
        int j = dc.j_min + static_cast<int>(rng.below(dc.j_max - dc.j_min));
        // keep the two vanishing corners clear
        auto touches = [&](int ci, int cj) {
            return (i == ci || i + 1 == ci) && (j == cj || j + 1 == cj);
        };
        if (!break_corner && (touches(t, -t) || touches(-s, s))) continue;
        Int n = Int(1 + static_cast<long>(rng.below(6)));
        blocks.push_back({i, j, n == 1 ? FinAbPresentation::free_group(1) : FinAbPresentation::cyclic(n)});
    }
    if (break_corner) blocks.push_back({t, -t, FinAbPresentation::cyclic(3)});

    // assemble direct sums cell by cell
    std::map<std::pair<int, int>, std::vector<std::pair<size_t, size_t>>> spans;  // cell -> (block, offset)
    auto add_cell = [&](int i, int j, size_t b) {
        auto key = std::make_pair(i, j);
        auto& cell = dc.cells[key];
        size_t off = cell.rank;
        FinAbPresentation merged(cell.rank + blocks[b].g.rank, IntMat(cell.rank + blocks[b].g.rank, 0));
        IntMat rel(merged.rank, cell.rel.cols() + blocks[b].g.rel.cols());
        for (size_t r = 0; r < cell.rank; ++r)
            for (size_t c = 0; c < cell.rel.cols(); ++c) rel(r, c) = cell.rel(r, c);
        for (size_t r = 0; r < blocks[b].g.rank; ++r)
            for (size_t c = 0; c < blocks[b].g.rel.cols(); ++c)
                rel(off + r, cell.rel.cols() + c) = blocks[b].g.rel(r, c);
        merged.rel = rel;
        dc.cells[key] = merged;
        spans[key].push_back({b, off});
    };
    for (size_t b = 0; b < blocks.size(); ++b) {
        bool corner_only = break_corner && b + 1 == blocks.size();
        add_cell(blocks[b].i, blocks[b].j, b);
        if (corner_only) continue;
        add_cell(blocks[b].i + 1, blocks[b].j, b);
        add_cell(blocks[b].i, blocks[b].j + 1, b);
        add_cell(blocks[b].i + 1, blocks[b].j + 1, b);
    }
    // identity maps inside each block square
    auto put = [&](std::map<std::pair<int, int>, IntMat>& maps, int i, int j, int di, int dj, size_t b) {
        auto s_it = spans.find({i, j});
        auto t_it = spans.find({i + di, j + dj});
        if (s_it == spans.end() || t_it == spans.end()) return;
        size_t soff = 0, toff = 0;
        bool found_s = false, found_t = false;
        for (auto& [bb, off] : s_it->second)
            if (bb == b) {
                soff = off;
                found_s = true;
            }
        for (auto& [bb, off] : t_it->second)
            if (bb == b) {
                toff = off;
                found_t = true;
            }
        if (!found_s || !found_t) return;
        auto key = std::make_pair(i, j);
        auto& m = maps.try_emplace(key, IntMat(dc.at(i + di, j + dj).rank, dc.at(i, j).rank)).first->second;
        if (m.rows() != dc.at(i + di, j + dj).rank || m.cols() != dc.at(i, j).rank) {
            IntMat grown(dc.at(i + di, j + dj).rank, dc.at(i, j).rank);
            for (size_t r = 0; r < m.rows(); ++r)
                for (size_t c = 0; c < m.cols(); ++c) grown(r, c) = m(r, c);
            m = grown;
        }
        for (size_t r = 0; r < blocks[b].g.rank; ++r) m(toff + r, soff + r) = 1;
    };
    for (size_t b = 0; b < blocks.size(); ++b) {
        if (break_corner && b + 1 == blocks.size()) continue;
        put(dc.hmat, blocks[b].i, blocks[b].j, 1, 0, b);
        put(dc.hmat, blocks[b].i, blocks[b].j + 1, 1, 0, b);
        put(dc.vmat, blocks[b].i, blocks[b].j, 0, 1, b);
        put(dc.vmat, blocks[b].i + 1, blocks[b].j, 0, 1, b);
    }
    return dc;
}

}  // namespace

TEST_CASE("grid lemma") {
    SUBCASE("all-zero double complex is exact") {
        DoubleComplex dc;
        auto v = grid_check(dc, 1, 1);
        CHECK(v.hypotheses_ok);
        CHECK(v.exact_at_origin);
    }
    SUBCASE("30 random pasted instances verify exactness at the origin") {
        Rng rng(20240811);
        int done = 0;
        while (done < 30) {
            int s = 1 + static_cast<int>(rng.below(2));
            int t = 1 + static_cast<int>(rng.below(2));
            DoubleComplex dc = random_grid_instance(rng, s, t);
            auto v = grid_check(dc, s, t);
            REQUIRE(v.hypotheses_ok);
            CHECK(v.exact_at_origin);
            ++done;
        }
    }
    SUBCASE("broken corner is reported") {
        Rng rng(5);
        DoubleComplex dc = random_grid_instance(rng, 1, 1, /*break_corner=*/true);
        auto v = grid_check(dc, 1, 1);
        CHECK(!v.hypotheses_ok);
        CHECK(v.failure.find("corner") != std::string::npos);
    }
}
