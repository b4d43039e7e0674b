#include "gwc/koszul.hpp"

#include <doctest.h>

using namespace gwc;

namespace {

struct Setup {
    PRing R;
    MultiPoly x, y;
    Setup() : R(poly_ring(QQ(), {"x", "y"})), x(MultiPoly::variable(R, 0)), y(MultiPoly::variable(R, 1)) {}
};

}  // namespace

TEST_CASE("poly_reduce") {
    Setup S;
    SUBCASE("x^2 - y^5 by [x, y]: the worked example's coefficients") {
        MultiPoly f = S.x * S.x - S.y * S.y * S.y * S.y * S.y;
        auto dv = poly_reduce(f, {S.x, S.y});
        CHECK(dv.remainder.is_zero());
        CHECK(dv.quotients[0].equals(S.x));
        CHECK(dv.quotients[1].equals(-(S.y * S.y * S.y * S.y)));
    }
    SUBCASE("zero input") {
        auto dv = poly_reduce(MultiPoly::zero(S.R), {S.x});
        CHECK(dv.remainder.is_zero());
        CHECK(dv.quotients[0].is_zero());
    }
    SUBCASE("no divisible term") {
        MultiPoly f = S.x + MultiPoly::one(S.R);
        auto dv = poly_reduce(f, {S.y});
        CHECK(dv.remainder.equals(f));
    }
    SUBCASE("re-substitution identity on random inputs") {
        Rng rng(8);
        for (int trial = 0; trial < 30; ++trial) {
            MultiPoly f = MultiPoly::zero(S.R);
            for (int t = 0; t < 5; ++t) {
                Mono m = {static_cast<int>(rng.below(4)), static_cast<int>(rng.below(4))};
                f.add_term(m, random_elem(S.R->K, rng));
            }
            std::vector<MultiPoly> divs = {S.x * S.x - S.y, S.x * S.y};
            auto dv = poly_reduce(f, divs);
            MultiPoly back = dv.remainder;
            for (size_t i = 0; i < divs.size(); ++i) back = back + dv.quotients[i] * divs[i];
            CHECK(back.equals(f));
        }
    }
}

TEST_CASE("koszul complex") {
    Setup S;
    SUBCASE("matrices compose to zero for random generators") {
        Rng rng(21);
        for (int trial = 0; trial < 10; ++trial) {
            std::vector<MultiPoly> gens;
            size_t n = 2 + rng.below(2);
            for (size_t i = 0; i < n; ++i) {
                MultiPoly g = MultiPoly::zero(S.R);
                for (int t = 0; t < 3; ++t) {
                    Mono m = {static_cast<int>(rng.below(3)), static_cast<int>(rng.below(3))};
                    g.add_term(m, random_elem(S.R->K, rng));
                }
                if (g.is_zero()) g = S.x;
                gens.push_back(g);
            }
            KoszulComplex K = koszul_complex(S.R, gens);
            CHECK(koszul_d2_zero(K));
            // rank C(n, i)
            for (size_t i = 0; i < K.basis.size(); ++i) {
                size_t expect = 1;
                for (size_t k = 0; k < i; ++k) expect = expect * (n - k) / (k + 1);
                CHECK(K.basis[i].size() == expect);
            }
        }
    }
    SUBCASE("(x, y) is regular; H^0 = R/(x,y)") {
        auto chk = check_regular_sequence(S.R, {S.x, S.y});
        CHECK(chk.regular);
    }
    SUBCASE("(x, x) has H^1 witnessed by e1 - e2") {
        auto chk = check_regular_sequence(S.R, {S.x, S.x});
        REQUIRE(!chk.regular);
        REQUIRE(chk.witness.has_value());
        // the witness is in ker d1: h1*x + h2*x = 0
        auto& w = *chk.witness;
        MultiPoly sum = w[0] * S.x + w[1] * S.x;
        CHECK(sum.is_zero());
        CHECK(!(w[0].is_zero() && w[1].is_zero()));
    }
    SUBCASE("(1) is treated as regular (unit ideal, exact complex)") {
        auto chk = check_regular_sequence(S.R, {MultiPoly::one(S.R)});
        CHECK(chk.regular);
    }
    SUBCASE("random regular sequences of length <= 3 in <= 3 variables: H^i = 0") {
        PRing R3 = poly_ring(GF(7), {"x", "y", "z"});
        Rng rng(31);
        std::vector<MultiPoly> vars = {MultiPoly::variable(R3, 0), MultiPoly::variable(R3, 1),
                                       MultiPoly::variable(R3, 2)};
        for (int trial = 0; trial < 6; ++trial) {
            // v_i + (random higher-degree perturbation in later variables)
            std::vector<MultiPoly> gens;
            size_t len = 2 + rng.below(2);
            for (size_t i = 0; i < len; ++i) {
                MultiPoly g = vars[i];
                MultiPoly pert = vars[(i + 1) % 3] * vars[(i + 2) % 3];
                if (rng.below(2)) g = g + pert;
                gens.push_back(g);
            }
            KoszulComplex K = koszul_complex(R3, gens);
            CHECK(koszul_d2_zero(K));
            for (int lvl = 1; lvl < static_cast<int>(gens.size()); ++lvl)
                CHECK(!koszul_homology_witness(K, lvl, 3).has_value());
        }
    }
}

TEST_CASE("ext_top_dual") {
    Setup S;
    SUBCASE("(x, y) in Q[x,y]") {
        TwistSymbol t = ext_top_dual(S.R, {S.x, S.y});
        REQUIRE(t.gens.size() == 2);
        CHECK(t.gens[0] == "x");
        CHECK(t.gens[1] == "y");
        CHECK(t.sign == 1);
    }
    SUBCASE("(t) in Q[t]") {
        PRing R1 = poly_ring(QQ(), {"t"});
        TwistSymbol t = ext_top_dual(R1, {MultiPoly::variable(R1, 0)});
        REQUIRE(t.gens.size() == 1);
        CHECK(t.gens[0] == "t");
    }
    SUBCASE("(x, x) is rejected") { CHECK_THROWS_AS(ext_top_dual(S.R, {S.x, S.x}), error); }
}

TEST_CASE("solve_coeffs") {
    Setup S;
    MultiPoly curve = S.x * S.x - S.y * S.y * S.y * S.y * S.y;
    SUBCASE("the singular-curve data") {
        auto r = solve_coeffs(S.R, {curve}, {S.x, S.y});
        // gamma = (x, -y^4)^T
        CHECK(r.gamma[0][0].equals(S.x));
        CHECK(r.gamma[1][0].equals(-(S.y * S.y * S.y * S.y)));
        // xi = (x^{-1}, 0)
        CHECK(r.xi_den.equals(S.x));
        CHECK(r.xi[0].num.equals(MultiPoly::one(S.R)));
        CHECK(r.xi[1].num.is_zero());
        // identities: sum_j beta_j gamma_ji = alpha_i, sum_j xi_j beta_j = 1
        MultiPoly lhs = S.x * r.gamma[0][0] + S.y * r.gamma[1][0];
        CHECK(lhs.equals(curve));
        MultiPoly unit = r.xi[0].num * S.x + r.xi[1].num * S.y;
        CHECK(unit.equals(r.xi_den));
    }
    SUBCASE("alpha = (x): y is the regular multiplier") {
        auto r = solve_coeffs(S.R, {S.x}, {S.x, S.y});
        CHECK(r.gamma[0][0].equals(MultiPoly::one(S.R)));
        CHECK(r.gamma[1][0].is_zero());
        CHECK(r.xi_den.equals(S.y));
        CHECK(r.xi[0].num.is_zero());
        CHECK(r.xi[1].num.equals(MultiPoly::one(S.R)));
    }
    SUBCASE("membership failure") { CHECK_THROWS_AS(solve_coeffs(S.R, {S.x}, {S.y}), error); }
}

TEST_CASE("residue_determinant") {
    Setup S;
    MultiPoly curve = S.x * S.x - S.y * S.y * S.y * S.y * S.y;
    SUBCASE("singular curve: d = -y^4/x") {
        auto sc = solve_coeffs(S.R, {curve}, {S.x, S.y});
        auto rd = residue_determinant(S.R, {curve}, {S.x, S.y}, sc.gamma, sc.xi);
        CHECK(rd.d.num.equals(-(S.y * S.y * S.y * S.y)));
        CHECK(rd.d.den.equals(S.x));
        CHECK(rd.target.gens == std::vector<std::string>{"x", "y"});
    }
    SUBCASE("alpha=(x): d = -1/y, hand-checked 2x2 determinant") {
        auto sc = solve_coeffs(S.R, {S.x}, {S.x, S.y});
        auto rd = residue_determinant(S.R, {S.x}, {S.x, S.y}, sc.gamma, sc.xi);
        // det [[0, 1], [1/y, 0]] = -1/y
        CHECK(rd.d.num.equals(-MultiPoly::one(S.R)));
        CHECK(rd.d.den.equals(S.y));
    }
    SUBCASE("e = 0: single beta") {
        PRing R1 = poly_ring(QQ(), {"t"});
        MultiPoly t = MultiPoly::variable(R1, 0);
        auto sc = solve_coeffs(R1, {}, {t});
        auto rd = residue_determinant(R1, {}, {t}, sc.gamma, sc.xi);
        CHECK(rd.d.num.equals(MultiPoly::one(R1)));
        CHECK(rd.d.den.equals(t));
        CHECK(rd.target.gens == std::vector<std::string>{"t"});
    }
    SUBCASE("swapping betas negates the determinant") {
        auto sc = solve_coeffs(S.R, {curve}, {S.x, S.y});
        auto rd = residue_determinant(S.R, {curve}, {S.x, S.y}, sc.gamma, sc.xi);
        // swapped problem: betas (y, x)
        std::vector<std::vector<MultiPoly>> gamma2 = {sc.gamma[1], sc.gamma[0]};
        std::vector<LocalizedElem> xi2 = {sc.xi[1], sc.xi[0]};
        auto rd2 = residue_determinant(S.R, {curve}, {S.y, S.x}, gamma2, xi2);
        CHECK((rd.d.num + rd2.d.num).is_zero());
        CHECK(rd.d.den.equals(rd2.d.den));
    }
}
