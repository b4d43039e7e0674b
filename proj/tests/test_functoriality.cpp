// Functoriality squares at desk scale: the residue map commutes with
// involution traces and with base change along constant unramified
// coefficient extensions, on sampled inputs over F7(t).

#include "gwc/gwherm.hpp"
#include "gwc/octagon.hpp"

#include <doctest.h>

using namespace gwc;

namespace {

HermSpace herm_neg_local(const HermSpace& a) {
    HermSpace out = a;
    for (auto& row : out.gram)
        for (auto& x : row) x = ae_neg(x);
    return out;
}

HermSpace herm_sum_local(const HermSpace& a, const HermSpace& b) {
    HermSpace out = a;
    size_t n = a.rank(), m = b.rank();
    out.gram.assign(n + m, std::vector<AElem>(n + m, ae_zero(a.A)));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) out.gram[i][j] = a.gram[i][j];
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j < m; ++j) out.gram[n + i][n + j] = b.gram[i][j];
    return out;
}

bool same_herm_class(HermSpace a, HermSpace b) {
    b.twist = a.twist;
    auto d = decide_herm_witt(herm_sum_local(a, herm_neg_local(b)));
    REQUIRE(d.verdict != Tri::Unknown);
    return d.verdict == Tri::Yes;
}

}  // namespace

TEST_CASE("residues commute with involution traces (constant quadratic etale)") {
    Field F7 = GF(7);
    Field K = func_field(F7, "t");
    FieldElem tK = F_gen(K);
    FieldElem dd = F_int(K, 3);  // constant non-square
    Algebra SK = alg_quadetale(K, dd);
    ValuedPlace pl = place_of_poly(K, {F_zero(F7), F_one(F7)});

    // the trace pi: S -> F sends x0 + x1 s to 2 x0; it is an involution
    // 1-trace from (S, theta) to (F, id)
    auto trace_down = [&](const HermSpace& h, const Algebra& target) {
        size_t n = h.rank();
        HermSpace out;
        out.A = target;
        out.inv = inv_identity();
        out.eps = h.eps;
        out.twist = h.twist;
        out.gram.assign(2 * n, std::vector<AElem>(2 * n, ae_zero(target)));
        std::vector<AElem> basis = {ae_one(h.A), ae_basis(h.A, 1)};
        for (size_t k = 0; k < n; ++k)
            for (size_t l = 0; l < n; ++l)
                for (size_t s = 0; s < 2; ++s)
                    for (size_t t2 = 0; t2 < 2; ++t2) {
                        AElem v = ae_mul(h.A, apply_inv(h.A, h.inv, basis[s]),
                                         ae_mul(h.A, h.gram[k][l], basis[t2]));
                        out.gram[2 * k + s][2 * l + t2].c[0] = f_mul(F_int(v.c[0].f, 2), v.c[0]);
                    }
        herm_validate(out);
        return out;
    };

    Rng rng(0xF00);
    int done = 0;
    while (done < 15) {
        // diagonal hermitian entries u * t^n with u a constant unit
        std::vector<AElem> diag;
        size_t n = 1 + rng.below(2);
        for (size_t i = 0; i < n; ++i) {
            FieldElem u = F_int(K, 1 + static_cast<long>(rng.below(6)));
            int e = static_cast<int>(rng.below(3));
            diag.push_back(ae_scalar(SK, f_mul(u, f_pow(tK, Int(e)))));
        }
        HermSpace h = herm_diag(SK, inv_canonical(), 1, diag);

        // route 1: trace to (F(t), id), then residue of the quadratic form
        HermSpace down = trace_down(h, alg_field(K));
        auto r1 = residue_dvr_herm(down, pl);
        // route 2: hermitian residue, then the trace over the residue field
        auto r2 = residue_dvr_herm(h, pl);
        HermSpace r2_down = trace_down(r2.cls, alg_field(F7));
        r2_down.twist = r1.cls.twist;
        CHECK(same_herm_class(r1.cls, r2_down));
        ++done;
    }
}

TEST_CASE("residues commute with constant base change") {
    Field F7 = GF(7);
    Field K = func_field(F7, "t");
    FieldElem tK = F_gen(K);
    ValuedPlace pl = place_of_poly(K, {F_zero(F7), F_one(F7)});
    // rho: (F(t), id) -> (S(t), id), S = F(sqrt 3) constant unramified
    Algebra FK = alg_field(K);
    Algebra SK = alg_quadetale(K, F_int(K, 3));
    Algebra Sk = alg_quadetale(F7, F_int(F7, 3));

    auto up = [&](const HermSpace& h, const Algebra& target) {
        HermSpace out;
        out.A = target;
        out.inv = inv_identity();
        out.eps = h.eps;
        out.twist = h.twist;
        size_t n = h.rank();
        out.gram.assign(n, std::vector<AElem>(n, ae_zero(target)));
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) out.gram[i][j] = ae_scalar(target, h.gram[i][j].c[0]);
        herm_validate(out);
        return out;
    };

    Rng rng(0xF01);
    int done = 0;
    while (done < 15) {
        std::vector<AElem> diag;
        size_t n = 1 + rng.below(2);
        for (size_t i = 0; i < n; ++i) {
            FieldElem u = F_int(K, 1 + static_cast<long>(rng.below(6)));
            int e = static_cast<int>(rng.below(3));
            diag.push_back(ae_scalar(FK, f_mul(u, f_pow(tK, Int(e)))));
        }
        HermSpace h = herm_diag(FK, inv_identity(), 1, diag);
        // route 1: base change to S(t), then residue
        auto r1 = residue_dvr_herm(up(h, SK), pl);
        // route 2: residue, then base change of the residue class
        auto r2 = residue_dvr_herm(h, pl);
        HermSpace r2_up = up(r2.cls, Sk);
        r2_up.twist = r1.cls.twist;
        CHECK(same_herm_class(r1.cls, r2_up));
        ++done;
    }
}

TEST_CASE("hermitian residue basics") {
    Field F7 = GF(7);
    Field K = func_field(F7, "t");
    FieldElem tK = F_gen(K);
    Algebra SK = alg_quadetale(K, F_int(K, 3));
    ValuedPlace pl = place_of_poly(K, {F_zero(F7), F_one(F7)});
    SUBCASE("units have zero residue") {
        HermSpace h = herm_diag(SK, inv_canonical(), 1, {ae_scalar(SK, F_int(K, 2))});
        auto r = residue_dvr_herm(h, pl);
        CHECK(r.cls.rank() == 0);
    }
    SUBCASE("odd valuations contribute the unit part") {
        HermSpace h = herm_diag(SK, inv_canonical(), 1, {ae_scalar(SK, f_mul(F_int(K, 2), tK))});
        auto r = residue_dvr_herm(h, pl);
        REQUIRE(r.cls.rank() == 1);
        CHECK(f_eq(r.cls.gram[0][0].c[0], F_int(F7, 2)));
    }
    SUBCASE("hyperbolic pairs die") {
        HermSpace h = herm_diag(SK, inv_canonical(), 1,
                                {ae_scalar(SK, tK), ae_scalar(SK, f_neg(tK))});
        auto r = residue_dvr_herm(h, pl);
        CHECK(decide_herm_witt(r.cls).verdict == Tri::Yes);
    }
}
