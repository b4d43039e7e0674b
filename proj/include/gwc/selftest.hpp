#pragma once

// The worked-example regression suite behind `selftest`: every bit-exact
// anchor value the library reproduces, runnable in one pass.

#include <string>
#include <utility>
#include <vector>

#include "gwc/format.hpp"
#include "gwc/octagon.hpp"

namespace gwc {

struct SelftestResult {
    std::string name;
    bool pass;
    std::string detail;
};

inline std::vector<SelftestResult> run_selftest() {
    std::vector<SelftestResult> out;
    auto check = [&](const std::string& name, bool ok, const std::string& detail = "") {
        out.push_back({name, ok, detail});
    };

    // multivariate division on the singular-curve data
    {
        PRing R = poly_ring(QQ(), {"x", "y"});
        MultiPoly X = MultiPoly::variable(R, 0), Y = MultiPoly::variable(R, 1);
        MultiPoly curve = X * X - Y * Y * Y * Y * Y;
        auto dv = poly_reduce(curve, {X, Y});
        check("poly_reduce: x^2-y^5 = x*(x) + y*(-y^4)",
              dv.remainder.is_zero() && dv.quotients[0].equals(X) &&
                  dv.quotients[1].equals(-(Y * Y * Y * Y)));

        auto chk = check_regular_sequence(R, {X, Y});
        check("koszul: (x, y) is a regular sequence", chk.regular);
        auto chk2 = check_regular_sequence(R, {X, X});
        check("koszul: (x, x) has nonzero H^1", !chk2.regular && chk2.witness.has_value());

        auto sc = solve_coeffs(R, {curve}, {X, Y});
        check("solve_coeffs: gamma = (x, -y^4), xi = (1/x, 0)",
              sc.gamma[0][0].equals(X) && sc.gamma[1][0].equals(-(Y * Y * Y * Y)) &&
                  sc.xi_den.equals(X) && sc.xi[1].num.is_zero());
        auto rd = residue_determinant(R, {curve}, {X, Y}, sc.gamma, sc.xi);
        check("residue determinant: d = -y^4/x",
              rd.d.num.equals(-(Y * Y * Y * Y)) && rd.d.den.equals(X), rd.d.str());
    }

    // the classical second residue over F7[t] and Q(t)
    {
        Field Qt = func_field(QQ(), "t");
        ValuedPlace at_t = place_of_poly(Qt, {F_zero(QQ()), F_one(QQ())});
        auto r = residue_dvr(make_form(Qt, {F_gen(Qt)}), at_t);
        check("residue: d(t)<t> = <[t -> 1]>",
              r.cls.entries.size() == 1 && f_eq(r.cls.entries[0], F_one(QQ())));
        auto r2 = residue_dvr(make_form(Qt, {f_add(F_gen(Qt), F_one(Qt))}), at_t);
        check("residue: units have zero residue", r2.cls.entries.empty());
    }

    // toy chain over Q[x,y]_(x,y)
    {
        RingDescriptor R = ring_2dim_local(QQ());
        MultiPoly X = MultiPoly::variable(R.poly2, 0), Y = MultiPoly::variable(R.poly2, 1);
        FactoredForm f;
        f.R = R.poly2;
        f.entries.push_back({F_one(QQ()), {{X, 1}, {Y, 1}}});
        auto d0 = d0_factored(f, R);
        bool ok0 = d0.comps.size() == 2 && f_str(d0.comps[0].cls.entries[0]) == "y" &&
                   f_str(d0.comps[1].cls.entries[0]) == "x";
        check("toy chain: d0<xy> = <[x -> y]> + <[y -> x]>", ok0, d0.str());
        auto d1 = d1_two_dim(d0, R);
        bool ok1 = d1.contributions.size() == 2 &&
                   f_eq(d1.contributions[0].second.entries[0], F_int(QQ(), -1)) &&
                   f_eq(d1.contributions[1].second.entries[0], F_one(QQ()));
        check("toy chain: d1 gives <-[x^y -> 1]> + <[x^y -> 1]>", ok1);
        check("toy chain: d^2 = 0", check_d2_zero(f, R).zero);
    }

    // the singular residue over Q and F7
    for (const Field& F : {QQ(), GF(7)}) {
        PRing R = poly_ring(F, {"x", "y"});
        MultiPoly X = MultiPoly::variable(R, 0), Y = MultiPoly::variable(R, 1);
        CurvePrime cp = classify_curve_prime(R, X * X - Y * Y * Y * Y * Y);
        auto res = residue_at_origin(R, cp, reduce_mod_prime(cp, X * Y));
        bool ok = res.cls.entries.size() == 1 && f_eq(res.cls.entries[0], F_int(F, -1)) &&
                  res.witness.find("dim U^f/U = 1") != std::string::npos;
        check("singular curve over " + field_name(F) + ": residue <-[x^y -> 1]>", ok, res.witness);
    }

    // lattice witness of the worked example
    {
        BranchRing S = monomial_branch(GF(7), 2, 5);
        FieldElem c = f_pow(F_gen(S.Fz), 7);
        ZLattice U = normalization_lattice(S, -1);
        ZLattice Uf = lattice_dual(U, c);
        check("lattice dual: (z^-1 F[z])^f = z^-2 F[z]",
              lattice_contains(Uf, f_pow(F_gen(S.Fz), -2)) &&
                  !lattice_contains(Uf, f_pow(F_gen(S.Fz), -3)));
    }

    // Witt group anchors
    {
        Field F5 = GF(5), F7 = GF(7);
        check("witt: <1,-1> reduces to 0", witt_reduce(make_form(F5, {F_one(F5), F_int(F5, -1)})).rank() == 0);
        check("witt: <1,1> trivial over F5, anisotropic over F7",
              witt_reduce(make_form(F5, {F_one(F5), F_one(F5)})).rank() == 0 &&
                  witt_reduce(make_form(F7, {F_one(F7), F_one(F7)})).rank() == 2);
    }

    // Scharlau transfer Gram of Q[X]/(X^3 - 2)
    {
        Field Q = QQ();
        Algebra A = alg_field(Q);
        MonogenicExtension ext{A, {F_int(Q, -2), F_zero(Q), F_zero(Q), F_one(Q)}};
        HermSpace one = herm_scalar_diag(A, inv_identity(), 1, {F_one(Q)});
        HermSpace tr = scharlau_transfer(ext, inv_identity(), 1, base_change_to_monogenic(ext, one));
        bool ok = tr.rank() == 3 && f_eq(tr.gram[0][0].c[0], F_one(Q)) &&
                  f_eq(tr.gram[1][2].c[0], F_int(Q, 2)) && f_is_zero(tr.gram[2][2].c[0]);
        check("Scharlau transfer: Gram [[1,0,0],[0,0,2],[0,2,0]]", ok);
    }

    // octagon data over the Hamilton quaternions
    {
        Field Q = QQ();
        Algebra H = alg_quaternion(Q, F_int(Q, -1), F_int(Q, -1));
        OctagonData d{H, inv_canonical(), 1, ae_basis(H, 1), ae_basis(H, 2)};
        auto arrows = build_octagon(d);
        bool ok = arrows.size() == 8 && f_eq(arrows[0].tgt.A.a, F_int(Q, -1)) &&
                  arrows[0].tgt.inv.kind == Involution::Canonical &&
                  arrows[2].tgt.inv.kind == Involution::Identity;
        check("octagon: B = Q(i), tau1 = conj, tau2 = id", ok);
        HermSpace onef = herm_scalar_diag(H, inv_canonical(), 1, {F_one(Q)});
        TraceSplit ts = involution_trace_split(onef, ae_basis(H, 1), ae_basis(H, 2));
        check("octagon: pi<1> = <1,1> over (Q(i), conj)",
              ts.pi_image.rank() == 2 && ae_eq(ts.pi_image.gram[0][0], ae_one(ts.B)) &&
                  ae_eq(ts.pi_image.gram[1][1], ae_one(ts.B)));
    }

    // split quadratic etale algebras contribute nothing
    {
        Field F5 = GF(5);
        auto arrows = five_term_sequence(F5, F_int(F5, 4));
        FiniteWittGroup g = enumerate_witt_group(arrows[0].src, 3);
        check("split S = F x F: W_1(S, theta) = 0", g.pres.order() == 1);
    }

    return out;
}

}  // namespace gwc
