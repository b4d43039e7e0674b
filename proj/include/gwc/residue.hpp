#pragma once

// Second residue maps. The classical discrete-valuation case carries the
// twist bookkeeping of the worked examples; the complete-intersection case
// runs through lattices over a curve branch and the transfer functional
// produced by the residue determinant.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gwc/branch.hpp"
#include "gwc/koszul.hpp"
#include "gwc/witt.hpp"

namespace gwc {

struct ResidueResult {
    TwistSymbol target;   // symbol at the target prime, sign folded in
    DiagForm cls;         // twisted class over the residue field of the target
    std::string witness;  // lattice pair / determinant data used
};

// --- level 0 -> 1 on a Dedekind ring (classical second residue) ----------------

// d_0 component at one place: <u pi^n> contributes <[pi -> u(residue)]> for odd
// n and nothing for even n (e = 0, so no extra sign).
inline ResidueResult residue_dvr(const DiagForm& f, const ValuedPlace& pl) {
    if (f.twist) fail("BadInput", "level-0 classes are untwisted");
    TwistSymbol sym;
    sym.gens = {pl.kind == ValuedPlace::RatPrime ? pl.p.get_str() : up_str(pl.pi, pl.field->gen)};
    sym.sign = 1;
    std::vector<FieldElem> entries;
    std::string wit;
    for (const auto& a : f.entries) {
        auto vr = valuation_and_reduce(pl, a);
        wit += (wit.empty() ? "" : "; ") + f_str(a) + ": v=" + std::to_string(vr.v);
        if (vr.v % 2 != 0 && !f_is_zero(vr.residue)) entries.push_back(vr.residue);
    }
    DiagForm cls{pl.residue_field, entries, sym, false};
    return {sym, cls, wit};
}

// --- hermitian coefficients over a constant algebra ------------------------------

// The same rule for diagonal epsilon-hermitian forms over A tensor Frac(R)
// with A a constant algebra (quadratic etale or quaternion over the residue
// base): an entry u pi^n with u a unit of A at the place contributes its
// reduction for odd n. Declared in hermitian.hpp terms; implemented in
// gwherm.hpp to keep include order simple.

// --- the two-dimensional local ring F[x,y]_(x,y) --------------------------------

// A supported codimension-1 prime of F[x,y]_(x,y), with its branch.
struct CurvePrime {
    MultiPoly pi;        // generator, vanishing at the origin, irreducible
    BranchRing branch;   // parametrization z -> (x(z), y(z))
    bool regular;        // quotient is a discrete valuation ring
    Field kp;            // the residue field k(pi) as a field object
    size_t yvar = 1;     // index of y in the ring
};

// recognize the supported generator shapes and parametrize them
inline CurvePrime classify_curve_prime(const PRing& R, const MultiPoly& pi) {
    const Field& F = R->K;
    if (R->vars.size() != 2) fail("UnsupportedRing", "curve primes live in two variables");
    if (pi.is_zero() || !f_is_zero(pi.constant_term()))
        fail("BadInput", "prime generator must vanish at the origin");
    CurvePrime out;
    out.pi = pi;

    // y - psi(x) (degree 1 in y, unit coefficient)
    if (pi.degree_in(1) == 1) {
        MultiPoly c1 = pi.coeff_of(1, 1), c0 = pi.coeff_of(1, 0);
        if (c1.total_degree() == 0) {
            FieldElem u = c1.constant_term();
            MultiPoly psi = -c0;  // y = psi(x)/u
            UPoly psix;
            for (int k = 0; k <= psi.degree_in(0); ++k)
                psix.push_back(f_div(psi.coeff_of(0, k).constant_term(), u));
            up_trim(psix);
            UPoly xz = {F_zero(F), F_one(F)};
            out.branch = make_branch(F, xz, up_compose(F, psix, xz));
            out.regular = true;
            out.kp = func_field(F, "x");
            return out;
        }
    }
    // x - psi(y)
    if (pi.degree_in(0) == 1) {
        MultiPoly c1 = pi.coeff_of(0, 1), c0 = pi.coeff_of(0, 0);
        if (c1.total_degree() == 0) {
            FieldElem u = c1.constant_term();
            MultiPoly psi = -c0;
            UPoly psiy;
            for (int k = 0; k <= psi.degree_in(1); ++k)
                psiy.push_back(f_div(psi.coeff_of(1, k).constant_term(), u));
            up_trim(psiy);
            UPoly yz = {F_zero(F), F_one(F)};
            out.branch = make_branch(F, up_compose(F, psiy, yz), yz);
            out.regular = true;
            out.kp = func_field(F, "y");
            return out;
        }
    }
    // +-(x^a - y^b), a, b >= 2 coprime: the monomial curve
    if (pi.term_count() == 2) {
        auto it = pi.terms().begin();
        auto [m1, c1] = *it;
        ++it;
        auto [m2, c2] = *it;
        bool pure1 = m1[1] == 0 && m1[0] >= 2, pure2 = m2[0] == 0 && m2[1] >= 2;
        bool pure1y = m1[0] == 0 && m1[1] >= 2, pure2x = m2[1] == 0 && m2[0] >= 2;
        int a = 0, b = 0;
        FieldElem cx, cy;
        if (pure1 && pure2) {
            a = m1[0];
            b = m2[1];
            cx = c1;
            cy = c2;
        } else if (pure1y && pure2x) {
            a = m2[0];
            b = m1[1];
            cx = c2;
            cy = c1;
        }
        if (a >= 2 && b >= 2 && int_gcd(a, b) == 1) {
            if (!f_eq(cx, f_neg(cy))) fail("UnsupportedCurve", "monomial curve must be a unit times x^a - y^b");
            out.branch = monomial_branch(F, a, b);
            out.regular = false;
            // k(pi) = F(x)[y]/(pi~) with pi~ monic in y
            Field Fx = func_field(F, "x");
            UPoly minp(static_cast<size_t>(b) + 1, F_zero(Fx));
            // normalize: y^b = (cx/-cy) x^a = x^a given cx = -cy
            UPoly xa(static_cast<size_t>(a) + 1, F_zero(F));
            xa[static_cast<size_t>(a)] = F_one(F);
            minp[0] = f_neg(F_poly(Fx, xa));
            minp[static_cast<size_t>(b)] = F_one(Fx);
            auto desc = std::make_shared<FieldDesc>();
            desc->kind = FieldKind::SimpleExt;
            desc->base = Fx;
            desc->minpoly = minp;
            desc->gen = "y";
            desc->is_curve = true;
            desc->curve_relation = pi.str();
            out.kp = desc;
            return out;
        }
    }
    fail("UnsupportedCurve", "no supported parametrization for " + pi.str());
}

// embed an element of k(pi) into F(z) along the branch
inline FieldElem embed_to_branch(const CurvePrime& cp, const FieldElem& a) {
    const BranchRing& S = cp.branch;
    const Field& F = S.F;
    auto embed_ratfunc = [&](const FieldElem& r, const UPoly& sub) {
        UPoly n = up_compose(F, r.num, sub);
        UPoly d = up_compose(F, r.den, sub);
        return F_ratfunc(S.Fz, n, d);
    };
    if (a.f->kind == FieldKind::FuncField) {
        // k(pi) = F(x) or F(y)
        const UPoly& sub = a.f->gen == "x" ? S.xz : S.yz;
        return embed_ratfunc(a, sub);
    }
    if (a.f->kind == FieldKind::SimpleExt && a.f->base->kind == FieldKind::FuncField) {
        // sum over y-powers of functions of x
        FieldElem yb = F_poly(S.Fz, S.yz);
        FieldElem acc = F_zero(S.Fz);
        FieldElem pw = F_one(S.Fz);
        for (size_t i = 0; i < a.ext.size(); ++i) {
            acc = f_add(acc, f_mul(embed_ratfunc(a.ext[i], S.xz), pw));
            pw = f_mul(pw, yb);
        }
        return acc;
    }
    fail("BadInput", "cannot embed this residue-field element along the branch");
}

inline FieldElem embed_poly_to_branch(const CurvePrime& cp, const MultiPoly& p) {
    return F_poly(cp.branch.Fz, p.subst_upoly({cp.branch.xz, cp.branch.yz}));
}

// residue of a unit at the origin of the branch: constant term of the expansion
inline FieldElem branch_residue_at_origin(const BranchRing& S, const FieldElem& u) {
    if (z_valuation(S, u) != 0) fail("BadInput", "not a unit along the branch");
    auto c = z_expand(S, u, 0, 1);
    return c[0];
}

// image of a polynomial in the residue field k(pi)
inline FieldElem reduce_mod_prime(const CurvePrime& cp, const MultiPoly& p) {
    if (cp.kp->kind == FieldKind::FuncField) {
        // substitute the solved variable
        bool x_free = cp.kp->gen == "x";  // pi solved y = psi(x) (or pi = x - psi(y))
        size_t solved = x_free ? 1 : 0;
        // pi = u*(solved var) - psi(free var)
        MultiPoly c1 = cp.pi.coeff_of(solved, 1);
        MultiPoly c0 = cp.pi.coeff_of(solved, 0);
        FieldElem u = c1.constant_term();
        UPoly psi;
        for (int k = 0; k <= c0.degree_in(1 - solved); ++k)
            psi.push_back(f_div(f_neg(c0.coeff_of(1 - solved, k).constant_term()), u));
        up_trim(psi);
        FieldElem sub = F_poly(cp.kp, psi);
        FieldElem var = F_gen(cp.kp);
        std::vector<FieldElem> point(2, F_zero(cp.kp));
        point[solved] = sub;
        point[1 - solved] = var;
        // evaluate p at the point in k(pi)
        FieldElem r = F_zero(cp.kp);
        for (const auto& [m, c] : p.terms()) {
            FieldElem t = F_poly(cp.kp, up_const(c));
            for (size_t i = 0; i < m.size(); ++i)
                for (int e = 0; e < m[i]; ++e) t = f_mul(t, point[i]);
            r = f_add(r, t);
        }
        return r;
    }
    // monomial curve: kp = F(x)[y]/(y^b - x^a); reduce p in y over F(x)
    Field Fx = cp.kp->base;
    FieldElem xg = F_gen(Fx);
    FieldElem yg = F_gen(cp.kp);
    FieldElem r = F_zero(cp.kp);
    for (const auto& [m, c] : p.terms()) {
        FieldElem t = F_from_base(cp.kp, f_mul(F_poly(Fx, up_const(c)), f_pow(xg, Int(m[0]))));
        t = f_mul(t, f_pow(yg, Int(m[1])));
        r = f_add(r, t);
    }
    return r;
}

// the normalization O = F[z]_(z) shifted by z^shift, as an S-lattice
inline ZLattice normalization_lattice(const BranchRing& S, int shift = 0) {
    std::vector<FieldElem> gens;
    int upto = std::max(1, S.conductor);
    for (int j = 0; j < upto; ++j) gens.push_back(f_pow(F_gen(S.Fz), Int(shift + j)));
    return lattice_from_gens(S, gens);
}

// --- the complete-intersection residue (level 1 -> 2 at (x,y)) -----------------

// One form entry <[pi -> coeff]> with coeff given in k(pi); output is a
// (possibly longer) diagonal twisted class over F with symbol [x^y -> 1].
struct CIResidueOptions {
    int budget = 64;
    // force the lattice route even for regular quotients, and optionally seed
    // the saturation with a different starting lattice (test hook)
    bool force_lattice = false;
    std::vector<FieldElem> start_gens;  // empty: start at S itself
};

inline ResidueResult residue_at_origin(const PRing& R, const CurvePrime& cp, const FieldElem& coeff_kp,
                                       const CIResidueOptions& opt = {}) {
    const Field& F = R->K;
    TwistSymbol sym{{"x", "y"}, 1};
    if (f_is_zero(coeff_kp)) fail("NotUnimodular", "form coefficient vanishes");
    FieldElem c = embed_to_branch(cp, coeff_kp);
    const BranchRing& S = cp.branch;

    if (cp.regular && !opt.force_lattice) {
        // the worked DVR rule: c = alpha2^n r with alpha2 the transverse
        // coordinate; odd n contributes <(-1)^e [pi ^ alpha2 -> r(0)]>, e = 1
        bool use_x = !S.xz.empty() && up_z_valuation(S.xz) == 1;
        FieldElem alpha2 = use_x ? F_poly(S.Fz, S.xz) : F_poly(S.Fz, S.yz);
        int n = z_valuation(S, c);
        std::string wit = "dvr route: v(coeff) = " + std::to_string(n) + ", alpha2 = " +
                          std::string(use_x ? "x" : "y");
        std::vector<FieldElem> entries;
        if (n % 2 != 0) {
            FieldElem r = f_div(c, f_pow(alpha2, Int(n)));
            FieldElem r0 = branch_residue_at_origin(S, r);
            // [pi ^ alpha2 -> -r0] rewritten on [x ^ y -> 1]
            auto lin = cp.pi.linear_part();
            FieldElem delta = use_x ? f_neg(lin[1]) : lin[0];
            if (f_is_zero(delta)) fail("Internal", "transverse coordinate is not a uniformizer");
            entries.push_back(f_div(f_neg(r0), delta));
        }
        return {sym, DiagForm{F, entries, sym, false}, wit};
    }

    // lattice route through the residue determinant
    MultiPoly X = MultiPoly::variable(R, 0), Y = MultiPoly::variable(R, 1);
    auto sc = solve_coeffs(R, {cp.pi}, {X, Y});
    auto rd = residue_determinant(R, {cp.pi}, {X, Y}, sc.gamma, sc.xi);
    FieldElem dnum = embed_poly_to_branch(cp, rd.d.num);
    FieldElem dden = embed_poly_to_branch(cp, rd.d.den);
    if (f_is_zero(dden)) fail("Internal", "determinant denominator vanishes on the branch");
    FieldElem d = f_div(dnum, dden);

    ZLattice L0 = opt.start_gens.empty() ? normalization_lattice(S) : lattice_from_gens(S, opt.start_gens);
    auto sat = lattice_saturate(S, L0, c, opt.budget);
    auto reps = quotient_basis(sat.U, sat.Udual);
    std::string wit = "d = " + rd.d.str() + "; U = " + sat.U.str() + "; U^f = " + sat.Udual.str() +
                      "; dim U^f/U = " + std::to_string(reps.size());
    if (reps.empty()) return {sym, DiagForm{F, {}, sym, false}, wit};

    Mat G(F, reps.size(), reps.size());
    for (size_t i = 0; i < reps.size(); ++i)
        for (size_t j = 0; j < reps.size(); ++j)
            G(i, j) = transfer_T(S, d, f_mul(c, f_mul(reps[i], reps[j])));
    if (f_is_zero(mat_det(G))) fail("Internal", "induced form on U^f/U is singular");
    auto diag = diagonalize_gram(G, sym);
    diag.form.twist = sym;
    return {sym, diag.form, wit};
}

// full diagonal class at a prime: sum over the entries
inline ResidueResult residue_ci(const PRing& R, const CurvePrime& cp, const DiagForm& cls,
                                const CIResidueOptions& opt = {}) {
    TwistSymbol sym{{"x", "y"}, 1};
    std::vector<FieldElem> entries;
    std::string wit;
    for (const auto& coeff : cls.entries) {
        auto r = residue_at_origin(R, cp, coeff, opt);
        for (const auto& e : r.cls.entries) entries.push_back(e);
        wit += (wit.empty() ? "" : " | ") + r.witness;
    }
    return {sym, DiagForm{R->K, entries, sym, false}, wit};
}

// --- change of ideals ------------------------------------------------------------

// Rewrites the twist symbol of a class at I1 = (pi_1..pi_e) through a smaller
// complete intersection I2 = (alpha_1..alpha_e) with alpha_i = sum pi_j u_ji:
// [pi_1^...^pi_e -> 1] corresponds to det(u) * [alpha_1^...^alpha_e -> 1].
struct ChangeOfIdeals {
    TwistSymbol target;
    MultiPoly det_u;  // multiply coefficients by this (image in k(I1))
};

inline ChangeOfIdeals iota_change_of_ideals(const PRing& R, const std::vector<MultiPoly>& pis,
                                            const std::vector<MultiPoly>& alphas) {
    if (pis.size() != alphas.size()) fail("DimensionMismatch", "change of ideals needs equal lengths");
    size_t e = pis.size();
    std::vector<std::vector<MultiPoly>> u(e, std::vector<MultiPoly>(e, MultiPoly::zero(R)));
    for (size_t i = 0; i < e; ++i) {
        auto dv = poly_reduce(alphas[i], pis);
        if (!dv.remainder.is_zero())
            fail("MembershipFailed", alphas[i].str() + " is not inside the source ideal");
        for (size_t j = 0; j < e; ++j) u[j][i] = dv.quotients[j];
    }
    // det(u) by Laplace; e <= 2 at desk scale
    MultiPoly det = MultiPoly::one(R);
    if (e == 1) {
        det = u[0][0];
    } else if (e == 2) {
        det = u[0][0] * u[1][1] - u[0][1] * u[1][0];
    } else if (e > 2) {
        fail("UnsupportedRing", "change of ideals beyond codimension 2");
    }
    ChangeOfIdeals out;
    for (const auto& a : alphas) out.target.gens.push_back(a.str());
    out.target.sign = 1;
    out.det_u = det;
    return out;
}

}  // namespace gwc
