#pragma once

// Plane-curve branches z -> (x(z), y(z)) and exact lattice arithmetic inside
// F(z) over the one-dimensional local ring S = F[x(z), y(z)]_M. Elements are
// kept as exact rational functions; S-membership and lattice operations are
// decided through truncated expansions, with windows wide enough that the
// implicit z^hi-tails are provably inside every lattice involved.

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gwc/linalg.hpp"
#include "gwc/places.hpp"

namespace gwc {

inline UPoly up_compose(const Field& K, const UPoly& f, const UPoly& g) {
    UPoly r;
    for (size_t i = f.size(); i-- > 0;) {
        r = up_mul(K, r, g);
        r = up_add(K, r, up_const(f[i]));
    }
    return r;
}

// The local ring of a parametrized plane branch.
struct BranchRing {
    Field F;       // constant field
    Field Fz;      // F(z)
    UPoly xz, yz;  // the parametrization; at least one nonzero, valuations coprime
    std::vector<int> value_gens;  // valuations of the nonzero coordinates
    int conductor = 0;            // every integer >= conductor lies in the semigroup
    std::vector<bool> in_semigroup;  // membership table, indices 0..table_bound
    std::vector<FieldElem> mgens;    // generators of the maximal ideal, in F(z)

    bool semigroup_contains(int k) const {
        if (k < 0) return false;
        if (k >= static_cast<int>(in_semigroup.size())) return true;  // beyond the conductor
        return in_semigroup[static_cast<size_t>(k)];
    }
};

inline int up_z_valuation(const UPoly& p) {
    for (size_t i = 0; i < p.size(); ++i)
        if (!f_is_zero(p[i])) return static_cast<int>(i);
    fail("ZeroInput", "z-valuation of zero");
}

inline BranchRing make_branch(const Field& F, UPoly xz, UPoly yz) {
    up_trim(xz);
    up_trim(yz);
    if (xz.empty() && yz.empty()) fail("BadInput", "branch needs a nonconstant coordinate");
    for (const UPoly* p : {&xz, &yz})
        if (!p->empty() && !f_is_zero((*p)[0])) fail("BadInput", "branch must pass through the origin");
    BranchRing S;
    S.F = F;
    S.Fz = func_field(F, "z");
    S.xz = xz;
    S.yz = yz;
    for (const UPoly* p : {&xz, &yz})
        if (!p->empty()) S.value_gens.push_back(up_z_valuation(*p));
    int g = 0;
    for (int v : S.value_gens) g = static_cast<int>(int_gcd(g, v).get_si());
    if (g != 1) fail("UnsupportedCurve", "branch valuations are not coprime; not a rational branch");
    // Membership below is decided by semigroup support of the expansion. That
    // characterization is exact when the coordinates are pure monomials (the
    // completion is F[[z^a, z^b]]) or when some coordinate has valuation 1
    // (then S is the full discrete valuation ring F[z]_(z)). Other branches
    // need a normalization we do not model.
    bool monomial = true;
    for (const UPoly* p : {&xz, &yz}) {
        int nonzero = 0;
        for (const auto& c : *p)
            if (!f_is_zero(c)) ++nonzero;
        if (nonzero > 1) monomial = false;
    }
    bool has_unit_val = false;
    for (int v : S.value_gens)
        if (v == 1) has_unit_val = true;
    if (!monomial && !has_unit_val)
        fail("UnsupportedCurve", "branch is neither monomial nor smooth; supply a normalization");
    // semigroup sieve: closure of the generator valuations under addition
    int bound = 1;
    for (int v : S.value_gens) bound += v;
    bound = bound * bound + 2;
    std::vector<bool> tab(static_cast<size_t>(bound), false);
    tab[0] = true;
    for (int k = 1; k < bound; ++k)
        for (int v : S.value_gens)
            if (k - v >= 0 && tab[static_cast<size_t>(k - v)]) tab[static_cast<size_t>(k)] = true;
    int cond = 0;
    for (int k = bound - 1; k >= 0; --k)
        if (!tab[static_cast<size_t>(k)]) {
            cond = k + 1;
            break;
        }
    S.conductor = cond;
    tab.resize(static_cast<size_t>(cond + 1), true);
    S.in_semigroup = tab;
    if (!xz.empty()) S.mgens.push_back(F_poly(S.Fz, xz));
    if (!yz.empty()) S.mgens.push_back(F_poly(S.Fz, yz));
    return S;
}

// branch of the monomial curve x^a = y^b (a, b coprime): x = z^b, y = z^a
inline BranchRing monomial_branch(const Field& F, int a, int b) {
    UPoly xz(static_cast<size_t>(b) + 1, F_zero(F));
    xz[static_cast<size_t>(b)] = F_one(F);
    UPoly yz(static_cast<size_t>(a) + 1, F_zero(F));
    yz[static_cast<size_t>(a)] = F_one(F);
    return make_branch(F, xz, yz);
}

// --- expansions ---------------------------------------------------------------

// coefficients of z^k for k in [lo, hi) of an exact rational function
inline std::vector<FieldElem> z_expand(const BranchRing& S, const FieldElem& u, int lo, int hi) {
    const Field& F = S.F;
    if (hi <= lo) return {};
    std::vector<FieldElem> out(static_cast<size_t>(hi - lo), F_zero(F));
    if (f_is_zero(u)) return out;
    UPoly num = u.num, den = u.den;
    int v = up_z_valuation(num) - up_z_valuation(den);
    // strip powers of z
    UPoly n2(num.begin() + up_z_valuation(num), num.end());
    UPoly d2(den.begin() + up_z_valuation(den), den.end());
    // power series inversion of d2 (constant term nonzero) to enough terms
    int need = hi - v;
    if (need <= 0) return out;
    std::vector<FieldElem> inv(static_cast<size_t>(need), F_zero(F));
    FieldElem c0 = f_inv(d2[0]);
    inv[0] = c0;
    for (int k = 1; k < need; ++k) {
        FieldElem s = F_zero(F);
        for (int j = 1; j <= k; ++j) {
            if (j < static_cast<int>(d2.size()))
                s = f_add(s, f_mul(d2[static_cast<size_t>(j)], inv[static_cast<size_t>(k - j)]));
        }
        inv[static_cast<size_t>(k)] = f_neg(f_mul(c0, s));
    }
    for (int k = 0; k < need; ++k) {
        FieldElem coef = F_zero(F);
        for (int j = 0; j <= k; ++j)
            if (j < static_cast<int>(n2.size()))
                coef = f_add(coef, f_mul(n2[static_cast<size_t>(j)], inv[static_cast<size_t>(k - j)]));
        int exponent = v + k;
        if (exponent >= lo && exponent < hi) out[static_cast<size_t>(exponent - lo)] = coef;
    }
    return out;
}

inline int z_valuation(const BranchRing&, const FieldElem& u) {
    if (f_is_zero(u)) fail("ZeroInput", "valuation of zero");
    return up_z_valuation(u.num) - up_z_valuation(u.den);
}

// exact S-membership: nonnegative valuation and semigroup support below the
// conductor (the tail beyond the conductor is always inside S)
inline bool in_S(const BranchRing& S, const FieldElem& u) {
    if (f_is_zero(u)) return true;
    if (z_valuation(S, u) < 0) return false;
    auto coeffs = z_expand(S, u, 0, S.conductor);
    for (int k = 0; k < S.conductor; ++k)
        if (!S.semigroup_contains(k) && !f_is_zero(coeffs[static_cast<size_t>(k)])) return false;
    return true;
}

// --- lattices -------------------------------------------------------------------

// A fractional S-lattice in F(z): exact generators, plus a coordinate-window
// image used for membership, sums, and quotients. Invariant: z^hi O lies
// inside the lattice, where O = F[z]_(z) is the normalization.
struct ZLattice {
    const BranchRing* S = nullptr;
    std::vector<FieldElem> gens;  // exact elements of F(z)
    int lo = 0, hi = 0;
    Mat space;  // columns span the image in z^lo O / z^hi O (dim hi - lo)

    std::string str() const {
        std::string s = "lattice<";
        for (size_t i = 0; i < gens.size(); ++i) s += (i ? ", " : "") + f_str(gens[i]);
        return s + ">";
    }
};

namespace detail {

// span columns: one elimination, keep the original pivot columns
inline Mat column_span(const Field& F, const std::vector<std::vector<FieldElem>>& cols, size_t dim) {
    Mat m(F, dim, cols.size());
    for (size_t j = 0; j < cols.size(); ++j)
        for (size_t i = 0; i < dim; ++i) m(i, j) = cols[j][i];
    Mat red = m;
    row_reduce(red);
    std::vector<size_t> pivots;
    size_t r = 0;
    for (size_t col = 0; col < red.cols() && r < red.rows(); ++col)
        if (!f_is_zero(red(r, col))) {
            pivots.push_back(col);
            ++r;
        }
    Mat out(F, dim, pivots.size());
    for (size_t j = 0; j < pivots.size(); ++j)
        for (size_t i = 0; i < dim; ++i) out(i, j) = cols[pivots[j]][i];
    return out;
}

}  // namespace detail

// Build the lattice generated over S by the given elements, with a window
// [lo, hi) chosen so that z^hi O is inside it.
inline ZLattice lattice_from_gens(const BranchRing& S, std::vector<FieldElem> gens, int hi_extra = 0) {
    std::vector<FieldElem> nz;
    for (auto& g : gens)
        if (!f_is_zero(g)) nz.push_back(g);
    if (nz.empty()) fail("BadInput", "lattice needs a nonzero generator");
    int lo = z_valuation(S, nz[0]);
    for (const auto& g : nz) lo = std::min(lo, z_valuation(S, g));
    int hi = lo + S.conductor + hi_extra + 1;
    // z^hi O inside the span: hi >= conductor + min valuation suffices since
    // g*S contains g*z^c O
    ZLattice L;
    L.S = &S;
    L.gens = nz;
    L.lo = lo;
    L.hi = hi;
    size_t dim = static_cast<size_t>(hi - lo);
    std::vector<std::vector<FieldElem>> cols;
    for (const auto& g : nz) {
        int vg = z_valuation(S, g);
        for (int w = 0; w + vg < hi; ++w) {
            if (!S.semigroup_contains(w)) continue;
            // coordinates of g * z^w
            FieldElem gz = f_mul(g, f_pow(F_gen(S.Fz), Int(w)));
            cols.push_back(z_expand(S, gz, lo, hi));
        }
    }
    // the implicit tail: z^k for hi - ? .. always included; add unit vectors
    // for exponents >= lo + conductor + min-shift that the span may miss is
    // not needed: g*z^w with w beyond the window lands in z^hi O.
    L.space = detail::column_span(S.F, cols, dim);
    return L;
}

inline ZLattice lattice_rescale_window(const ZLattice& L, int lo, int hi) {
    if (lo > L.lo || hi < L.hi) {
        // shrinking is only sound if the window stays compatible; regenerate
        return lattice_from_gens(*L.S, L.gens, std::max(0, hi - (L.lo + L.S->conductor + 1)));
    }
    const BranchRing& S = *L.S;
    size_t dim = static_cast<size_t>(hi - lo);
    std::vector<std::vector<FieldElem>> cols;
    for (size_t j = 0; j < L.space.cols(); ++j) {
        std::vector<FieldElem> c(dim, F_zero(S.F));
        for (size_t i = 0; i < static_cast<size_t>(L.hi - L.lo); ++i)
            c[static_cast<size_t>(L.lo - lo) + i] = L.space(i, j);
        cols.push_back(c);
    }
    for (int k = L.hi; k < hi; ++k) {  // the tail block z^{L.hi} O, now visible
        std::vector<FieldElem> c(dim, F_zero(S.F));
        c[static_cast<size_t>(k - lo)] = F_one(S.F);
        cols.push_back(c);
    }
    ZLattice out = L;
    out.lo = lo;
    out.hi = hi;
    out.space = detail::column_span(S.F, cols, dim);
    return out;
}

inline bool lattice_contains(const ZLattice& L, const FieldElem& u) {
    if (f_is_zero(u)) return true;
    if (z_valuation(*L.S, u) < L.lo) return false;
    auto c = z_expand(*L.S, u, L.lo, L.hi);
    Mat b(L.S->F, static_cast<size_t>(L.hi - L.lo), 1);
    for (size_t i = 0; i < c.size(); ++i) b(i, 0) = c[i];
    return mat_solve(L.space, b).has_value();
}

inline bool lattice_subset(const ZLattice& A, const ZLattice& B) {
    for (const auto& g : A.gens)
        if (!lattice_contains(B, g)) return false;
    // tails: z^{A.hi} O subset of B needs A.hi >= B.lo and window check
    for (int k = A.hi; k < std::max(A.hi + 1, B.hi); ++k)
        if (!lattice_contains(B, f_pow(F_gen(A.S->Fz), Int(k)))) return false;
    return true;
}

inline ZLattice lattice_sum(const ZLattice& A, const ZLattice& B) {
    std::vector<FieldElem> gens = A.gens;
    for (const auto& g : B.gens) gens.push_back(g);
    return lattice_from_gens(*A.S, gens);
}

// product with the ideal generated by the given elements (e.g. powers of m)
inline ZLattice lattice_mul_ideal(const ZLattice& A, const std::vector<FieldElem>& ideal_gens) {
    std::vector<FieldElem> gens;
    for (const auto& a : A.gens)
        for (const auto& b : ideal_gens) gens.push_back(f_mul(a, b));
    return lattice_from_gens(*A.S, gens);
}

inline std::vector<FieldElem> ideal_power_gens(const BranchRing& S, int t) {
    std::vector<FieldElem> out = {F_one(S.Fz)};
    for (int i = 0; i < t; ++i) {
        std::vector<FieldElem> next;
        for (const auto& a : out)
            for (const auto& m : S.mgens) {
                FieldElem prod = f_mul(a, m);
                bool dup = false;
                for (const auto& x : next)
                    if (f_eq(x, prod)) {
                        dup = true;
                        break;
                    }
                if (!dup) next.push_back(prod);
            }
        out = std::move(next);
    }
    return out;
}

// intersection via the coordinate spaces on a common window
inline ZLattice lattice_intersect(const ZLattice& A0, const ZLattice& B0) {
    const BranchRing& S = *A0.S;
    int lo = std::min(A0.lo, B0.lo);
    int hi = std::max(A0.hi, B0.hi);
    ZLattice A = lattice_rescale_window(A0, lo, hi);
    ZLattice B = lattice_rescale_window(B0, lo, hi);
    size_t dim = static_cast<size_t>(hi - lo);
    // solve a*x = b*y: kernel of [A.space | -B.space]
    Mat stacked(S.F, dim, A.space.cols() + B.space.cols());
    for (size_t i = 0; i < dim; ++i) {
        for (size_t j = 0; j < A.space.cols(); ++j) stacked(i, j) = A.space(i, j);
        for (size_t j = 0; j < B.space.cols(); ++j)
            stacked(i, A.space.cols() + j) = f_neg(B.space(i, j));
    }
    Mat ker = mat_kernel(stacked);
    std::vector<std::vector<FieldElem>> cols;
    for (size_t k = 0; k < ker.cols(); ++k) {
        std::vector<FieldElem> c(dim, F_zero(S.F));
        for (size_t i = 0; i < dim; ++i) {
            FieldElem s = F_zero(S.F);
            for (size_t j = 0; j < A.space.cols(); ++j) s = f_add(s, f_mul(A.space(i, j), ker(j, k)));
            c[i] = s;
        }
        cols.push_back(c);
    }
    ZLattice out;
    out.S = &S;
    out.lo = lo;
    out.hi = hi;
    out.space = detail::column_span(S.F, cols, dim);
    // exact generators: Laurent-polynomial lifts of the space basis columns
    out.gens.clear();
    for (size_t j = 0; j < out.space.cols(); ++j) {
        UPoly num;
        int shift = std::max(0, -lo);
        num.assign(static_cast<size_t>(hi + shift), F_zero(S.F));
        for (size_t i = 0; i < dim; ++i) num[static_cast<size_t>(static_cast<int>(i) + lo + shift)] =
            out.space(i, j);
        up_trim(num);
        if (num.empty()) continue;
        UPoly den(static_cast<size_t>(shift) + 1, F_zero(S.F));
        den[static_cast<size_t>(shift)] = F_one(S.F);
        out.gens.push_back(F_ratfunc(S.Fz, num, den));
    }
    for (int k = hi; k <= hi + S.conductor; ++k) out.gens.push_back(f_pow(F_gen(S.Fz), Int(k)));
    return out;
}

// Dual lattice with respect to the pairing (u, v) -> c*u*v landing in S:
// L^f = { v : c * v * g in S for every generator g }.
inline ZLattice lattice_dual(const ZLattice& L, const FieldElem& c) {
    const BranchRing& S = *L.S;
    if (f_is_zero(c)) fail("NotUnimodular", "dual needs a nonzero form coefficient");
    int vc = z_valuation(S, c);
    int gv_min = z_valuation(S, L.gens[0]);
    for (const auto& g : L.gens) gv_min = std::min(gv_min, z_valuation(S, g));
    int lo = -gv_min - vc;          // v(u) >= -min v(c g_i)
    int hi = S.conductor - gv_min - vc + 1;  // z^hi O * (c g) inside z^cond O
    if (hi <= lo) hi = lo + 1;
    size_t dim = static_cast<size_t>(hi - lo);
    // constraints: for each generator g and each non-semigroup exponent k
    // (including negatives) of c*u*g below the conductor, coefficient = 0
    std::vector<std::vector<FieldElem>> rows;
    for (const auto& g : L.gens) {
        FieldElem cg = f_mul(c, g);
        int vcg = z_valuation(S, cg);
        // u has support [lo, hi); c*g*u has support from vcg+lo; constraints
        // apply to exponents < conductor
        auto cg_coeffs = z_expand(S, cg, vcg, S.conductor - lo + 1);
        for (int k = vcg + lo; k < S.conductor; ++k) {
            if (k >= 0 && S.semigroup_contains(k)) continue;
            // coefficient of z^k in sum_i u_i * cg_{k - (lo + i)}
            std::vector<FieldElem> row(dim, F_zero(S.F));
            bool nontrivial = false;
            for (size_t i = 0; i < dim; ++i) {
                int need = k - (lo + static_cast<int>(i));
                if (need < vcg) continue;
                size_t idx = static_cast<size_t>(need - vcg);
                if (idx >= cg_coeffs.size()) continue;
                row[i] = cg_coeffs[idx];
                if (!f_is_zero(row[i])) nontrivial = true;
            }
            if (nontrivial) rows.push_back(row);
        }
    }
    Mat sys(S.F, rows.size(), dim);
    for (size_t r = 0; r < rows.size(); ++r)
        for (size_t i = 0; i < dim; ++i) sys(r, i) = rows[r][i];
    Mat ker = mat_kernel(sys);

    ZLattice out;
    out.S = &S;
    out.lo = lo;
    out.hi = hi;
    size_t dim2 = dim;
    std::vector<std::vector<FieldElem>> cols;
    for (size_t k = 0; k < ker.cols(); ++k) {
        std::vector<FieldElem> cvec(dim2, F_zero(S.F));
        for (size_t i = 0; i < dim2; ++i) cvec[i] = ker(i, k);
        cols.push_back(cvec);
    }
    out.space = detail::column_span(S.F, cols, dim2);
    // exact generators: Laurent lifts + tail monomials
    for (size_t j = 0; j < out.space.cols(); ++j) {
        UPoly num;
        int shift = std::max(0, -lo);
        num.assign(static_cast<size_t>(hi + shift), F_zero(S.F));
        for (size_t i = 0; i < dim2; ++i)
            num[static_cast<size_t>(static_cast<int>(i) + lo + shift)] = out.space(i, j);
        up_trim(num);
        if (num.empty()) continue;
        UPoly den(static_cast<size_t>(shift) + 1, F_zero(S.F));
        den[static_cast<size_t>(shift)] = F_one(S.F);
        out.gens.push_back(F_ratfunc(S.Fz, num, den));
    }
    for (int k = hi; k <= hi + S.conductor; ++k) out.gens.push_back(f_pow(F_gen(S.Fz), Int(k)));
    if (out.gens.empty()) fail("Internal", "empty dual lattice");
    return out;
}

// Rebuild a lattice's generator list from its reduced coordinate space: the
// Laurent lifts of the space basis plus tail monomials generate the same
// S-module with far fewer elements.
inline ZLattice lattice_compact(const ZLattice& L) {
    const BranchRing& S = *L.S;
    ZLattice out = L;
    out.gens.clear();
    int lo = L.lo, hi = L.hi;
    size_t dim = static_cast<size_t>(hi - lo);
    for (size_t j = 0; j < L.space.cols(); ++j) {
        UPoly num;
        int shift = std::max(0, -lo);
        num.assign(static_cast<size_t>(hi + shift), F_zero(S.F));
        for (size_t i = 0; i < dim; ++i)
            num[static_cast<size_t>(static_cast<int>(i) + lo + shift)] = L.space(i, j);
        up_trim(num);
        if (num.empty()) continue;
        UPoly den(static_cast<size_t>(shift) + 1, F_zero(S.F));
        den[static_cast<size_t>(shift)] = F_one(S.F);
        out.gens.push_back(F_ratfunc(S.Fz, num, den));
    }
    for (int k = hi; k <= hi + S.conductor; ++k) out.gens.push_back(f_pow(F_gen(S.Fz), Int(k)));
    return out;
}

// Saturation: returns U with U^f m <= U <= U^f, by the intersection-and-climb
// iteration; every step is verified exactly.
struct SaturationResult {
    ZLattice U, Udual;
    int iterations = 0;
};

inline SaturationResult lattice_saturate(const BranchRing& S, ZLattice L, const FieldElem& c,
                                         int budget = 64) {
    SaturationResult out;
    for (int step = 0; step < budget; ++step) {
        if (L.gens.size() > L.space.cols() + static_cast<size_t>(S.conductor) + 2) L = lattice_compact(L);
        ZLattice Lf = lattice_dual(L, c);
        if (!lattice_subset(L, Lf)) {
            L = lattice_intersect(L, Lf);
            ++out.iterations;
            continue;
        }
        ZLattice Lfm = lattice_mul_ideal(Lf, S.mgens);
        if (lattice_subset(Lfm, L)) {
            out.U = L;
            out.Udual = Lf;
            return out;
        }
        // find minimal t >= 1 with Lf m^{t+1} <= L, then climb to L + Lf m^t
        int t = 1;
        while (t < budget) {
            ZLattice probe = lattice_mul_ideal(Lf, ideal_power_gens(S, t + 1));
            if (lattice_subset(probe, L)) break;
            ++t;
        }
        if (t >= budget) fail("IterationBudgetExceeded", "saturation climb did not stabilize");
        L = lattice_sum(L, lattice_mul_ideal(Lf, ideal_power_gens(S, t)));
        ++out.iterations;
    }
    fail("IterationBudgetExceeded", "lattice saturation exceeded the budget");
}

// Basis of U^f/U: columns completing U.space inside Udual.space, returned as
// exact Laurent-polynomial lifts.
inline std::vector<FieldElem> quotient_basis(const ZLattice& U, const ZLattice& Udual) {
    const BranchRing& S = *U.S;
    int lo = std::min(U.lo, Udual.lo);
    int hi = std::max(U.hi, Udual.hi);
    ZLattice A = lattice_rescale_window(U, lo, hi);
    ZLattice B = lattice_rescale_window(Udual, lo, hi);
    size_t dim = static_cast<size_t>(hi - lo);
    std::vector<FieldElem> reps;
    // one elimination over [A.space | B.space]: pivots landing in the B block
    // extend A's subspace inside B's
    size_t na = A.space.cols(), nb = B.space.cols();
    Mat aug(S.F, dim, na + nb);
    for (size_t j = 0; j < na; ++j)
        for (size_t i = 0; i < dim; ++i) aug(i, j) = A.space(i, j);
    for (size_t j = 0; j < nb; ++j)
        for (size_t i = 0; i < dim; ++i) aug(i, na + j) = B.space(i, j);
    Mat red = aug;
    row_reduce(red);
    size_t r = 0;
    for (size_t col = 0; col < red.cols() && r < red.rows(); ++col) {
        if (f_is_zero(red(r, col))) continue;
        if (col >= na) {
            UPoly num;
            int shift = std::max(0, -lo);
            num.assign(static_cast<size_t>(hi + shift), F_zero(S.F));
            for (size_t i = 0; i < dim; ++i)
                num[static_cast<size_t>(static_cast<int>(i) + lo + shift)] = B.space(i, col - na);
            up_trim(num);
            UPoly den(static_cast<size_t>(shift) + 1, F_zero(S.F));
            den[static_cast<size_t>(shift)] = F_one(S.F);
            reps.push_back(F_ratfunc(S.Fz, num, den));
        }
        ++r;
    }
    return reps;
}

// The transfer functional T on m~^{-1} = S~ + [alpha -> d] S: kills S, sends
// the generator d to 1. Input must lie in S + d S.
inline FieldElem transfer_T(const BranchRing& S, const FieldElem& d, const FieldElem& w) {
    const Field& F = S.F;
    if (f_is_zero(w)) return F_zero(F);
    int vd = z_valuation(S, d);
    int vw = z_valuation(S, w);
    int lo = std::min({0, vd, vw});
    int hi = S.conductor + 1;
    if (hi <= lo) hi = lo + 1;
    size_t dim = static_cast<size_t>(hi - lo);
    // columns: semigroup monomials z^k (k in semigroup, k < hi), then d
    std::vector<std::vector<FieldElem>> cols;
    for (int k = 0; k < hi; ++k) {
        if (!S.semigroup_contains(k)) continue;
        std::vector<FieldElem> c(dim, F_zero(F));
        c[static_cast<size_t>(k - lo)] = F_one(F);
        cols.push_back(c);
    }
    size_t scount = cols.size();
    cols.push_back(z_expand(S, d, lo, hi));
    Mat m(F, dim, cols.size());
    for (size_t j = 0; j < cols.size(); ++j)
        for (size_t i = 0; i < dim; ++i) m(i, j) = cols[j][i];
    auto wc = z_expand(S, w, lo, hi);
    Mat b(F, dim, 1);
    for (size_t i = 0; i < dim; ++i) b(i, 0) = wc[i];
    auto sol = mat_solve(m, b);
    if (!sol) fail("Internal", "element is outside S + dS");
    // uniqueness of the d-coordinate: d must be independent of the S-span
    Mat sonly(F, dim, scount);
    for (size_t j = 0; j < scount; ++j)
        for (size_t i = 0; i < dim; ++i) sonly(i, j) = cols[j][i];
    Mat saug(F, dim, scount + 1);
    for (size_t j = 0; j < scount; ++j)
        for (size_t i = 0; i < dim; ++i) saug(i, j) = cols[j][i];
    for (size_t i = 0; i < dim; ++i) saug(i, scount) = cols[scount][i];
    if (mat_rank(saug) == mat_rank(sonly)) fail("Internal", "transfer generator lies in S");
    return (*sol)(scount, 0);
}

}  // namespace gwc
