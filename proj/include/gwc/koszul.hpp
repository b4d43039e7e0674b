#pragma once

// Koszul complexes with exterior-algebra differentials, desk-scale homology
// probes, the top-Ext duality symbol, and the coefficient solving + residue
// determinant that drive the complete-intersection residue map.

#include <algorithm>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gwc/linalg.hpp"
#include "gwc/mpoly.hpp"
#include "gwc/witt.hpp"

namespace gwc {

// ordered index subsets of {0..n-1}, size k, lexicographic
inline std::vector<std::vector<int>> index_subsets(int n, int k) {
    std::vector<std::vector<int>> out;
    if (k < 0 || k > n) return out;
    std::vector<int> s(k);
    for (int i = 0; i < k; ++i) s[i] = i;
    while (true) {
        out.push_back(s);
        int i = k - 1;
        while (i >= 0 && s[i] == n - k + i) --i;
        if (i < 0) break;
        ++s[i];
        for (int j = i + 1; j < k; ++j) s[j] = s[j - 1] + 1;
    }
    return out;
}

struct KoszulComplex {
    PRing R;
    std::vector<MultiPoly> gens;
    // basis[k] = subsets indexing a basis of K_k = wedge^k R^n
    std::vector<std::vector<std::vector<int>>> basis;
    // d[k]: K_k -> K_{k-1}, entries over the polynomial ring,
    // shape basis[k-1].size() x basis[k].size()
    std::vector<std::vector<std::vector<MultiPoly>>> d;
};

// d(e_{j1<...<jk}) = sum_t (-1)^t g_{j_t} e_{subset minus j_t}
inline KoszulComplex koszul_complex(const PRing& R, const std::vector<MultiPoly>& gens) {
    if (gens.empty()) fail("BadInput", "koszul_complex needs generators");
    KoszulComplex K;
    K.R = R;
    K.gens = gens;
    int n = static_cast<int>(gens.size());
    for (int k = 0; k <= n; ++k) K.basis.push_back(index_subsets(n, k));
    K.d.resize(n + 1);
    for (int k = 1; k <= n; ++k) {
        const auto& src = K.basis[k];
        const auto& tgt = K.basis[k - 1];
        std::vector<std::vector<MultiPoly>> m(tgt.size(),
                                              std::vector<MultiPoly>(src.size(), MultiPoly::zero(R)));
        for (size_t j = 0; j < src.size(); ++j) {
            for (int t = 0; t < k; ++t) {
                std::vector<int> rest;
                for (int u = 0; u < k; ++u)
                    if (u != t) rest.push_back(src[j][u]);
                size_t i = std::lower_bound(tgt.begin(), tgt.end(), rest) - tgt.begin();
                MultiPoly term = gens[src[j][t]];
                if (t % 2 == 1) term = -term;
                m[i][j] = m[i][j] + term;
            }
        }
        K.d[k] = std::move(m);
    }
    return K;
}

inline bool koszul_d2_zero(const KoszulComplex& K) {
    for (size_t k = 2; k < K.d.size(); ++k) {
        const auto& a = K.d[k - 1];
        const auto& b = K.d[k];
        for (size_t i = 0; i < a.size(); ++i)
            for (size_t j = 0; j < b[0].size(); ++j) {
                MultiPoly s = MultiPoly::zero(K.R);
                for (size_t t = 0; t < b.size(); ++t) s = s + a[i][t] * b[t][j];
                if (!s.is_zero()) return false;
            }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Desk-scale homology probe: coefficients of bounded degree
// ---------------------------------------------------------------------------

namespace detail {

// Flatten a vector of polynomials (deg <= bound per entry) into field coords.
inline std::vector<FieldElem> flatten(const std::vector<MultiPoly>& v, const std::vector<Mono>& monos) {
    const Field& K = v[0].ring()->K;
    std::vector<FieldElem> out;
    for (const auto& p : v) {
        for (const auto& m : monos) {
            auto it = p.terms().find(m);
            out.push_back(it == p.terms().end() ? F_zero(K) : it->second);
        }
    }
    return out;
}

}  // namespace detail

// Witness that H^level(K) != 0 in coefficient degree <= deg_bound: an element
// of ker d_level, not in im d_{level+1}, returned as its components.
inline std::optional<std::vector<MultiPoly>> koszul_homology_witness(const KoszulComplex& Kz, int level,
                                                                     int deg_bound) {
    const PRing& R = Kz.R;
    const Field& F = R->K;
    if (level < 1 || level >= static_cast<int>(Kz.basis.size())) fail("BadInput", "level out of range");
    size_t rank = Kz.basis[level].size();
    int gdeg = 0;
    for (const auto& g : Kz.gens) gdeg = std::max(gdeg, g.total_degree());
    std::vector<Mono> monos = monomials_upto(R->vars.size(), deg_bound);
    std::vector<Mono> big_monos = monomials_upto(R->vars.size(), deg_bound + gdeg);

    // kernel of d_level on coordinates of degree <= deg_bound
    const auto& dmat = Kz.d[level];
    size_t tgt_rank = Kz.basis[level - 1].size();
    Mat sys(F, tgt_rank * big_monos.size(), rank * monos.size());
    for (size_t j = 0; j < rank; ++j)
        for (size_t mi = 0; mi < monos.size(); ++mi) {
            std::vector<MultiPoly> img(tgt_rank, MultiPoly::zero(R));
            for (size_t i = 0; i < tgt_rank; ++i)
                img[i] = dmat[i][j] * MultiPoly::monomial(R, monos[mi], F_one(F));
            auto coords = detail::flatten(img, big_monos);
            for (size_t r = 0; r < coords.size(); ++r) sys(r, j * monos.size() + mi) = coords[r];
        }
    Mat ker = mat_kernel(sys);
    if (ker.cols() == 0) return std::nullopt;

    auto unflatten = [&](size_t kc) {
        std::vector<MultiPoly> v(rank, MultiPoly::zero(R));
        for (size_t j = 0; j < rank; ++j)
            for (size_t mi = 0; mi < monos.size(); ++mi) {
                const FieldElem& c = ker(j * monos.size() + mi, kc);
                if (!f_is_zero(c)) v[j].add_term(monos[mi], c);
            }
        return v;
    };

    // image vectors of d_{level+1} on monomial multiples, in the big space
    std::vector<std::vector<FieldElem>> img_coords;
    if (level + 1 < static_cast<int>(Kz.d.size())) {
        const auto& up = Kz.d[level + 1];
        size_t src_rank = Kz.basis[level + 1].size();
        for (size_t j = 0; j < src_rank; ++j)
            for (const auto& m : monos) {
                std::vector<MultiPoly> img(rank, MultiPoly::zero(R));
                for (size_t i = 0; i < rank; ++i) img[i] = up[i][j] * MultiPoly::monomial(R, m, F_one(F));
                img_coords.push_back(detail::flatten(img, big_monos));
            }
    }
    size_t dim = rank * big_monos.size();
    Mat img_mat(F, dim, img_coords.size());
    for (size_t j = 0; j < img_coords.size(); ++j)
        for (size_t i = 0; i < dim; ++i) img_mat(i, j) = img_coords[j][i];
    size_t img_rank = mat_rank(img_mat);
    for (size_t kc = 0; kc < ker.cols(); ++kc) {
        auto v = unflatten(kc);
        auto vc = detail::flatten(v, big_monos);
        Mat aug(F, dim, img_coords.size() + 1);
        for (size_t j = 0; j < img_coords.size(); ++j)
            for (size_t i = 0; i < dim; ++i) aug(i, j) = img_coords[j][i];
        for (size_t i = 0; i < dim; ++i) aug(i, img_coords.size()) = vc[i];
        if (mat_rank(aug) > img_rank) return v;
    }
    return std::nullopt;
}

// Regular-sequence verdict: a homology witness in degree <= bound disproves
// regularity; absence of one up to the bound plus generic exactness is the
// desk-scale acceptance (callers may pass trusted=true to skip).
struct RegSeqCheck {
    bool regular;
    std::string detail;
    std::optional<std::vector<MultiPoly>> witness;  // element of ker d_1 not in im d_2
};

inline RegSeqCheck check_regular_sequence(const PRing& R, const std::vector<MultiPoly>& gens,
                                          int deg_bound = 4, bool trusted = false) {
    for (const auto& g : gens)
        if (g.is_zero()) return {false, "zero generator", std::nullopt};
    if (trusted) return {true, "trusted flag", std::nullopt};
    // unit ideal: 1 in (gens) makes the sequence trivially regular at desk scale
    KoszulComplex K = koszul_complex(R, gens);
    auto w = koszul_homology_witness(K, 1, deg_bound);
    if (w) return {false, "H^1 witness of degree <= " + std::to_string(deg_bound), w};
    return {true, "no H^1 witness up to degree " + std::to_string(deg_bound), std::nullopt};
}

// Top-Ext duality: for a regular sequence g_1..g_n, the
// module Ext^n(R/a, R) is free of rank one on the symbol [g_1^...^g_n -> 1].
inline TwistSymbol ext_top_dual(const PRing& R, const std::vector<MultiPoly>& gens, bool trusted = false) {
    auto chk = check_regular_sequence(R, gens, 4, trusted);
    if (!chk.regular) fail("NotRegularSequence", chk.detail);
    TwistSymbol t;
    for (const auto& g : gens) t.gens.push_back(g.str());
    t.sign = 1;
    return t;
}

// ---------------------------------------------------------------------------
// Coefficients for the residue determinant
// ---------------------------------------------------------------------------

// An element of the localization R C^{-1}, stored as num/den with den in C.
struct LocalizedElem {
    MultiPoly num, den;

    std::string str() const {
        if (den.term_count() == 1 && mono_deg(den.lead_mono()) == 0 && f_eq(den.lead_coeff(), F_one(den.ring()->K)))
            return num.str();
        std::string n = num.str(), d = den.str();
        bool np = n.find_first_of("+ ") != std::string::npos;
        bool dp = d.find_first_of("+- *^") != std::string::npos;
        return (np ? "(" + n + ")" : n) + "/" + (dp ? "(" + d + ")" : d);
    }
};

struct SolveCoeffsResult {
    std::vector<std::vector<MultiPoly>> gamma;  // gamma[j][i]: sum_j beta_j gamma_ji = alpha_i
    std::vector<LocalizedElem> xi;              // sum_j xi_j beta_j = 1
    MultiPoly xi_den;                           // common denominator, regular on R/(alphas)
};

// gamma by multivariate division, xi by searching small multipliers m with
// m in C and m in (betas).
inline SolveCoeffsResult solve_coeffs(const PRing& R, const std::vector<MultiPoly>& alphas,
                                      const std::vector<MultiPoly>& betas, int deg_budget = 6) {
    SolveCoeffsResult out;
    size_t e1 = betas.size();
    for (const auto& a : alphas) {
        auto dv = poly_reduce(a, betas);
        if (!dv.remainder.is_zero())
            fail("MembershipFailed", "generator " + a.str() + " not found inside the target ideal");
        // store column
        if (out.gamma.empty()) out.gamma.assign(e1, {});
        for (size_t j = 0; j < e1; ++j) out.gamma[j].push_back(dv.quotients[j]);
    }
    if (out.gamma.empty()) out.gamma.assign(e1, {});

    // regularity probe on R/(alphas): desk scale supports at most one alpha
    auto regular_mod_I = [&](const MultiPoly& m) {
        if (alphas.empty()) return !m.is_zero();
        if (alphas.size() == 1) {
            auto dv = poly_reduce(m, alphas);
            return !dv.remainder.is_zero();  // complete for a single divisor
        }
        fail("UnitSolveFailed", "non-zerodivisor probe supports at most one alpha at desk scale");
    };

    // candidates: monomials by increasing degree, then the betas themselves
    std::vector<MultiPoly> candidates;
    auto monos = monomials_upto(R->vars.size(), deg_budget);
    std::sort(monos.begin(), monos.end(), [](const Mono& a, const Mono& b) {
        if (mono_deg(a) != mono_deg(b)) return mono_deg(a) < mono_deg(b);
        return a > b;  // x before y, matching the worked examples
    });
    for (const auto& m : monos) {
        if (mono_deg(m) == 0) continue;
        candidates.push_back(MultiPoly::monomial(R, m, F_one(R->K)));
    }
    for (const auto& b : betas) candidates.push_back(b);

    for (const auto& m : candidates) {
        if (!regular_mod_I(m)) continue;
        auto dv = poly_reduce(m, betas);
        if (!dv.remainder.is_zero()) continue;
        out.xi_den = m;
        for (size_t j = 0; j < e1; ++j) out.xi.push_back({dv.quotients[j], m});
        return out;
    }
    fail("UnitSolveFailed", "no small multiplier found; supply a certificate");
}

inline std::string join_gens(const std::vector<std::string>& gs) {
    std::string s;
    for (const auto& g : gs) s += (s.empty() ? "" : "^") + g;
    return s.empty() ? "()" : s;
}

// The data reported by the residue determinant: the generator of the dual of
// the maximal ideal and where the transfer sends it.
struct ResidueDeterminant {
    TwistSymbol source;      // [alpha_1^...^alpha_e -> 1]
    LocalizedElem d;         // det [xi | gamma]
    TwistSymbol target;      // [beta_1^...^beta_{e+1} -> 1]
    std::string description;
};

inline ResidueDeterminant residue_determinant(const PRing& R, const std::vector<MultiPoly>& alphas,
                                              const std::vector<MultiPoly>& betas,
                                              const std::vector<std::vector<MultiPoly>>& gamma,
                                              const std::vector<LocalizedElem>& xi) {
    size_t n = betas.size();
    if (gamma.size() != n || xi.size() != n || alphas.size() + 1 != n)
        fail("DimensionMismatch", "residue_determinant expects an (e+1) x (e+1) system");
    for (const auto& col : gamma)
        if (col.size() != alphas.size()) fail("DimensionMismatch", "gamma column length");
    // all xi share one denominator by construction; factor it out of column 0
    MultiPoly den = xi[0].den;
    for (const auto& x : xi)
        if (!x.den.equals(den)) fail("DimensionMismatch", "xi entries must share a denominator");

    // determinant of the integer-polynomial matrix [xi_num | gamma], over R
    size_t N = n;
    std::vector<std::vector<MultiPoly>> m(N, std::vector<MultiPoly>(N, MultiPoly::zero(R)));
    for (size_t j = 0; j < N; ++j) m[j][0] = xi[j].num;
    for (size_t j = 0; j < N; ++j)
        for (size_t i = 0; i + 1 < N; ++i) m[j][i + 1] = gamma[j][i];
    // Laplace expansion; N <= 3 at desk scale
    std::function<MultiPoly(std::vector<std::vector<MultiPoly>>&)> det =
        [&](std::vector<std::vector<MultiPoly>>& a) -> MultiPoly {
        size_t k = a.size();
        if (k == 1) return a[0][0];
        MultiPoly s = MultiPoly::zero(R);
        for (size_t r = 0; r < k; ++r) {
            if (a[r][0].is_zero()) continue;
            std::vector<std::vector<MultiPoly>> sub;
            for (size_t rr = 0; rr < k; ++rr) {
                if (rr == r) continue;
                sub.push_back(std::vector<MultiPoly>(a[rr].begin() + 1, a[rr].end()));
            }
            MultiPoly term = a[r][0] * det(sub);
            if (r % 2 == 1) term = -term;
            s = s + term;
        }
        return s;
    };
    MultiPoly numerator = det(m);

    ResidueDeterminant out;
    for (const auto& a : alphas) out.source.gens.push_back(a.str());
    for (const auto& b : betas) out.target.gens.push_back(b.str());
    // cancel the denominator when the division is exact
    if (!numerator.is_zero()) {
        auto dv = poly_reduce(numerator, {den});
        if (dv.remainder.is_zero()) {
            out.d = {dv.quotients[0], MultiPoly::one(R)};
        } else {
            out.d = {numerator, den};
        }
    } else {
        out.d = {numerator, MultiPoly::one(R)};
    }
    out.description = "dual generated over S by [" + join_gens(out.source.gens) + " -> " + out.d.str() +
                      "]; transfer kills S~ and sends it to [" + join_gens(out.target.gens) + " -> 1]";
    return out;
}

}  // namespace gwc
