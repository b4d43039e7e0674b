#pragma once

// Finite-abelian-group linear algebra: Smith normal form over Z, group
// presentations, maps between presented groups, cohomology of cochain
// complexes, and the executable grid lemma.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gwc/ints.hpp"

namespace gwc {

class IntMat {
public:
    IntMat() : r_(0), c_(0) {}
    IntMat(size_t r, size_t c) : r_(r), c_(c), a_(r * c, Int(0)) {}

    static IntMat identity(size_t n) {
        IntMat m(n, n);
        for (size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    size_t rows() const { return r_; }
    size_t cols() const { return c_; }

    Int& operator()(size_t i, size_t j) { return a_[i * c_ + j]; }
    const Int& operator()(size_t i, size_t j) const { return a_[i * c_ + j]; }

    bool operator==(const IntMat& o) const { return r_ == o.r_ && c_ == o.c_ && a_ == o.a_; }

    IntMat operator*(const IntMat& o) const {
        if (c_ != o.r_) fail("DimensionMismatch", "matrix product");
        IntMat p(r_, o.c_);
        for (size_t i = 0; i < r_; ++i)
            for (size_t k = 0; k < c_; ++k) {
                const Int& x = (*this)(i, k);
                if (x == 0) continue;
                for (size_t j = 0; j < o.c_; ++j) p(i, j) += x * o(k, j);
            }
        return p;
    }

    IntMat hcat(const IntMat& o) const {
        if (o.r_ != r_ && o.c_ != 0 && r_ != 0) fail("DimensionMismatch", "hcat");
        size_t rr = std::max(r_, o.r_);
        IntMat m(rr, c_ + o.c_);
        for (size_t i = 0; i < r_; ++i)
            for (size_t j = 0; j < c_; ++j) m(i, j) = (*this)(i, j);
        for (size_t i = 0; i < o.r_; ++i)
            for (size_t j = 0; j < o.c_; ++j) m(i, c_ + j) = o(i, j);
        return m;
    }

    IntMat col(size_t j) const {
        IntMat m(r_, 1);
        for (size_t i = 0; i < r_; ++i) m(i, 0) = (*this)(i, j);
        return m;
    }

    bool is_zero() const {
        for (const auto& x : a_)
            if (x != 0) return false;
        return true;
    }

    std::string str() const {
        std::string s = "[";
        for (size_t i = 0; i < r_; ++i) {
            s += i ? "; " : "";
            for (size_t j = 0; j < c_; ++j) s += (j ? "," : "") + (*this)(i, j).get_str();
        }
        return s + "]";
    }

private:
    size_t r_, c_;
    std::vector<Int> a_;
};

struct SnfResult {
    IntMat U, D, V;  // U*M*V = D, U and V unimodular, d1 | d2 | ...
};

// Smith normal form. Pivoting by least absolute value keeps entries tame.
inline SnfResult smith_normal_form(const IntMat& m) {
    size_t r = m.rows(), c = m.cols();
    SnfResult res{IntMat::identity(r), m, IntMat::identity(c)};
    IntMat& D = res.D;
    IntMat& U = res.U;
    IntMat& V = res.V;

    auto row_op = [&](size_t i, size_t j, const Int& q) {  // row_i -= q*row_j
        for (size_t k = 0; k < c; ++k) D(i, k) -= q * D(j, k);
        for (size_t k = 0; k < r; ++k) U(i, k) -= q * U(j, k);
    };
    auto col_op = [&](size_t i, size_t j, const Int& q) {  // col_i -= q*col_j
        for (size_t k = 0; k < r; ++k) D(k, i) -= q * D(k, j);
        for (size_t k = 0; k < c; ++k) V(k, i) -= q * V(k, j);
    };
    auto row_swap = [&](size_t i, size_t j) {
        for (size_t k = 0; k < c; ++k) std::swap(D(i, k), D(j, k));
        for (size_t k = 0; k < r; ++k) std::swap(U(i, k), U(j, k));
    };
    auto col_swap = [&](size_t i, size_t j) {
        for (size_t k = 0; k < r; ++k) std::swap(D(k, i), D(k, j));
        for (size_t k = 0; k < c; ++k) std::swap(V(k, i), V(k, j));
    };

    size_t t = 0;
    while (t < r && t < c) {
        // least |entry| != 0 in the lower-right block
        size_t pi = t, pj = t;
        Int best = 0;
        for (size_t i = t; i < r; ++i)
            for (size_t j = t; j < c; ++j) {
                if (D(i, j) == 0) continue;
                Int a = abs(D(i, j));
                if (best == 0 || a < best) {
                    best = a;
                    pi = i;
                    pj = j;
                }
            }
        if (best == 0) break;
        row_swap(t, pi);
        col_swap(t, pj);

        bool clean = true;
        for (size_t i = t + 1; i < r; ++i) {
            if (D(i, t) == 0) continue;
            Int q = D(i, t) / D(t, t);
            if (q != 0) row_op(i, t, q);
            if (D(i, t) != 0) clean = false;
        }
        for (size_t j = t + 1; j < c; ++j) {
            if (D(t, j) == 0) continue;
            Int q = D(t, j) / D(t, t);
            if (q != 0) col_op(j, t, q);
            if (D(t, j) != 0) clean = false;
        }
        if (!clean) continue;  // smaller pivot appeared; redo this step

        // pivot must divide everything below-right, else fold a witness in
        bool divides = true;
        for (size_t i = t + 1; i < r && divides; ++i)
            for (size_t j = t + 1; j < c && divides; ++j)
                if (int_mod(D(i, j), abs(D(t, t))) != 0) {
                    row_op(t, i, Int(-1));  // row_t += row_i
                    divides = false;
                }
        if (!divides) continue;
        ++t;
    }
    for (size_t i = 0; i < t; ++i)
        if (D(i, i) < 0) {
            for (size_t k = 0; k < c; ++k) D(i, k) = -D(i, k);
            for (size_t k = 0; k < r; ++k) U(i, k) = -U(i, k);
        }
    return res;
}

// Basis of the integer kernel of m, as columns.
inline IntMat int_kernel(const IntMat& m) {
    SnfResult s = smith_normal_form(m);
    size_t rank = 0;
    size_t lim = std::min(m.rows(), m.cols());
    for (size_t i = 0; i < lim; ++i)
        if (s.D(i, i) != 0) ++rank;
    IntMat k(m.cols(), m.cols() - rank);
    for (size_t j = rank; j < m.cols(); ++j)
        for (size_t i = 0; i < m.cols(); ++i) k(i, j - rank) = s.V(i, j);
    return k;
}

// One solution x of m*x = b, if any.
inline std::optional<IntMat> int_solve(const IntMat& m, const IntMat& b) {
    SnfResult s = smith_normal_form(m);
    IntMat ub = s.U * b;
    IntMat y(m.cols(), b.cols());
    size_t lim = std::min(m.rows(), m.cols());
    for (size_t j = 0; j < b.cols(); ++j) {
        for (size_t i = 0; i < m.rows(); ++i) {
            Int d = (i < lim) ? s.D(i, i) : Int(0);
            if (d == 0) {
                if (ub(i, j) != 0) return std::nullopt;
            } else {
                if (int_mod(ub(i, j), d) != 0) return std::nullopt;
                if (i < m.cols()) y(i, j) = ub(i, j) / d;
            }
        }
    }
    return s.V * y;
}

// Z^rank modulo the column span of rel.
struct FinAbPresentation {
    size_t rank = 0;
    IntMat rel;  // rank rows

    FinAbPresentation() = default;
    FinAbPresentation(size_t n, IntMat r) : rank(n), rel(std::move(r)) {
        if (rel.rows() != rank) fail("DimensionMismatch", "presentation relations");
    }
    static FinAbPresentation free_group(size_t n) { return {n, IntMat(n, 0)}; }
    static FinAbPresentation cyclic(const Int& n) {
        IntMat r(1, 1);
        r(0, 0) = n;
        return {1, r};
    }
    static FinAbPresentation zero() { return free_group(0); }

    // Invariant factors > 1, then one 0 per free rank.
    std::vector<Int> invariant_factors() const {
        SnfResult s = smith_normal_form(rel);
        std::vector<Int> inv;
        size_t lim = std::min(rel.rows(), rel.cols());
        size_t nonfree = 0;
        for (size_t i = 0; i < lim; ++i)
            if (s.D(i, i) != 0) {
                ++nonfree;
                if (s.D(i, i) != 1) inv.push_back(s.D(i, i));
            }
        for (size_t i = nonfree; i < rank; ++i) inv.push_back(0);
        return inv;
    }

    bool is_trivial() const { return invariant_factors().empty(); }

    // Group order; 0 if infinite.
    Int order() const {
        Int n = 1;
        for (const auto& d : invariant_factors()) {
            if (d == 0) return 0;
            n *= d;
        }
        return n;
    }

    bool contains_in_image(const IntMat& vecs) const {  // vecs subset of rel-lattice?
        if (vecs.cols() == 0) return true;
        return int_solve(rel, vecs).has_value();
    }

    std::string str() const {
        auto inv = invariant_factors();
        if (inv.empty()) return "0";
        std::string s;
        for (auto& d : inv) s += (s.empty() ? "" : " x ") + (d == 0 ? std::string("Z") : "Z/" + d.get_str());
        return s;
    }
};

// A homomorphism between presented groups, given on ambient lattices.
struct FinAbMap {
    FinAbPresentation src, tgt;
    IntMat mat;  // tgt.rank x src.rank

    FinAbMap() = default;
    FinAbMap(FinAbPresentation s, FinAbPresentation t, IntMat m)
        : src(std::move(s)), tgt(std::move(t)), mat(std::move(m)) {
        if (mat.rows() != tgt.rank || mat.cols() != src.rank)
            fail("DimensionMismatch", "FinAbMap matrix shape");
        if (!tgt.contains_in_image(mat * src.rel))
            fail("NotCompatible", "matrix does not descend to the quotients");
    }

    static FinAbMap zero(FinAbPresentation s, FinAbPresentation t) {
        IntMat m(t.rank, s.rank);
        return {std::move(s), std::move(t), std::move(m)};
    }

    bool is_zero_map() const { return tgt.contains_in_image(mat); }
};

inline FinAbMap compose(const FinAbMap& g, const FinAbMap& f) {  // g after f
    return {f.src, g.tgt, g.mat * f.mat};
}

// ker(d_i)/im(d_{i-1}) for a cochain complex ... -> C_i -> C_{i+1} -> ...
// maps[k] : C_k -> C_{k+1}; index i refers to maps positions, with the
// convention that a missing map on either side is the zero map.
inline FinAbPresentation cohomology_at(const std::vector<FinAbMap>& maps, size_t i) {
    if (maps.empty()) fail("BadInput", "empty complex");
    if (i >= maps.size()) fail("BadInput", "cohomology index out of range");
    for (size_t k = 0; k + 1 < maps.size(); ++k) {
        if (!compose(maps[k + 1], maps[k]).is_zero_map()) fail("NotAComplex", "d∘d != 0 at " + std::to_string(k));
    }
    const FinAbMap& d = maps[i];

    // K = { x : d.mat*x in im(tgt.rel) }, always contains im(src.rel).
    IntMat stacked = d.mat.hcat(d.tgt.rel);
    IntMat ker = int_kernel(stacked);
    IntMat gens(d.src.rank, ker.cols());
    for (size_t j = 0; j < ker.cols(); ++j)
        for (size_t i2 = 0; i2 < d.src.rank; ++i2) gens(i2, j) = ker(i2, j);

    // Subgroup to kill: im(previous map) + im(src.rel).
    IntMat low = (i == 0) ? d.src.rel : maps[i - 1].mat.hcat(d.src.rel);

    // Express low columns in the gens; solvable because low lands in K.
    if (gens.cols() == 0) {
        return FinAbPresentation::zero();
    }
    auto expr = int_solve(gens, low);
    if (!expr) fail("Internal", "subgroup not inside kernel lattice");
    // gens may be a dependent generating set; kill its relations too.
    return {gens.cols(), expr->hcat(int_kernel(gens))};
}

inline bool complex_exact_at(const std::vector<FinAbMap>& maps, size_t i) {
    return cohomology_at(maps, i).is_trivial();
}

// ---------------------------------------------------------------------------
// Grid lemma
// ---------------------------------------------------------------------------

// A finite window of a commuting double cochain complex. Positions outside
// the stored window are zero. h maps (i,j) -> (i+1,j), v maps (i,j) -> (i,j+1).
struct DoubleComplex {
    int i_min = 0, i_max = -1, j_min = 0, j_max = -1;
    std::map<std::pair<int, int>, FinAbPresentation> cells;
    std::map<std::pair<int, int>, IntMat> hmat, vmat;

    const FinAbPresentation& at(int i, int j) const {
        static const FinAbPresentation zero = FinAbPresentation::zero();
        auto it = cells.find({i, j});
        return it == cells.end() ? zero : it->second;
    }

    FinAbMap hmap(int i, int j) const {
        const auto& s = at(i, j);
        const auto& t = at(i + 1, j);
        auto it = hmat.find({i, j});
        if (it == hmat.end()) return FinAbMap::zero(s, t);
        return {s, t, it->second};
    }
    FinAbMap vmap(int i, int j) const {
        const auto& s = at(i, j);
        const auto& t = at(i, j + 1);
        auto it = vmat.find({i, j});
        if (it == vmat.end()) return FinAbMap::zero(s, t);
        return {s, t, it->second};
    }

    std::vector<FinAbMap> row(int j, int i_lo, int i_hi) const {  // maps A_{i,j} -> A_{i+1,j}
        std::vector<FinAbMap> ms;
        for (int i = i_lo; i < i_hi; ++i) ms.push_back(hmap(i, j));
        return ms;
    }
    std::vector<FinAbMap> column(int i, int j_lo, int j_hi) const {
        std::vector<FinAbMap> ms;
        for (int j = j_lo; j < j_hi; ++j) ms.push_back(vmap(i, j));
        return ms;
    }
};

struct GridVerdict {
    bool hypotheses_ok = false;
    bool exact_at_origin = false;
    std::string failure;  // names the violated hypothesis when !hypotheses_ok
    FinAbPresentation cohomology_at_origin;
};

// Hypotheses, for s,t >= 1:
//   (1) A_{t,-t} = 0 and A_{-s,s} = 0;
//   (2) rows exact at A_{i,-i} for -s < i < t;
//   (3) columns exact at A_{1,0}, A_{2,-1}, ..., A_{t,1-t}
//       and at A_{-1,0}, A_{-2,1}, ..., A_{-s,s-1}.
// Conclusion (checked independently): the 0-column is exact at A_{0,0}.
inline GridVerdict grid_check(const DoubleComplex& dc, int s, int t) {
    GridVerdict out;
    if (s < 1 || t < 1) fail("BadInput", "grid_check needs s,t >= 1");

    int ilo = dc.i_min - 2, ihi = dc.i_max + 2;
    int jlo = dc.j_min - 2, jhi = dc.j_max + 2;

    // double-complex axioms
    for (int i = ilo; i < ihi; ++i)
        for (int j = jlo; j < jhi; ++j) {
            if (!compose(dc.hmap(i + 1, j), dc.hmap(i, j)).is_zero_map()) {
                out.failure = "NotADoubleComplex: h∘h != 0 at (" + std::to_string(i) + "," + std::to_string(j) + ")";
                return out;
            }
            if (!compose(dc.vmap(i, j + 1), dc.vmap(i, j)).is_zero_map()) {
                out.failure = "NotADoubleComplex: v∘v != 0 at (" + std::to_string(i) + "," + std::to_string(j) + ")";
                return out;
            }
            FinAbMap a = compose(dc.vmap(i + 1, j), dc.hmap(i, j));
            FinAbMap b = compose(dc.hmap(i, j + 1), dc.vmap(i, j));
            IntMat diff = a.mat;
            for (size_t r = 0; r < diff.rows(); ++r)
                for (size_t c = 0; c < diff.cols(); ++c) diff(r, c) -= b.mat(r, c);
            if (!a.tgt.contains_in_image(diff)) {
                out.failure = "NotADoubleComplex: squares do not commute at (" + std::to_string(i) + "," +
                              std::to_string(j) + ")";
                return out;
            }
        }

    // (1)
    if (!dc.at(t, -t).is_trivial()) {
        out.failure = "HypothesisViolated: corner A_{t,-t} nonzero";
        return out;
    }
    if (!dc.at(-s, s).is_trivial()) {
        out.failure = "HypothesisViolated: corner A_{-s,s} nonzero";
        return out;
    }
    // (2)
    for (int i = -s + 1; i < t; ++i) {
        auto ms = dc.row(-i, i - 1, i + 1);  // maps into and out of A_{i,-i}
        if (!complex_exact_at(ms, 1)) {
            // ms[0]: A_{i-1,-i} -> A_{i,-i}, ms[1]: A_{i,-i} -> A_{i+1,-i}
            out.failure = "HypothesisViolated: row not exact at A_{" + std::to_string(i) + "," +
                          std::to_string(-i) + "}";
            return out;
        }
    }
    // (3)
    auto col_exact = [&](int i, int j) {
        auto ms = dc.column(i, j - 1, j + 1);
        return complex_exact_at(ms, 1);
    };
    for (int n = 1; n <= t; ++n)
        if (!col_exact(n, 1 - n)) {
            out.failure = "HypothesisViolated: column not exact at A_{" + std::to_string(n) + "," +
                          std::to_string(1 - n) + "}";
            return out;
        }
    for (int n = 1; n <= s; ++n)
        if (!col_exact(-n, n - 1)) {
            out.failure = "HypothesisViolated: column not exact at A_{" + std::to_string(-n) + "," +
                          std::to_string(n - 1) + "}";
            return out;
        }
    out.hypotheses_ok = true;

    auto ms = dc.column(0, -1, 1);
    out.cohomology_at_origin = cohomology_at(ms, 1);
    out.exact_at_origin = out.cohomology_at_origin.is_trivial();
    return out;
}

}  // namespace gwc
