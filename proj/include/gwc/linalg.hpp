#pragma once

// Dense matrices over a field from field.hpp: Gaussian elimination, kernels,
// determinants, and congruence diagonalization of symmetric matrices.

#include <utility>
#include <vector>

#include "gwc/field.hpp"

namespace gwc {

class Mat {
public:
    Mat() : r_(0), c_(0) {}
    Mat(const Field& K, size_t r, size_t c) : K_(K), r_(r), c_(c), a_(r * c, F_zero(K)) {}

    static Mat identity(const Field& K, size_t n) {
        Mat m(K, n, n);
        for (size_t i = 0; i < n; ++i) m(i, i) = F_one(K);
        return m;
    }

    const Field& field() const { return K_; }
    size_t rows() const { return r_; }
    size_t cols() const { return c_; }

    FieldElem& operator()(size_t i, size_t j) { return a_[i * c_ + j]; }
    const FieldElem& operator()(size_t i, size_t j) const { return a_[i * c_ + j]; }

    Mat operator*(const Mat& o) const {
        if (c_ != o.r_) fail("DimensionMismatch", "matrix product");
        Mat p(K_, r_, o.c_);
        for (size_t i = 0; i < r_; ++i)
            for (size_t k = 0; k < c_; ++k) {
                if (f_is_zero((*this)(i, k))) continue;
                for (size_t j = 0; j < o.c_; ++j)
                    p(i, j) = f_add(p(i, j), f_mul((*this)(i, k), o(k, j)));
            }
        return p;
    }

    Mat transpose() const {
        Mat t(K_, c_, r_);
        for (size_t i = 0; i < r_; ++i)
            for (size_t j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    bool equals(const Mat& o) const {
        if (r_ != o.r_ || c_ != o.c_) return false;
        for (size_t i = 0; i < a_.size(); ++i)
            if (!f_eq(a_[i], o.a_[i])) return false;
        return true;
    }

private:
    Field K_;
    size_t r_, c_;
    std::vector<FieldElem> a_;
};

// Row-echelon elimination; returns rank. If inv != nullptr and the matrix is
// square invertible, *inv receives the inverse.
inline size_t row_reduce(Mat& m, Mat* inv = nullptr) {
    const Field& K = m.field();
    if (inv) *inv = Mat::identity(K, m.rows());
    size_t rank = 0;
    for (size_t col = 0; col < m.cols() && rank < m.rows(); ++col) {
        size_t piv = rank;
        while (piv < m.rows() && f_is_zero(m(piv, col))) ++piv;
        if (piv == m.rows()) continue;
        for (size_t j = 0; j < m.cols(); ++j) std::swap(m(rank, j), m(piv, j));
        if (inv)
            for (size_t j = 0; j < m.rows(); ++j) std::swap((*inv)(rank, j), (*inv)(piv, j));
        FieldElem ip = f_inv(m(rank, col));
        for (size_t j = 0; j < m.cols(); ++j) m(rank, j) = f_mul(m(rank, j), ip);
        if (inv)
            for (size_t j = 0; j < m.rows(); ++j) (*inv)(rank, j) = f_mul((*inv)(rank, j), ip);
        for (size_t i = 0; i < m.rows(); ++i) {
            if (i == rank || f_is_zero(m(i, col))) continue;
            FieldElem c = m(i, col);
            for (size_t j = 0; j < m.cols(); ++j) m(i, j) = f_sub(m(i, j), f_mul(c, m(rank, j)));
            if (inv)
                for (size_t j = 0; j < m.rows(); ++j)
                    (*inv)(i, j) = f_sub((*inv)(i, j), f_mul(c, (*inv)(rank, j)));
        }
        ++rank;
    }
    return rank;
}

inline size_t mat_rank(Mat m) { return row_reduce(m); }

inline FieldElem mat_det(Mat m) {
    if (m.rows() != m.cols()) fail("DimensionMismatch", "determinant of a non-square matrix");
    const Field& K = m.field();
    FieldElem det = F_one(K);
    size_t n = m.rows();
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && f_is_zero(m(piv, col))) ++piv;
        if (piv == n) return F_zero(K);
        if (piv != col) {
            for (size_t j = 0; j < n; ++j) std::swap(m(col, j), m(piv, j));
            det = f_neg(det);
        }
        det = f_mul(det, m(col, col));
        FieldElem ip = f_inv(m(col, col));
        for (size_t i = col + 1; i < n; ++i) {
            if (f_is_zero(m(i, col))) continue;
            FieldElem c = f_mul(m(i, col), ip);
            for (size_t j = col; j < n; ++j) m(i, j) = f_sub(m(i, j), f_mul(c, m(col, j)));
        }
    }
    return det;
}

inline std::optional<Mat> mat_inverse(const Mat& m) {
    if (m.rows() != m.cols()) fail("DimensionMismatch", "inverse of a non-square matrix");
    Mat a = m, inv;
    size_t rank = row_reduce(a, &inv);
    if (rank != m.rows()) return std::nullopt;
    return inv;
}

// Basis of the kernel, as columns.
inline Mat mat_kernel(Mat m) {
    const Field& K = m.field();
    size_t rows = m.rows(), cols = m.cols();
    row_reduce(m);
    std::vector<int> pivot_of_col(cols, -1);
    size_t r = 0;
    for (size_t col = 0; col < cols && r < rows; ++col) {
        if (!f_is_zero(m(r, col))) {
            pivot_of_col[col] = static_cast<int>(r);
            ++r;
        }
    }
    std::vector<size_t> free_cols;
    for (size_t col = 0; col < cols; ++col)
        if (pivot_of_col[col] < 0) free_cols.push_back(col);
    Mat ker(K, cols, free_cols.size());
    for (size_t k = 0; k < free_cols.size(); ++k) {
        size_t fc = free_cols[k];
        ker(fc, k) = F_one(K);
        for (size_t col = 0; col < fc; ++col) {
            int pr = pivot_of_col[col];
            if (pr >= 0) ker(col, k) = f_neg(m(static_cast<size_t>(pr), fc));
        }
    }
    return ker;
}

// One solution of m*x = b (b a column), if any.
inline std::optional<Mat> mat_solve(const Mat& m, const Mat& b) {
    const Field& K = m.field();
    Mat aug(K, m.rows(), m.cols() + b.cols());
    for (size_t i = 0; i < m.rows(); ++i) {
        for (size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
        for (size_t j = 0; j < b.cols(); ++j) aug(i, m.cols() + j) = b(i, j);
    }
    row_reduce(aug);
    Mat x(K, m.cols(), b.cols());
    // back-substitute from the echelon form
    size_t r = 0;
    std::vector<int> pivcol;
    for (size_t i = 0; i < m.rows(); ++i) {
        size_t col = 0;
        while (col < m.cols() && f_is_zero(aug(i, col))) ++col;
        if (col == m.cols()) {
            for (size_t j = 0; j < b.cols(); ++j)
                if (!f_is_zero(aug(i, m.cols() + j))) return std::nullopt;
            continue;
        }
        pivcol.push_back(static_cast<int>(col));
        ++r;
    }
    for (size_t i = 0; i < pivcol.size(); ++i)
        for (size_t j = 0; j < b.cols(); ++j) x(static_cast<size_t>(pivcol[i]), j) = aug(i, m.cols() + j);
    return x;
}

// Congruence diagonalization of a symmetric matrix (char != 2):
// returns (diag entries, C) with C^T * G * C diagonal.
inline std::pair<std::vector<FieldElem>, Mat> sym_diagonalize(const Mat& g) {
    if (g.rows() != g.cols()) fail("DimensionMismatch", "Gram matrix not square");
    const Field& K = g.field();
    size_t n = g.rows();
    Mat a = g;
    Mat c = Mat::identity(K, n);
    FieldElem half = f_inv(F_int(K, 2));
    for (size_t k = 0; k < n; ++k) {
        if (f_is_zero(a(k, k))) {
            size_t swap_i = k;
            for (size_t i = k + 1; i < n; ++i)
                if (!f_is_zero(a(i, i))) {
                    swap_i = i;
                    break;
                }
            if (swap_i != k) {
                for (size_t j = 0; j < n; ++j) std::swap(a(k, j), a(swap_i, j));
                for (size_t j = 0; j < n; ++j) std::swap(a(j, k), a(j, swap_i));
                for (size_t j = 0; j < n; ++j) std::swap(c(j, k), c(j, swap_i));
            } else {
                size_t partner = k;
                for (size_t j = k + 1; j < n; ++j)
                    if (!f_is_zero(a(k, j))) {
                        partner = j;
                        break;
                    }
                if (partner == k) continue;  // row k entirely zero from k on
                // e_k += e_partner makes the diagonal entry 2*a(k,partner)
                for (size_t j = 0; j < n; ++j) a(k, j) = f_add(a(k, j), a(partner, j));
                for (size_t j = 0; j < n; ++j) a(j, k) = f_add(a(j, k), a(j, partner));
                for (size_t j = 0; j < n; ++j) c(j, k) = f_add(c(j, k), c(j, partner));
                (void)half;
            }
        }
        if (f_is_zero(a(k, k))) continue;
        FieldElem ip = f_inv(a(k, k));
        for (size_t i = k + 1; i < n; ++i) {
            if (f_is_zero(a(i, k))) continue;
            FieldElem q = f_mul(a(i, k), ip);
            for (size_t j = 0; j < n; ++j) a(i, j) = f_sub(a(i, j), f_mul(q, a(k, j)));
            for (size_t j = 0; j < n; ++j) a(j, i) = f_sub(a(j, i), f_mul(q, a(j, k)));
            for (size_t j = 0; j < n; ++j) c(j, i) = f_sub(c(j, i), f_mul(q, c(j, k)));
        }
    }
    std::vector<FieldElem> d;
    for (size_t i = 0; i < n; ++i) d.push_back(a(i, i));
    return {d, c};
}

}  // namespace gwc
