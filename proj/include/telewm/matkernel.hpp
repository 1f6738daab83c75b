#pragma once

// Dense complex linear algebra for small Hermitian problems (dim <= 4 in
// practice: qubit operators, two-qubit density matrices and the 3x3 real
// correlation matrix).  Everything is exact-size, allocation-light and
// deterministic; the eigensolver is a cyclic Jacobi iteration, which at these
// dimensions is both simpler and more accurate than bringing in a full LAPACK
// dependency.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <vector>

#include "telewm/errors.hpp"

namespace telewm {

using cx = std::complex<double>;

namespace tol {
// Hermiticity / symmetry defect accepted on input matrices.
inline constexpr double kHermitian = 1e-10;
// Eigenvalues with magnitude below this are treated as exact zeros when a
// positive-semidefinite interpretation is required (matrix square roots,
// concurrence intermediates).  Rank-deficient pipeline states produce
// O(1e-16) negative eigenvalues whose square roots would otherwise inject
// O(1e-8) noise.
inline constexpr double kPsdClamp = 1e-12;
// Off-diagonal Frobenius mass (relative to scale) at which Jacobi stops.
inline constexpr double kJacobiStop = 1e-30;
}  // namespace tol

inline bool is_finite(cx z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// Square complex matrix, row-major.
class Mat {
  public:
    explicit Mat(int n) : n_(n), a_(static_cast<std::size_t>(n) * n, cx{0.0, 0.0}) {}

    // Row-major nested initializer construction; entries must be finite.
    static Mat from_rows(std::initializer_list<std::initializer_list<cx>> rows) {
        Mat m(static_cast<int>(rows.size()));
        int r = 0;
        for (const auto& row : rows) {
            if (static_cast<int>(row.size()) != m.n_)
                throw InvalidParams("Mat::from_rows: ragged initializer");
            int c = 0;
            for (cx v : row) {
                if (!is_finite(v)) throw NonFinite("Mat::from_rows: non-finite entry");
                m(r, c++) = v;
            }
            ++r;
        }
        return m;
    }

    static Mat identity(int n) {
        Mat m(n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int dim() const { return n_; }

    cx& operator()(int r, int c) { return a_[static_cast<std::size_t>(r) * n_ + c]; }
    const cx& operator()(int r, int c) const { return a_[static_cast<std::size_t>(r) * n_ + c]; }

    Mat operator+(const Mat& o) const { return zip(o, std::plus<cx>{}); }
    Mat operator-(const Mat& o) const { return zip(o, std::minus<cx>{}); }

    Mat operator*(const Mat& o) const {
        require_same_dim(o);
        Mat out(n_);
        for (int i = 0; i < n_; ++i)
            for (int k = 0; k < n_; ++k) {
                const cx aik = (*this)(i, k);
                if (aik == cx{0.0, 0.0}) continue;
                for (int j = 0; j < n_; ++j) out(i, j) += aik * o(k, j);
            }
        return out;
    }

    Mat operator*(cx s) const {
        Mat out(n_);
        for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] = a_[i] * s;
        return out;
    }

    friend Mat operator*(cx s, const Mat& m) { return m * s; }

    // Conjugate transpose.
    Mat adjoint() const {
        Mat out(n_);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) out(j, i) = std::conj((*this)(i, j));
        return out;
    }

    // Entrywise complex conjugate (no transpose).
    Mat conjugate() const {
        Mat out(n_);
        for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] = std::conj(a_[i]);
        return out;
    }

    cx trace() const {
        cx t{0.0, 0.0};
        for (int i = 0; i < n_; ++i) t += (*this)(i, i);
        return t;
    }

    double max_abs() const {
        double m = 0.0;
        for (const cx& v : a_) m = std::max(m, std::abs(v));
        return m;
    }

    // max_ij |(m - m^dagger)_ij|
    double hermiticity_defect() const {
        double d = 0.0;
        for (int i = 0; i < n_; ++i)
            for (int j = i; j < n_; ++j)
                d = std::max(d, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
        return d;
    }

    bool all_finite() const {
        for (const cx& v : a_)
            if (!is_finite(v)) return false;
        return true;
    }

  private:
    template <class Op>
    Mat zip(const Mat& o, Op op) const {
        require_same_dim(o);
        Mat out(n_);
        for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] = op(a_[i], o.a_[i]);
        return out;
    }

    void require_same_dim(const Mat& o) const {
        if (o.n_ != n_) throw InvalidParams("Mat: dimension mismatch");
    }

    int n_;
    std::vector<cx> a_;
};

// Kronecker product, a ⊗ b.
inline Mat tensor(const Mat& a, const Mat& b) {
    const int na = a.dim(), nb = b.dim();
    Mat out(na * nb);
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < na; ++j) {
            const cx aij = a(i, j);
            if (aij == cx{0.0, 0.0}) continue;
            for (int k = 0; k < nb; ++k)
                for (int l = 0; l < nb; ++l) out(i * nb + k, j * nb + l) = aij * b(k, l);
        }
    return out;
}

// a · m · a^dagger
inline Mat sandwich(const Mat& a, const Mat& m) { return a * m * a.adjoint(); }

struct EigResult {
    std::vector<double> values;  // descending
    Mat vectors;                 // column k is the eigenvector of values[k]
};

// Cyclic Jacobi diagonalization of a Hermitian matrix.  The input must be
// Hermitian to tol::kHermitian (max entrywise defect); computation proceeds on
// the Hermitized average so the result is exactly real.
inline EigResult hermitian_eig(const Mat& m) {
    const int n = m.dim();
    if (!m.all_finite()) throw NonFinite("hermitian_eig: non-finite entry");
    if (m.hermiticity_defect() > tol::kHermitian)
        throw NotHermitian("hermitian_eig: input is not Hermitian within 1e-10");

    // Hermitize to kill the sub-tolerance defect.
    Mat a(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));

    Mat v = Mat::identity(n);
    const double scale = std::max(1.0, a.max_abs());

    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += std::norm(a(p, q));
        if (off <= tol::kJacobiStop * scale * scale) break;

        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                const double apq = std::abs(a(p, q));
                if (apq <= 1e-300) { a(p, q) = a(q, p) = 0.0; continue; }
                const cx phase = a(p, q) / apq;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                // Real Jacobi rotation for [[app, |apq|], [|apq|, aqq]].
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const cx se = s * phase;  // complex rotation entry

                // Columns p and q of A and V:  col_p' = c*col_p - conj(se)*col_q,
                // col_q' = se*col_p + c*col_q;  rows follow by Hermiticity.
                for (int k = 0; k < n; ++k) {
                    const cx akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - std::conj(se) * akq;
                    a(k, q) = se * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const cx apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - se * aqk;
                    a(q, k) = std::conj(se) * apk + c * aqk;
                }
                a(p, q) = a(q, p) = 0.0;
                a(p, p) = cx{a(p, p).real(), 0.0};
                a(q, q) = cx{a(q, q).real(), 0.0};
                for (int k = 0; k < n; ++k) {
                    const cx vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - std::conj(se) * vkq;
                    v(k, q) = se * vkp + c * vkq;
                }
            }
    }

    EigResult res{std::vector<double>(n), Mat(n)};
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> diag(n);
    for (int i = 0; i < n; ++i) diag[i] = a(i, i).real();
    std::stable_sort(order.begin(), order.end(),
                     [&](int x, int y) { return diag[x] > diag[y]; });
    for (int k = 0; k < n; ++k) {
        res.values[k] = diag[order[k]];
        for (int r = 0; r < n; ++r) res.vectors(r, k) = v(r, order[k]);
    }
    return res;
}

// Principal square root of a positive-semidefinite Hermitian matrix.
// Eigenvalues in [-kPsdClamp, 0) are clamped to zero; anything more negative
// raises NegativeSpectrum.
inline Mat sqrt_psd(const Mat& m) {
    EigResult e = hermitian_eig(m);
    const int n = m.dim();
    Mat out(n);
    std::vector<double> roots(n);
    for (int k = 0; k < n; ++k) {
        double lam = e.values[k];
        if (lam < -tol::kPsdClamp)
            throw NegativeSpectrum("sqrt_psd: eigenvalue below -1e-12");
        if (lam < tol::kPsdClamp) lam = 0.0;
        roots[k] = std::sqrt(lam);
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            cx acc{0.0, 0.0};
            for (int k = 0; k < n; ++k)
                acc += e.vectors(i, k) * roots[k] * std::conj(e.vectors(j, k));
            out(i, j) = acc;
        }
    return out;
}

// Trace norm ||m||_1 = sum |eigenvalue| for a Hermitian matrix.
inline double trace_norm_hermitian(const Mat& m) {
    EigResult e = hermitian_eig(m);
    double s = 0.0;
    for (double lam : e.values) s += std::abs(lam);
    return s;
}

}  // namespace telewm
