#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "cxmat.hpp"

namespace simplexlat {

/// Eigenvalues plus biorthogonal right/left eigenvector sets.
/// `left` is normalized so that left^H * right = I.
struct SpectralDecomposition {
    std::size_t size = 0;
    CVector eigenvalues;
    CMatrix right;
    CMatrix left;
    double condition = 0.0;  ///< 1-norm condition of column-normalized `right`
};

struct EigOptions {
    double defect_threshold = 1e10;  ///< max condition of the right-eigenvector matrix
    std::size_t max_size = 1024;
};

namespace detail {

constexpr double kEps = std::numeric_limits<double>::epsilon();

inline double abs1(Complex z) noexcept { return std::abs(z.real()) + std::abs(z.imag()); }

/// Householder reduction to upper Hessenberg form; accumulates the unitary
/// factor into `q` when given (a = q h q^H).
inline void hessenberg_reduce(CMatrix& h, CMatrix* q) {
    const std::size_t n = h.rows();
    if (n < 3) return;
    CVector v(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double xnorm = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) xnorm += std::norm(h(i, k));
        xnorm = std::sqrt(xnorm);
        double tail = 0.0;
        for (std::size_t i = k + 2; i < n; ++i) tail += std::norm(h(i, k));
        if (tail == 0.0) continue;

        const Complex x0 = h(k + 1, k);
        const Complex phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : Complex{1.0};
        const Complex alpha = -phase * xnorm;
        std::fill(v.begin(), v.end(), Complex{});
        v[k + 1] = x0 - alpha;
        for (std::size_t i = k + 2; i < n; ++i) v[i] = h(i, k);
        double vnorm = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) vnorm += std::norm(v[i]);
        vnorm = std::sqrt(vnorm);
        if (vnorm == 0.0) continue;
        for (std::size_t i = k + 1; i < n; ++i) v[i] /= vnorm;

        // h <- (I - 2 v v^H) h
        for (std::size_t j = 0; j < n; ++j) {
            Complex s{};
            for (std::size_t i = k + 1; i < n; ++i) s += std::conj(v[i]) * h(i, j);
            s *= 2.0;
            for (std::size_t i = k + 1; i < n; ++i) h(i, j) -= v[i] * s;
        }
        // h <- h (I - 2 v v^H)
        for (std::size_t i = 0; i < n; ++i) {
            Complex s{};
            for (std::size_t j = k + 1; j < n; ++j) s += h(i, j) * v[j];
            s *= 2.0;
            for (std::size_t j = k + 1; j < n; ++j) h(i, j) -= s * std::conj(v[j]);
        }
        h(k + 1, k) = alpha;
        for (std::size_t i = k + 2; i < n; ++i) h(i, k) = 0.0;
        if (q) {
            for (std::size_t i = 0; i < n; ++i) {
                Complex s{};
                for (std::size_t j = k + 1; j < n; ++j) s += (*q)(i, j) * v[j];
                s *= 2.0;
                for (std::size_t j = k + 1; j < n; ++j) (*q)(i, j) -= s * std::conj(v[j]);
            }
        }
    }
}

struct Rotation {
    double c = 1.0;
    Complex s{};
};

/// Unitary G = [[c, s], [-conj(s), c]] with G * (x, y)^T = (r, 0)^T.
inline Rotation make_rotation(Complex x, Complex y) {
    const double ax = std::abs(x);
    const double ay = std::abs(y);
    if (ay == 0.0) return {1.0, Complex{}};
    if (ax == 0.0) return {0.0, std::conj(y) / ay};
    const double r = std::hypot(ax, ay);
    const Complex phase = x / ax;
    return {ax / r, phase * std::conj(y) / r};
}

/// Shifted complex QR on an upper Hessenberg matrix. With `full`, the whole
/// Schur factor is maintained (and `z` accumulated if non-null); otherwise
/// only the active window is updated, which suffices for eigenvalues.
inline void hessenberg_qr(CMatrix& h, CMatrix* z, bool full) {
    const std::size_t n = h.rows();
    if (n == 1) return;
    const double hnorm = std::max(frob_norm(h), std::numeric_limits<double>::min());
    constexpr int kMaxIterPerEigenvalue = 60;
    std::vector<Rotation> rot(n);

    std::ptrdiff_t hi = static_cast<std::ptrdiff_t>(n) - 1;
    int iter = 0;
    while (hi > 0) {
        std::ptrdiff_t l = hi;
        for (; l > 0; --l) {
            double s = abs1(h(l - 1, l - 1)) + abs1(h(l, l));
            if (s == 0.0) s = hnorm;
            if (abs1(h(l, l - 1)) <= kEps * s) {
                h(l, l - 1) = 0.0;
                break;
            }
        }
        if (l == hi) {
            --hi;
            iter = 0;
            continue;
        }
        if (++iter > kMaxIterPerEigenvalue) {
            throw ConvergenceError("eig: QR iteration failed to converge at row " +
                                   std::to_string(hi));
        }

        Complex mu;
        if (iter % 10 == 0) {
            // exceptional shift after stagnation
            mu = h(hi, hi) + std::abs(h(hi, hi - 1)) * Complex(0.75, 0.4375);
        } else {
            const Complex a = h(hi - 1, hi - 1), b = h(hi - 1, hi);
            const Complex c = h(hi, hi - 1), d = h(hi, hi);
            const Complex half = 0.5 * (a - d);
            const Complex disc = std::sqrt(half * half + b * c);
            const Complex tr2 = 0.5 * (a + d);
            const Complex l1 = tr2 + disc, l2 = tr2 - disc;
            mu = std::abs(l1 - d) <= std::abs(l2 - d) ? l1 : l2;
        }

        const std::size_t lo = static_cast<std::size_t>(l);
        const std::size_t up = static_cast<std::size_t>(hi);
        const std::size_t col_end = full ? n : up + 1;
        const std::size_t row_begin = full ? 0 : lo;

        for (std::size_t i = lo; i <= up; ++i) h(i, i) -= mu;
        for (std::size_t k = lo; k < up; ++k) {
            const Rotation g = make_rotation(h(k, k), h(k + 1, k));
            rot[k] = g;
            for (std::size_t j = k; j < col_end; ++j) {
                const Complex t1 = h(k, j), t2 = h(k + 1, j);
                h(k, j) = g.c * t1 + g.s * t2;
                h(k + 1, j) = -std::conj(g.s) * t1 + g.c * t2;
            }
            h(k + 1, k) = 0.0;
        }
        for (std::size_t k = lo; k < up; ++k) {
            const Rotation g = rot[k];
            const std::size_t row_end = std::min(k + 1, up);
            for (std::size_t i = row_begin; i <= row_end; ++i) {
                const Complex t1 = h(i, k), t2 = h(i, k + 1);
                h(i, k) = t1 * g.c + t2 * std::conj(g.s);
                h(i, k + 1) = -t1 * g.s + t2 * g.c;
            }
            if (z) {
                for (std::size_t i = 0; i < n; ++i) {
                    const Complex t1 = (*z)(i, k), t2 = (*z)(i, k + 1);
                    (*z)(i, k) = t1 * g.c + t2 * std::conj(g.s);
                    (*z)(i, k + 1) = -t1 * g.s + t2 * g.c;
                }
            }
        }
        for (std::size_t i = lo; i <= up; ++i) h(i, i) += mu;
    }
}

/// Ordering used everywhere: real part descending, then imaginary part
/// descending. Real parts within `tol` of a cluster leader compare equal so
/// that rounding noise on equal real parts cannot flip the order.
inline std::vector<std::size_t> spectral_order(const CVector& w) {
    std::vector<std::size_t> idx(w.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    double scale = 0.0;
    for (const auto& z : w) scale = std::max(scale, std::abs(z));
    const double tol = 1e-9 * std::max(scale, std::numeric_limits<double>::min());
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return w[a].real() > w[b].real(); });
    std::size_t start = 0;
    while (start < idx.size()) {
        std::size_t stop = start + 1;
        while (stop < idx.size() && w[idx[start]].real() - w[idx[stop]].real() <= tol) ++stop;
        std::stable_sort(idx.begin() + static_cast<std::ptrdiff_t>(start),
                         idx.begin() + static_cast<std::ptrdiff_t>(stop),
                         [&](std::size_t a, std::size_t b) { return w[a].imag() > w[b].imag(); });
        start = stop;
    }
    return idx;
}

/// Unit 2-norm, with the phase fixed so the first near-maximal component is
/// real and positive.
inline void normalize_phase(CVector& v) {
    const double nrm = norm2(v);
    if (nrm == 0.0) return;
    double big = 0.0;
    for (const auto& z : v) big = std::max(big, std::abs(z));
    Complex phase{1.0};
    for (const auto& z : v) {
        if (std::abs(z) >= (1.0 - 1e-8) * big) {
            phase = z / std::abs(z);
            break;
        }
    }
    const Complex f = std::conj(phase) / nrm;
    for (auto& z : v) z *= f;
}

inline void check_square(const CMatrix& a, std::size_t max_size, const char* who) {
    if (!a.square()) throw DimensionError(std::string(who) + ": matrix must be square");
    if (a.rows() > max_size) {
        throw DimensionError(std::string(who) + ": size " + std::to_string(a.rows()) +
                             " exceeds oracle scale " + std::to_string(max_size));
    }
    if (!a.all_finite()) throw DimensionError(std::string(who) + ": non-finite entry");
}

}  // namespace detail

/// Complex Schur form a = z t z^H with t upper triangular.
struct SchurForm {
    CMatrix t;
    CMatrix z;
};

inline SchurForm schur(const CMatrix& a) {
    detail::check_square(a, std::numeric_limits<std::size_t>::max(), "schur");
    SchurForm s{a, CMatrix::identity(a.rows())};
    detail::hessenberg_reduce(s.t, &s.z);
    detail::hessenberg_qr(s.t, &s.z, true);
    for (std::size_t i = 1; i < s.t.rows(); ++i)
        for (std::size_t j = 0; j < i; ++j) s.t(i, j) = 0.0;
    return s;
}

/// Eigenvalues only, sorted by (re desc, im desc).
inline CVector eigvals(const CMatrix& a, const EigOptions& opts = {}) {
    detail::check_square(a, opts.max_size, "eigvals");
    CMatrix h = a;
    detail::hessenberg_reduce(h, nullptr);
    detail::hessenberg_qr(h, nullptr, false);
    CVector w = h.diag();
    CVector sorted(w.size());
    const auto order = detail::spectral_order(w);
    for (std::size_t k = 0; k < w.size(); ++k) sorted[k] = w[order[k]];
    return sorted;
}

/**
 * Full eigendecomposition of a diagonalizable matrix.
 *
 * Schur form by Hessenberg reduction and shifted QR, right eigenvectors by
 * back-substitution on the triangular factor, left eigenvectors from the
 * inverse of the right-eigenvector matrix. Throws NearDefectiveError when
 * that matrix has condition above `opts.defect_threshold`.
 */
inline SpectralDecomposition eig(const CMatrix& a, const EigOptions& opts = {}) {
    detail::check_square(a, opts.max_size, "eig");
    const std::size_t n = a.rows();
    const SchurForm sf = schur(a);
    const CMatrix& t = sf.t;
    const double tnorm = std::max(frob_norm(t), std::numeric_limits<double>::min());
    const double smin = detail::kEps * tnorm;

    CVector w = t.diag();
    CMatrix vec(n, n);
    CVector x(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::fill(x.begin(), x.end(), Complex{});
        x[k] = 1.0;
        const Complex lam = t(k, k);
        for (std::size_t i = k; i-- > 0;) {
            Complex s{};
            for (std::size_t j = i + 1; j <= k; ++j) s += t(i, j) * x[j];
            Complex den = t(i, i) - lam;
            if (std::abs(den) < smin) den = smin;
            x[i] = -s / den;
            if (std::abs(x[i]) > 1e150) {
                for (std::size_t j = i; j <= k; ++j) x[j] *= 1e-150;
            }
        }
        CVector v(n);
        for (std::size_t r = 0; r < n; ++r) {
            Complex s{};
            for (std::size_t j = 0; j <= k; ++j) s += sf.z(r, j) * x[j];
            v[r] = s;
        }
        detail::normalize_phase(v);
        vec.set_col(k, v);
    }

    const auto order = detail::spectral_order(w);
    SpectralDecomposition out;
    out.size = n;
    out.eigenvalues.resize(n);
    out.right = CMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.eigenvalues[k] = w[order[k]];
        for (std::size_t r = 0; r < n; ++r) out.right(r, k) = vec(r, order[k]);
    }

    out.condition = column_scaled_condition(out.right);
    if (!(out.condition <= opts.defect_threshold)) {
        throw NearDefectiveError("eig: eigenvector matrix condition " +
                                 std::to_string(out.condition) + " exceeds " +
                                 std::to_string(opts.defect_threshold) +
                                 " (matrix at or near an exceptional point)");
    }
    out.left = conj_transpose(LUDecomposition(out.right).inverse());
    return out;
}

}  // namespace simplexlat
