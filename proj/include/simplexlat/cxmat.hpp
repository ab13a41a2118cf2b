#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace simplexlat {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

inline bool is_finite(Complex z) noexcept {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

/**
 * Dense row-major complex matrix. Always at least 1x1.
 */
class CMatrix {
public:
    CMatrix() : CMatrix(1, 1) {}

    CMatrix(std::size_t rows, std::size_t cols, Complex fill = {})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {
        if (rows == 0 || cols == 0) {
            throw DimensionError("CMatrix: rows and cols must be >= 1");
        }
    }

    CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (rows == 0 || cols == 0) {
            throw DimensionError("CMatrix: rows and cols must be >= 1");
        }
        if (data_.size() != rows * cols) {
            throw DimensionError("CMatrix: data length " + std::to_string(data_.size()) +
                                 " != " + std::to_string(rows) + "x" + std::to_string(cols));
        }
    }

    /// Row-list literal, e.g. CMatrix{{1, 2}, {3, 4}}.
    CMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
        rows_ = rows.size();
        cols_ = rows_ ? rows.begin()->size() : 0;
        if (rows_ == 0 || cols_ == 0) {
            throw DimensionError("CMatrix: empty literal");
        }
        data_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_) {
                throw DimensionError("CMatrix: ragged literal");
            }
            data_.insert(data_.end(), r.begin(), r.end());
        }
    }

    static CMatrix identity(std::size_t n) {
        CMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static CMatrix diagonal(std::span<const Complex> d) {
        CMatrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    static CMatrix column(std::span<const Complex> v) {
        return CMatrix(v.size(), 1, std::vector<Complex>(v.begin(), v.end()));
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }

    Complex& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const noexcept {
        return data_[i * cols_ + j];
    }

    std::span<Complex> data() noexcept { return data_; }
    std::span<const Complex> data() const noexcept { return data_; }

    std::span<Complex> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
    std::span<const Complex> row(std::size_t i) const noexcept {
        return {data_.data() + i * cols_, cols_};
    }

    CVector col(std::size_t j) const {
        CVector v(rows_);
        for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
        return v;
    }

    void set_col(std::size_t j, std::span<const Complex> v) {
        if (v.size() != rows_) throw DimensionError("set_col: length mismatch");
        for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
    }

    CVector diag() const {
        CVector d(std::min(rows_, cols_));
        for (std::size_t i = 0; i < d.size(); ++i) d[i] = (*this)(i, i);
        return d;
    }

    bool all_finite() const noexcept {
        return std::all_of(data_.begin(), data_.end(), [](Complex z) { return is_finite(z); });
    }

    CMatrix& operator+=(const CMatrix& o) {
        require_same_shape(o, "+=");
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
        return *this;
    }
    CMatrix& operator-=(const CMatrix& o) {
        require_same_shape(o, "-=");
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
        return *this;
    }
    CMatrix& operator*=(Complex s) noexcept {
        for (auto& z : data_) z *= s;
        return *this;
    }

    friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
    friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
    friend CMatrix operator*(CMatrix a, Complex s) { return a *= s; }
    friend CMatrix operator*(Complex s, CMatrix a) { return a *= s; }

    friend bool operator==(const CMatrix&, const CMatrix&) = default;

private:
    void require_same_shape(const CMatrix& o, const char* op) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) {
            throw DimensionError(std::string("CMatrix ") + op + ": shape mismatch");
        }
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

inline CMatrix matmul(const CMatrix& a, const CMatrix& b) {
    if (a.cols() != b.rows()) {
        throw DimensionError("matmul: " + std::to_string(a.rows()) + "x" +
                             std::to_string(a.cols()) + " times " + std::to_string(b.rows()) +
                             "x" + std::to_string(b.cols()));
    }
    CMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto ci = c.row(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex{}) continue;
            auto bk = b.row(k);
            for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += aik * bk[j];
        }
    }
    return c;
}

inline CVector matvec(const CMatrix& a, std::span<const Complex> x) {
    if (a.cols() != x.size()) throw DimensionError("matvec: length mismatch");
    CVector y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        Complex s{};
        auto ai = a.row(i);
        for (std::size_t j = 0; j < x.size(); ++j) s += ai[j] * x[j];
        y[i] = s;
    }
    return y;
}

inline CMatrix transpose(const CMatrix& a) {
    CMatrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

inline CMatrix conj_transpose(const CMatrix& a) {
    CMatrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = std::conj(a(i, j));
    return t;
}

inline CMatrix conj(const CMatrix& a) {
    CMatrix c = a;
    for (auto& z : c.data()) z = std::conj(z);
    return c;
}

inline double frob_norm(const CMatrix& a) {
    double s = 0.0;
    for (const auto& z : a.data()) s += std::norm(z);
    return std::sqrt(s);
}

/// Maximum absolute row sum.
inline double inf_norm(const CMatrix& a) {
    double best = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (const auto& z : a.row(i)) s += std::abs(z);
        best = std::max(best, s);
    }
    return best;
}

/// Maximum absolute column sum.
inline double one_norm(const CMatrix& a) {
    std::vector<double> s(a.cols(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) s[j] += std::abs(a(i, j));
    return *std::max_element(s.begin(), s.end());
}

inline double max_abs(const CMatrix& a) {
    double m = 0.0;
    for (const auto& z : a.data()) m = std::max(m, std::abs(z));
    return m;
}

inline double norm2(std::span<const Complex> v) {
    double s = 0.0;
    for (const auto& z : v) s += std::norm(z);
    return std::sqrt(s);
}

enum class Side { left, right };

/// Side::left gives I_d ⊗ a, Side::right gives a ⊗ I_d.
inline CMatrix kron_identity_embed(const CMatrix& a, Side side, std::size_t d) {
    if (d == 0) throw DimensionError("kron_identity_embed: d must be >= 1");
    CMatrix out(a.rows() * d, a.cols() * d);
    if (side == Side::left) {
        for (std::size_t b = 0; b < d; ++b)
            for (std::size_t i = 0; i < a.rows(); ++i)
                for (std::size_t j = 0; j < a.cols(); ++j)
                    out(b * a.rows() + i, b * a.cols() + j) = a(i, j);
    } else {
        for (std::size_t i = 0; i < a.rows(); ++i)
            for (std::size_t j = 0; j < a.cols(); ++j)
                for (std::size_t b = 0; b < d; ++b) out(i * d + b, j * d + b) = a(i, j);
    }
    return out;
}

/**
 * Partial-pivoted LU factorization of a square matrix. Throws SingularError
 * when a pivot falls below 1e-14 * ||a||_inf.
 */
class LUDecomposition {
public:
    explicit LUDecomposition(const CMatrix& a) : lu_(a), perm_(a.rows()) {
        if (!a.square()) throw DimensionError("LU: matrix must be square");
        const std::size_t n = a.rows();
        const double scale = inf_norm(a);
        const double tiny = 1e-14 * scale;
        for (std::size_t i = 0; i < n; ++i) perm_[i] = i;
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t p = k;
            double best = std::abs(lu_(k, k));
            for (std::size_t i = k + 1; i < n; ++i) {
                const double v = std::abs(lu_(i, k));
                if (v > best) {
                    best = v;
                    p = i;
                }
            }
            if (!(best > tiny) || best == 0.0) {
                throw SingularError("LU: pivot " + std::to_string(best) + " at column " +
                                    std::to_string(k) + " below tolerance");
            }
            if (p != k) {
                auto rk = lu_.row(k);
                auto rp = lu_.row(p);
                std::swap_ranges(rk.begin(), rk.end(), rp.begin());
                std::swap(perm_[k], perm_[p]);
            }
            const Complex pivot = lu_(k, k);
            for (std::size_t i = k + 1; i < n; ++i) {
                const Complex f = lu_(i, k) / pivot;
                lu_(i, k) = f;
                if (f == Complex{}) continue;
                for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= f * lu_(k, j);
            }
        }
    }

    std::size_t size() const noexcept { return lu_.rows(); }

    CMatrix solve(const CMatrix& b) const {
        const std::size_t n = lu_.rows();
        if (b.rows() != n) throw DimensionError("solve: right-hand side row mismatch");
        CMatrix x(n, b.cols());
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < b.cols(); ++j) x(i, j) = b(perm_[i], j);
        for (std::size_t c = 0; c < b.cols(); ++c) {
            for (std::size_t i = 1; i < n; ++i) {
                Complex s = x(i, c);
                for (std::size_t k = 0; k < i; ++k) s -= lu_(i, k) * x(k, c);
                x(i, c) = s;
            }
            for (std::size_t ii = n; ii-- > 0;) {
                Complex s = x(ii, c);
                for (std::size_t k = ii + 1; k < n; ++k) s -= lu_(ii, k) * x(k, c);
                x(ii, c) = s / lu_(ii, ii);
            }
        }
        return x;
    }

    CMatrix inverse() const { return solve(CMatrix::identity(lu_.rows())); }

private:
    CMatrix lu_;
    std::vector<std::size_t> perm_;
};

/// Solves a X = b.
inline CMatrix solve(const CMatrix& a, const CMatrix& b) {
    if (!a.square()) throw DimensionError("solve: matrix must be square");
    if (b.rows() != a.rows()) throw DimensionError("solve: b.rows != a.rows");
    return LUDecomposition(a).solve(b);
}

/// 1-norm condition number of `a` after scaling its columns to unit 2-norm.
/// Returns +inf when the scaled matrix is singular to LU tolerance.
inline double column_scaled_condition(const CMatrix& a) {
    CMatrix s = a;
    for (std::size_t j = 0; j < s.cols(); ++j) {
        double nrm = 0.0;
        for (std::size_t i = 0; i < s.rows(); ++i) nrm += std::norm(s(i, j));
        nrm = std::sqrt(nrm);
        if (nrm == 0.0) return INFINITY;
        for (std::size_t i = 0; i < s.rows(); ++i) s(i, j) /= nrm;
    }
    try {
        const CMatrix inv = LUDecomposition(s).inverse();
        return one_norm(s) * one_norm(inv);
    } catch (const SingularError&) {
        return INFINITY;
    }
}

/// Zeroes real and imaginary parts below rel * ||a||_F, separately.
inline CMatrix snap_small(CMatrix a, double rel) {
    const double cut = rel * frob_norm(a);
    for (auto& z : a.data()) {
        const double re = std::abs(z.real()) < cut ? 0.0 : z.real();
        const double im = std::abs(z.imag()) < cut ? 0.0 : z.imag();
        z = Complex(re, im);
    }
    return a;
}

}  // namespace simplexlat
