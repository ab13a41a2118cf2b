#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "cxmat.hpp"
#include "eig.hpp"

namespace simplexlat {

/// Spin-j ladder of size n + 1 (j = n / 2) with coupling alpha.
struct JxSpec {
    std::size_t n = 1;
    Complex alpha{1.0};

    double j() const noexcept { return static_cast<double>(n) / 2.0; }
    std::size_t size() const noexcept { return n + 1; }
};

struct Signal {
    CVector samples;
};

/// (n+1)x(n+1) tridiagonal with M(r, r+1) = (n - r) alpha and M(r, r-1) = r alpha.
/// This is the reduced order-n moment matrix of a symmetric dimer.
inline CMatrix sylvester_matrix(std::size_t n, Complex alpha) {
    if (n == 0) throw DimensionError("sylvester_matrix: n must be >= 1");
    CMatrix m(n + 1, n + 1);
    for (std::size_t r = 0; r <= n; ++r) {
        if (r < n) m(r, r + 1) = static_cast<double>(n - r) * alpha;
        if (r > 0) m(r, r - 1) = static_cast<double>(r) * alpha;
    }
    return m;
}

/// Diagonal S with S(0,0) = 1 and S(r,r) = prod_{k<=r} sqrt(M(k,k-1) / M(k-1,k))
/// (principal branch), so that S^-1 M S is symmetric.
inline CMatrix similarity_s(const CMatrix& meff) {
    if (!meff.square()) throw DimensionError("similarity_s: matrix must be square");
    const std::size_t n = meff.rows();
    const double cut = 1e-12 * frob_norm(meff);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            if ((r > c + 1 || c > r + 1) && std::abs(meff(r, c)) > cut) {
                throw DimensionError("similarity_s: matrix is not tridiagonal");
            }
    CMatrix s(n, n);
    s(0, 0) = 1.0;
    for (std::size_t k = 1; k < n; ++k) {
        const Complex down = meff(k, k - 1), up = meff(k - 1, k);
        if (down == Complex{} || up == Complex{}) {
            throw DimensionError("similarity_s: zero off-diagonal at " + std::to_string(k) +
                                 " breaks the chain");
        }
        s(k, k) = s(k - 1, k - 1) * std::sqrt(down / up);
    }
    return s;
}

/// Jx(m, m+1) = alpha sqrt((j-m)(j+m+1)), Jx(m, m-1) = alpha sqrt((j+m)(j-m+1)),
/// rows indexed m = -j .. j.
inline CMatrix jx_matrix(const JxSpec& spec) {
    if (spec.n == 0) throw DimensionError("jx_matrix: n must be >= 1");
    const std::size_t n = spec.n;
    CMatrix jx(n + 1, n + 1);
    for (std::size_t r = 0; r <= n; ++r) {
        const double nr = static_cast<double>(n - r);
        const double rr = static_cast<double>(r);
        if (r < n) jx(r, r + 1) = spec.alpha * std::sqrt(nr * (rr + 1.0));
        if (r > 0) jx(r, r - 1) = spec.alpha * std::sqrt(rr * (nr + 1.0));
    }
    return jx;
}

/**
 * Discrete fractional Fourier transform generated by Jx.
 *
 * F_a = V diag(exp(-i a pi/2 m)) V^-1 with V the eigenbasis of jx_matrix and
 * m = -j..j its ladder index; a = 1 is a quarter period of the ladder. For
 * real alpha the basis is orthonormal and F_a unitary; complex alpha falls
 * back to the biorthogonal basis and reports non-unitarity.
 */
class FractionalFourier {
public:
    explicit FractionalFourier(const JxSpec& spec) : spec_(spec) {
        if (spec.alpha == Complex{}) throw DimensionError("FractionalFourier: alpha must be nonzero");
        const SpectralDecomposition sd = eig(jx_matrix(spec));
        const std::size_t size = spec.size();
        unitary_ = spec.alpha.imag() == 0.0;
        basis_ = sd.right;
        ladder_.resize(size);
        std::vector<char> seen(size, 0);
        for (std::size_t k = 0; k < size; ++k) {
            const double m = (sd.eigenvalues[k] / (2.0 * spec.alpha)).real();
            const double twice = std::round(2.0 * m);
            const long slot = std::lround(twice + static_cast<double>(spec.n)) / 2;
            if (slot < 0 || static_cast<std::size_t>(slot) >= size || seen[slot]) {
                throw Error("FractionalFourier: eigenvalue " + std::to_string(m) +
                            " does not sit on the angular-momentum ladder");
            }
            seen[slot] = 1;
            ladder_[k] = twice / 2.0;
        }
        if (unitary_) {
            orthonormalize(basis_);
            inverse_ = conj_transpose(basis_);
        } else {
            inverse_ = conj_transpose(sd.left);
        }
    }

    const JxSpec& spec() const noexcept { return spec_; }
    bool unitary() const noexcept { return unitary_; }
    const CMatrix& basis() const noexcept { return basis_; }
    const std::vector<double>& ladder() const noexcept { return ladder_; }

    Signal apply(const Signal& sig, double a) const {
        if (sig.samples.size() != spec_.size()) {
            throw DimensionError("frft: signal length " + std::to_string(sig.samples.size()) +
                                 " != transform size " + std::to_string(spec_.size()));
        }
        CVector coeff = matvec(inverse_, sig.samples);
        for (std::size_t k = 0; k < coeff.size(); ++k) {
            coeff[k] *= std::exp(Complex(0.0, -a * std::numbers::pi / 2.0 * ladder_[k]));
        }
        return Signal{matvec(basis_, coeff)};
    }

private:
    static void orthonormalize(CMatrix& v) {
        const std::size_t n = v.rows();
        for (std::size_t k = 0; k < v.cols(); ++k) {
            for (int pass = 0; pass < 2; ++pass) {
                for (std::size_t p = 0; p < k; ++p) {
                    Complex dot{};
                    for (std::size_t i = 0; i < n; ++i) dot += std::conj(v(i, p)) * v(i, k);
                    for (std::size_t i = 0; i < n; ++i) v(i, k) -= dot * v(i, p);
                }
            }
            double nrm = 0.0;
            for (std::size_t i = 0; i < n; ++i) nrm += std::norm(v(i, k));
            nrm = std::sqrt(nrm);
            for (std::size_t i = 0; i < n; ++i) v(i, k) /= nrm;
        }
    }

    JxSpec spec_;
    bool unitary_ = true;
    CMatrix basis_;
    CMatrix inverse_;
    std::vector<double> ladder_;
};

struct FrftResult {
    Signal signal;
    bool non_unitary = false;
};

inline FrftResult frft(const Signal& sig, double a, const JxSpec& spec) {
    const FractionalFourier f(spec);
    return {f.apply(sig, a), !f.unitary()};
}

}  // namespace simplexlat
