#pragma once

#include <compare>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "cxmat.hpp"
#include "eig.hpp"

namespace simplexlat {

/// Largest dense dimension (dim^m) the library will materialize. Overridable
/// through the SIMPLEXLAT_SIZE_CAP environment variable.
inline constexpr std::size_t kDefaultSizeCap = 4096;

inline std::size_t default_size_cap() {
    if (const char* env = std::getenv("SIMPLEXLAT_SIZE_CAP")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return kDefaultSizeCap;
}

/// First-order evolution matrix together with one display label per component.
class ModeSystem {
public:
    ModeSystem(CMatrix m1, std::vector<std::string> labels)
        : m1_(std::move(m1)), labels_(std::move(labels)) {
        if (!m1_.square()) throw DimensionError("ModeSystem: M1 must be square");
        if (labels_.size() != m1_.rows()) {
            throw DimensionError("ModeSystem: " + std::to_string(labels_.size()) +
                                 " labels for dimension " + std::to_string(m1_.rows()));
        }
        if (!m1_.all_finite()) throw DimensionError("ModeSystem: non-finite entry in M1");
    }

    explicit ModeSystem(CMatrix m1) : ModeSystem(m1, default_labels(m1.rows())) {}

    std::size_t dim() const noexcept { return m1_.rows(); }
    const CMatrix& m1() const noexcept { return m1_; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }

    static std::vector<std::string> default_labels(std::size_t n) {
        std::vector<std::string> out;
        out.reserve(n);
        for (std::size_t i = 1; i <= n; ++i) out.push_back("a" + std::to_string(i));
        return out;
    }

private:
    CMatrix m1_;
    std::vector<std::string> labels_;
};

/// Ordered tuple of factor indices (0-based), one per tensor slot.
struct MultiIndex {
    std::vector<std::size_t> indices;

    std::size_t order() const noexcept { return indices.size(); }
    friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;
};

/// Occupation counts of a MultiIndex: counts[i] = occurrences of index i.
struct ExponentVector {
    std::vector<std::uint32_t> counts;

    std::uint32_t order() const noexcept {
        std::uint32_t s = 0;
        for (auto c : counts) s += c;
        return s;
    }
    std::size_t dim() const noexcept { return counts.size(); }
    friend auto operator<=>(const ExponentVector&, const ExponentVector&) = default;
};

/// dim^m, or SizeCapError when it exceeds `cap`.
inline std::size_t checked_power(std::size_t dim, std::size_t m, std::size_t cap) {
    if (dim == 0 || m == 0) throw DimensionError("dimension and order must be >= 1");
    std::size_t n = 1;
    for (std::size_t k = 0; k < m; ++k) {
        if (n > cap / dim) {
            throw SizeCapError("dim^m = " + std::to_string(dim) + "^" + std::to_string(m) +
                               " exceeds size cap " + std::to_string(cap));
        }
        n *= dim;
    }
    return n;
}

/// Standard Kronecker product: C[i*p + k, j*q + l] = A[i,j] * B[k,l].
inline CMatrix kron_product(const CMatrix& a, const CMatrix& b) {
    CMatrix c(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const Complex aij = a(i, j);
            if (aij == Complex{}) continue;
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    c(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
        }
    return c;
}

inline CVector kron_vec(std::span<const Complex> a, std::span<const Complex> b) {
    CVector c(a.size() * b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < b.size(); ++k) c[i * b.size() + k] = a[i] * b[k];
    return c;
}

/// A ⊗ I_B + I_A ⊗ B.
inline CMatrix kron_sum(const CMatrix& a, const CMatrix& b) {
    if (!a.square() || !b.square()) throw DimensionError("kron_sum: operands must be square");
    return kron_identity_embed(a, Side::right, b.rows()) +
           kron_identity_embed(b, Side::left, a.rows());
}

/// Order-m evolution matrix: the m-fold iterated Kronecker sum of M1.
inline CMatrix build_mm(const ModeSystem& sys, std::size_t m,
                        std::size_t size_cap = default_size_cap()) {
    checked_power(sys.dim(), m, size_cap);
    CMatrix mm = sys.m1();
    for (std::size_t k = 1; k < m; ++k) mm = kron_sum(mm, sys.m1());
    return mm;
}

/// The multi-index at lexicographic position `linear` (leftmost slot slowest).
inline MultiIndex multiindex_at(std::size_t dim, std::size_t m, std::size_t linear) {
    MultiIndex idx{std::vector<std::size_t>(m)};
    for (std::size_t s = m; s-- > 0;) {
        idx.indices[s] = linear % dim;
        linear /= dim;
    }
    return idx;
}

inline std::size_t linear_index(const MultiIndex& idx, std::size_t dim) {
    std::size_t r = 0;
    for (auto i : idx.indices) r = r * dim + i;
    return r;
}

inline ExponentVector multiindex_to_exponents(const MultiIndex& idx, std::size_t dim) {
    ExponentVector ev{std::vector<std::uint32_t>(dim, 0)};
    for (auto i : idx.indices) {
        if (i >= dim) throw DimensionError("multiindex_to_exponents: index out of range");
        ++ev.counts[i];
    }
    return ev;
}

namespace detail {

inline std::uint64_t checked_binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;  // exact: r * (n-k+i) is divisible by i
        if (r > std::numeric_limits<std::uint64_t>::max()) {
            throw OverflowError("binomial(" + std::to_string(n) + ", " + std::to_string(k) +
                                ") exceeds 64-bit range");
        }
    }
    return static_cast<std::uint64_t>(r);
}

}  // namespace detail

/// Number of distinct orderings of the word with these counts:
/// m! / (n_1! ... n_dim!). Exact; OverflowError past 64 bits.
inline std::uint64_t degeneracy(const ExponentVector& ev) {
    unsigned __int128 d = 1;
    std::uint64_t seen = 0;
    for (auto c : ev.counts) {
        seen += c;
        d *= detail::checked_binomial(seen, c);
        if (d > std::numeric_limits<std::uint64_t>::max()) {
            throw OverflowError("degeneracy exceeds 64-bit range");
        }
    }
    return static_cast<std::uint64_t>(d);
}

struct TensorEntry {
    MultiIndex index;
    Complex eigenvalue;
};

/// Analytic eigensystem of M_m assembled from the eigensystem of M1.
/// Eigenvectors are produced on demand by tensor_eigvec.
struct TensorEigensystem {
    std::size_t order = 0;
    std::size_t dim = 0;
    SpectralDecomposition base;
    std::vector<TensorEntry> entries;  ///< dim^m entries, lexicographic order

    Complex eigenvalue_of(const MultiIndex& idx) const {
        Complex s{};
        for (auto i : idx.indices) s += base.eigenvalues[i];
        return s;
    }
};

inline TensorEigensystem tensor_eigensystem(const ModeSystem& sys, std::size_t m,
                                            std::size_t size_cap = default_size_cap()) {
    const std::size_t count = checked_power(sys.dim(), m, size_cap);
    TensorEigensystem ts;
    ts.order = m;
    ts.dim = sys.dim();
    ts.base = eig(sys.m1());
    ts.entries.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        MultiIndex idx = multiindex_at(ts.dim, m, k);
        const Complex lam = ts.eigenvalue_of(idx);
        ts.entries.push_back({std::move(idx), lam});
    }
    return ts;
}

/// Right eigenvector of M_m for `idx`: psi_{i1} ⊗ ... ⊗ psi_{im}.
inline CVector tensor_eigvec(const TensorEigensystem& ts, const MultiIndex& idx) {
    if (idx.order() != ts.order) throw DimensionError("tensor_eigvec: order mismatch");
    CVector v{Complex{1.0}};
    for (auto i : idx.indices) {
        if (i >= ts.dim) throw DimensionError("tensor_eigvec: index out of range");
        v = kron_vec(v, ts.base.right.col(i));
    }
    return v;
}

}  // namespace simplexlat
