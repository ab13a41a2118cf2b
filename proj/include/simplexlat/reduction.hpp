#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "cxmat.hpp"
#include "moments.hpp"

namespace simplexlat {

enum class ReductionMode { average, normalized };

inline const char* to_string(ReductionMode mode) {
    return mode == ReductionMode::average ? "average" : "normalized";
}

inline ReductionMode parse_reduction_mode(const std::string& s) {
    if (s == "average") return ReductionMode::average;
    if (s == "normalized") return ReductionMode::normalized;
    throw ParseError("mode", "expected 'average' or 'normalized', got '" + s + "'");
}

/// All words sharing one multiset of factor indices.
struct PermutationClass {
    ExponentVector exponents;
    std::vector<MultiIndex> representatives;  ///< lexicographic; front() is the sorted word
    std::uint64_t size = 0;

    const MultiIndex& sorted_word() const { return representatives.front(); }
};

/// Combinations with repetition: (dim + m - 1)! / (m! (dim - 1)!).
inline std::uint64_t s_dim(std::size_t dim, std::size_t m) {
    if (dim == 0 || m == 0) throw DimensionError("s_dim: dim and m must be >= 1");
    return detail::checked_binomial(dim + m - 1, m);
}

/// Classes ordered lexicographically by sorted word, i.e. exponents
/// (n_1 desc, n_2 desc, ...).
inline std::vector<PermutationClass> enumerate_classes(std::size_t dim, std::size_t m,
                                                       std::size_t size_cap = default_size_cap()) {
    checked_power(dim, m, size_cap);
    std::vector<PermutationClass> out;
    out.reserve(static_cast<std::size_t>(s_dim(dim, m)));
    std::vector<std::size_t> word(m, 0);
    while (true) {
        PermutationClass cls;
        cls.exponents = multiindex_to_exponents(MultiIndex{word}, dim);
        std::vector<std::size_t> perm = word;
        do {
            cls.representatives.push_back(MultiIndex{perm});
        } while (std::next_permutation(perm.begin(), perm.end()));
        cls.size = cls.representatives.size();
        out.push_back(std::move(cls));

        // next non-decreasing word
        std::size_t pos = m;
        while (pos > 0 && word[pos - 1] == dim - 1) --pos;
        if (pos == 0) break;
        const std::size_t v = word[pos - 1] + 1;
        for (std::size_t k = pos - 1; k < m; ++k) word[k] = v;
    }
    return out;
}

/// Class index for every linear position of the dim^m tensor space.
inline std::vector<std::size_t> class_lookup(const std::vector<PermutationClass>& classes,
                                             std::size_t dim) {
    std::size_t total = 0;
    for (const auto& c : classes) total += c.representatives.size();
    std::vector<std::size_t> lookup(total);
    for (std::size_t c = 0; c < classes.size(); ++c)
        for (const auto& r : classes[c].representatives) lookup[linear_index(r, dim)] = c;
    return lookup;
}

inline double class_weight(const PermutationClass& cls, ReductionMode mode) {
    const double d = static_cast<double>(cls.size);
    return mode == ReductionMode::average ? 1.0 / d : 1.0 / std::sqrt(d);
}

/// Sum of the class's co-degenerate tensor eigenvectors, scaled by 1/D
/// (average) or 1/sqrt(D) (normalized).
inline CVector representative_eigvec(const TensorEigensystem& ts, const PermutationClass& cls,
                                     ReductionMode mode) {
    CVector acc;
    for (const auto& r : cls.representatives) {
        const CVector v = tensor_eigvec(ts, r);
        if (acc.empty()) acc.assign(v.size(), Complex{});
        for (std::size_t i = 0; i < v.size(); ++i) acc[i] += v[i];
    }
    const double w = class_weight(cls, mode);
    for (auto& z : acc) z *= w;
    return acc;
}

/// Effective simplex-lattice matrix with its diagonalizer:
/// meff = t * diag(d) * t^-1.
struct ReducedSystem {
    std::size_t order = 0;
    std::size_t dim = 0;
    std::vector<PermutationClass> classes;
    CMatrix meff;
    CMatrix t;
    CVector d;
    ReductionMode mode = ReductionMode::average;
};

inline constexpr double kSnapRelative = 1e-12;
inline constexpr double kReductionConditionLimit = 1e10;

/**
 * Folds M_m onto the symmetric (permutation-class) subspace.
 *
 * Columns of A' are the class representatives of the tensor eigenvectors,
 * T = B^T A' with B the class-indicator columns scaled 1/D or 1/sqrt(D), and
 * meff = T diag(d) T^-1 through an LU solve. Eigenvectors are grouped by
 * index multiset, never by numerical eigenvalue, so intrinsic degeneracies of
 * M1 stay separate entries of d.
 */
inline ReducedSystem reduce(const ModeSystem& sys, std::size_t m, ReductionMode mode,
                            std::size_t size_cap = default_size_cap()) {
    const std::size_t dim = sys.dim();
    const std::size_t total = checked_power(dim, m, size_cap);
    const TensorEigensystem ts = tensor_eigensystem(sys, m, size_cap);

    ReducedSystem red;
    red.order = m;
    red.dim = dim;
    red.mode = mode;
    red.classes = enumerate_classes(dim, m, size_cap);
    const std::size_t s = red.classes.size();
    const auto lookup = class_lookup(red.classes, dim);

    red.d.resize(s);
    red.t = CMatrix(s, s);
    for (std::size_t k = 0; k < s; ++k) {
        red.d[k] = ts.eigenvalue_of(red.classes[k].sorted_word());
        const CVector col = representative_eigvec(ts, red.classes[k], mode);
        for (std::size_t r = 0; r < total; ++r) red.t(lookup[r], k) += col[r];
    }
    for (std::size_t c = 0; c < s; ++c) {
        const double w = class_weight(red.classes[c], mode);
        for (std::size_t k = 0; k < s; ++k) red.t(c, k) *= w;
    }

    const double cond = column_scaled_condition(red.t);
    if (!(cond <= kReductionConditionLimit)) {
        throw ReductionSingularError("reduce: class-coordinate matrix T has condition " +
                                     std::to_string(cond) +
                                     " (exceptional point or aliased degeneracy in M1)");
    }

    // meff * T = T * D  <=>  T^T meff^T = (T D)^T
    CMatrix td = red.t;
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t k = 0; k < s; ++k) td(i, k) *= red.d[k];
    red.meff = snap_small(transpose(solve(transpose(red.t), transpose(td))), kSnapRelative);
    return red;
}

/**
 * Independent route to meff that never touches an eigensolver. M_m commutes
 * with tensor-slot permutations, so the class-indicator span is invariant.
 * Average mode: one representative row per class, columns summed per class.
 * Normalized mode: congruence B''^T M_m B'' with orthonormal class columns.
 */
inline CMatrix direct_collapse(const ModeSystem& sys, std::size_t m, ReductionMode mode,
                               std::size_t size_cap = default_size_cap()) {
    const std::size_t dim = sys.dim();
    const CMatrix mm = build_mm(sys, m, size_cap);
    const auto classes = enumerate_classes(dim, m, size_cap);
    const auto lookup = class_lookup(classes, dim);
    const std::size_t s = classes.size();
    CMatrix out(s, s);
    if (mode == ReductionMode::average) {
        for (std::size_t c = 0; c < s; ++c) {
            const std::size_t row = linear_index(classes[c].sorted_word(), dim);
            for (std::size_t col = 0; col < mm.cols(); ++col) out(c, lookup[col]) += mm(row, col);
        }
    } else {
        for (std::size_t row = 0; row < mm.rows(); ++row)
            for (std::size_t col = 0; col < mm.cols(); ++col) out(lookup[row], lookup[col]) += mm(row, col);
        for (std::size_t a = 0; a < s; ++a)
            for (std::size_t b = 0; b < s; ++b)
                out(a, b) /= std::sqrt(static_cast<double>(classes[a].size * classes[b].size));
    }
    return out;
}

}  // namespace simplexlat
