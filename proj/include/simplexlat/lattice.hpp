#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "cxmat.hpp"
#include "moments.hpp"
#include "reduction.hpp"

namespace simplexlat {

struct LatticeSite {
    ExponentVector exponents;
    Complex potential;
    std::vector<double> position;  ///< barycentric layout, length dim - 1
};

/// Directed coupling: row = "to", column = "from" of the generating matrix,
/// so the weight is matrix(to, from).
struct DirectedEdge {
    std::size_t from = 0;
    std::size_t to = 0;
    Complex weight;
};

enum class LatticeSource { reduced, hamiltonian };

inline const char* to_string(LatticeSource s) {
    return s == LatticeSource::reduced ? "reduced" : "hamiltonian";
}

struct LatticeGraph {
    std::size_t order = 0;
    std::size_t dim = 0;
    std::vector<LatticeSite> sites;
    std::vector<DirectedEdge> edges;
    LatticeSource source = LatticeSource::reduced;
};

/// Vertex i of a regular (dim-1)-simplex with edge length sqrt(2), via the
/// Helmert basis of the hyperplane sum(x) = const.
inline std::vector<double> simplex_vertex(std::size_t dim, std::size_t i) {
    std::vector<double> v(dim > 0 ? dim - 1 : 0, 0.0);
    for (std::size_t k = 1; k < dim; ++k) {
        const double norm = std::sqrt(static_cast<double>(k * (k + 1)));
        double c = 0.0;
        if (i < k) c = 1.0;
        else if (i == k) c = -static_cast<double>(k);
        v[k - 1] = c / norm;
    }
    return v;
}

inline std::vector<double> barycentric_position(const ExponentVector& ev) {
    const std::size_t dim = ev.dim();
    const double m = static_cast<double>(ev.order());
    std::vector<double> pos(dim > 0 ? dim - 1 : 0, 0.0);
    for (std::size_t i = 0; i < dim; ++i) {
        if (ev.counts[i] == 0) continue;
        const auto v = simplex_vertex(dim, i);
        for (std::size_t k = 0; k < pos.size(); ++k) pos[k] += ev.counts[i] / m * v[k];
    }
    return pos;
}

/// Sites from the diagonal, one directed edge per off-diagonal entry that
/// survives the 1e-12 relative zero-snap.
inline LatticeGraph lattice_from_matrix(const CMatrix& mat, const std::vector<ExponentVector>& sites,
                                        std::size_t order, LatticeSource source) {
    if (!mat.square() || mat.rows() != sites.size()) {
        throw DimensionError("lattice_from_matrix: matrix size does not match site count");
    }
    LatticeGraph g;
    g.order = order;
    g.dim = sites.empty() ? 0 : sites.front().dim();
    g.source = source;
    const CMatrix clean = snap_small(mat, kSnapRelative);
    for (std::size_t i = 0; i < sites.size(); ++i) {
        g.sites.push_back({sites[i], clean(i, i), barycentric_position(sites[i])});
    }
    for (std::size_t to = 0; to < clean.rows(); ++to)
        for (std::size_t from = 0; from < clean.cols(); ++from)
            if (to != from && clean(to, from) != Complex{}) g.edges.push_back({from, to, clean(to, from)});
    return g;
}

inline std::vector<ExponentVector> class_exponents(const std::vector<PermutationClass>& classes) {
    std::vector<ExponentVector> out;
    out.reserve(classes.size());
    for (const auto& c : classes) out.push_back(c.exponents);
    return out;
}

inline LatticeGraph build_lattice(const ReducedSystem& red) {
    return lattice_from_matrix(red.meff, class_exponents(red.classes), red.order,
                               LatticeSource::reduced);
}

inline LatticeGraph build_lattice(const ReducedSystem& red, const ModeSystem& sys) {
    if (sys.dim() != red.dim) throw DimensionError("build_lattice: mode system dimension mismatch");
    return build_lattice(red);
}

/// Adjacency matrix of a graph: potentials on the diagonal, matrix(to, from) = weight.
inline CMatrix graph_to_matrix(const LatticeGraph& g) {
    CMatrix m(g.sites.size(), g.sites.size());
    for (std::size_t i = 0; i < g.sites.size(); ++i) m(i, i) = g.sites[i].potential;
    for (const auto& e : g.edges) m(e.to, e.from) = e.weight;
    return m;
}

/// Triangular lattice sites (j, k, l), j + k + l = n, ordered j desc then k desc.
inline std::vector<ExponentVector> trimer_sites(std::size_t n) {
    std::vector<ExponentVector> out;
    for (std::size_t j = n + 1; j-- > 0;)
        for (std::size_t k = n - j + 1; k-- > 0;) {
            const auto l = n - j - k;
            out.push_back({{static_cast<std::uint32_t>(j), static_cast<std::uint32_t>(k),
                            static_cast<std::uint32_t>(l)}});
        }
    return out;
}

/// Symmetric trimer [[d1, alpha, gamma], [alpha, d2, beta], [gamma, beta, d3]].
inline ModeSystem trimer_m1(const std::array<Complex, 3>& deltas, Complex alpha, Complex beta,
                            Complex gamma) {
    return ModeSystem(CMatrix{{deltas[0], alpha, gamma}, {alpha, deltas[1], beta}, {gamma, beta, deltas[2]}},
                      {"a1", "a2", "a3"});
}

/**
 * Explicit triangular-lattice Hamiltonian for a three-mode system with site
 * potentials j*d1 + k*d2 + l*d3 and hopping coefficients f_q = q * xi.
 *
 * Each site (j,k,l) couples to its six neighbours; the matrix entry at
 * [site, neighbour] is f of the site's own exponent in the slot that loses a
 * quantum. The Hermitian-conjugate group of the written Hamiltonian lists the
 * same directed pairs again and is not added twice.
 */
inline CMatrix trimer_hamiltonian(std::size_t n, const std::array<Complex, 3>& deltas, Complex alpha,
                                  Complex beta, Complex gamma) {
    if (n == 0) throw DimensionError("trimer_hamiltonian: N must be >= 1");
    const auto sites = trimer_sites(n);
    std::map<std::array<std::int64_t, 3>, std::size_t> index;
    for (std::size_t i = 0; i < sites.size(); ++i) {
        const auto& c = sites[i].counts;
        index[{c[0], c[1], c[2]}] = i;
    }
    // (slot losing a quantum, slot gaining one, coupling)
    const std::array<std::tuple<int, int, Complex>, 6> hops{{
        {0, 1, alpha}, {0, 2, gamma}, {1, 2, beta}, {1, 0, alpha}, {2, 0, gamma}, {2, 1, beta},
    }};
    CMatrix h(sites.size(), sites.size());
    for (std::size_t i = 0; i < sites.size(); ++i) {
        const auto& c = sites[i].counts;
        h(i, i) = static_cast<double>(c[0]) * deltas[0] + static_cast<double>(c[1]) * deltas[1] +
                  static_cast<double>(c[2]) * deltas[2];
        for (const auto& [lose, gain, xi] : hops) {
            const std::uint32_t q = c[lose];
            if (q == 0) continue;
            std::array<std::int64_t, 3> nb{c[0], c[1], c[2]};
            --nb[lose];
            ++nb[gain];
            h(i, index.at(nb)) += static_cast<double>(q) * xi;
        }
    }
    return h;
}

/// Replaces M1(i, j) by eta, reduces at order m and returns the lattice.
inline LatticeGraph asymmetric_m1_probe(const ModeSystem& sys, std::size_t i, std::size_t j,
                                        Complex eta, std::size_t m,
                                        ReductionMode mode = ReductionMode::average) {
    if (i >= sys.dim() || j >= sys.dim()) throw DimensionError("asymmetric_m1_probe: index out of range");
    CMatrix m1 = sys.m1();
    m1(i, j) = eta;
    const ModeSystem probed(m1, sys.labels());
    return build_lattice(reduce(probed, m, mode), probed);
}

}  // namespace simplexlat
