#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "cxmat.hpp"
#include "eig.hpp"
#include "matching.hpp"
#include "moments.hpp"

namespace simplexlat {

/// Degenerate parametric (subharmonic) oscillator: detuning and pump coupling.
struct SubharmonicParams {
    double delta = 0.0;
    double g = 0.0;
};

/// M1 = [[-i delta, -g], [-g, i delta]] on the Nambu pair (a, a†).
/// Eigenvalues are ±sqrt(g^2 - delta^2); g = delta is the exceptional point.
inline ModeSystem subharmonic_m1(const SubharmonicParams& p) {
    if (!std::isfinite(p.delta) || !std::isfinite(p.g)) {
        throw DimensionError("subharmonic_m1: non-finite parameter");
    }
    if (p.g < 0.0) throw DimensionError("subharmonic_m1: g must be >= 0");
    const Complex i{0.0, 1.0};
    return ModeSystem(CMatrix{{-i * p.delta, -p.g}, {-p.g, i * p.delta}}, {"a", "a†"});
}

/// The diagonal 8x8 perturbation that resolves the diabolically degenerate EP
/// of the third-order subharmonic moments.
inline CMatrix ddep_perturbation() {
    const std::array<double, 8> pattern{1, 0, 0, 1, 0, 1, 0, 0};
    CMatrix p(8, 8);
    for (std::size_t i = 0; i < 8; ++i) p(i, i) = pattern[i];
    return p;
}

/// `points` log-spaced values from lo to hi inclusive.
inline std::vector<double> log_grid(double lo, double hi, std::size_t points) {
    if (!(lo > 0.0) || !(hi > lo) || points < 2) {
        throw DimensionError("log_grid: need 0 < lo < hi and at least 2 points");
    }
    std::vector<double> out(points);
    const double a = std::log10(lo), b = std::log10(hi);
    for (std::size_t k = 0; k < points; ++k) {
        out[k] = std::pow(10.0, a + (b - a) * static_cast<double>(k) / static_cast<double>(points - 1));
    }
    out.front() = lo;
    out.back() = hi;
    return out;
}

struct SweepResult {
    std::vector<double> epsilons;
    std::vector<CVector> tracks;          ///< tracks[e] = sorted spectrum at epsilons[e]
    std::vector<CVector> matched_tracks;  ///< matched_tracks[t][e], continued across epsilon
};

namespace detail {

/// Greedy nearest-pair assignment prev[i] -> next[assign[i]], falling back to
/// the optimal assignment when greedy pays more than it.
inline std::vector<std::size_t> continue_tracks(const CVector& prev, const CVector& next) {
    const std::size_t n = prev.size();
    std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
    pairs.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) pairs.emplace_back(std::abs(prev[i] - next[j]), i, j);
    std::sort(pairs.begin(), pairs.end());
    std::vector<std::size_t> greedy(n, n);
    std::vector<char> taken(n, 0);
    double greedy_cost = 0.0;
    for (const auto& [d, i, j] : pairs) {
        if (greedy[i] != n || taken[j]) continue;
        greedy[i] = j;
        taken[j] = 1;
        greedy_cost += d;
    }
    const auto optimal = match_points(prev, next);
    double optimal_cost = 0.0;
    for (std::size_t i = 0; i < n; ++i) optimal_cost += std::abs(prev[i] - next[optimal[i]]);
    const double slack = 1e-12 * std::max(greedy_cost, 1.0);
    return optimal_cost + slack < greedy_cost ? optimal : greedy;
}

}  // namespace detail

/// Spectrum of m + eps * p along an ascending positive grid, with eigenvalue
/// trajectories continued by minimal displacement between neighbouring steps.
inline SweepResult perturb_sweep(const CMatrix& m, const CMatrix& p, std::span<const double> grid) {
    if (!m.square() || m.rows() != p.rows() || m.cols() != p.cols()) {
        throw DimensionError("perturb_sweep: matrix and perturbation must be the same square size");
    }
    if (grid.empty()) throw DimensionError("perturb_sweep: empty grid");
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (!(grid[k] > 0.0) || (k > 0 && !(grid[k] > grid[k - 1]))) {
            throw DimensionError("perturb_sweep: grid must be positive and strictly ascending");
        }
    }
    const std::size_t n = m.rows();
    SweepResult out;
    out.epsilons.assign(grid.begin(), grid.end());
    out.tracks.reserve(grid.size());
    for (double eps : grid) {
        try {
            out.tracks.push_back(eigvals(m + eps * p));
        } catch (const ConvergenceError& e) {
            throw ConvergenceError("perturb_sweep at eps=" + std::to_string(eps) + ": " + e.what());
        }
    }
    out.matched_tracks.assign(n, CVector(grid.size()));
    CVector current = out.tracks.front();
    for (std::size_t t = 0; t < n; ++t) out.matched_tracks[t][0] = current[t];
    for (std::size_t e = 1; e < grid.size(); ++e) {
        const auto assign = detail::continue_tracks(current, out.tracks[e]);
        for (std::size_t t = 0; t < n; ++t) {
            current[t] = out.tracks[e][assign[t]];
            out.matched_tracks[t][e] = current[t];
        }
    }
    return out;
}

struct ExponentFit {
    double exponent = 0.0;
    double r_squared = 0.0;
    std::pair<double, double> window;
};

/// Least-squares slope of log|y| against log x. Requires >= `min_points`
/// samples spanning >= `min_decades` decades.
inline ExponentFit fit_power_law(std::span<const double> x, std::span<const double> y,
                                 std::size_t min_points = 10, double min_decades = 2.0) {
    if (x.size() != y.size()) throw FitError("fit: x and y lengths differ");
    if (x.size() < min_points) {
        throw FitError("fit: " + std::to_string(x.size()) + " points, need " + std::to_string(min_points));
    }
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    if (!(*lo > 0.0) || std::log10(*hi / *lo) < min_decades - 1e-9) {
        throw FitError("fit: window must be positive and span at least " + std::to_string(min_decades) +
                       " decades");
    }
    std::vector<double> lx(x.size()), ly(y.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (!(y[k] > 0.0)) throw FitError("fit: track magnitude not strictly positive");
        lx[k] = std::log(x[k]);
        ly[k] = std::log(y[k]);
    }
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
    const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t k = 0; k < lx.size(); ++k) {
        sxx += (lx[k] - mx) * (lx[k] - mx);
        sxy += (lx[k] - mx) * (ly[k] - my);
        syy += (ly[k] - my) * (ly[k] - my);
    }
    const auto [ymin, ymax] = std::minmax_element(y.begin(), y.end());
    if (*ymax - *ymin <= 1e-14 * *ymax) throw FitError("fit: constant track");
    ExponentFit f;
    f.exponent = sxy / sxx;
    f.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    f.window = {*lo, *hi};
    return f;
}

/// Splitting exponent of one matched track: slope of log|lambda(eps)| vs log eps.
inline ExponentFit fit_splitting_exponent(const SweepResult& r, std::size_t track) {
    if (track >= r.matched_tracks.size()) throw FitError("fit: track index out of range");
    std::vector<double> mag(r.epsilons.size());
    for (std::size_t e = 0; e < mag.size(); ++e) mag[e] = std::abs(r.matched_tracks[track][e]);
    return fit_power_law(r.epsilons, mag);
}

/// Rigorous upper bound on the spectral radius: min over k <= max_power of
/// ||m^k||_F^(1/k). Exact zero certifies nilpotency, which rounding in QR
/// cannot resolve for high-order exceptional points.
inline double spectral_radius_bound(const CMatrix& m, std::size_t max_power) {
    if (!m.square()) throw DimensionError("spectral_radius_bound: matrix must be square");
    double best = frob_norm(m);
    CMatrix power = m;
    for (std::size_t k = 2; k <= max_power && best > 0.0; ++k) {
        power = matmul(power, m);
        best = std::min(best, std::pow(frob_norm(power), 1.0 / static_cast<double>(k)));
    }
    return best;
}

inline double spectral_radius(const CVector& eigenvalues) {
    double r = 0.0;
    for (const auto& z : eigenvalues) r = std::max(r, std::abs(z));
    return r;
}

}  // namespace simplexlat
