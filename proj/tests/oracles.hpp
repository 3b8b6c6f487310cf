#pragma once

// Reference constructions shared by the unit tests and the acceptance run.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "phj/grid_convex.hpp"
#include "phj/dc_toolkit.hpp"
#include "phj/paths.hpp"

namespace phj::oracle {

inline double osc(const PiecewiseLinearPath& W, std::size_t i, std::size_t j) {
    const auto& w = W.values();
    const auto [lo, hi] = std::minmax_element(w.begin() + static_cast<long>(i), w.begin() + static_cast<long>(j) + 1);
    return *hi - *lo;
}

// Fewest intervals with oscillation <= delta using knot breakpoints only.
inline std::size_t knot_dp_minimum(const PiecewiseLinearPath& W, double delta) {
    const std::size_t k = W.knot_count();
    std::vector<std::size_t> best(k, std::numeric_limits<std::size_t>::max());
    best[0] = 0;
    const auto& w = W.values();
    for (std::size_t j = 1; j < k; ++j) {
        double lo = w[j], hi = w[j];
        for (std::size_t i = j; i-- > 0;) {
            lo = std::min(lo, w[i]);
            hi = std::max(hi, w[i]);
            if (hi - lo > delta + 1e-12) break;
            if (best[i] != std::numeric_limits<std::size_t>::max()) best[j] = std::min(best[j], best[i] + 1);
        }
    }
    return best[k - 1];
}

// Same minimum by enumerating every subset of interior knots.
inline std::size_t knot_subset_minimum(const PiecewiseLinearPath& W, double delta) {
    const std::size_t inner = W.knot_count() - 2;
    std::size_t best = std::numeric_limits<std::size_t>::max();
    for (std::uint32_t mask = 0; mask < (1u << inner); ++mask) {
        std::size_t prev = 0, count = 0;
        bool ok = true;
        for (std::size_t b = 0; b <= inner && ok; ++b) {
            const std::size_t j = b + 1;
            if (b < inner && !(mask & (1u << b))) continue;
            ok = osc(W, prev, j) <= delta + 1e-12;
            ++count;
            prev = j;
        }
        if (ok) best = std::min(best, count);
    }
    return best;
}

// Inserts every crossing of the levels w_i + k delta as a knot. Breakpoints of
// an optimal partition have values in that set, so a knot DP on the refined
// path is an exhaustive minimum.
inline PiecewiseLinearPath refine_at_levels(const PiecewiseLinearPath& W, double delta) {
    std::vector<double> levels;
    const double lo = *std::min_element(W.values().begin(), W.values().end());
    const double hi = *std::max_element(W.values().begin(), W.values().end());
    for (double v : W.values()) {
        for (double l = v - std::floor((v - lo) / delta) * delta; l <= hi; l += delta) levels.push_back(l);
    }
    std::sort(levels.begin(), levels.end());
    std::vector<double> t{0.0}, w{W.values()[0]};
    for (std::size_t i = 1; i < W.knot_count(); ++i) {
        const double t0 = W.times()[i - 1], t1 = W.times()[i];
        const double w0 = W.values()[i - 1], w1 = W.values()[i];
        std::vector<std::pair<double, double>> cuts;
        for (double l : levels) {
            if ((l > w0 && l < w1) || (l < w0 && l > w1)) cuts.emplace_back(t0 + (l - w0) / (w1 - w0) * (t1 - t0), l);
        }
        std::sort(cuts.begin(), cuts.end());
        for (const auto& [ct, cl] : cuts) {
            if (ct > t.back()) {
                t.push_back(ct);
                w.push_back(cl);
            }
        }
        t.push_back(t1);
        w.push_back(w1);
    }
    return PiecewiseLinearPath(t, w);
}

inline PiecewiseLinearPath random_path(std::mt19937_64& eng, std::size_t knots) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> t{0.0}, w{0.0};
    for (std::size_t i = 1; i < knots; ++i) {
        t.push_back(static_cast<double>(i));
        w.push_back(u(eng) * 2.0);
    }
    return PiecewiseLinearPath(t, w);
}

// Continuous piecewise quadratic with random curvatures on k pieces.
inline GridFunction random_pq(const Grid1D& g, std::mt19937_64& eng, int k) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> curv(static_cast<std::size_t>(k));
    for (double& c : curv) c = 4.0 * u(eng);
    const double slope0 = u(eng), value0 = u(eng);
    const double width = g.length() / k;
    return GridFunction::sample(g, [&](double x) {
        double v = value0, s = slope0, at = g.lo();
        for (int j = 0; j < k; ++j) {
            const double end = std::min(x, at + width);
            const double d = end - at;
            v += s * d + 0.5 * curv[static_cast<std::size_t>(j)] * d * d;
            s += curv[static_cast<std::size_t>(j)] * d;
            at += width;
            if (x <= at) break;
        }
        return v;
    });
}

// max_i (a_i r + b_i): radially convex with slopes in [0, L].
inline GridFunction random_radial(const Grid1D& g, std::mt19937_64& eng, double L) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<std::pair<double, double>> pieces;
    pieces.emplace_back(0.0, u(eng));
    for (int k = 0; k < 4; ++k) pieces.emplace_back(L * u(eng), 2.0 * u(eng) - 1.0);
    return GridFunction::sample(g, [&](double r) {
        double v = -kInf;
        for (const auto& [a, b] : pieces) v = std::max(v, a * r + b);
        return v;
    });
}

// Lipschitz piecewise-linear data on the line with slopes in [-L, L].
inline GridFunction random_line(const Grid1D& g, std::mt19937_64& eng, double L) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> slopes(8);
    for (double& s : slopes) s = L * u(eng);
    const double width = g.length() / 8.0;
    return GridFunction::sample(g, [&](double x) {
        double v = 0.0, at = g.lo();
        for (double s : slopes) {
            const double end = std::min(x, at + width);
            if (end > at) v += s * (end - at);
            at += width;
        }
        return v;
    });
}

inline Hamiltonian1D random_radial_H(std::mt19937_64& eng, double L) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double beta = 0.3 + 1.5 * u(eng);
    const double c = 0.5 + u(eng);
    const double w = 3.0 * u(eng);
    return Hamiltonian1D::radial(L, 513, [beta, c, w](double r) { return c * std::pow(r, beta) - 0.2 * std::sin(w * r); });
}

inline Hamiltonian1D random_general_H(std::mt19937_64& eng, double L) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double a = u(eng), b = u(eng), c = u(eng);
    Grid1D g(-L, L, 401);
    std::function<double(double)> f = [a, b, c](double p) { return a * p + b * std::abs(p) + c * std::sin(2.0 * p); };
    return Hamiltonian1D(GridFunction::sample(g, f), Hamiltonian1D::Symmetry::General, f);
}

}  // namespace phj::oracle
