#pragma once

// Driving paths: construction (teeth, Brownian samples, scaled random walks,
// mollification) and regularity functionals (oscillation partitions,
// p-variation, Hoelder and L^1 moduli, K-functional estimators).

#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

#include "phj/grid_convex.hpp"

namespace phj {

/// Affine interpolation of knots (t_i, w_i) with t_0 = 0, w_0 = 0 and strictly
/// increasing times.
class PiecewiseLinearPath {
public:
    PiecewiseLinearPath(std::vector<double> times, std::vector<double> values);

    static PiecewiseLinearPath zero(double T);

    std::size_t knot_count() const { return t_.size(); }
    const std::vector<double>& times() const { return t_; }
    const std::vector<double>& values() const { return w_; }
    double horizon() const { return t_.back(); }

    /// W(t) for t in [0, T]; range error outside.
    double operator()(double t) const;

    double sup_norm() const;
    double total_variation() const;
    /// max / min of W over [0, t].
    double running_max(double t) const;
    double running_min(double t) const;

    /// a * W.
    PiecewiseLinearPath scaled(double a) const;

private:
    std::vector<double> t_;
    std::vector<double> w_;
};

/// a * W1 + b * W2 on the union of knots; the horizons must agree.
PiecewiseLinearPath combine(double a, const PiecewiseLinearPath& W1, double b,
                            const PiecewiseLinearPath& W2);
/// Exact sup |W1 - W2| (attained on the union of knots).
double sup_distance(const PiecewiseLinearPath& W1, const PiecewiseLinearPath& W2);

struct Partition {
    std::vector<double> breakpoints;
    std::size_t intervals() const { return breakpoints.empty() ? 0 : breakpoints.size() - 1; }
};

struct RngSeed {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
};

/// Engine keyed by (seed, stream) through a splitmix64 mixing step.
std::mt19937_64 make_engine(RngSeed rng);

/// Sawtooth with unit slopes on [0, duration], value 1 at odd integers.
PiecewiseLinearPath teeth(double duration);

/// t -> amp * 2^{-n alpha} W(2^n t) on [0, T]; T defaults to horizon / 2^n.
PiecewiseLinearPath scale_path(const PiecewiseLinearPath& W, int n, double alpha, double amp);
PiecewiseLinearPath scale_path(const PiecewiseLinearPath& W, int n, double alpha, double amp,
                               double T);

/// Standard Brownian motion sampled at steps + 1 equispaced times.
PiecewiseLinearPath brownian(double T, std::size_t steps, RngSeed rng);

/// +-1 steps drawn from the engine for (seed, stream).
std::vector<int> random_walk_steps(std::size_t count, RngSeed rng);

/// W_n(t) = zeta(n^2 t) / n, with zeta the interpolated walk given by steps.
PiecewiseLinearPath walk_path(const std::vector<int>& steps, int n, double T);
PiecewiseLinearPath scaled_random_walk(int n, double T, RngSeed rng);

/// Walk embedded in a sampled path B: step k is the sign of the first knot
/// where |B - B(restart)| >= level, restarting at that knot. Steps are iid fair
/// signs when B has symmetric independent increments. Range error if B exits
/// fewer than count times.
std::vector<int> embedded_walk_steps(const PiecewiseLinearPath& B, double level, std::size_t count);

/// Knots of W at every stride-th index up to index stride * pieces.
PiecewiseLinearPath subsample(const PiecewiseLinearPath& W, std::size_t stride, std::size_t pieces);

/// Convolution with the hat kernel (delta - |s|)_+ / delta^2, sampled every
/// delta / 8. W is reflected oddly through the origin on the left and held
/// constant past T, so the result starts at 0 and affine paths are unchanged.
PiecewiseLinearPath mollify(const PiecewiseLinearPath& W, double delta);

/// First-exit partition: a new breakpoint whenever the range of W since the
/// last breakpoint reaches delta.
Partition greedy_oscillation_partition(const PiecewiseLinearPath& W, double delta);
std::size_t count_N(const PiecewiseLinearPath& W, double delta);
/// Greedy partition at delta = 2^{-n/2}.
Partition bm_refinement_partition(const PiecewiseLinearPath& W, int n);

/// Exact p-variation by dynamic programming over turning points.
double p_variation(const PiecewiseLinearPath& W, double p);
/// Exact C^{0,alpha} seminorm (the maximum is attained at a pair of knots).
double holder_seminorm(const PiecewiseLinearPath& W, double alpha);

/// Upper bounds for K(2^{-n}, W, C_0, W^{1,1}), n = 0..n_max.
KProfile k_path_profile(const PiecewiseLinearPath& W, int n_max);
/// sup_n (p = inf) or l^p sum of 2^{n alpha} K(2^{-n}).
double p_alpha_norm(const PiecewiseLinearPath& W, double alpha, double p, int n_max);

/// First-exit epochs tau_k of |zeta - zeta(tau_{k-1})| = M within the walk.
std::vector<std::size_t> walk_exit_times(const std::vector<int>& steps, int M);
/// K^M(t) = 1 + #{k >= 1 : tau_k < t}. Needs at least ceil(t) - 1 steps.
std::size_t walk_exit_count(const std::vector<int>& steps, int M, double t);

/// Exact integral of |W(t + h) - W(t)| over [0, T - h].
double path_L1_modulus(const PiecewiseLinearPath& W, double h);

/// FNV-1a over the knot bytes; identifies a path in run metadata.
std::uint64_t path_hash(const PiecewiseLinearPath& W);

/// CSV "t,w".
void write_csv(std::ostream& os, const PiecewiseLinearPath& W);
PiecewiseLinearPath read_path_csv(std::istream& is);
void write_csv(std::ostream& os, const Partition& P);

}  // namespace phj
