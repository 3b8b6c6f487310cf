#pragma once

// Solvers for du = H(Du) dW in one space dimension: the conjugate-space
// (Hopf) engine for convex radial data, a monotone Lax-Friedrichs scheme for
// general data, two-sided envelope bounds and closed-form oracles for the
// teeth scenario.

#include <optional>
#include <vector>

#include "phj/dc_toolkit.hpp"
#include "phj/grid_convex.hpp"
#include "phj/paths.hpp"

namespace phj {

/// Convex conjugate u*(., t) of a radial convex solution on a dual grid [0, L].
struct ConjugateState {
    Grid1D dual_grid;
    GridFunction values;
    double time = 0.0;
    double slope_bound = 0.0;
};

/// u0* on [0, L] from a convex radial profile on [0, R]. The profile is read as
/// continued with slope L beyond R, so nodes of [0, R] suffice.
ConjugateState conjugate_init(const GridFunction& u0_profile, double L, const Grid1D& dual_grid);

/// envelope(u* - dW * H) with the even reflection across r = 0.
ConjugateState hopf_step(const ConjugateState& state, const Hamiltonian1D& H, double dW);

/// One hopf_step per increment between consecutive knots and sample times;
/// returns the states at the sample times, in the order given.
std::vector<ConjugateState> hopf_solve(const ConjugateState& init, const Hamiltonian1D& H,
                                       const PiecewiseLinearPath& W,
                                       const std::vector<double>& sample_times);
std::vector<ConjugateState> hopf_solve(const GridFunction& u0_profile, double L,
                                       const Grid1D& dual_grid, const Hamiltonian1D& H,
                                       const PiecewiseLinearPath& W,
                                       const std::vector<double>& sample_times);

/// u(x) = max_r (r |x| - u*(r)) over the finite dual nodes.
std::vector<double> eval_primal(const ConjugateState& state, const std::vector<double>& xs);
double eval_primal(const ConjugateState& state, double x);
/// Primal solution sampled on the nodes of a grid.
GridFunction primal_on(const ConjugateState& state, const Grid1D& x_grid);

/// S_H(tau) phi for min H = 0, returned on phi's grid. Only the normalization is
/// enforced; the two-sided bounds built from it are guaranteed for convex H.
/// A negative tau runs the backward flow, needed when W_*(t) < 0.
GridFunction s_convex(const GridFunction& phi, const Hamiltonian1D& H, double tau,
                      const Grid1D& dual_grid);

enum class CompositionOrder { ListOrder, Reversed };

struct EnvelopePair {
    const Hamiltonian1D* H;
    const PiecewiseLinearPath* W;
};

struct EnvelopeBounds {
    GridFunction lower;
    GridFunction upper;
};

/// lower: S_{H_j}(min_{s<=t} W_j) composed; upper: S_{H_j}(max_{s<=t} W_j).
EnvelopeBounds envelope_bounds(const GridFunction& u0_profile, const std::vector<EnvelopePair>& pairs,
                               double t, const Grid1D& dual_grid,
                               CompositionOrder order = CompositionOrder::ListOrder);

struct FDSnapshot {
    double time;
    GridFunction u;
};

struct FDResult {
    Grid1D x_grid;
    std::vector<FDSnapshot> snapshots;  // sorted by time
    double cfl_used = 0.0;
    long long steps = 0;

    const GridFunction& at(double t) const;
};

struct FDOptions {
    double cfl = 0.9;
    /// Lipschitz constant of H used for the viscosity coefficient; defaults to
    /// H.lipschitz_bound().
    std::optional<double> lipschitz;
};

/// x -> profile(|x|) on a full-line grid.
GridFunction radial_extension(const GridFunction& profile, const Grid1D& x_grid);

/// Lax-Friedrichs scheme along W. u0 is sampled onto x_grid; ghost cells
/// extend linearly with the initial boundary slopes.
FDResult fd_solve(const GridFunction& u0, const Hamiltonian1D& H, const PiecewiseLinearPath& W,
                  const Grid1D& x_grid, const std::vector<double>& sample_times,
                  const FDOptions& options = {});

struct StabilityReport {
    double sup_difference = 0.0;
    double path_distance = 0.0;    // ||W1 - W2||_inf
    double dc_bound = 0.0;         // norm_upper(H) * ||W1 - W2||_inf
    double ratio_dc = 0.0;         // sup_difference / dc_bound (0 when the bound is 0)
    std::optional<double> easy_bound;  // sup_{|p|<=L} |H| * TV(W1 - W2)
    std::optional<double> ratio_easy;
    bool used_conjugate_engine = false;
};

struct StabilityOptions {
    std::size_t dual_nodes = 2049;
    double fd_dx = 1.0 / 128.0;
};

/// Solves along W1 and W2 (conjugate engine for convex u0 with even H, FD
/// otherwise) and compares the sup difference with the DC bound.
StabilityReport stability_report(const DCFunction1D& H, const PiecewiseLinearPath& W1,
                                 const PiecewiseLinearPath& W2, const GridFunction& u0_profile,
                                 double L, const StabilityOptions& options = {});

struct ToothRecursion {
    std::vector<double> a;          // a[k-1] = a_k
    std::vector<double> lower;      // beta^{-(1-beta)} k^{1-beta}
    std::vector<double> statistic;  // (b_k - b_1 - (k-1)/beta) / log k, 0 at k = 1
    bool lower_bound_holds = true;
    std::size_t first_violation = 0;  // k of the first violation, 0 if none
};

/// a_{k+1} = a_k + ((1-beta)/beta) a_k^{-beta/(1-beta)}, iterated in long double.
ToothRecursion tooth_recursion(double a1, double beta, std::size_t k_max);

/// Exact solution on [0, 2] along one tooth for u0 = |x| v a and
/// H = |p|^beta / beta.
double closedform_tooth_solution(double beta, double a, double x, double t);

/// H(p) = c |p|^beta sampled on [0, L] with n nodes and exact off-grid values.
Hamiltonian1D power_hamiltonian(double beta, double c, double L, std::size_t n);

}  // namespace phj
