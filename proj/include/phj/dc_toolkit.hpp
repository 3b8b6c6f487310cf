#pragma once

// Difference-of-convex calculus on uniform 1-D grids and K-functional
// diagnostics for Hamiltonians between DC and continuous functions.

#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "phj/grid_convex.hpp"

namespace phj {

/// f = part_plus - part_minus at every node, with both parts discretely convex.
/// norm_upper is ||part_plus||_inf + ||part_minus||_inf, an upper bound for the
/// DC norm of f (an infimum over all decompositions).
class DCFunction1D {
public:
    /// Validates shared grid, finiteness and convexity (tol 1e-12 * scale).
    DCFunction1D(GridFunction part_plus, GridFunction part_minus);

    const GridFunction& part_plus() const { return plus_; }
    const GridFunction& part_minus() const { return minus_; }
    const Grid1D& interval() const { return plus_.grid(); }
    double norm_upper() const { return norm_upper_; }

    /// Represented function part_plus - part_minus.
    GridFunction values() const;

private:
    GridFunction plus_;
    GridFunction minus_;
    double norm_upper_;
};

/// Splits second differences into positive and negative masses. The affine
/// remainder is absorbed by part_plus, then a common affine function is
/// subtracted from both parts to shrink the norm (kept only if it helps).
DCFunction1D dc_split(const GridFunction& f);

/// Result of the affine normalization search.
struct AffineShift {
    double slope = 0.0;
    double intercept = 0.0;
    double norm = 0.0;  // ||plus - l||_inf + ||minus - l||_inf at the optimum
};

/// Golden-section search over the slope (64 iterations); for a fixed slope the
/// optimal intercept is available in closed form.
AffineShift optimal_affine_shift(const DCFunction1D& f);

/// Subtracts the affine function l(x) = slope * x + intercept from both parts.
DCFunction1D shift_parts(const DCFunction1D& f, double slope, double intercept);

double dc_norm_upper(const DCFunction1D& f, bool optimize_affine);

/// max{f, g} = max{f1 + g2, f2 + g1} - (f2 + g2).
DCFunction1D dc_max(const DCFunction1D& f, const DCFunction1D& g);
/// min{f, g} = (f1 + g1) - max{f2 + g1, f1 + g2}.
DCFunction1D dc_min(const DCFunction1D& f, const DCFunction1D& g);

/// H(p) on a 1-D grid: either a radial profile on [0, L] evaluated at |p|, or a
/// general function on [-L, L].
class Hamiltonian1D {
public:
    enum class Symmetry { Radial, General };

    Hamiltonian1D(GridFunction profile, Symmetry symmetry);
    /// Attaches an exact evaluator used off the grid (and by the FD solver).
    Hamiltonian1D(GridFunction profile, Symmetry symmetry, std::function<double(double)> exact);

    template <typename F>
    static Hamiltonian1D radial(double L, std::size_t n, F&& f) {
        Grid1D g(0.0, L, n);
        std::function<double(double)> fn = f;
        return Hamiltonian1D(GridFunction::sample(g, fn), Symmetry::Radial, fn);
    }

    const GridFunction& profile() const { return profile_; }
    Symmetry symmetry() const { return symmetry_; }
    bool convex_flag() const { return convex_; }
    double lipschitz_bound() const { return lipschitz_; }
    double min_value() const { return min_value_; }
    /// Radius L of the slope ball on which the profile is defined.
    double radius() const;

    double operator()(double p) const;

    /// Same Hamiltonian with the profile scaled by c (c >= 0 keeps convexity).
    Hamiltonian1D scaled(double c) const;

private:
    GridFunction profile_;
    Symmetry symmetry_;
    std::function<double(double)> exact_;
    bool convex_ = false;
    double lipschitz_ = 0.0;
    double min_value_ = 0.0;
};

struct TruncationResult {
    DCFunction1D dc;
    GridFunction values;     // H_{beta,delta} sampled directly (no part cancellation)
    double sup_error = 0.0;  // max over nodes of | |p|^beta - H_{beta,delta}(p) |
};

/// H_{beta,delta}(p) = |p|^beta v delta^beta on the grid over [-L, L] with
/// part_plus = beta delta^{beta-1} (|p| - delta)_+. For delta == L the parts are
/// (delta^beta, 0).
TruncationResult power_dc_truncation(double beta, double delta, double L, std::size_t n_nodes = 4097);
TruncationResult power_dc_truncation(double beta, double delta, const Grid1D& grid);

/// A K-functional candidate g: DC norm bound and ||f - g||_inf.
struct KCandidate {
    double norm = 0.0;
    double err = 0.0;
};

/// Candidate from a decomposition; err uses part_plus - part_minus.
KCandidate make_candidate(const GridFunction& f, const DCFunction1D& g);
/// Same, with the represented values supplied directly. Large parts make
/// part_plus - part_minus lose digits, so exact samples are preferable.
KCandidate make_candidate(const GridFunction& f, const DCFunction1D& g, const GridFunction& g_values);

struct TruncationStrategy {
    /// Use dc_split(f) itself as a candidate.
    bool exact_split = true;
    /// dc_split of hat-kernel mollifications at dyadic kernel widths.
    bool mollify = true;
    /// Smallest mollifier half-width in grid cells.
    int min_kernel_cells = 8;
    /// Extra candidates per level (all levels are pooled).
    std::function<std::vector<KCandidate>(int level)> analytic;
};

/// Hat-kernel smoothing with half-width 2*m cells (two box filters of width
/// 2m+1 cells), constant extension at the ends.
GridFunction hat_mollify(const GridFunction& f, std::size_t m);

/// Upper bounds for K(2^n, f, DC(B_L), C(B_L)), n = 0..n_max.
KProfile k_dc_profile(const GridFunction& f, double L, int n_max,
                      const TruncationStrategy& strategy = {});

struct HMembership {
    std::vector<double> terms;         // 2^{-n alpha} K(2^n), n = 1..N
    std::vector<double> partial_sums;
    double tail_estimate = 0.0;        // geometric extrapolation; inf when terms do not decay
    bool converged = false;            // tail below tol
    std::optional<double> growth_exponent;  // log2 slope of the partial sums when they grow
};

HMembership h_membership_partial_sums(const GridFunction& f, double alpha, double L, int N,
                                      const TruncationStrategy& strategy = {},
                                      double tol = 1e-3);

/// CSV with header "x,part_plus,part_minus".
void write_csv(std::ostream& os, const DCFunction1D& f);

}  // namespace phj
