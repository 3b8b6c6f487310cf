#pragma once

// Uniform-grid convex analysis: grids, extended-real grid functions, lower
// convex envelopes, discrete Legendre-Fenchel transforms, second-difference
// moduli, Besov seminorms and the C^{1,1}/C K-functional proxy.

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace phj {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

class Grid1D {
public:
    Grid1D(double lo, double hi, std::size_t n);

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    std::size_t size() const { return n_; }
    double spacing() const { return spacing_; }
    double length() const { return hi_ - lo_; }

    double point(std::size_t i) const { return lo_ + static_cast<double>(i) * spacing_; }
    std::vector<double> points() const;

    bool operator==(const Grid1D& other) const;

private:
    double lo_;
    double hi_;
    std::size_t n_;
    double spacing_;
};

/// Inclusive index range [first, last] of finite entries.
struct IndexRange {
    std::size_t first = 0;
    std::size_t last = 0;
    std::size_t count() const { return last - first + 1; }
};

/// Samples of an extended-real function on a uniform grid. Entries are either
/// finite or +inf, and the finite entries form one contiguous index range.
class GridFunction {
public:
    GridFunction(Grid1D grid, std::vector<double> values);

    template <typename F>
    static GridFunction sample(const Grid1D& grid, F&& f) {
        std::vector<double> v(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) v[i] = f(grid.point(i));
        return GridFunction(grid, std::move(v));
    }

    const Grid1D& grid() const { return grid_; }
    std::span<const double> values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    std::size_t size() const { return values_.size(); }

    /// Empty when every entry is +inf.
    std::optional<IndexRange> effective_domain() const { return domain_; }
    bool all_finite() const;

    /// Max |value| over the finite entries (0 when none).
    double sup_norm() const;
    /// Max |adjacent slope| over consecutive finite entries.
    double max_slope() const;

    /// Piecewise-linear interpolation; +inf outside the effective domain and
    /// linear extrapolation with the end slopes beyond [lo, hi].
    double interpolate(double x) const;

private:
    Grid1D grid_;
    std::vector<double> values_;
    std::optional<IndexRange> domain_;
};

/// Discrete second differences >= -tol * max(1, sup_norm) on the effective domain.
bool is_discretely_convex(const GridFunction& f, double rel_tol = 1e-12);

GridFunction convex_envelope(const GridFunction& f);

/// p -> max_x (p x - f(x)) over the finite nodes of f, exhaustively, O(n m).
GridFunction legendre(const GridFunction& f, const Grid1D& dual);

/// Same transform via a two-pointer sweep, O(n + m). Only valid when f is
/// discretely convex; the caller is responsible for that certificate.
GridFunction legendre_convex(const GridFunction& f, const Grid1D& dual);

/// Conjugate of the radial function g(|p|) evaluated radially:
/// q -> max_{r >= 0} (r q - g(r)) for a profile on [0, L] and dual q in [0, R].
GridFunction monotone_conjugate(const GridFunction& profile, const Grid1D& dual);

/// legendre twice, masked to the effective domain of f.
GridFunction biconjugate(const GridFunction& f, const Grid1D& dual);

/// Exponent for L^p norms; infinity selects the sup norm.
inline constexpr double kSupNorm = kInf;

/// sup over grid-representable |h| <= t of ||f(.+h) + f(.-h) - 2 f||_{L^p}
/// on the nodes where both shifts exist. Left-endpoint Riemann quadrature.
double second_difference_modulus(const GridFunction& f, double t, double p);

struct BesovResult {
    double value = 0.0;               // l^q combination of the retained terms
    std::vector<double> terms;        // modulus(2^-k) / 2^{-k s}
    std::vector<double> partial_sums; // running l^q sums (q-th powers for finite q)
    int levels_used = 0;              // dyadic levels resolved by the grid
    double tail_estimate = 0.0;       // geometric extrapolation of the missing tail
    bool divergent = false;           // terms do not decay geometrically
    bool converged = false;           // tail within tol * max(1, value)
};

BesovResult besov_seminorm(const GridFunction& f, double s, double p, double q, int n_levels,
                           double tol = 1e-6);

/// ||f||_inf + t * second_difference_modulus(f, t^{-1/2}, inf). Two-sided proxy
/// for K(t, f, C^{1,1}, C); the lower equivalence constant is 1/5.
double k_c11_estimate(const GridFunction& f, double t);

inline constexpr double kKC11LowerConstant = 0.2;

struct KEntry {
    int level = 0;
    double upper = 0.0;
};

/// Dyadic table of K-functional upper bounds. LargeArgument stores K(2^n),
/// SmallArgument stores K(2^-n).
struct KProfile {
    enum class Orientation { LargeArgument, SmallArgument };
    Orientation orientation = Orientation::SmallArgument;
    std::vector<KEntry> entries;

    double argument(const KEntry& e) const;
    /// Nonnegativity plus monotonicity in the level (nondecreasing K(t) in t).
    bool satisfies_invariants(double tol = 1e-12) const;
};

KProfile k_c11_profile(const GridFunction& f, int n_max);

// CSV with header "x,value"; +inf written as "inf".
void write_csv(std::ostream& os, const GridFunction& f);
GridFunction read_grid_function_csv(std::istream& is);

}  // namespace phj
