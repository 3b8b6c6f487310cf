#include "phj/dc_toolkit.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <utility>

#include "phj/errors.hpp"

namespace phj {

namespace {

constexpr double kConvexTol = 1e-12;

std::vector<double> copy_values(const GridFunction& f) {
    return {f.values().begin(), f.values().end()};
}

void require_convex(const GridFunction& g, const char* what) {
    if (!g.all_finite()) throw DomainError(std::string(what) + ": DC parts must be finite");
    if (!is_discretely_convex(g, kConvexTol)) {
        throw ContractViolation(std::string(what) + ": DC part fails the convexity check");
    }
}

}  // namespace

DCFunction1D::DCFunction1D(GridFunction part_plus, GridFunction part_minus)
    : plus_(std::move(part_plus)), minus_(std::move(part_minus)) {
    if (!(plus_.grid() == minus_.grid())) {
        throw InterfaceError("DCFunction1D: parts live on different grids");
    }
    require_convex(plus_, "DCFunction1D");
    require_convex(minus_, "DCFunction1D");
    norm_upper_ = plus_.sup_norm() + minus_.sup_norm();
}

GridFunction DCFunction1D::values() const {
    std::vector<double> v(plus_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = plus_[i] - minus_[i];
    return GridFunction(plus_.grid(), std::move(v));
}

namespace {

// For a fixed slope a: the part g - a x has midrange c and half-range r; the
// intercept minimizing |g - a x - b|_inf + |h - a x - b|_inf gives
// |c_g - c_h| + r_g + r_h, attained for any b between c_g and c_h.
struct Spread {
    double center;
    double radius;
};

Spread spread(const GridFunction& g, double a) {
    double lo = kInf;
    double hi = -kInf;
    const Grid1D& grid = g.grid();
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double v = g[i] - a * grid.point(i);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return {0.5 * (hi + lo), 0.5 * (hi - lo)};
}

double shifted_norm(const DCFunction1D& f, double a, double* intercept) {
    const Spread p = spread(f.part_plus(), a);
    const Spread m = spread(f.part_minus(), a);
    if (intercept) *intercept = 0.5 * (p.center + m.center);
    return std::abs(p.center - m.center) + p.radius + m.radius;
}

}  // namespace

AffineShift optimal_affine_shift(const DCFunction1D& f) {
    const double s = std::max(f.part_plus().max_slope(), f.part_minus().max_slope());
    double lo = -s;
    double hi = s;
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - phi * (hi - lo);
    double x2 = lo + phi * (hi - lo);
    double f1 = shifted_norm(f, x1, nullptr);
    double f2 = shifted_norm(f, x2, nullptr);
    for (int it = 0; it < 64; ++it) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = shifted_norm(f, x1, nullptr);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = shifted_norm(f, x2, nullptr);
        }
    }
    AffineShift best;
    best.slope = 0.5 * (lo + hi);
    best.norm = shifted_norm(f, best.slope, &best.intercept);
    // The zero slope is a common optimum (symmetric data); check it explicitly.
    double b0 = 0.0;
    const double n0 = shifted_norm(f, 0.0, &b0);
    if (n0 <= best.norm) best = {0.0, b0, n0};
    return best;
}

DCFunction1D shift_parts(const DCFunction1D& f, double slope, double intercept) {
    const Grid1D& g = f.interval();
    std::vector<double> p = copy_values(f.part_plus());
    std::vector<double> m = copy_values(f.part_minus());
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double l = slope * g.point(i) + intercept;
        p[i] -= l;
        m[i] -= l;
    }
    return DCFunction1D(GridFunction(g, std::move(p)), GridFunction(g, std::move(m)));
}

DCFunction1D dc_split(const GridFunction& f) {
    if (!f.all_finite()) throw DomainError("dc_split: input must be finite at every node");
    const std::size_t n = f.size();
    // Double cumulative sum of the negative second-difference mass; then
    // f + M has second differences equal to the positive mass.
    std::vector<double> m(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double d = f[i + 1] - 2.0 * f[i] + f[i - 1];
        m[i + 1] = 2.0 * m[i] - m[i - 1] + std::max(-d, 0.0);
    }
    std::vector<double> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = f[i] + m[i];
    DCFunction1D raw(GridFunction(f.grid(), std::move(p)), GridFunction(f.grid(), std::move(m)));

    const AffineShift s = optimal_affine_shift(raw);
    if (s.norm < raw.norm_upper() * (1.0 - 1e-12)) {
        DCFunction1D shifted = shift_parts(raw, s.slope, s.intercept);
        if (shifted.norm_upper() < raw.norm_upper()) return shifted;
    }
    return raw;
}

double dc_norm_upper(const DCFunction1D& f, bool optimize_affine) {
    if (!optimize_affine) return f.norm_upper();
    return std::min(f.norm_upper(), optimal_affine_shift(f).norm);
}

namespace {

void require_same_grid(const DCFunction1D& f, const DCFunction1D& g) {
    if (!(f.interval() == g.interval())) throw InterfaceError("DC operands live on different grids");
}

}  // namespace

DCFunction1D dc_max(const DCFunction1D& f, const DCFunction1D& g) {
    require_same_grid(f, g);
    const std::size_t n = f.interval().size();
    std::vector<double> plus(n);
    std::vector<double> minus(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = f.part_plus()[i] + g.part_minus()[i];
        const double b = f.part_minus()[i] + g.part_plus()[i];
        plus[i] = std::max(a, b);
        minus[i] = f.part_minus()[i] + g.part_minus()[i];
    }
    return DCFunction1D(GridFunction(f.interval(), std::move(plus)),
                        GridFunction(f.interval(), std::move(minus)));
}

DCFunction1D dc_min(const DCFunction1D& f, const DCFunction1D& g) {
    require_same_grid(f, g);
    const std::size_t n = f.interval().size();
    std::vector<double> plus(n);
    std::vector<double> minus(n);
    for (std::size_t i = 0; i < n; ++i) {
        plus[i] = f.part_plus()[i] + g.part_plus()[i];
        minus[i] = std::max(f.part_minus()[i] + g.part_plus()[i], f.part_plus()[i] + g.part_minus()[i]);
    }
    return DCFunction1D(GridFunction(f.interval(), std::move(plus)),
                        GridFunction(f.interval(), std::move(minus)));
}

Hamiltonian1D::Hamiltonian1D(GridFunction profile, Symmetry symmetry)
    : Hamiltonian1D(std::move(profile), symmetry, {}) {}

Hamiltonian1D::Hamiltonian1D(GridFunction profile, Symmetry symmetry,
                             std::function<double(double)> exact)
    : profile_(std::move(profile)), symmetry_(symmetry), exact_(std::move(exact)) {
    if (!profile_.all_finite()) throw DomainError("Hamiltonian1D: profile must be finite");
    if (symmetry_ == Symmetry::Radial && profile_.grid().lo() != 0.0) {
        throw InterfaceError("Hamiltonian1D: radial profile must start at r = 0");
    }
    convex_ = is_discretely_convex(profile_, kConvexTol);
    if (symmetry_ == Symmetry::Radial && profile_[1] < profile_[0]) convex_ = false;
    lipschitz_ = profile_.max_slope();
    const auto v = profile_.values();
    min_value_ = *std::min_element(v.begin(), v.end());
}

double Hamiltonian1D::radius() const {
    const Grid1D& g = profile_.grid();
    return symmetry_ == Symmetry::Radial ? g.hi() : std::max(std::abs(g.lo()), std::abs(g.hi()));
}

double Hamiltonian1D::operator()(double p) const {
    const double x = symmetry_ == Symmetry::Radial ? std::abs(p) : p;
    return exact_ ? exact_(x) : profile_.interpolate(x);
}

Hamiltonian1D Hamiltonian1D::scaled(double c) const {
    std::vector<double> v = copy_values(profile_);
    for (double& x : v) x *= c;
    std::function<double(double)> ex;
    if (exact_) {
        ex = [inner = exact_, c](double x) { return c * inner(x); };
    }
    return Hamiltonian1D(GridFunction(profile_.grid(), std::move(v)), symmetry_, std::move(ex));
}

TruncationResult power_dc_truncation(double beta, double delta, double L, std::size_t n_nodes) {
    if (!(L > 0.0)) throw RangeError("power_dc_truncation: L must be positive");
    if (n_nodes % 2 == 0) ++n_nodes;  // keep p = 0 on the grid
    return power_dc_truncation(beta, delta, Grid1D(-L, L, n_nodes));
}

TruncationResult power_dc_truncation(double beta, double delta, const Grid1D& grid) {
    if (!(beta > 0.0 && beta < 1.0)) throw RangeError("power_dc_truncation: beta must lie in (0,1)");
    if (!(delta > 0.0)) throw RangeError("power_dc_truncation: delta must be positive");
    const double L = std::max(std::abs(grid.lo()), std::abs(grid.hi()));
    if (delta > L) throw RangeError("power_dc_truncation: delta exceeds L");
    const double floor_value = std::pow(delta, beta);
    const std::size_t n = grid.size();
    std::vector<double> plus(n);
    std::vector<double> minus(n);
    std::vector<double> vals(n);
    double err = 0.0;
    const double slope = beta * std::pow(delta, beta - 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = std::abs(grid.point(i));
        const double hb = std::pow(r, beta);
        const double h = std::max(hb, floor_value);
        if (delta == L) {
            plus[i] = floor_value;
            minus[i] = 0.0;
        } else {
            plus[i] = slope * std::max(r - delta, 0.0);
            minus[i] = plus[i] - h;
        }
        vals[i] = h;
        err = std::max(err, std::abs(h - hb));
    }
    return {DCFunction1D(GridFunction(grid, std::move(plus)), GridFunction(grid, std::move(minus))),
            GridFunction(grid, std::move(vals)), err};
}

GridFunction hat_mollify(const GridFunction& f, std::size_t m) {
    if (!f.all_finite()) throw DomainError("hat_mollify: input must be finite");
    const std::size_t n = f.size();
    std::vector<double> cur = copy_values(f);
    if (m == 0) return f;
    const double width = static_cast<double>(2 * m + 1);
    for (int pass = 0; pass < 2; ++pass) {
        // Prefix sums over the constant-extended sequence.
        std::vector<double> pre(n + 2 * m + 1, 0.0);
        for (std::size_t j = 0; j < n + 2 * m; ++j) {
            const std::size_t src = j < m ? 0 : std::min(j - m, n - 1);
            pre[j + 1] = pre[j] + cur[src];
        }
        std::vector<double> next(n);
        for (std::size_t i = 0; i < n; ++i) next[i] = (pre[i + 2 * m + 1] - pre[i]) / width;
        cur = std::move(next);
    }
    return GridFunction(f.grid(), std::move(cur));
}

KCandidate make_candidate(const GridFunction& f, const DCFunction1D& g) {
    return make_candidate(f, g, g.values());
}

KCandidate make_candidate(const GridFunction& f, const DCFunction1D& g, const GridFunction& g_values) {
    if (!(g.interval() == f.grid()) || !(g_values.grid() == f.grid())) {
        throw InterfaceError("K candidate lives on a different grid");
    }
    double err = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) err = std::max(err, std::abs(f[i] - g_values[i]));
    return {dc_norm_upper(g, true), err};
}

KProfile k_dc_profile(const GridFunction& f, double L, int n_max, const TruncationStrategy& strategy) {
    if (n_max < 1) throw RangeError("k_dc_profile: n_max must be >= 1");
    if (!(L > 0.0)) throw RangeError("k_dc_profile: L must be positive");
    if (std::abs(f.grid().hi() - L) > 1e-9 * std::max(1.0, L)) {
        throw InterfaceError("k_dc_profile: grid must end at L");
    }
    if (!f.all_finite()) throw DomainError("k_dc_profile: f must be finite");

    std::vector<KCandidate> pool;
    pool.push_back({0.0, f.sup_norm()});
    if (strategy.exact_split) pool.push_back(make_candidate(f, dc_split(f)));
    if (strategy.mollify) {
        const std::size_t cells = f.size() - 1;
        std::size_t m = std::max<std::size_t>(1, static_cast<std::size_t>(strategy.min_kernel_cells) / 2);
        for (; 2 * m <= cells / 4; m *= 2) pool.push_back(make_candidate(f, dc_split(hat_mollify(f, m))));
    }
    if (strategy.analytic) {
        // One level past n_max so the last entry sees its neighbour's candidates.
        for (int n = 0; n <= n_max + 1; ++n) {
            for (const KCandidate& c : strategy.analytic(n)) pool.push_back(c);
        }
    }

    KProfile prof;
    prof.orientation = KProfile::Orientation::LargeArgument;
    for (int n = 0; n <= n_max; ++n) {
        const double t = std::ldexp(1.0, n);
        double best = kInf;
        for (const KCandidate& c : pool) best = std::min(best, c.norm + t * c.err);
        prof.entries.push_back({n, best});
    }
    return prof;
}

HMembership h_membership_partial_sums(const GridFunction& f, double alpha, double L, int N,
                                      const TruncationStrategy& strategy, double tol) {
    if (N < 2) throw RangeError("h_membership_partial_sums: N must be >= 2");
    if (!(alpha > 0.0 && alpha < 1.0)) throw RangeError("h_membership_partial_sums: alpha must lie in (0,1)");
    const KProfile prof = k_dc_profile(f, L, N, strategy);
    HMembership r;
    double acc = 0.0;
    for (int n = 1; n <= N; ++n) {
        const double term = std::pow(2.0, -n * alpha) * prof.entries[n].upper;
        r.terms.push_back(term);
        acc += term;
        r.partial_sums.push_back(acc);
    }
    const std::size_t m = r.terms.size();
    const double last = r.terms.back();
    if (last == 0.0) {
        r.tail_estimate = 0.0;
    } else {
        double ratio = 0.0;
        const std::size_t look = std::min<std::size_t>(4, m - 1);
        for (std::size_t k = m - look; k < m; ++k) {
            const double prev = r.terms[k - 1];
            ratio = std::max(ratio, prev > 0.0 ? r.terms[k] / prev : kInf);
        }
        r.tail_estimate = ratio < 1.0 ? last * ratio / (1.0 - ratio) : kInf;
    }
    r.converged = r.tail_estimate < tol;
    if (!r.converged) {
        // Least-squares slope of log2 S_n over the upper half of the levels.
        const std::size_t start = m / 2;
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        double cnt = 0;
        for (std::size_t k = start; k < m; ++k) {
            if (!(r.partial_sums[k] > 0.0)) continue;
            const double x = static_cast<double>(k + 1);
            const double y = std::log2(r.partial_sums[k]);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            cnt += 1;
        }
        const double den = cnt * sxx - sx * sx;
        if (cnt >= 2 && den > 0.0) r.growth_exponent = (cnt * sxy - sx * sy) / den;
    }
    return r;
}

void write_csv(std::ostream& os, const DCFunction1D& f) {
    os << "x,part_plus,part_minus\n" << std::setprecision(17);
    const Grid1D& g = f.interval();
    for (std::size_t i = 0; i < g.size(); ++i) {
        os << g.point(i) << ',' << f.part_plus()[i] << ',' << f.part_minus()[i] << '\n';
    }
}

}  // namespace phj
