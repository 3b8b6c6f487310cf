#include "phj/solver.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "phj/errors.hpp"

namespace phj {

namespace {

bool radial_convex(const GridFunction& profile) {
    return profile.all_finite() && is_discretely_convex(profile) && profile[1] >= profile[0];
}

std::vector<double> event_times(const PiecewiseLinearPath& W, const std::vector<double>& samples) {
    const double T = W.horizon();
    std::vector<double> ev(W.times().begin() + 1, W.times().end());
    for (double s : samples) {
        if (s < 0.0 || s > T * (1.0 + 1e-12)) throw RangeError("sample time outside [0, T]");
        if (s > 0.0) ev.push_back(std::min(s, T));
    }
    std::sort(ev.begin(), ev.end());
    ev.erase(std::unique(ev.begin(), ev.end()), ev.end());
    return ev;
}

}  // namespace

ConjugateState conjugate_init(const GridFunction& u0_profile, double L, const Grid1D& dual_grid) {
    if (!(L > 0.0)) throw RangeError("conjugate_init: L must be positive");
    if (u0_profile.grid().lo() != 0.0 || dual_grid.lo() != 0.0) {
        throw InterfaceError("conjugate_init: radial grids must start at 0");
    }
    if (std::abs(dual_grid.hi() - L) > 1e-12 * L) throw InterfaceError("conjugate_init: dual grid must end at L");
    if (!radial_convex(u0_profile)) throw ContractViolation("conjugate_init: profile is not radially convex");
    if (u0_profile.max_slope() > L * (1.0 + 1e-9)) {
        throw ContractViolation("conjugate_init: profile slope exceeds L");
    }
    return {dual_grid, monotone_conjugate(u0_profile, dual_grid), 0.0, L};
}

namespace {

// hopf_step with H already sampled on the dual nodes.
ConjugateState hopf_step_sampled(const ConjugateState& state, const std::vector<double>& h, double dW) {
    const auto dom = state.values.effective_domain();
    if (!dom || dom->first != 0) throw DomainError("hopf_step: conjugate must be finite near r = 0");
    const Grid1D& g = state.dual_grid;
    const std::size_t last = dom->last;
    std::vector<double> v(last + 1);
    for (std::size_t i = 0; i <= last; ++i) v[i] = state.values[i] - dW * h[i];

    std::vector<double> out(g.size(), kInf);
    if (last == 0) {
        out[0] = v[0];
    } else {
        const double r = g.point(last);
        std::vector<double> even(2 * last + 1);
        for (std::size_t j = 0; j < even.size(); ++j) even[j] = v[j >= last ? j - last : last - j];
        const Grid1D eg(-r, r, even.size());
        const GridFunction env = convex_envelope(GridFunction(eg, std::move(even)));
        for (std::size_t i = 0; i <= last; ++i) out[i] = env[last + i];
    }
    return {g, GridFunction(g, std::move(out)), state.time, state.slope_bound};
}

std::vector<double> sample_on_dual(const Hamiltonian1D& H, const Grid1D& g) {
    if (H.symmetry() != Hamiltonian1D::Symmetry::Radial) {
        throw InterfaceError("hopf_step: the conjugate engine needs a radial Hamiltonian");
    }
    std::vector<double> h(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) h[i] = H(g.point(i));
    return h;
}

}  // namespace

ConjugateState hopf_step(const ConjugateState& state, const Hamiltonian1D& H, double dW) {
    return hopf_step_sampled(state, sample_on_dual(H, state.dual_grid), dW);
}

std::vector<ConjugateState> hopf_solve(const ConjugateState& init, const Hamiltonian1D& H,
                                       const PiecewiseLinearPath& W,
                                       const std::vector<double>& sample_times) {
    const std::vector<double> ev = event_times(W, sample_times);
    std::map<double, ConjugateState> recorded;
    ConjugateState cur = init;
    cur.time = 0.0;
    auto record = [&](double t) {
        for (double s : sample_times) {
            if (std::min(s, W.horizon()) == t) recorded.insert_or_assign(s, cur);
        }
    };
    record(0.0);
    const std::vector<double> h = sample_on_dual(H, init.dual_grid);
    double w_prev = 0.0;
    for (double t : ev) {
        const double w = W(t);
        if (w != w_prev) cur = hopf_step_sampled(cur, h, w - w_prev);
        cur.time = t;
        record(t);
        w_prev = w;
    }
    std::vector<ConjugateState> out;
    out.reserve(sample_times.size());
    for (double s : sample_times) out.push_back(recorded.at(s));
    return out;
}

std::vector<ConjugateState> hopf_solve(const GridFunction& u0_profile, double L,
                                       const Grid1D& dual_grid, const Hamiltonian1D& H,
                                       const PiecewiseLinearPath& W,
                                       const std::vector<double>& sample_times) {
    return hopf_solve(conjugate_init(u0_profile, L, dual_grid), H, W, sample_times);
}

double eval_primal(const ConjugateState& state, double x) {
    const auto dom = state.values.effective_domain();
    if (!dom) return -kInf;
    const double ax = std::abs(x);
    double best = -kInf;
    for (std::size_t i = dom->first; i <= dom->last; ++i) {
        best = std::max(best, state.dual_grid.point(i) * ax - state.values[i]);
    }
    return best;
}

std::vector<double> eval_primal(const ConjugateState& state, const std::vector<double>& xs) {
    std::vector<double> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = eval_primal(state, xs[i]);
    return out;
}

GridFunction primal_on(const ConjugateState& state, const Grid1D& x_grid) {
    return GridFunction(x_grid, eval_primal(state, x_grid.points()));
}

GridFunction s_convex(const GridFunction& phi, const Hamiltonian1D& H, double tau,
                      const Grid1D& dual_grid) {
    if (std::abs(H.min_value()) > 1e-12) throw ContractViolation("s_convex: H must satisfy min H = 0");
    if (!std::isfinite(tau)) throw RangeError("s_convex: tau must be finite");
    if (tau == 0.0) return phi;
    const ConjugateState s0 = conjugate_init(phi, dual_grid.hi(), dual_grid);
    return primal_on(hopf_step(s0, H, tau), phi.grid());
}

EnvelopeBounds envelope_bounds(const GridFunction& u0_profile, const std::vector<EnvelopePair>& pairs,
                               double t, const Grid1D& dual_grid, CompositionOrder order) {
    for (const EnvelopePair& p : pairs) {
        if (std::abs(p.H->min_value()) > 1e-12) {
            throw ContractViolation("envelope_bounds: every H_j must satisfy min H_j = 0");
        }
    }
    std::vector<std::size_t> idx(pairs.size());
    for (std::size_t j = 0; j < idx.size(); ++j) idx[j] = j;
    if (order == CompositionOrder::Reversed) std::reverse(idx.begin(), idx.end());
    GridFunction lower = u0_profile;
    GridFunction upper = u0_profile;
    for (std::size_t j : idx) {
        const EnvelopePair& p = pairs[j];
        lower = s_convex(lower, *p.H, p.W->running_min(t), dual_grid);
        upper = s_convex(upper, *p.H, p.W->running_max(t), dual_grid);
    }
    return {std::move(lower), std::move(upper)};
}

const GridFunction& FDResult::at(double t) const {
    for (const FDSnapshot& s : snapshots) {
        if (std::abs(s.time - t) <= 1e-12 * std::max(1.0, std::abs(t))) return s.u;
    }
    throw RangeError("FDResult: no snapshot at the requested time");
}

GridFunction radial_extension(const GridFunction& profile, const Grid1D& x_grid) {
    return GridFunction::sample(x_grid, [&](double x) { return profile.interpolate(std::abs(x)); });
}

FDResult fd_solve(const GridFunction& u0, const Hamiltonian1D& H, const PiecewiseLinearPath& W,
                  const Grid1D& x_grid, const std::vector<double>& sample_times,
                  const FDOptions& options) {
    if (!(options.cfl > 0.0 && options.cfl <= 1.0)) throw RangeError("fd_solve: cfl must lie in (0, 1]");
    const std::size_t n = x_grid.size();
    if (n < 3) throw RangeError("fd_solve: grid needs at least 3 nodes");
    std::vector<double> u(n);
    if (u0.grid() == x_grid) {
        u.assign(u0.values().begin(), u0.values().end());
    } else {
        for (std::size_t i = 0; i < n; ++i) u[i] = u0.interpolate(x_grid.point(i));
    }
    for (double v : u) {
        if (!std::isfinite(v)) throw DomainError("fd_solve: initial data must be finite on the grid");
    }
    const double dx = x_grid.spacing();
    const double left_slope = (u[1] - u[0]) / dx;
    const double right_slope = (u[n - 1] - u[n - 2]) / dx;
    const double lip = options.lipschitz.value_or(H.lipschitz_bound());
    if (!(lip >= 0.0) || !std::isfinite(lip)) throw RangeError("fd_solve: invalid Lipschitz constant");

    std::vector<double> sorted(sample_times);
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    const std::vector<double> ev = event_times(W, sorted);

    FDResult res{x_grid, {}, 0.0, 0};
    auto record = [&](double t) {
        for (double s : sorted) {
            if (std::min(s, W.horizon()) == t) res.snapshots.push_back({s, GridFunction(x_grid, u)});
        }
    };
    record(0.0);

    std::vector<double> next(n);
    std::vector<double> hv(n);
    double prev = 0.0;
    double w_prev = 0.0;
    for (double t : ev) {
        const double w = W(t);
        const double dt_seg = t - prev;
        const double sigma = (w - w_prev) / dt_seg;
        if (sigma != 0.0) {
            const double speed = std::abs(sigma) * lip;
            const auto m = std::max<long long>(
                1, static_cast<long long>(std::ceil(speed * dt_seg / (options.cfl * dx) - 1e-12)));
            const double dt = dt_seg / static_cast<double>(m);
            const double theta = speed * dt / dx;
            res.cfl_used = std::max(res.cfl_used, theta);
            for (long long step = 0; step < m; ++step) {
                for (std::size_t j = 0; j < n; ++j) {
                    const double um = j == 0 ? u[0] - left_slope * dx : u[j - 1];
                    const double up = j + 1 == n ? u[n - 1] + right_slope * dx : u[j + 1];
                    hv[j] = H((up - um) / (2.0 * dx));
                    next[j] = u[j] + dt * sigma * hv[j] + 0.5 * theta * (up - 2.0 * u[j] + um);
                }
                u.swap(next);
            }
            res.steps += m;
            for (double v : u) {
                if (std::isnan(v)) throw NumericalFailure("fd_solve: NaN encountered");
            }
        }
        record(t);
        prev = t;
        w_prev = w;
    }
    return res;
}

StabilityReport stability_report(const DCFunction1D& H, const PiecewiseLinearPath& W1,
                                 const PiecewiseLinearPath& W2, const GridFunction& u0_profile,
                                 double L, const StabilityOptions& options) {
    if (u0_profile.max_slope() > L * (1.0 + 1e-9)) {
        throw ContractViolation("stability_report: u0 slope exceeds L");
    }
    const GridFunction hv = H.values();
    const Grid1D& hg = hv.grid();
    const std::size_t hn = hg.size();
    bool even = hg.lo() == -hg.hi() && hn % 2 == 1;
    double hsup = 0.0;
    for (std::size_t i = 0; i < hn; ++i) {
        hsup = std::max(hsup, std::abs(hv[i]));
        if (even && std::abs(hv[i] - hv[hn - 1 - i]) > 1e-12 * std::max(1.0, std::abs(hv[i]))) even = false;
    }
    if (hg.hi() < L * (1.0 - 1e-12)) throw InterfaceError("stability_report: H must be defined on [-L, L]");

    StabilityReport rep;
    const double T = W1.horizon();
    if (even && radial_convex(u0_profile)) {
        const std::size_t half = (hn - 1) / 2;
        std::vector<double> prof(hv.values().begin() + static_cast<std::ptrdiff_t>(half), hv.values().end());
        const Hamiltonian1D Hr(GridFunction(Grid1D(0.0, hg.hi(), half + 1), std::move(prof)),
                               Hamiltonian1D::Symmetry::Radial);
        const Grid1D dual(0.0, L, options.dual_nodes);
        const auto s1 = hopf_solve(u0_profile, L, dual, Hr, W1, {T});
        const auto s2 = hopf_solve(u0_profile, L, dual, Hr, W2, {T});
        const GridFunction a = primal_on(s1[0], u0_profile.grid());
        const GridFunction b = primal_on(s2[0], u0_profile.grid());
        for (std::size_t i = 0; i < a.size(); ++i) {
            rep.sup_difference = std::max(rep.sup_difference, std::abs(a[i] - b[i]));
        }
        rep.used_conjugate_engine = true;
    } else {
        const Hamiltonian1D Hg(hv, Hamiltonian1D::Symmetry::General);
        const double R = u0_profile.grid().hi();
        const auto cells = static_cast<std::size_t>(std::ceil(2.0 * R / options.fd_dx));
        const Grid1D xg(-R, R, cells + 1);
        const GridFunction line = radial_extension(u0_profile, xg);
        const FDResult r1 = fd_solve(line, Hg, W1, xg, {T});
        const FDResult r2 = fd_solve(line, Hg, W2, xg, {T});
        const GridFunction& a = r1.at(T);
        const GridFunction& b = r2.at(T);
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (std::abs(xg.point(i)) <= 0.5 * R) {
                rep.sup_difference = std::max(rep.sup_difference, std::abs(a[i] - b[i]));
            }
        }
    }
    rep.path_distance = sup_distance(W1, W2);
    rep.dc_bound = H.norm_upper() * rep.path_distance;
    rep.ratio_dc = rep.dc_bound > 0.0 ? rep.sup_difference / rep.dc_bound : 0.0;
    const double tv = combine(1.0, W1, -1.0, W2).total_variation();
    rep.easy_bound = hsup * tv;
    rep.ratio_easy = *rep.easy_bound > 0.0 ? rep.sup_difference / *rep.easy_bound : 0.0;
    return rep;
}

ToothRecursion tooth_recursion(double a1, double beta, std::size_t k_max) {
    if (!(beta > 0.0 && beta < 1.0)) throw RangeError("tooth_recursion: beta must lie in (0,1)");
    if (k_max < 1) throw RangeError("tooth_recursion: k_max must be >= 1");
    const long double b = beta;
    const long double gamma = 1.0L - b;
    const long double c0 = std::pow(b, -gamma);
    if (static_cast<long double>(a1) < c0 * (1.0L - 1e-15L)) {
        throw ContractViolation("tooth_recursion: a1 below beta^{-(1-beta)}");
    }
    const long double coef = gamma / b;
    const long double expo = -b / gamma;
    ToothRecursion r;
    r.a.reserve(k_max);
    r.lower.reserve(k_max);
    r.statistic.reserve(k_max);
    long double a = a1;
    const long double b1 = std::pow(a, 1.0L / gamma);
    for (std::size_t k = 1; k <= k_max; ++k) {
        const long double kk = static_cast<long double>(k);
        const long double lo = c0 * std::pow(kk, gamma);
        const long double bk = std::pow(a, 1.0L / gamma);
        r.a.push_back(static_cast<double>(a));
        r.lower.push_back(static_cast<double>(lo));
        r.statistic.push_back(k == 1 ? 0.0 : static_cast<double>((bk - b1 - (kk - 1.0L) / b) / std::log(kk)));
        if (a < lo && r.lower_bound_holds) {
            r.lower_bound_holds = false;
            r.first_violation = k;
        }
        a += coef * std::pow(a, expo);
    }
    return r;
}

double closedform_tooth_solution(double beta, double a, double x, double t) {
    if (!(beta > 0.0 && beta < 1.0)) throw RangeError("closedform_tooth_solution: beta must lie in (0,1)");
    if (!(a >= 0.0)) throw RangeError("closedform_tooth_solution: a must be >= 0");
    if (!(t >= 0.0 && t <= 2.0)) throw RangeError("closedform_tooth_solution: t must lie in [0, 2]");
    const double ax = std::abs(x);
    const double g = 1.0 - beta;
    const double k = g / beta;
    auto interior = [&](double tau) {
        return a + k * std::pow(tau, 1.0 / g) * std::pow(a - ax, -beta / g);
    };
    if (t <= 1.0) {
        if (ax >= a - t) return ax + t / beta;
        return interior(t);
    }
    const double s = t - 1.0;
    if (a < 1.0) return std::max(ax, s / beta) + (2.0 - t) / beta;
    const double top = a + k * std::pow(a, -beta / g);  // -c1
    const double r1 = std::pow(a, -1.0 / g);
    if (s >= 1.0) return std::max(top, ax);
    const double rt = r1 * std::pow(1.0 - s, -1.0 / beta);
    if (rt >= 1.0) return std::max(top, ax + (1.0 - s) / beta);
    const double m = a - (1.0 - s) * std::pow(rt, beta - 1.0);
    if (ax <= m) return top;
    if (ax >= a - 1.0 + s) return ax + (1.0 - s) / beta;
    return interior(1.0 - s);
}

Hamiltonian1D power_hamiltonian(double beta, double c, double L, std::size_t n) {
    if (!(beta > 0.0)) throw RangeError("power_hamiltonian: beta must be positive");
    return Hamiltonian1D::radial(L, n, [beta, c](double r) { return c * std::pow(std::abs(r), beta); });
}

}  // namespace phj
