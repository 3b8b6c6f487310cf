#include "phj/grid_convex.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "phj/errors.hpp"

namespace phj {

Grid1D::Grid1D(double lo, double hi, std::size_t n) : lo_(lo), hi_(hi), n_(n) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
        throw RangeError("Grid1D requires finite lo < hi");
    }
    if (n < 2) throw RangeError("Grid1D requires at least 2 points");
    spacing_ = (hi - lo) / static_cast<double>(n - 1);
}

std::vector<double> Grid1D::points() const {
    std::vector<double> x(n_);
    for (std::size_t i = 0; i < n_; ++i) x[i] = point(i);
    return x;
}

bool Grid1D::operator==(const Grid1D& other) const {
    return lo_ == other.lo_ && hi_ == other.hi_ && n_ == other.n_;
}

GridFunction::GridFunction(Grid1D grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
        throw InterfaceError("GridFunction: value count does not match grid size");
    }
    std::optional<std::size_t> first;
    std::size_t last = 0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        const double v = values_[i];
        if (std::isnan(v) || v == -kInf) {
            throw DomainError("GridFunction: values must be finite or +inf");
        }
        if (std::isfinite(v)) {
            if (first && last + 1 != i) {
                throw DomainError("GridFunction: effective domain must be an interval");
            }
            if (!first) first = i;
            last = i;
        }
    }
    if (first) domain_ = IndexRange{*first, last};
}

bool GridFunction::all_finite() const {
    return domain_ && domain_->first == 0 && domain_->last + 1 == values_.size();
}

double GridFunction::sup_norm() const {
    double m = 0.0;
    if (!domain_) return m;
    for (std::size_t i = domain_->first; i <= domain_->last; ++i) m = std::max(m, std::abs(values_[i]));
    return m;
}

double GridFunction::max_slope() const {
    double m = 0.0;
    if (!domain_) return m;
    for (std::size_t i = domain_->first; i < domain_->last; ++i) {
        m = std::max(m, std::abs(values_[i + 1] - values_[i]));
    }
    return m / grid_.spacing();
}

double GridFunction::interpolate(double x) const {
    if (!domain_) return kInf;
    const std::size_t n = values_.size();
    const double h = grid_.spacing();
    const double s = (x - grid_.lo()) / h;
    if (s <= 0.0) {
        if (domain_->first != 0) return s == 0.0 ? values_[0] : kInf;
        if (s == 0.0 || domain_->last == 0) return values_[0];
        return values_[0] + s * (values_[1] - values_[0]);
    }
    const double top = static_cast<double>(n - 1);
    if (s >= top) {
        if (domain_->last != n - 1) return kInf;
        if (s == top || domain_->first == n - 1) return values_[n - 1];
        return values_[n - 1] + (s - top) * (values_[n - 1] - values_[n - 2]);
    }
    auto i = static_cast<std::size_t>(std::floor(s));
    if (i >= n - 1) i = n - 2;
    const double w = s - static_cast<double>(i);
    const double a = values_[i];
    const double b = values_[i + 1];
    if (w == 0.0) return a;
    if (!std::isfinite(a) || !std::isfinite(b)) return kInf;
    return a + w * (b - a);
}

bool is_discretely_convex(const GridFunction& f, double rel_tol) {
    const auto dom = f.effective_domain();
    if (!dom) return true;
    const double tol = rel_tol * std::max(1.0, f.sup_norm());
    for (std::size_t i = dom->first + 1; i < dom->last; ++i) {
        if (f[i + 1] - 2.0 * f[i] + f[i - 1] < -tol) return false;
    }
    return true;
}

GridFunction convex_envelope(const GridFunction& f) {
    const auto dom = f.effective_domain();
    if (!dom || dom->count() < 2) {
        throw DegenerateInput("convex_envelope needs at least 2 finite values");
    }
    // Monotone chain on (index, value); the uniform spacing cancels.
    std::vector<std::size_t> hull;
    hull.reserve(dom->count());
    for (std::size_t i = dom->first; i <= dom->last; ++i) {
        while (hull.size() >= 2) {
            const std::size_t o = hull[hull.size() - 2];
            const std::size_t a = hull.back();
            const double cross = static_cast<double>(a - o) * (f[i] - f[o]) -
                                 (f[a] - f[o]) * static_cast<double>(i - o);
            if (cross <= 0.0) {
                hull.pop_back();
            } else {
                break;
            }
        }
        hull.push_back(i);
    }
    std::vector<double> out(f.size(), kInf);
    for (std::size_t k = 0; k + 1 < hull.size(); ++k) {
        const std::size_t a = hull[k];
        const std::size_t b = hull[k + 1];
        const double ya = f[a];
        const double yb = f[b];
        const auto span = static_cast<double>(b - a);
        out[a] = ya;
        for (std::size_t i = a + 1; i < b; ++i) {
            out[i] = ya + (yb - ya) * (static_cast<double>(i - a) / span);
        }
    }
    out[hull.back()] = f[hull.back()];
    return GridFunction(f.grid(), std::move(out));
}

namespace {

IndexRange require_domain(const GridFunction& f, const char* what) {
    const auto dom = f.effective_domain();
    if (!dom) throw DegenerateInput(std::string(what) + ": empty effective domain");
    return *dom;
}

}  // namespace

GridFunction legendre(const GridFunction& f, const Grid1D& dual) {
    const IndexRange dom = require_domain(f, "legendre");
    const Grid1D& g = f.grid();
    std::vector<double> out(dual.size());
    for (std::size_t j = 0; j < dual.size(); ++j) {
        const double p = dual.point(j);
        double best = -kInf;
        for (std::size_t i = dom.first; i <= dom.last; ++i) {
            best = std::max(best, p * g.point(i) - f[i]);
        }
        out[j] = best;
    }
    return GridFunction(dual, std::move(out));
}

GridFunction legendre_convex(const GridFunction& f, const Grid1D& dual) {
    const IndexRange dom = require_domain(f, "legendre_convex");
    const Grid1D& g = f.grid();
    std::vector<double> out(dual.size());
    std::size_t i = dom.first;
    for (std::size_t j = 0; j < dual.size(); ++j) {
        const double p = dual.point(j);
        double cur = p * g.point(i) - f[i];
        while (i < dom.last) {
            const double next = p * g.point(i + 1) - f[i + 1];
            if (next < cur) break;
            cur = next;
            ++i;
        }
        out[j] = cur;
    }
    return GridFunction(dual, std::move(out));
}

GridFunction monotone_conjugate(const GridFunction& profile, const Grid1D& dual) {
    if (profile.grid().lo() < 0.0 || dual.lo() < 0.0) {
        throw RangeError("monotone_conjugate: radial grids must live in [0, inf)");
    }
    require_domain(profile, "monotone_conjugate");
    if (is_discretely_convex(profile)) return legendre_convex(profile, dual);
    return legendre(profile, dual);
}

GridFunction biconjugate(const GridFunction& f, const Grid1D& dual) {
    const IndexRange dom = require_domain(f, "biconjugate");
    const GridFunction back = legendre(legendre(f, dual), f.grid());
    std::vector<double> out(back.values().begin(), back.values().end());
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (i < dom.first || i > dom.last) out[i] = kInf;
    }
    return GridFunction(f.grid(), std::move(out));
}

double second_difference_modulus(const GridFunction& f, double t, double p) {
    if (!f.all_finite()) throw DomainError("second_difference_modulus: f must be finite");
    if (!(t > 0.0)) throw RangeError("second_difference_modulus: t must be positive");
    if (!(p >= 1.0)) throw RangeError("second_difference_modulus: p must be >= 1");
    const Grid1D& g = f.grid();
    const double half = 0.5 * g.length();
    if (t > half * (1.0 + 1e-12)) {
        throw RangeError("second_difference_modulus: t exceeds half the domain length");
    }
    const std::size_t n = f.size();
    const double h = g.spacing();
    auto kmax = static_cast<std::size_t>(std::floor(t / h + 1e-9));
    kmax = std::min(kmax, (n - 1) / 2);
    double best = 0.0;
    for (std::size_t k = 1; k <= kmax; ++k) {
        double acc = 0.0;
        for (std::size_t i = k; i + k < n; ++i) {
            const double d = std::abs(f[i + k] + f[i - k] - 2.0 * f[i]);
            if (std::isinf(p)) {
                acc = std::max(acc, d);
            } else {
                acc += std::pow(d, p) * h;
            }
        }
        const double norm = std::isinf(p) ? acc : std::pow(acc, 1.0 / p);
        best = std::max(best, norm);
    }
    return best;
}

BesovResult besov_seminorm(const GridFunction& f, double s, double p, double q, int n_levels,
                           double tol) {
    if (!(s > 0.0 && s < 2.0)) throw RangeError("besov_seminorm: s must lie in (0, 2)");
    if (n_levels < 1) throw RangeError("besov_seminorm: n_levels must be >= 1");
    if (!(q >= 1.0)) throw RangeError("besov_seminorm: q must be >= 1");
    const Grid1D& g = f.grid();
    const double half = 0.5 * g.length();
    BesovResult r;
    double acc = 0.0;
    for (int k = 0; k <= n_levels; ++k) {
        const double t = std::ldexp(1.0, -k);
        if (t < g.spacing() * (1.0 - 1e-12)) break;
        const double modulus = second_difference_modulus(f, std::min(t, half), p);
        const double term = modulus / std::pow(t, s);
        r.terms.push_back(term);
        if (std::isinf(q)) {
            acc = std::max(acc, term);
        } else {
            acc += std::pow(term, q);
        }
        r.partial_sums.push_back(acc);
        ++r.levels_used;
    }
    r.value = std::isinf(q) ? acc : std::pow(acc, 1.0 / q);

    const std::size_t m = r.terms.size();
    const double last = m ? r.terms.back() : 0.0;
    if (last == 0.0) {
        r.tail_estimate = 0.0;
    } else if (m < 3) {
        r.tail_estimate = kInf;
    } else {
        const double prev = r.terms[m - 2];
        const double prev2 = r.terms[m - 3];
        double ratio = 1.0;
        if (prev > 0.0 && prev2 > 0.0) ratio = std::max(last / prev, prev / prev2);
        if (std::isinf(q)) {
            r.tail_estimate = ratio > 1.0 + 1e-9 ? kInf : 0.0;
        } else if (ratio < 1.0) {
            const double rq = std::pow(ratio, q);
            r.tail_estimate = std::pow(last, q) * rq / (1.0 - rq);
        } else {
            r.tail_estimate = kInf;
        }
    }
    r.divergent = std::isinf(r.tail_estimate);
    r.converged = r.tail_estimate <= tol * std::max(1.0, acc);
    return r;
}

double k_c11_estimate(const GridFunction& f, double t) {
    if (!(t >= 1.0)) throw RangeError("k_c11_estimate: t must be >= 1");
    const double half = 0.5 * f.grid().length();
    const double shift = std::min(1.0 / std::sqrt(t), half);
    return f.sup_norm() + t * second_difference_modulus(f, shift, kSupNorm);
}

double KProfile::argument(const KEntry& e) const {
    return orientation == Orientation::LargeArgument ? std::ldexp(1.0, e.level)
                                                     : std::ldexp(1.0, -e.level);
}

bool KProfile::satisfies_invariants(double tol) const {
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (!(entries[i].upper >= 0.0)) return false;
        if (i == 0) continue;
        const double a = entries[i - 1].upper;
        const double b = entries[i].upper;
        const double slack = tol * std::max(1.0, std::max(a, b));
        if (orientation == Orientation::SmallArgument && b > a + slack) return false;
        if (orientation == Orientation::LargeArgument && b < a - slack) return false;
    }
    return true;
}

KProfile k_c11_profile(const GridFunction& f, int n_max) {
    KProfile prof;
    prof.orientation = KProfile::Orientation::LargeArgument;
    for (int n = 0; n <= n_max; ++n) {
        prof.entries.push_back({n, k_c11_estimate(f, std::ldexp(1.0, n))});
    }
    return prof;
}

void write_csv(std::ostream& os, const GridFunction& f) {
    os << "x,value\n";
    os << std::setprecision(17);
    for (std::size_t i = 0; i < f.size(); ++i) {
        os << f.grid().point(i) << ',';
        if (std::isinf(f[i])) {
            os << "inf";
        } else {
            os << f[i];
        }
        os << '\n';
    }
}

GridFunction read_grid_function_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("x,value", 0) != 0) {
        throw InterfaceError("grid function CSV must start with header 'x,value'");
    }
    std::vector<double> xs;
    std::vector<double> vs;
    while (std::getline(is, line)) {
        if (line.empty() || line == "\r") continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw InterfaceError("malformed CSV row: " + line);
        std::string vstr = line.substr(comma + 1);
        if (!vstr.empty() && vstr.back() == '\r') vstr.pop_back();
        xs.push_back(std::stod(line.substr(0, comma)));
        vs.push_back(vstr == "inf" ? kInf : std::stod(vstr));
    }
    if (xs.size() < 2) throw InterfaceError("grid function CSV needs at least 2 rows");
    Grid1D grid(xs.front(), xs.back(), xs.size());
    const double tol = 1e-9 * grid.length();
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (std::abs(xs[i] - grid.point(i)) > tol) {
            throw InterfaceError("grid function CSV abscissae are not uniform");
        }
    }
    return GridFunction(grid, std::move(vs));
}

}  // namespace phj
