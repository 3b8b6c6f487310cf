#include "phj/paths.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <iomanip>
#include <istream>
#include <ostream>
#include <string>

#include "phj/errors.hpp"

namespace phj {

PiecewiseLinearPath::PiecewiseLinearPath(std::vector<double> times, std::vector<double> values)
    : t_(std::move(times)), w_(std::move(values)) {
    if (t_.size() != w_.size()) throw InterfaceError("path: times and values differ in length");
    if (t_.size() < 2) throw DomainError("path: at least two knots are required");
    if (t_[0] != 0.0 || w_[0] != 0.0) throw DomainError("path: first knot must be (0, 0)");
    for (std::size_t i = 0; i < t_.size(); ++i) {
        if (!std::isfinite(t_[i]) || !std::isfinite(w_[i])) throw DomainError("path: non-finite knot");
        if (i > 0 && !(t_[i] > t_[i - 1])) throw DomainError("path: times must increase strictly");
    }
}

PiecewiseLinearPath PiecewiseLinearPath::zero(double T) {
    if (!(T > 0.0)) throw RangeError("path: horizon must be positive");
    return PiecewiseLinearPath({0.0, T}, {0.0, 0.0});
}

double PiecewiseLinearPath::operator()(double t) const {
    const double T = horizon();
    if (t < 0.0 || t > T) {
        if (t < 0.0 && t > -1e-12 * T) {
            t = 0.0;
        } else if (t > T && t < T * (1.0 + 1e-12)) {
            t = T;
        } else {
            throw RangeError("path: evaluation time outside [0, T]");
        }
    }
    auto it = std::upper_bound(t_.begin(), t_.end(), t);
    if (it == t_.end()) return w_.back();
    const auto j = static_cast<std::size_t>(it - t_.begin());
    const std::size_t i = j - 1;
    if (t == t_[i]) return w_[i];
    const double u = (t - t_[i]) / (t_[j] - t_[i]);
    return w_[i] + u * (w_[j] - w_[i]);
}

double PiecewiseLinearPath::sup_norm() const {
    double m = 0.0;
    for (double v : w_) m = std::max(m, std::abs(v));
    return m;
}

double PiecewiseLinearPath::total_variation() const {
    double s = 0.0;
    for (std::size_t i = 1; i < w_.size(); ++i) s += std::abs(w_[i] - w_[i - 1]);
    return s;
}

double PiecewiseLinearPath::running_max(double t) const {
    double m = (*this)(t);
    for (std::size_t i = 0; i < t_.size() && t_[i] <= t; ++i) m = std::max(m, w_[i]);
    return m;
}

double PiecewiseLinearPath::running_min(double t) const {
    double m = (*this)(t);
    for (std::size_t i = 0; i < t_.size() && t_[i] <= t; ++i) m = std::min(m, w_[i]);
    return m;
}

PiecewiseLinearPath PiecewiseLinearPath::scaled(double a) const {
    std::vector<double> w(w_);
    for (double& v : w) v *= a;
    w[0] = 0.0;
    return PiecewiseLinearPath(t_, std::move(w));
}

namespace {

std::vector<double> merged_times(const PiecewiseLinearPath& A, const PiecewiseLinearPath& B) {
    if (std::abs(A.horizon() - B.horizon()) > 1e-12 * A.horizon()) {
        throw InterfaceError("paths have different horizons");
    }
    std::vector<double> t;
    t.reserve(A.knot_count() + B.knot_count());
    std::merge(A.times().begin(), A.times().end(), B.times().begin(), B.times().end(),
               std::back_inserter(t));
    t.erase(std::unique(t.begin(), t.end()), t.end());
    const double T = std::min(A.horizon(), B.horizon());
    while (t.size() > 2 && t.back() > T) t.pop_back();
    if (t.back() > T) t.back() = T;
    return t;
}

}  // namespace

PiecewiseLinearPath combine(double a, const PiecewiseLinearPath& W1, double b,
                            const PiecewiseLinearPath& W2) {
    std::vector<double> t = merged_times(W1, W2);
    std::vector<double> w(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) w[i] = a * W1(t[i]) + b * W2(t[i]);
    w[0] = 0.0;
    return PiecewiseLinearPath(std::move(t), std::move(w));
}

double sup_distance(const PiecewiseLinearPath& W1, const PiecewiseLinearPath& W2) {
    double m = 0.0;
    for (double t : merged_times(W1, W2)) m = std::max(m, std::abs(W1(t) - W2(t)));
    return m;
}

std::mt19937_64 make_engine(RngSeed rng) {
    auto splitmix = [](std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    };
    const std::uint64_t key = splitmix(splitmix(rng.seed) ^ (rng.stream * 0xd1b54a32d192ed03ULL + 1));
    std::seed_seq seq{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32),
                      static_cast<std::uint32_t>(rng.stream),
                      static_cast<std::uint32_t>(rng.stream >> 32)};
    return std::mt19937_64(seq);
}

PiecewiseLinearPath teeth(double duration) {
    const double k = std::round(duration / 2.0);
    if (!(duration > 0.0) || std::abs(duration - 2.0 * k) > 1e-12 * duration) {
        throw RangeError("teeth: duration must be a positive multiple of 2");
    }
    const auto n = static_cast<std::size_t>(2.0 * k);
    std::vector<double> t(n + 1);
    std::vector<double> w(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        t[i] = static_cast<double>(i);
        w[i] = static_cast<double>(i % 2);
    }
    return PiecewiseLinearPath(std::move(t), std::move(w));
}

PiecewiseLinearPath scale_path(const PiecewiseLinearPath& W, int n, double alpha, double amp) {
    return scale_path(W, n, alpha, amp, std::ldexp(W.horizon(), -n));
}

PiecewiseLinearPath scale_path(const PiecewiseLinearPath& W, int n, double alpha, double amp,
                               double T) {
    if (n < 0) throw RangeError("scale_path: n must be >= 0");
    if (!(T > 0.0)) throw RangeError("scale_path: horizon must be positive");
    const double src_T = std::ldexp(T, n);
    if (src_T > W.horizon() * (1.0 + 1e-12)) throw RangeError("scale_path: source path too short");
    const double factor = amp * std::pow(2.0, -n * alpha);
    std::vector<double> t;
    std::vector<double> w;
    for (std::size_t i = 0; i < W.knot_count() && W.times()[i] < src_T; ++i) {
        t.push_back(std::ldexp(W.times()[i], -n));
        w.push_back(factor * W.values()[i]);
    }
    t.push_back(T);
    w.push_back(factor * W(std::min(src_T, W.horizon())));
    w[0] = 0.0;
    return PiecewiseLinearPath(std::move(t), std::move(w));
}

PiecewiseLinearPath brownian(double T, std::size_t steps, RngSeed rng) {
    if (steps < 1) throw RangeError("brownian: steps must be >= 1");
    if (!(T > 0.0)) throw RangeError("brownian: horizon must be positive");
    auto eng = make_engine(rng);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double dt = T / static_cast<double>(steps);
    const double sd = std::sqrt(dt);
    std::vector<double> t(steps + 1);
    std::vector<double> w(steps + 1, 0.0);
    for (std::size_t i = 1; i <= steps; ++i) {
        t[i] = i == steps ? T : static_cast<double>(i) * dt;
        w[i] = w[i - 1] + sd * normal(eng);
    }
    return PiecewiseLinearPath(std::move(t), std::move(w));
}

std::vector<int> random_walk_steps(std::size_t count, RngSeed rng) {
    auto eng = make_engine(rng);
    std::vector<int> s(count);
    std::uint64_t bits = 0;
    int left = 0;
    for (std::size_t i = 0; i < count; ++i) {
        if (left == 0) {
            bits = eng();
            left = 64;
        }
        s[i] = (bits & 1U) ? 1 : -1;
        bits >>= 1;
        --left;
    }
    return s;
}

PiecewiseLinearPath walk_path(const std::vector<int>& steps, int n, double T) {
    if (n < 1) throw RangeError("walk_path: n must be >= 1");
    if (!(T > 0.0)) throw RangeError("walk_path: horizon must be positive");
    const double n2 = static_cast<double>(n) * n;
    const auto K = static_cast<std::size_t>(std::ceil(n2 * T - 1e-9));
    if (steps.size() < K) throw RangeError("walk_path: walk too short for the horizon");
    std::vector<double> t(K + 1);
    std::vector<double> w(K + 1, 0.0);
    long long z = 0;
    for (std::size_t k = 1; k <= K; ++k) {
        z += steps[k - 1];
        t[k] = static_cast<double>(k) / n2;
        w[k] = static_cast<double>(z) / n;
    }
    if (t[K] > T) {
        // Cut the last segment at T.
        const double u = (T - t[K - 1]) / (t[K] - t[K - 1]);
        w[K] = w[K - 1] + u * (w[K] - w[K - 1]);
        t[K] = T;
    }
    if (K >= 1 && t[K] <= t[K - 1]) {
        t.pop_back();
        w.pop_back();
    }
    return PiecewiseLinearPath(std::move(t), std::move(w));
}

PiecewiseLinearPath scaled_random_walk(int n, double T, RngSeed rng) {
    if (n < 1) throw RangeError("scaled_random_walk: n must be >= 1");
    const double n2 = static_cast<double>(n) * n;
    const auto K = static_cast<std::size_t>(std::ceil(n2 * T - 1e-9));
    return walk_path(random_walk_steps(K, rng), n, T);
}

std::vector<int> embedded_walk_steps(const PiecewiseLinearPath& B, double level, std::size_t count) {
    if (!(level > 0.0)) throw RangeError("embedded_walk_steps: level must be positive");
    const auto& w = B.values();
    std::vector<int> steps;
    steps.reserve(count);
    double base = w[0];
    for (std::size_t i = 1; i < w.size() && steps.size() < count; ++i) {
        const double d = w[i] - base;
        if (std::abs(d) >= level) {
            steps.push_back(d > 0.0 ? 1 : -1);
            base = w[i];
        }
    }
    if (steps.size() < count) throw RangeError("embedded_walk_steps: path exits too few times");
    return steps;
}

PiecewiseLinearPath subsample(const PiecewiseLinearPath& W, std::size_t stride, std::size_t pieces) {
    if (stride < 1 || pieces < 1) throw RangeError("subsample: stride and pieces must be >= 1");
    if (stride * pieces >= W.knot_count()) throw RangeError("subsample: path has too few knots");
    std::vector<double> t(pieces + 1), w(pieces + 1);
    for (std::size_t k = 0; k <= pieces; ++k) {
        t[k] = W.times()[k * stride];
        w[k] = W.values()[k * stride];
    }
    return PiecewiseLinearPath(std::move(t), std::move(w));
}

PiecewiseLinearPath mollify(const PiecewiseLinearPath& W, double delta) {
    const double T = W.horizon();
    if (!(delta > 0.0) || !(delta < 0.5 * T)) throw RangeError("mollify: need 0 < delta < T/2");
    // Odd reflection through (0, 0) on the left keeps the value at 0 equal to
    // 0 and leaves affine paths unchanged; constant extension on the right.
    std::vector<double> et;
    std::vector<double> ew;
    std::size_t left = 1;
    while (left < W.knot_count() && W.times()[left - 1] < 2.0 * delta) ++left;
    et.reserve(W.knot_count() + left + 1);
    ew.reserve(W.knot_count() + left + 1);
    for (std::size_t i = left - 1; i >= 1; --i) {
        et.push_back(-W.times()[i]);
        ew.push_back(-W.values()[i]);
    }
    et.insert(et.end(), W.times().begin(), W.times().end());
    ew.insert(ew.end(), W.values().begin(), W.values().end());
    et.push_back(T + 2.0 * delta);
    ew.push_back(W.values().back());

    auto wext = [&](std::size_t seg, double s) {
        const double u = (s - et[seg]) / (et[seg + 1] - et[seg]);
        return ew[seg] + u * (ew[seg + 1] - ew[seg]);
    };
    auto kernel = [delta](double s) { return std::max(delta - std::abs(s), 0.0) / (delta * delta); };

    // On each piece both the path and the kernel are affine, so Simpson's rule
    // integrates the product exactly.
    auto smooth = [&](double t) {
        const double a = t - delta;
        const double b = t + delta;
        std::size_t seg = static_cast<std::size_t>(std::upper_bound(et.begin(), et.end(), a) - et.begin()) - 1;
        double acc = 0.0;
        double lo = a;
        while (lo < b) {
            double hi = std::min(b, et[seg + 1]);
            if (lo < t && hi > t) hi = t;
            if (hi > lo) {
                const double mid = 0.5 * (lo + hi);
                acc += (hi - lo) / 6.0 *
                       (wext(seg, lo) * kernel(t - lo) + 4.0 * wext(seg, mid) * kernel(t - mid) +
                        wext(seg, hi) * kernel(t - hi));
            }
            lo = hi;
            if (lo >= et[seg + 1] && seg + 2 < et.size()) ++seg;
        }
        return acc;
    };

    const double step = delta / 8.0;
    const auto m = static_cast<std::size_t>(std::ceil(T / step - 1e-9));
    std::vector<double> t(m + 1);
    std::vector<double> w(m + 1);
    for (std::size_t i = 0; i <= m; ++i) t[i] = i == m ? T : static_cast<double>(i) * step;
    for (std::size_t i = 1; i <= m; ++i) w[i] = smooth(t[i]);
    w[0] = 0.0;
    return PiecewiseLinearPath(std::move(t), std::move(w));
}

Partition greedy_oscillation_partition(const PiecewiseLinearPath& W, double delta) {
    if (!(delta > 0.0)) throw RangeError("greedy_oscillation_partition: delta must be positive");
    const auto& t = W.times();
    const auto& w = W.values();
    const double T = W.horizon();
    Partition P;
    P.breakpoints.push_back(0.0);
    double lo = w[0];
    double hi = w[0];
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        const double ta = t[i];
        const double tb = t[i + 1];
        const double va = w[i];
        const double vb = w[i + 1];
        if (vb > va) {
            while (vb >= lo + delta) {
                const double target = lo + delta;
                const double ts = ta + (target - va) / (vb - va) * (tb - ta);
                P.breakpoints.push_back(std::clamp(ts, std::max(ta, P.breakpoints.back()), tb));
                lo = hi = target;
            }
            hi = std::max(hi, vb);
        } else if (vb < va) {
            while (vb <= hi - delta) {
                const double target = hi - delta;
                const double ts = ta + (va - target) / (va - vb) * (tb - ta);
                P.breakpoints.push_back(std::clamp(ts, std::max(ta, P.breakpoints.back()), tb));
                lo = hi = target;
            }
            lo = std::min(lo, vb);
        }
    }
    // Collapse coincident breakpoints produced by rounding.
    auto& b = P.breakpoints;
    b.erase(std::unique(b.begin(), b.end()), b.end());
    if (b.back() < T) {
        if (b.size() > 1 && T - b.back() <= 1e-12 * T) {
            b.back() = T;
        } else {
            b.push_back(T);
        }
    }
    return P;
}

std::size_t count_N(const PiecewiseLinearPath& W, double delta) {
    return greedy_oscillation_partition(W, delta).intervals();
}

Partition bm_refinement_partition(const PiecewiseLinearPath& W, int n) {
    if (n < 0) throw RangeError("bm_refinement_partition: n must be >= 0");
    return greedy_oscillation_partition(W, std::pow(2.0, -0.5 * n));
}

namespace {

// Endpoints plus strict local extrema; p-variation and Hoelder suprema only
// need these.
std::vector<double> turning_values(const PiecewiseLinearPath& W) {
    const auto& w = W.values();
    std::vector<double> v{w[0]};
    int dir = 0;
    for (std::size_t i = 1; i < w.size(); ++i) {
        const double d = w[i] - v.back();
        if (d == 0.0) continue;
        const int s = d > 0.0 ? 1 : -1;
        if (s == dir) {
            v.back() = w[i];
        } else {
            v.push_back(w[i]);
            dir = s;
        }
    }
    return v;
}

}  // namespace

double p_variation(const PiecewiseLinearPath& W, double p) {
    if (!(p >= 1.0)) throw RangeError("p_variation: p must be >= 1");
    const std::vector<double> v = turning_values(W);
    if (p == 1.0) {
        double s = 0.0;
        for (std::size_t i = 1; i < v.size(); ++i) s += std::abs(v[i] - v[i - 1]);
        return s;
    }
    std::vector<double> best(v.size(), 0.0);
    for (std::size_t j = 1; j < v.size(); ++j) {
        double b = 0.0;
        for (std::size_t i = 0; i < j; ++i) b = std::max(b, best[i] + std::pow(std::abs(v[j] - v[i]), p));
        best[j] = b;
    }
    return std::pow(best.back(), 1.0 / p);
}

double holder_seminorm(const PiecewiseLinearPath& W, double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw RangeError("holder_seminorm: alpha must lie in (0,1]");
    const auto& t = W.times();
    const auto& w = W.values();
    double best = 0.0;
    for (std::size_t j = 1; j < t.size(); ++j) {
        for (std::size_t i = 0; i < j; ++i) {
            best = std::max(best, std::abs(w[j] - w[i]) / std::pow(t[j] - t[i], alpha));
        }
    }
    return best;
}

KProfile k_path_profile(const PiecewiseLinearPath& W, int n_max) {
    if (n_max < 0) throw RangeError("k_path_profile: n_max must be >= 0");
    const double sup = W.sup_norm();
    const double tv = W.total_variation();
    KProfile prof;
    prof.orientation = KProfile::Orientation::SmallArgument;
    std::vector<std::pair<double, double>> sweep;  // (delta, count)
    if (sup > 0.0) {
        for (int j = 0; j <= 20; ++j) {
            const double d = std::ldexp(sup, -j);
            const auto c = static_cast<double>(count_N(W, d));
            sweep.emplace_back(d, c);
            // Below the knot scale c d is essentially TV, so d + s c d cannot
            // beat the s TV candidate and the count only grows like TV / d.
            if (c * d >= tv || c >= 4.0 * static_cast<double>(W.knot_count())) break;
        }
    }
    for (int n = 0; n <= n_max; ++n) {
        const double s = std::ldexp(1.0, -n);
        double best = std::min(sup, s * tv);
        for (const auto& [d, c] : sweep) best = std::min(best, d + s * c * d);
        prof.entries.push_back({n, best});
    }
    return prof;
}

double p_alpha_norm(const PiecewiseLinearPath& W, double alpha, double p, int n_max) {
    if (!(p >= 1.0)) throw RangeError("p_alpha_norm: p must be >= 1");
    const KProfile prof = k_path_profile(W, n_max);
    double acc = 0.0;
    for (const KEntry& e : prof.entries) {
        const double term = std::pow(2.0, e.level * alpha) * e.upper;
        if (std::isinf(p)) {
            acc = std::max(acc, term);
        } else {
            acc += std::pow(term, p);
        }
    }
    return std::isinf(p) ? acc : std::pow(acc, 1.0 / p);
}

std::vector<std::size_t> walk_exit_times(const std::vector<int>& steps, int M) {
    if (M < 1) throw RangeError("walk_exit_times: M must be >= 1");
    std::vector<std::size_t> tau;
    long long z = 0;
    long long anchor = 0;
    for (std::size_t k = 0; k < steps.size(); ++k) {
        z += steps[k];
        if (std::llabs(z - anchor) >= M) {
            tau.push_back(k + 1);
            anchor = z;
        }
    }
    return tau;
}

std::size_t walk_exit_count(const std::vector<int>& steps, int M, double t) {
    if (M < 1) throw RangeError("walk_exit_count: M must be >= 1");
    const double need = std::max(0.0, std::ceil(t) - 1.0);
    if (static_cast<double>(steps.size()) < need) throw RangeError("walk_exit_count: walk too short");
    std::size_t count = 1;
    for (std::size_t tau : walk_exit_times(steps, M)) {
        if (static_cast<double>(tau) < t) {
            ++count;
        } else {
            break;
        }
    }
    return count;
}

double path_L1_modulus(const PiecewiseLinearPath& W, double h) {
    const double T = W.horizon();
    if (!(h > 0.0 && h < T)) throw RangeError("path_L1_modulus: need 0 < h < T");
    const double end = T - h;
    std::vector<double> cuts{0.0, end};
    for (double t : W.times()) {
        if (t > 0.0 && t < end) cuts.push_back(t);
        if (t - h > 0.0 && t - h < end) cuts.push_back(t - h);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i];
        const double b = cuts[i + 1];
        const double da = W(a + h) - W(a);
        const double db = W(b + h) - W(b);
        if ((da >= 0.0 && db >= 0.0) || (da <= 0.0 && db <= 0.0)) {
            acc += 0.5 * (b - a) * std::abs(da + db);
        } else {
            // Affine difference changes sign at the root.
            const double r = a + (b - a) * da / (da - db);
            acc += 0.5 * ((r - a) * std::abs(da) + (b - r) * std::abs(db));
        }
    }
    return acc;
}

std::uint64_t path_hash(const PiecewiseLinearPath& W) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto feed = [&h](double x) {
        unsigned char bytes[sizeof(double)];
        std::memcpy(bytes, &x, sizeof(double));
        for (unsigned char c : bytes) {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
    };
    for (std::size_t i = 0; i < W.knot_count(); ++i) {
        feed(W.times()[i]);
        feed(W.values()[i]);
    }
    return h;
}

void write_csv(std::ostream& os, const PiecewiseLinearPath& W) {
    os << "t,w\n" << std::setprecision(17);
    for (std::size_t i = 0; i < W.knot_count(); ++i) os << W.times()[i] << ',' << W.values()[i] << '\n';
}

PiecewiseLinearPath read_path_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("t,w", 0) != 0) {
        throw InterfaceError("path CSV must start with header 't,w'");
    }
    std::vector<double> t;
    std::vector<double> w;
    while (std::getline(is, line)) {
        if (line.empty() || line == "\r") continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw InterfaceError("malformed path row: " + line);
        t.push_back(std::stod(line.substr(0, comma)));
        w.push_back(std::stod(line.substr(comma + 1)));
    }
    return PiecewiseLinearPath(std::move(t), std::move(w));
}

void write_csv(std::ostream& os, const Partition& P) {
    os << "k,t\n" << std::setprecision(17);
    for (std::size_t i = 0; i < P.breakpoints.size(); ++i) os << i << ',' << P.breakpoints[i] << '\n';
}

}  // namespace phj
