#include "phj/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include "json.hpp"

#include "phj/dc_toolkit.hpp"
#include "phj/errors.hpp"
#include "phj/grid_convex.hpp"
#include "phj/parallel.hpp"
#include "phj/paths.hpp"
#include "phj/solver.hpp"

namespace phj {

namespace {

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

// Independent stream for (purpose, index) under the configured seed.
RngSeed substream(RngSeed base, std::uint64_t purpose, std::uint64_t index) {
    return {base.seed, (base.stream << 40) ^ (purpose << 32) ^ index};
}

// |x| v a on [0, R'] with R' >= R and spacing 1/256, so dyadic kinks are nodes.
GridFunction cone_profile(double a, double R) {
    const auto cells = static_cast<std::size_t>(std::ceil(R * 256.0 - 1e-9));
    return GridFunction::sample(Grid1D(0.0, static_cast<double>(cells) / 256.0, cells + 1),
                                [a](double x) { return std::max(x, a); });
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

RunArtifact start(const ExperimentConfig& cfg) {
    RunArtifact art;
    art.scenario = cfg.scenario();
    art.config_echo = cfg.echo();
    art.seed = cfg.seed();
    art.metadata["version"] = kVersion;
    return art;
}

void add(RunArtifact& art, std::string name, double measured, Assertion::Kind kind, double expected,
         double tolerance, std::string anchor) {
    art.assertions.push_back(
        Assertion::make(std::move(name), measured, kind, expected, tolerance, std::move(anchor)));
}

using K = Assertion::Kind;

}  // namespace

// ---------------------------------------------------------------------------
// Artifact plumbing

Assertion Assertion::make(std::string name, double measured, Kind kind, double expected,
                          double tolerance, std::string anchor) {
    Assertion a;
    a.name = std::move(name);
    a.measured = measured;
    a.expected = expected;
    a.tolerance = tolerance;
    a.kind = kind;
    a.anchor = std::move(anchor);
    switch (kind) {
        case Kind::AtMost: a.passed = measured <= expected + tolerance; break;
        case Kind::AtLeast: a.passed = measured >= expected - tolerance; break;
        case Kind::Near: a.passed = std::abs(measured - expected) <= tolerance; break;
        case Kind::LessThan: a.passed = measured < expected; break;
    }
    return a;
}

const char* Assertion::kind_name(Kind kind) {
    switch (kind) {
        case Kind::AtMost: return "at_most";
        case Kind::AtLeast: return "at_least";
        case Kind::Near: return "near";
        case Kind::LessThan: return "less_than";
    }
    return "?";
}

void Table::add(std::vector<double> row) {
    if (row.size() != columns.size()) throw ContractViolation("Table::add: row width mismatch in " + name);
    rows.push_back(std::move(row));
}

std::vector<double> Table::column(const std::string& col) const {
    const auto it = std::find(columns.begin(), columns.end(), col);
    if (it == columns.end()) throw ContractViolation("Table::column: no column " + col + " in " + name);
    const auto j = static_cast<std::size_t>(it - columns.begin());
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r[j]);
    return out;
}

void Table::write_csv(std::ostream& os) const {
    for (std::size_t j = 0; j < columns.size(); ++j) os << (j ? "," : "") << columns[j];
    os << '\n';
    for (const auto& r : rows) {
        for (std::size_t j = 0; j < r.size(); ++j) os << (j ? "," : "") << fmt(r[j]);
        os << '\n';
    }
}

bool RunArtifact::passed() const {
    return std::all_of(assertions.begin(), assertions.end(), [](const Assertion& a) { return a.passed; });
}

const Table& RunArtifact::table(const std::string& name) const {
    for (const auto& t : tables) {
        if (t.name == name) return t;
    }
    throw ContractViolation("RunArtifact: no table " + name);
}

const Assertion& RunArtifact::assertion(const std::string& name) const {
    for (const auto& a : assertions) {
        if (a.name == name) return a;
    }
    throw ContractViolation("RunArtifact: no assertion " + name);
}

std::string RunArtifact::summary() const {
    using nlohmann::ordered_json;
    ordered_json j;
    j["scenario"] = scenario;
    j["version"] = kVersion;
    j["seed"] = {{"seed", seed.seed}, {"stream", seed.stream}};
    j["passed"] = passed();
    j["config_file"] = "config.ini";
    ordered_json tabs = ordered_json::array();
    for (const auto& t : tables) {
        tabs.push_back({{"name", t.name}, {"file", t.name + ".csv"}, {"columns", t.columns},
                        {"rows", t.rows.size()}});
    }
    j["tables"] = tabs;
    ordered_json as = ordered_json::array();
    for (const auto& a : assertions) {
        as.push_back({{"name", a.name},
                      {"measured", a.measured},
                      {"comparison", Assertion::kind_name(a.kind)},
                      {"expected", a.expected},
                      {"tolerance", a.tolerance},
                      {"anchor", a.anchor},
                      {"passed", a.passed}});
    }
    j["assertions"] = as;
    j["metadata"] = metadata;
    return j.dump(2) + "\n";
}

void RunArtifact::write(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir);
    auto open = [&](const std::string& file) {
        std::ofstream os(dir / file);
        if (!os) throw Error("cannot write " + (dir / file).string());
        return os;
    };
    for (const auto& t : tables) {
        auto os = open(t.name + ".csv");
        t.write_csv(os);
    }
    {
        auto os = open("config.ini");
        os << config_echo;
    }
    auto os = open("summary.json");
    os << summary();
}

double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2) throw DegenerateInput("fit_slope: need two matching points");
    const double n = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    if (sxx == 0.0) throw DegenerateInput("fit_slope: abscissae coincide");
    return sxy / sxx;
}

double empirical_quantile(std::vector<double> values, double q) {
    if (values.empty()) throw DegenerateInput("empirical_quantile: no values");
    if (!(q >= 0.0 && q <= 1.0)) throw RangeError("empirical_quantile: q outside [0, 1]");
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto i = static_cast<std::size_t>(pos);
    const double f = pos - static_cast<double>(i);
    if (i + 1 >= values.size()) return values.back();
    return values[i] + f * (values[i + 1] - values[i]);
}

RunArtifact run_scenario(const ExperimentConfig& config) {
    const std::string& s = config.scenario();
    if (s == "solve") return run_solve(config);
    if (s == "paths") return run_paths(config);
    if (s == "norms") return run_norms(config);
    if (s == "blowup") return run_blowup(config);
    if (s == "limit") return run_limit(config);
    if (s == "brownian") return run_brownian_study(config);
    if (s == "walks") return run_walk_convergence(config);
    if (s == "crossval") return run_crossval(config);
    if (s == "stability") return run_stability(config);
    throw ConfigError("unknown scenario " + s);
}

// ---------------------------------------------------------------------------
// solve

RunArtifact run_solve(const ExperimentConfig& cfg) {
    RunArtifact art = start(cfg);
    const std::string engine = cfg.text("engine");
    if (engine != "hopf" && engine != "fd" && engine != "both") throw ConfigError("engine must be hopf, fd or both");
    const double beta = cfg.number("beta");
    const double coef = cfg.number("coef");
    const double delta = cfg.number("delta");
    const double L = cfg.number("L");
    const double a = cfg.number("u0_a");
    const double duration = cfg.number("duration");
    if (!(L > 0.0) || !(beta > 0.0) || !(duration > 0.0)) throw ConfigError("solve: L, beta and duration must be positive");
    if (L < 1.0) throw ConfigError("solve: the cone |x| v a needs L >= 1");

    const std::string kind = cfg.text("path");
    std::optional<PiecewiseLinearPath> Wopt;
    if (kind == "teeth") {
        Wopt = teeth(duration);
    } else if (kind == "zero") {
        Wopt = PiecewiseLinearPath::zero(duration);
    } else if (kind == "brownian") {
        Wopt = brownian(duration, static_cast<std::size_t>(cfg.integer("steps")), substream(cfg.seed(), 1, 0));
    } else if (kind == "walk") {
        Wopt = scaled_random_walk(static_cast<int>(cfg.integer("walk_n")), duration, substream(cfg.seed(), 2, 0));
    } else if (kind == "file") {
        std::ifstream is(cfg.text("path_file"));
        if (!is) throw ConfigError("cannot read path_file " + cfg.text("path_file"));
        Wopt = read_path_csv(is);
    } else {
        throw ConfigError("path must be teeth, zero, brownian, walk or file");
    }
    const PiecewiseLinearPath& W = *Wopt;
    art.metadata["path_hash"] = std::to_string(path_hash(W));

    const auto h_nodes = static_cast<std::size_t>(cfg.integer("h_nodes"));
    const std::string hname = cfg.text("hamiltonian");
    std::optional<Hamiltonian1D> Hopt;
    if (hname == "power") {
        Hopt = power_hamiltonian(beta, coef, L, h_nodes);
    } else if (hname == "truncated") {
        const double floor_value = std::pow(delta, beta);
        Hopt = Hamiltonian1D::radial(L, h_nodes, [=](double r) {
            return coef * std::max(std::pow(r, beta), floor_value);
        });
    } else {
        throw ConfigError("hamiltonian must be power or truncated");
    }
    const Hamiltonian1D& H = *Hopt;

    std::vector<double> times = cfg.numbers("sample_times");
    for (double& t : times) {
        if (t < 0.0 || t > W.horizon() + 1e-12) throw ConfigError("sample time outside the path horizon");
        t = std::min(t, W.horizon());
    }
    const double x_max = cfg.number("x_max");
    const auto x_nodes = static_cast<std::size_t>(cfg.integer("x_nodes"));
    const Grid1D xg(-x_max, x_max, 2 * x_nodes - 1);
    const double R = x_max + cfg.number("fd_margin");
    const GridFunction u0 = cone_profile(a, R);

    std::vector<std::string> cols{"x"};
    for (double t : times) cols.push_back("u_t" + fmt(t));

    std::optional<std::vector<ConjugateState>> hopf;
    if (engine != "fd") {
        const Grid1D dual(0.0, L, static_cast<std::size_t>(cfg.integer("dual_nodes")));
        hopf = hopf_solve(u0, L, dual, H, W, times);
        Table tab{"hopf", cols, {}};
        for (std::size_t i = 0; i < xg.size(); ++i) {
            std::vector<double> row{xg.point(i)};
            for (const auto& st : *hopf) row.push_back(eval_primal(st, xg.point(i)));
            tab.add(std::move(row));
        }
        art.tables.push_back(std::move(tab));

        const bool closed_form = kind == "teeth" && hname == "power" && beta < 1.0 &&
                                 std::abs(coef * beta - 1.0) < 1e-12 && a > 0.0;
        if (closed_form) {
            double err = 0.0;
            for (std::size_t k = 0; k < times.size(); ++k) {
                if (times[k] > 2.0) continue;
                for (std::size_t i = 0; i < xg.size(); ++i) {
                    const double x = xg.point(i);
                    err = std::max(err, std::abs(art.tables.back().rows[i][k + 1] -
                                                 closedform_tooth_solution(beta, a, x, times[k])));
                }
            }
            add(art, "hopf_vs_closed_form", err, K::AtMost, 0.0, 1e-3, "one-tooth solution formula");
        }
        if (kind == "zero") {
            double err = 0.0;
            for (std::size_t i = 0; i < xg.size(); ++i) {
                for (std::size_t k = 0; k < times.size(); ++k) {
                    err = std::max(err, std::abs(art.tables.back().rows[i][k + 1] -
                                                 std::max(std::abs(xg.point(i)), a)));
                }
            }
            add(art, "hopf_zero_path_identity", err, K::AtMost, 0.0, 1e-12, "constant path leaves u0 unchanged");
        }
    }

    if (engine != "hopf") {
        const double dx = cfg.number("fd_dx");
        const auto cells = static_cast<std::size_t>(std::llround(2.0 * R / dx));
        const Grid1D X(-R, R, cells + 1);
        FDOptions opt;
        opt.cfl = cfg.number("cfl");
        const FDResult fd = fd_solve(radial_extension(u0, X), H, W, X, times, opt);
        art.metadata["fd_steps"] = std::to_string(fd.steps);
        Table tab{"fd", cols, {}};
        std::vector<double> gaps(times.size(), 0.0);
        for (std::size_t i = 0; i < X.size(); ++i) {
            const double x = X.point(i);
            if (std::abs(x) > x_max + 1e-12) continue;
            std::vector<double> row{x};
            for (std::size_t k = 0; k < times.size(); ++k) {
                const double u = fd.at(times[k])[i];
                row.push_back(u);
                if (hopf) gaps[k] = std::max(gaps[k], std::abs(u - eval_primal((*hopf)[k], x)));
            }
            tab.add(std::move(row));
        }
        art.tables.push_back(std::move(tab));
        if (hopf) {
            Table cmp{"engine_gap", {"t", "sup_gap"}, {}};
            for (std::size_t k = 0; k < times.size(); ++k) cmp.add({times[k], gaps[k]});
            art.tables.push_back(std::move(cmp));
        }
    }

    Table path{"path", {"t", "w"}, {}};
    for (std::size_t i = 0; i < W.knot_count(); ++i) path.add({W.times()[i], W.values()[i]});
    art.tables.push_back(std::move(path));
    return art;
}

// ---------------------------------------------------------------------------
// paths

RunArtifact run_paths(const ExperimentConfig& cfg) {
    RunArtifact art = start(cfg);
    const std::string kind = cfg.text("kind");
    const double duration = cfg.number("duration");
    std::optional<PiecewiseLinearPath> Wopt;
    if (kind == "teeth") {
        Wopt = teeth(duration);
    } else if (kind == "brownian") {
        Wopt = brownian(duration, static_cast<std::size_t>(cfg.integer("steps")), substream(cfg.seed(), 1, 0));
    } else if (kind == "walk") {
        Wopt = scaled_random_walk(static_cast<int>(cfg.integer("walk_n")), duration, substream(cfg.seed(), 2, 0));
    } else {
        throw ConfigError("kind must be teeth, brownian or walk");
    }
    if (cfg.number("mollify_delta") > 0.0) Wopt = mollify(*Wopt, cfg.number("mollify_delta"));
    const PiecewiseLinearPath& W = *Wopt;
    art.metadata["path_hash"] = std::to_string(path_hash(W));

    Table path{"path", {"t", "w"}, {}};
    for (std::size_t i = 0; i < W.knot_count(); ++i) path.add({W.times()[i], W.values()[i]});
    art.tables.push_back(std::move(path));

    std::vector<double> deltas = cfg.numbers("deltas");
    std::sort(deltas.begin(), deltas.end());
    Table parts{"partitions", {"delta", "count_N"}, {}};
    std::size_t count_violations = 0;
    std::size_t prev = 0;
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        const std::size_t c = count_N(W, deltas[i]);
        if (i > 0 && c > prev) ++count_violations;
        prev = c;
        parts.add({deltas[i], static_cast<double>(c)});
    }
    art.tables.push_back(std::move(parts));
    if (!deltas.empty()) {
        Table bp{"partition", {"k", "t"}, {}};
        const Partition P = greedy_oscillation_partition(W, deltas.front());
        for (std::size_t k = 0; k < P.breakpoints.size(); ++k) bp.add({static_cast<double>(k), P.breakpoints[k]});
        art.tables.push_back(std::move(bp));
    }

    std::vector<double> ps = cfg.numbers("p_list");
    std::sort(ps.begin(), ps.end());
    Table var{"variation", {"p", "p_variation"}, {}};
    std::size_t pvar_violations = 0;
    double last = kInf;
    for (double p : ps) {
        const double v = p_variation(W, p);
        if (v > last * (1.0 + 1e-12)) ++pvar_violations;
        last = v;
        var.add({p, v});
    }
    art.tables.push_back(std::move(var));

    const int n_max = static_cast<int>(cfg.integer("n_max"));
    const KProfile kp = k_path_profile(W, n_max);
    Table kt{"k_profile", {"level", "upper"}, {}};
    for (const auto& e : kp.entries) kt.add({static_cast<double>(e.level), e.upper});
    art.tables.push_back(std::move(kt));

    const double tv = W.total_variation();
    Table stats{"statistics", {"sup_norm", "total_variation", "holder", "p_alpha_inf"}, {}};
    stats.add({W.sup_norm(), tv, holder_seminorm(W, cfg.number("holder_alpha")),
               p_alpha_norm(W, cfg.number("alpha"), kInf, n_max)});
    art.tables.push_back(std::move(stats));

    add(art, "one_variation_is_total_variation", p_variation(W, 1.0), K::Near, tv, 1e-9 * std::max(1.0, tv),
        "1-variation equals total variation");
    add(art, "count_N_monotone_violations", static_cast<double>(count_violations), K::AtMost, 0.0, 0.0,
        "N(delta, W) nonincreasing in delta");
    add(art, "p_variation_monotone_violations", static_cast<double>(pvar_violations), K::AtMost, 0.0, 0.0,
        "p-variation nonincreasing in p");
    add(art, "k_profile_invariants", kp.satisfies_invariants() ? 1.0 : 0.0, K::AtLeast, 1.0, 0.0,
        "K-functional nonnegative and monotone");
    return art;
}

// ---------------------------------------------------------------------------
// norms

RunArtifact run_norms(const ExperimentConfig& cfg) {
    RunArtifact art = start(cfg);
    const std::string fname = cfg.text("function");
    const double beta = cfg.number("beta");
    const double L = cfg.number("L");
    if (!(L > 0.0)) throw ConfigError("norms: L must be positive");
    const Grid1D g(-L, L, static_cast<std::size_t>(cfg.integer("nodes")));
    std::function<double(double)> fn;
    if (fname == "power") {
        if (!(beta > 0.0 && beta < 1.0)) throw ConfigError("norms: power needs 0 < beta < 1");
        fn = [beta](double p) { return std::pow(std::abs(p), beta); };
    } else if (fname == "abs") {
        fn = [](double p) { return std::abs(p); };
    } else if (fname == "half_square") {
        fn = [](double p) { return 0.5 * p * p; };
    } else if (fname == "x_abs_x") {
        fn = [](double p) { return p * std::abs(p); };
    } else if (fname == "sin") {
        fn = [L](double p) { return std::sin(3.14159265358979323846 * p / L); };
    } else {
        throw ConfigError("function must be power, abs, half_square, x_abs_x or sin");
    }
    const GridFunction f = GridFunction::sample(g, fn);

    const BesovResult bes = besov_seminorm(f, cfg.number("s"), cfg.number("p"), cfg.number("q"),
                                           static_cast<int>(cfg.integer("n_levels")));
    Table bt{"besov", {"level", "term", "partial_sum"}, {}};
    for (std::size_t k = 0; k < bes.terms.size(); ++k) {
        bt.add({static_cast<double>(k), bes.terms[k], bes.partial_sums[k]});
    }
    art.tables.push_back(std::move(bt));
    art.metadata["besov_value"] = fmt(bes.value);
    art.metadata["besov_divergent"] = bes.divergent ? "true" : "false";
    art.metadata["besov_converged"] = bes.converged ? "true" : "false";

    const int k_levels = static_cast<int>(cfg.integer("k_levels"));
    const KProfile kc = k_c11_profile(f, k_levels);
    Table kct{"k_c11", {"level", "upper"}, {}};
    for (const auto& e : kc.entries) kct.add({static_cast<double>(e.level), e.upper});
    art.tables.push_back(std::move(kct));

    const DCFunction1D dc = dc_split(f);
    const GridFunction rec = dc.values();
    double residual = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) residual = std::max(residual, std::abs(rec[i] - f[i]));
    add(art, "dc_split_residual", residual, K::AtMost, 0.0, 1e-10 * std::max(1.0, f.sup_norm()),
        "difference-of-convex reconstruction");
    {
        Table dt{"dc_split", {"x", "part_plus", "part_minus"}, {}};
        for (std::size_t i = 0; i < f.size(); ++i) {
            dt.add({g.point(i), dc.part_plus()[i], dc.part_minus()[i]});
        }
        art.tables.push_back(std::move(dt));
    }
    art.metadata["dc_norm_upper"] = fmt(dc_norm_upper(dc, true));

    TruncationStrategy strategy;
    if (fname == "power") {
        // Truncations |p|^beta v delta^beta are the natural near-optimal splits.
        strategy.exact_split = false;
        strategy.analytic = [beta, L, g, f](int n) {
            const TruncationResult tr = power_dc_truncation(beta, std::ldexp(L, -n), g);
            return std::vector<KCandidate>{make_candidate(f, tr.dc, tr.values)};
        };
    }
    const KProfile kd = k_dc_profile(f, L, k_levels, strategy);
    Table kdt{"k_dc", {"level", "upper"}, {}};
    for (const auto& e : kd.entries) kdt.add({static_cast<double>(e.level), e.upper});
    art.tables.push_back(std::move(kdt));
    add(art, "k_dc_invariants", kd.satisfies_invariants() ? 1.0 : 0.0, K::AtLeast, 1.0, 0.0,
        "K-functional nonnegative and monotone");

    const int N = static_cast<int>(cfg.integer("membership_N"));
    for (double alpha : cfg.numbers("alpha_list")) {
        const HMembership h = h_membership_partial_sums(f, alpha, L, N, strategy);
        Table mt{"membership_alpha" + fmt(alpha), {"n", "term", "partial_sum"}, {}};
        for (std::size_t k = 0; k < h.terms.size(); ++k) {
            mt.add({static_cast<double>(k + 1), h.terms[k], h.partial_sums[k]});
        }
        art.tables.push_back(std::move(mt));
        if (fname != "power") continue;
        const double gap = alpha + beta - 1.0;
        if (gap > 0.0) {
            add(art, "membership_tail_alpha" + fmt(alpha), h.tail_estimate, K::AtMost, 0.0, 1e-3,
                "power Hamiltonian in H_alpha iff alpha + beta > 1");
        } else if (gap < 0.0) {
            add(art, "membership_growth_alpha" + fmt(alpha), h.growth_exponent.value_or(0.0), K::Near, -gap,
                0.1 * -gap, "power Hamiltonian in H_alpha iff alpha + beta > 1");
        }
    }
    return art;
}

// ---------------------------------------------------------------------------
// blow-up and critical limit along scaled teeth

namespace {

// u_n(0, T) along amp * 2^{-n alpha} teeth(2^n t) with H = |p|^beta, u0 = |x|.
double scaled_teeth_value(double alpha, double amp, int n, double T, const Grid1D& dual,
                          const Hamiltonian1D& H, const GridFunction& u0) {
    const PiecewiseLinearPath W = scale_path(teeth(std::ldexp(T, n)), n, alpha, amp, T);
    return eval_primal(hopf_solve(u0, 1.0, dual, H, W, {T})[0], 0.0);
}

}  // namespace

RunArtifact run_blowup(const ExperimentConfig& cfg) {
    RunArtifact art = start(cfg);
    const double alpha = cfg.number("alpha");
    const double beta = cfg.number("beta");
    if (!(alpha > 0.0 && alpha < 1.0 && beta > 0.0 && beta < 1.0)) throw ConfigError("blowup: alpha, beta in (0, 1)");
    if (alpha + beta >= 1.0) throw ConfigError("blowup: needs alpha + beta < 1");
    const double T = cfg.number("horizon");
    if (!(T > 0.0)) throw ConfigError("blowup: horizon must be positive");
    const std::vector<int> ns = cfg.integers("n_list");
    if (ns.size() < 2) throw ConfigError("blowup: n_list needs two levels");
    const auto nodes = static_cast<std::size_t>(cfg.integer("dual_nodes"));
    const Grid1D dual(0.0, 1.0, nodes);
    const Hamiltonian1D H = power_hamiltonian(beta, 1.0, 1.0, nodes);
    const GridFunction u0 = GridFunction::sample(Grid1D(0.0, 4.0, 4097), [](double x) { return x; });

    Table tab{"growth", {"n", "u_T", "log2_u_T", "u_2T", "log2_u_2T"}, {}};
    std::vector<double> xs, y1, y2;
    const auto vals = parallel_map(ns.size(), [&](std::size_t i) {
        return std::pair{scaled_teeth_value(alpha, 1.0 / beta, ns[i], T, dual, H, u0),
                         scaled_teeth_value(alpha, 1.0 / beta, ns[i], 2.0 * T, dual, H, u0)};
    });
    for (std::size_t i = 0; i < ns.size(); ++i) {
        const auto [u1, u2] = vals[i];
        xs.push_back(ns[i]);
        y1.push_back(std::log2(u1));
        y2.push_back(std::log2(u2));
        tab.add({static_cast<double>(ns[i]), u1, y1.back(), u2, y2.back()});
    }
    art.tables.push_back(std::move(tab));
    const double s1 = fit_slope(xs, y1);
    const double s2 = fit_slope(xs, y2);
    const double tol = cfg.number("slope_tolerance");
    add(art, "growth_slope", s1, K::Near, 1.0 - alpha - beta, tol, "blow-up rate 2^{n(1-alpha-beta)}");
    add(art, "growth_slope_doubled_horizon", s2, K::Near, s1, tol, "blow-up rate independent of the horizon");
    return art;
}

RunArtifact run_limit(const ExperimentConfig& cfg) {
    RunArtifact art = start(cfg);
    const double alpha = cfg.number("alpha");
    const double c0 = cfg.number("c0");
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("limit: alpha must lie in (0, 1)");
    if (!(c0 > 0.0)) throw ConfigError("limit: c0 must be positive");
    const double beta = 1.0 - alpha;
    const double T = cfg.number("horizon");
    const std::vector<int> ns = cfg.integers("n_list");
    if (ns.empty()) throw ConfigError("limit: empty n_list");
    const double dt = cfg.number("probe_dt");
    const double xm = cfg.number("probe_x_max");
    const double dx = cfg.number("probe_dx");
    const auto nodes = static_cast<std::size_t>(cfg.integer("dual_nodes"));
    const Grid1D dual(0.0, 1.0, nodes);
    const Hamiltonian1D H = power_hamiltonian(beta, 1.0, 1.0, nodes);
    const GridFunction u0 = GridFunction::sample(Grid1D(0.0, 4.0, 4097), [](double x) { return x; });

    std::vector<double> times;
    for (std::size_t j = 0; j * dt <= T + 1e-12; ++j) times.push_back(std::min(j * dt, T));
    std::vector<double> xs;
    for (std::size_t i = 0; i * dx <= xm + 1e-12; ++i) xs.push_back(i * dx);

    auto solve = [&](int n, double c) {
        const double lambda = std::pow(2.0, alpha) * std::pow(1.0 - alpha, alpha) * c;
        const PiecewiseLinearPath W = scale_path(teeth(std::ldexp(T, n)), n, alpha, lambda / beta, T);
        return hopf_solve(u0, 1.0, dual, H, W, times);
    };
    auto error = [&](const std::vector<ConjugateState>& st, double c) {
        double e = 0.0;
        for (std::size_t k = 0; k < times.size(); ++k) {
            const std::vector<double> u = eval_primal(st[k], xs);
            for (std::size_t i = 0; i < xs.size(); ++i) {
                e = std::max(e, std::abs(u[i] - std::max(xs[i], c * std::pow(times[k], alpha))));
            }
        }
        return e;
    };

    const auto runs = parallel_map(ns.size(), [&](std::size_t i) { return solve(ns[i], c0); });
    Table tab{"errors", {"n", "sup_error", "u_0_T"}, {}};
    std::vector<double> es;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        es.push_back(error(runs[i], c0));
        tab.add({static_cast<double>(ns[i]), es.back(), eval_primal(runs[i].back(), 0.0)});
    }
    art.tables.push_back(std::move(tab));
    for (std::size_t i = 1; i < ns.size(); ++i) {
        add(art, "error_decrease_n" + std::to_string(ns[i]), es[i], K::LessThan, es[i - 1], 0.0,
            "convergence to |x| v c0 t^alpha");
    }
    add(art, "final_error", es.back(), K::LessThan, cfg.number("threshold"), 0.0, "convergence to |x| v c0 t^alpha");

    const double cone = eval_primal(runs.back().back(), xm);
    add(art, "cone_dominates", std::abs(cone - xm), K::AtMost, 0.0, cfg.number("threshold"),
        "limit equals |x| where the cone dominates");

    const auto doubled = solve(ns.back(), 2.0 * c0);
    const double ratio = eval_primal(doubled.back(), 0.0) / eval_primal(runs.back().back(), 0.0);
    add(art, "plateau_scaling", ratio, K::Near, 2.0, 0.1, "plateau proportional to c0");
    art.metadata["doubled_c0_error"] = fmt(error(doubled, 2.0 * c0));
    return art;
}

// ---------------------------------------------------------------------------
// Brownian statistics

RunArtifact run_brownian_study(const ExperimentConfig& cfg) {
    RunArtifact art = start(cfg);
    const auto samples = static_cast<std::size_t>(cfg.integer("samples"));
    if (samples < 50) throw ConfigError("brownian: samples must be >= 50");
    const int n_levels = static_cast<int>(cfg.integer("n_levels"));
    if (n_levels < 2) throw ConfigError("brownian: n_levels must be >= 2");
    const auto steps = static_cast<std::size_t>(1) << cfg.integer("dt_log2");
    const double bound = cfg.number("quantile_bound");

    const auto stats = parallel_map(samples, [&](std::size_t i) {
        const PiecewiseLinearPath W = brownian(1.0, steps, substream(cfg.seed(), 1, i));
        double sN = 0.0;
        for (int n = 2; n <= n_levels; ++n) {
            sN = std::max(sN, std::ldexp(static_cast<double>(count_N(W, std::pow(2.0, -0.5 * n))), -n));
        }
        return std::pair{sN, p_alpha_norm(W, 0.5, kInf, n_levels)};
    });
    Table per{"paths", {"sample", "sup_scaled_count", "p_half_inf"}, {}};
    std::vector<double> sN, sP;
    for (std::size_t i = 0; i < samples; ++i) {
        per.add({static_cast<double>(i), stats[i].first, stats[i].second});
        sN.push_back(stats[i].first);
        sP.push_back(stats[i].second);
    }
    art.tables.push_back(std::move(per));
    Table qt{"quantiles", {"q", "sup_scaled_count", "p_half_inf"}, {}};
    for (double q : {0.05, 0.25, 0.5, 0.75, 0.95}) qt.add({q, empirical_quantile(sN, q), empirical_quantile(sP, q)});
    art.tables.push_back(std::move(qt));
    add(art, "q95_sup_scaled_count", empirical_quantile(sN, 0.95), K::AtMost, bound, 0.0,
        "Brownian paths have finite oscillation-count norm");
    add(art, "q95_p_half_inf", empirical_quantile(sP, 0.95), K::AtMost, bound, 0.0,
        "Brownian paths lie in P_{1/2,inf}");

    // Exit-count tail for the simple random walk.
    const auto M = static_cast<int>(cfg.integer("walk_M"));
    const double t = cfg.number("walk_t");
    const double lambda = cfg.number("lambda");
    const auto walks = static_cast<std::size_t>(cfg.integer("walks"));
    const double M2 = static_cast<double>(M) * M;
    if (!((lambda - 1.0) * t > M2)) throw ConfigError("brownian: needs (lambda - 1) t > M^2");
    const double tail_bound = 2.0 * lambda * (M2 - 1.0) * t / (3.0 * std::pow((lambda - 1.0) * t - M2, 2));
    const auto walk_len = static_cast<std::size_t>(std::ceil(t));
    const auto hits = parallel_map(walks, [&](std::size_t i) {
        const auto steps_i = random_walk_steps(walk_len, substream(cfg.seed(), 2, i));
        return static_cast<double>(walk_exit_count(steps_i, M, t)) > lambda * t / M2 ? 1 : 0;
    });
    const double freq = static_cast<double>(std::accumulate(hits.begin(), hits.end(), 0)) / static_cast<double>(walks);
    const double p_se = std::max(freq, 1.0 / static_cast<double>(walks));
    const double se = std::sqrt(p_se * (1.0 - p_se) / static_cast<double>(walks));
    add(art, "exit_count_tail", freq, K::AtMost, tail_bound, 3.0 * se, "exit-count tail bound");

    const auto epochs = static_cast<std::size_t>(cfg.integer("epochs"));
    std::vector<std::size_t> taus;
    for (std::size_t len = epochs * static_cast<std::size_t>(M2) * 2;; len *= 2) {
        taus = walk_exit_times(random_walk_steps(len, substream(cfg.seed(), 3, 0)), M);
        if (taus.size() >= epochs) break;
    }
    double mean = 0.0, sq = 0.0;
    std::size_t prev = 0;
    for (std::size_t k = 0; k < epochs; ++k) {
        const double d = static_cast<double>(taus[k] - prev);
        prev = taus[k];
        mean += d;
        sq += d * d;
    }
    mean /= static_cast<double>(epochs);
    const double var = sq / static_cast<double>(epochs) - mean * mean;
    const double mse = std::sqrt(var / static_cast<double>(epochs));
    add(art, "mean_exit_epoch", mean, K::Near, M2, 3.0 * mse, "expected exit time M^2");

    Table st{"stopping_times", {"M", "t", "lambda", "walks", "frequency", "bound", "se", "mean_epoch", "mean_se"}, {}};
    st.add({static_cast<double>(M), t, lambda, static_cast<double>(walks), freq, tail_bound, se, mean, mse});
    art.tables.push_back(std::move(st));
    return art;
}

// ---------------------------------------------------------------------------
// random walks versus Brownian interpolants

RunArtifact run_walk_convergence(const ExperimentConfig& cfg) {
    RunArtifact art = start(cfg);
    const std::vector<int> ns = cfg.integers("n_list");
    if (ns.size() < 2) throw ConfigError("walks: n_list needs two levels");
    const auto S = static_cast<std::size_t>(cfg.integer("samples"));
    if (S < 2) throw ConfigError("walks: samples must be >= 2");
    const std::vector<double> probes = cfg.numbers("x_probes");
    const double T = cfg.number("horizon");
    const double beta = cfg.number("beta");
    const double delta = cfg.number("delta");
    const double L = cfg.number("L");
    const double a = cfg.number("u0_a");
    if (L < 1.0) throw ConfigError("walks: the cone |x| v a needs L >= 1");
    const auto R = static_cast<std::size_t>(cfg.integer("reference_steps"));
    const auto nodes = static_cast<std::size_t>(cfg.integer("dual_nodes"));

    const double floor_value = std::pow(delta, beta);
    const Hamiltonian1D H =
        Hamiltonian1D::radial(L, nodes, [=](double r) { return std::max(std::pow(r, beta), floor_value); });
    const Grid1D dual(0.0, L, nodes);
    const double xr = std::max(4.0, 2.0 * (max_abs(probes) + a));
    const ConjugateState init = conjugate_init(cone_profile(a, xr), L, dual);

    // One fine Brownian sample per index. The reference path subsamples it and
    // each walk is embedded in it through exits of +-1/n, so every ensemble has
    // its exact law while sharing the randomness.
    const std::size_t stride = std::max<std::size_t>(1, (std::size_t{1} << 16) / R);
    auto solve = [&](const PiecewiseLinearPath& W) { return eval_primal(hopf_solve(init, H, W, {T})[0], probes); };
    const auto values = parallel_map(S, [&](std::size_t i) {
        std::vector<std::vector<double>> out;
        std::size_t horizons = 2;
        PiecewiseLinearPath B = brownian(horizons * T, horizons * R * stride, substream(cfg.seed(), 1, i));
        out.push_back(solve(subsample(B, stride, R)));
        for (int n : ns) {
            const auto count = static_cast<std::size_t>(std::ceil(static_cast<double>(n) * n * T - 1e-9));
            std::vector<int> steps;
            for (;;) {
                try {
                    steps = embedded_walk_steps(B, 1.0 / n, count);
                    break;
                } catch (const RangeError&) {
                    horizons *= 2;  // the longer sample extends the same increments
                    B = brownian(horizons * T, horizons * R * stride, substream(cfg.seed(), 1, i));
                }
            }
            out.push_back(solve(walk_path(steps, n, T)));
        }
        return out;
    });

    const std::vector<double> qs{0.05, 0.25, 0.5, 0.75, 0.95};
    std::vector<std::string> cols{"n", "x", "mean", "variance"};
    for (double q : qs) cols.push_back("q" + fmt(q));
    Table ens{"ensembles", cols, {}};
    Table disc{"discrepancy", {"n", "quantile_gap", "max_mean_gap_se"}, {}};
    // summary per (ensemble e, probe j)
    auto column = [&](std::size_t e, std::size_t j) {
        std::vector<double> v(S);
        for (std::size_t i = 0; i < S; ++i) v[i] = values[i][e][j];
        return v;
    };
    auto moments = [](const std::vector<double>& v) {
        const double n = static_cast<double>(v.size());
        const double m = std::accumulate(v.begin(), v.end(), 0.0) / n;
        double s = 0.0;
        for (double x : v) s += (x - m) * (x - m);
        return std::pair{m, s / (n - 1.0)};
    };
    for (std::size_t j = 0; j < probes.size(); ++j) {
        const auto ref = column(0, j);
        const auto [m, v] = moments(ref);
        std::vector<double> row{0.0, probes[j], m, v};
        for (double q : qs) row.push_back(empirical_quantile(ref, q));
        ens.add(std::move(row));
    }
    std::vector<double> gaps;
    double final_mean_gap = 0.0;
    for (std::size_t e = 1; e <= ns.size(); ++e) {
        double gap = 0.0, mean_gap = 0.0;
        for (std::size_t j = 0; j < probes.size(); ++j) {
            const auto ref = column(0, j);
            const auto wv = column(e, j);
            const auto [mr, vr] = moments(ref);
            const auto [mw, vw] = moments(wv);
            std::vector<double> row{static_cast<double>(ns[e - 1]), probes[j], mw, vw};
            double g = 0.0;
            for (double q : qs) {
                const double qw = empirical_quantile(wv, q);
                row.push_back(qw);
                g += std::abs(qw - empirical_quantile(ref, q));
            }
            ens.add(std::move(row));
            gap += g / static_cast<double>(qs.size());
            const double pooled = std::sqrt((vr + vw) / static_cast<double>(S));
            mean_gap = std::max(mean_gap, pooled > 0.0 ? std::abs(mw - mr) / pooled : 0.0);
        }
        gap /= static_cast<double>(probes.size());
        gaps.push_back(gap);
        final_mean_gap = mean_gap;
        disc.add({static_cast<double>(ns[e - 1]), gap, mean_gap});
    }
    art.tables.push_back(std::move(ens));
    art.tables.push_back(std::move(disc));

    add(art, "quantile_gap_decrease", gaps.back(), K::LessThan, gaps.front(), 0.0,
        "walk-driven solutions converge in law");
    add(art, "final_mean_gap_in_se", final_mean_gap, K::AtMost, 3.0, 0.0, "walk-driven solutions converge in law");

    // A walk pinned at zero leaves the initial datum unchanged.
    const std::vector<double> pinned = solve(PiecewiseLinearPath::zero(T));
    double err = 0.0;
    for (std::size_t j = 0; j < probes.size(); ++j) err = std::max(err, std::abs(pinned[j] - std::max(std::abs(probes[j]), a)));
    add(art, "zero_path_identity", err, K::AtMost, 0.0, 1e-12, "constant path leaves u0 unchanged");
    return art;
}

// ---------------------------------------------------------------------------
// cross-validation of the two engines

RunArtifact run_crossval(const ExperimentConfig& cfg) {
    RunArtifact art = start(cfg);
    const std::vector<int> res = cfg.integers("resolutions");
    if (res.size() < 2) throw ConfigError("crossval: needs two resolutions");
    const double beta = cfg.number("beta");
    if (!(beta > 0.0 && beta < 1.0)) throw ConfigError("crossval: beta must lie in (0, 1)");
    const double xm = cfg.number("x_max");
    const double window = cfg.number("window");
    if (!(window < xm)) throw ConfigError("crossval: window must be inside the FD domain");
    const auto dual_nodes = static_cast<std::size_t>(cfg.integer("dual_nodes"));
    const auto h_nodes = static_cast<std::size_t>(cfg.integer("h_nodes"));
    const Grid1D dual(0.0, 1.0, dual_nodes);
    const Hamiltonian1D H = power_hamiltonian(beta, 1.0 / beta, 1.0, h_nodes);
    const PiecewiseLinearPath W = teeth(2.0);
    const GridFunction cone0 = cone_profile(0.0, 2.0 * xm);

    auto fd_grid = [&](int r) {
        return Grid1D(-xm, xm, static_cast<std::size_t>(std::llround(2.0 * xm * r)) + 1);
    };

    // FD refinement against |x| + t H(1) at t = 1 (u0 = |x|).
    const auto fd_runs = parallel_map(res.size(), [&](std::size_t k) {
        const Grid1D X = fd_grid(res[k]);
        const FDResult r = fd_solve(radial_extension(cone0, X), H, W, X, {1.0});
        double e = 0.0;
        for (std::size_t i = 0; i < X.size(); ++i) {
            const double x = X.point(i);
            if (std::abs(x) <= window) e = std::max(e, std::abs(r.at(1.0)[i] - (std::abs(x) + H(1.0))));
        }
        return e;
    });
    Table ref{"refinement", {"cells_per_unit", "dx", "sup_error", "ratio"}, {}};
    std::vector<double> lx, ly;
    std::size_t monotone_violations = 0;
    for (std::size_t k = 0; k < res.size(); ++k) {
        const double ratio = k ? fd_runs[k - 1] / fd_runs[k] : 0.0;
        if (k && !(fd_runs[k] < fd_runs[k - 1])) ++monotone_violations;
        ref.add({static_cast<double>(res[k]), 1.0 / res[k], fd_runs[k], ratio});
        lx.push_back(std::log2(static_cast<double>(res[k])));
        ly.push_back(-std::log2(fd_runs[k]));
        if (k) add(art, "halving_ratio_" + std::to_string(res[k]), ratio, K::Near, 2.0, 0.4, "first-order monotone scheme");
    }
    art.tables.push_back(std::move(ref));
    add(art, "fd_order", fit_slope(lx, ly), K::AtLeast, cfg.number("min_order"), 0.0, "first-order monotone scheme");
    add(art, "fd_monotone_violations", static_cast<double>(monotone_violations), K::AtMost, 0.0, 0.0,
        "first-order monotone scheme");

    // Conjugate engine against the one-tooth formula (u0 = |x| v 1).
    const GridFunction cone1 = cone_profile(1.0, 2.0 * xm);
    const auto hs = hopf_solve(cone1, 1.0, dual, H, W, {1.0, 2.0});
    double hopf_err = 0.0;
    for (std::size_t k = 0; k < 2; ++k) {
        for (double x = 0.0; x <= window + 1e-12; x += 1.0 / 256.0) {
            hopf_err = std::max(hopf_err, std::abs(eval_primal(hs[k], x) - closedform_tooth_solution(beta, 1.0, x, k + 1.0)));
        }
    }
    add(art, "hopf_vs_closed_form", hopf_err, K::AtMost, 0.0, 2.0 * dual.spacing(), "one-tooth solution formula");

    // Zero path.
    {
        const Grid1D X = fd_grid(res.front());
        const GridFunction u0 = radial_extension(cone1, X);
        const FDResult r = fd_solve(u0, H, PiecewiseLinearPath::zero(2.0), X, {2.0});
        double e_fd = 0.0;
        for (std::size_t i = 0; i < X.size(); ++i) e_fd = std::max(e_fd, std::abs(r.at(2.0)[i] - u0[i]));
        const auto z = hopf_solve(cone1, 1.0, dual, H, PiecewiseLinearPath::zero(2.0), {2.0});
        double e_h = 0.0;
        for (double x = 0.0; x <= window; x += 1.0 / 64.0) e_h = std::max(e_h, std::abs(eval_primal(z[0], x) - std::max(x, 1.0)));
        add(art, "zero_path_fd", e_fd, K::AtMost, 0.0, 1e-12, "constant path leaves u0 unchanged");
        add(art, "zero_path_hopf", e_h, K::AtMost, 0.0, 1e-12, "constant path leaves u0 unchanged");
    }

    // Envelope sandwich for a concave and a convex Hamiltonian.
    const Hamiltonian1D Hq = Hamiltonian1D::radial(1.0, h_nodes, [](double r) { return 0.5 * r * r; });
    struct Case {
        const char* name;
        const Hamiltonian1D* H;
    };
    const Grid1D X = fd_grid(res.back());
    Table sw{"sandwich", {"case", "t", "fd_vs_hopf", "hopf_violation", "fd_violation", "hopf_tol", "fd_tol"}, {}};
    int case_id = 0;
    for (const Case c : {Case{"concave", &H}, Case{"convex", &Hq}}) {
        const auto hopf = hopf_solve(cone1, 1.0, dual, *c.H, W, {1.0, 2.0});
        const FDResult fd = fd_solve(radial_extension(cone1, X), *c.H, W, X, {1.0, 2.0});
        for (std::size_t k = 0; k < 2; ++k) {
            const double t = k + 1.0;
            const EnvelopeBounds eb = envelope_bounds(cone1, {EnvelopePair{c.H, &W}}, t, dual);
            double gap = 0.0, vh = 0.0, vf = 0.0;
            for (std::size_t i = 0; i < X.size(); ++i) {
                const double x = X.point(i);
                if (std::abs(x) > window) continue;
                const double lo = eb.lower.interpolate(std::abs(x));
                const double hi = eb.upper.interpolate(std::abs(x));
                const double uh = eval_primal(hopf[k], x);
                const double uf = fd.at(t)[i];
                gap = std::max(gap, std::abs(uf - uh));
                vh = std::max({vh, lo - uh, uh - hi});
                vf = std::max({vf, lo - uf, uf - hi});
            }
            const double tol_h = 2.0 * dual.spacing() * std::max(1.0, window);
            const double tol_f = 2.0 * std::max(gap, tol_h);
            sw.add({static_cast<double>(case_id), t, gap, vh, vf, tol_h, tol_f});
            const std::string tag = std::string(c.name) + "_t" + fmt(t);
            add(art, "sandwich_hopf_" + tag, vh, K::AtMost, 0.0, tol_h, "two-sided envelope estimate");
            add(art, "sandwich_fd_" + tag, vf, K::AtMost, 0.0, tol_f, "two-sided envelope estimate");
        }
        ++case_id;
    }
    art.tables.push_back(std::move(sw));
    art.metadata["sandwich_cases"] = "0 = concave power, 1 = convex quadratic";
    return art;
}

// ---------------------------------------------------------------------------
// stability in the path

RunArtifact run_stability(const ExperimentConfig& cfg) {
    RunArtifact art = start(cfg);
    const auto trials = static_cast<std::size_t>(cfg.integer("trials"));
    if (trials < 10) throw ConfigError("stability: trials must be >= 10");
    const int levels = static_cast<int>(cfg.integer("eps_levels"));
    if (levels < 2) throw ConfigError("stability: eps_levels must be >= 2");
    const double beta = cfg.number("beta");
    const double delta = cfg.number("delta");
    const double L = cfg.number("L");
    const double a = cfg.number("u0_a");
    const double max_var = cfg.number("max_variation");
    const double ratio_bound = cfg.number("ratio_bound");
    if (L < 1.0) throw ConfigError("stability: the cone |x| v a needs L >= 1");
    const auto h_nodes = static_cast<std::size_t>(cfg.integer("h_nodes"));
    StabilityOptions opt;
    opt.dual_nodes = static_cast<std::size_t>(cfg.integer("dual_nodes"));
    const GridFunction u0 = cone_profile(a, 4.0);
    const DCFunction1D H = power_dc_truncation(beta, delta, L, h_nodes).dc;

    // epsilon-sweep along scaled teeth
    const PiecewiseLinearPath tooth = teeth(2.0);
    const PiecewiseLinearPath zero = PiecewiseLinearPath::zero(2.0);
    const auto sweep = parallel_map(static_cast<std::size_t>(levels), [&](std::size_t k) {
        return stability_report(H, tooth.scaled(std::ldexp(1.0, -static_cast<int>(k) - 1)), zero, u0, L, opt);
    });
    Table st{"eps_sweep", {"eps", "sup_difference", "dc_bound", "ratio_dc", "easy_bound", "ratio_easy"}, {}};
    double rmin = kInf, rmax = 0.0, easy_worst = 0.0;
    for (std::size_t k = 0; k < sweep.size(); ++k) {
        const auto& r = sweep[k];
        rmin = std::min(rmin, r.ratio_dc);
        rmax = std::max(rmax, r.ratio_dc);
        if (r.ratio_easy) easy_worst = std::max(easy_worst, *r.ratio_easy);
        st.add({std::ldexp(1.0, -static_cast<int>(k) - 1), r.sup_difference, r.dc_bound, r.ratio_dc,
                r.easy_bound.value_or(kInf), r.ratio_easy.value_or(0.0)});
    }
    art.tables.push_back(std::move(st));
    add(art, "sweep_ratio_variation", rmin > 0.0 ? rmax / rmin : kInf, K::AtMost, max_var, 0.0,
        "Lipschitz dependence on the path in the DC norm");
    add(art, "sweep_easy_ratio", easy_worst, K::AtMost, 1.0, 1e-9, "bound by sup|H| times variation of the path gap");
    add(art, "sweep_ratio_bound", rmax, K::AtMost, ratio_bound, 0.0, "Lipschitz dependence on the path in the DC norm");

    // Randomized (H, W1, W2, u0) trials, each with its own epsilon sweep.
    const std::vector<int> eps_exp{2, 5, 8};
    const auto rows = parallel_map(trials, [&](std::size_t i) {
        auto eng = make_engine(substream(cfg.seed(), 1, i));
        std::uniform_real_distribution<double> ub(0.3, 0.9), ud(0.1, 0.5), ua(0.5, 2.0);
        const double b = ub(eng), d = ud(eng), ai = ua(eng);
        const DCFunction1D Hi = power_dc_truncation(b, d, L, h_nodes).dc;
        const GridFunction ui = cone_profile(ai, 4.0);
        const PiecewiseLinearPath W1 = brownian(1.0, 64, substream(cfg.seed(), 2, i));
        const PiecewiseLinearPath G = brownian(1.0, 64, substream(cfg.seed(), 3, i));
        std::vector<double> row{static_cast<double>(i), b, d, ai};
        for (int e : eps_exp) {
            row.push_back(stability_report(Hi, W1, combine(1.0, W1, std::ldexp(1.0, -e), G), ui, L, opt).ratio_dc);
        }
        const auto same = stability_report(Hi, W1, W1, ui, L, opt);
        row.push_back(same.sup_difference);
        return row;
    });
    Table rt{"trials", {"trial", "beta", "delta", "u0_a", "ratio_eps2", "ratio_eps5", "ratio_eps8", "identical_diff"}, {}};
    double worst_var = 0.0, worst_ratio = 0.0, identical = 0.0;
    for (const auto& r : rows) {
        const double lo = std::min({r[4], r[5], r[6]});
        const double hi = std::max({r[4], r[5], r[6]});
        worst_var = std::max(worst_var, lo > 0.0 ? hi / lo : kInf);
        worst_ratio = std::max(worst_ratio, hi);
        identical = std::max(identical, r[7]);
        rt.add(r);
    }
    art.tables.push_back(std::move(rt));
    add(art, "trial_ratio_variation", worst_var, K::AtMost, max_var, 0.0, "Lipschitz dependence on the path in the DC norm");
    add(art, "trial_ratio_bound", worst_ratio, K::AtMost, ratio_bound, 0.0, "Lipschitz dependence on the path in the DC norm");
    add(art, "identical_paths_difference", identical, K::AtMost, 0.0, 0.0, "identical paths give identical solutions");

    // Convex H: the easy bound applies as well.
    const Grid1D hg(-L, L, h_nodes);
    const DCFunction1D Hc = dc_split(GridFunction::sample(hg, [](double p) { return 0.5 * p * p; }));
    const PiecewiseLinearPath W1 = brownian(1.0, 64, substream(cfg.seed(), 4, 0));
    const PiecewiseLinearPath G = brownian(1.0, 64, substream(cfg.seed(), 5, 0));
    const auto rc = stability_report(Hc, W1, combine(1.0, W1, 0.125, G), u0, L, opt);
    add(art, "convex_easy_ratio", rc.ratio_easy.value_or(kInf), K::AtMost, 1.0, 1e-9,
        "bound by sup|H| times variation of the path gap");
    add(art, "convex_ratio_bound", rc.ratio_dc, K::AtMost, ratio_bound, 0.0, "Lipschitz dependence on the path in the DC norm");
    art.metadata["convex_part_minus_sup"] = fmt(Hc.part_minus().sup_norm());
    return art;
}

}  // namespace phj
