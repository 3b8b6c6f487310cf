#include "doctest.h"

#include <cmath>
#include <random>

#include "phj/errors.hpp"
#include "phj/solver.hpp"
#include "oracles.hpp"

using namespace phj;
using namespace phj::oracle;

namespace {

double sup_diff(const GridFunction& a, const GridFunction& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double max_slope_of(const GridFunction& f) { return f.max_slope(); }

}  // namespace

TEST_CASE("conjugate_init examples") {
    const Grid1D prof(0.0, 8.0, 1025);
    const Grid1D dual1(0.0, 1.0, 257);
    SUBCASE("cone with plateau") {
        const auto s = conjugate_init(GridFunction::sample(prof, [](double r) { return std::max(r, 1.0); }), 1.0, dual1);
        for (std::size_t i = 0; i < dual1.size(); ++i) CHECK(s.values[i] == doctest::Approx(dual1.point(i) - 1.0).scale(1));
    }
    SUBCASE("cone") {
        const auto s = conjugate_init(GridFunction::sample(prof, [](double r) { return r; }), 1.0, dual1);
        for (std::size_t i = 0; i < dual1.size(); ++i) CHECK(std::abs(s.values[i]) < 1e-14);
    }
    SUBCASE("half square") {
        const Grid1D p2(0.0, 2.0, 513);
        const Grid1D d2(0.0, 2.0, 257);
        const auto s = conjugate_init(GridFunction::sample(p2, [](double r) { return 0.5 * r * r; }), 2.0, d2);
        for (std::size_t i = 0; i < d2.size(); ++i) {
            const double r = d2.point(i);
            CHECK(s.values[i] == doctest::Approx(0.5 * r * r).epsilon(1e-12).scale(1));
        }
    }
    SUBCASE("contract violations") {
        CHECK_THROWS_AS(conjugate_init(GridFunction::sample(prof, [](double r) { return -r * r; }), 1.0, dual1),
                        ContractViolation);
        CHECK_THROWS_AS(conjugate_init(GridFunction::sample(prof, [](double r) { return 2.0 * r; }), 1.0, dual1),
                        ContractViolation);
        CHECK_THROWS_AS(conjugate_init(GridFunction::sample(prof, [](double r) { return r; }), 2.0, dual1),
                        InterfaceError);
    }
}

TEST_CASE("eval_primal examples") {
    const Grid1D d1(0.0, 1.0, 129);
    const ConjugateState zero{d1, GridFunction::sample(d1, [](double) { return 0.0; }), 0.0, 1.0};
    const ConjugateState shifted{d1, GridFunction::sample(d1, [](double r) { return r - 1.0; }), 0.0, 1.0};
    for (double x : {-3.0, -0.5, 0.0, 0.7, 2.5}) {
        CHECK(eval_primal(zero, x) == doctest::Approx(std::abs(x)));
        CHECK(eval_primal(shifted, x) == doctest::Approx(std::max(std::abs(x), 1.0)));
    }
    const Grid1D d2(0.0, 2.0, 2049);
    const ConjugateState sq{d2, GridFunction::sample(d2, [](double r) { return 0.5 * r * r; }), 0.0, 2.0};
    for (double x : {-2.0, -1.3, 0.0, 0.4, 1.9}) {
        CHECK(eval_primal(sq, x) == doctest::Approx(0.5 * x * x).epsilon(1e-6).scale(1));
    }
}

TEST_CASE("hopf_step examples") {
    const Grid1D prof(0.0, 8.0, 2049);
    const Grid1D dual(0.0, 1.0, 4097);
    SUBCASE("zero increment leaves the state unchanged") {
        std::mt19937_64 eng(1);
        const auto s = conjugate_init(random_radial(prof, eng, 1.0), 1.0, dual);
        const auto H = power_hamiltonian(0.5, 2.0, 1.0, 4097);
        CHECK(sup_diff(hopf_step(s, H, 0.0).values, s.values) < 1e-14);
    }
    SUBCASE("eikonal erosion") {
        const auto s = conjugate_init(GridFunction::sample(prof, [](double r) { return r; }), 1.0, dual);
        const auto H = power_hamiltonian(1.0, 1.0, 1.0, 4097);
        const auto out = hopf_step(s, H, -1.0);
        for (double x : {0.0, 0.5, 1.0, 1.5, 4.0}) CHECK(eval_primal(out, x) == doctest::Approx(std::max(x - 1.0, 0.0)).scale(1));
    }
    SUBCASE("one tooth from |x| v 1") {
        const auto s = conjugate_init(GridFunction::sample(prof, [](double r) { return std::max(r, 1.0); }), 1.0, dual);
        const auto H = power_hamiltonian(0.5, 2.0, 1.0, 4097);
        const auto out = hopf_step(hopf_step(s, H, 1.0), H, -1.0);
        double err = 0.0;
        for (int i = 0; i <= 400; ++i) {
            const double x = -4.0 + 8.0 * i / 400;
            err = std::max(err, std::abs(eval_primal(out, x) - std::max(std::abs(x), 2.0)));
        }
        CHECK(err <= 1e-3);
    }
    SUBCASE("non-radial H is rejected") {
        const auto s = conjugate_init(GridFunction::sample(prof, [](double r) { return r; }), 1.0, dual);
        std::mt19937_64 eng(2);
        CHECK_THROWS_AS(hopf_step(s, random_general_H(eng, 1.0), 0.5), InterfaceError);
    }
}

TEST_CASE("hopf_solve examples") {
    const Grid1D prof(0.0, 8.0, 2049);
    const Grid1D dual(0.0, 1.0, 4097);
    const auto cone = GridFunction::sample(prof, [](double r) { return r; });
    const double beta = 0.5;
    const auto H = power_hamiltonian(beta, 1.0 / beta, 1.0, 4097);
    SUBCASE("zero path") {
        // Exact when the chord slopes of u0 are dual nodes.
        const auto u0 = GridFunction::sample(prof, [](double r) { return std::max({1.0, 0.5 * r + 0.25, r - 2.0}); });
        const auto states = hopf_solve(u0, 1.0, dual, H, PiecewiseLinearPath::zero(3.0), {0.0, 1.5, 3.0});
        for (const auto& s : states) CHECK(sup_diff(primal_on(s, prof), u0) < 1e-12);
        // Otherwise within the dual resolution.
        const auto curved = GridFunction::sample(prof, [](double r) { return 1.0 + r * r / 16.0; });
        const auto sc = hopf_solve(curved, 1.0, dual, H, PiecewiseLinearPath::zero(3.0), {3.0});
        CHECK(sup_diff(primal_on(sc[0], prof), curved) <= dual.spacing() * prof.hi());
    }
    SUBCASE("teeth") {
        const auto states = hopf_solve(cone, 1.0, dual, H, teeth(2.0), {0.25, 0.5, 1.0, 1.5, 2.0});
        for (const auto& s : states) {
            double err = 0.0;
            for (int i = 0; i <= 200; ++i) {
                const double x = -4.0 + 8.0 * i / 200;
                err = std::max(err, std::abs(eval_primal(s, x) - closedform_tooth_solution(beta, 0.0, x, s.time)));
            }
            CHECK(err <= 2.0 * dual.spacing());
        }
        const double t2 = eval_primal(states.back(), 0.3);
        CHECK(t2 == doctest::Approx(1.0 / beta).epsilon(1e-3));
    }
    SUBCASE("sample time outside the horizon") {
        CHECK_THROWS_AS(hopf_solve(cone, 1.0, dual, H, teeth(2.0), {3.0}), RangeError);
    }
}

TEST_CASE("teeth ordering against the recursion") {
    const double beta = 0.5;
    const Grid1D prof(0.0, 64.0, 4097);
    const Grid1D dual(0.0, 1.0, 4097);
    const auto H = power_hamiltonian(beta, 1.0 / beta, 1.0, 4097);
    std::vector<double> samples;
    for (int k = 1; k <= 10; ++k) samples.push_back(2.0 * k);
    const auto states = hopf_solve(GridFunction::sample(prof, [](double r) { return r; }), 1.0, dual, H, teeth(20.0), samples);
    const ToothRecursion rec = tooth_recursion(1.0 / beta, beta, 10);
    for (int k = 1; k <= 10; ++k) {
        const double u0 = eval_primal(states[static_cast<std::size_t>(k - 1)], 0.0);
        CHECK(u0 == doctest::Approx(rec.a[static_cast<std::size_t>(k - 1)]).epsilon(1e-3));
        CHECK(u0 >= std::pow(beta, -(1 - beta)) * std::pow(k, 1 - beta));
    }
}

TEST_CASE("s_convex examples") {
    const Grid1D prof(0.0, 8.0, 2049);
    const Grid1D dual(0.0, 1.0, 4097);
    const auto cone = GridFunction::sample(prof, [](double r) { return r; });
    const auto H1 = power_hamiltonian(1.0, 1.0, 1.0, 4097);
    CHECK(sup_diff(s_convex(cone, H1, 0.0, dual), cone) == 0.0);
    const auto plus = s_convex(cone, H1, 1.0, dual);
    for (std::size_t i = 0; i < prof.size(); ++i) CHECK(plus[i] == doctest::Approx(prof.point(i) + 1.0));
    const auto plateau = GridFunction::sample(prof, [](double r) { return std::max(r, 1.0); });
    const auto Hb = power_hamiltonian(0.5, 2.0, 1.0, 4097);
    CHECK(s_convex(plateau, Hb, 1.0, dual)[0] == doctest::Approx(2.0).epsilon(1e-6));
    const auto shifted = Hamiltonian1D::radial(1.0, 101, [](double r) { return r + 1.0; });
    CHECK_THROWS_AS(s_convex(cone, shifted, 1.0, dual), ContractViolation);
}

TEST_CASE("envelope_bounds") {
    const Grid1D prof(0.0, 8.0, 2049);
    const Grid1D dual(0.0, 1.0, 4097);
    const auto u0 = GridFunction::sample(prof, [](double r) { return std::max(r, 1.0); });
    const auto H = power_hamiltonian(0.5, 2.0, 1.0, 4097);
    const auto Z = PiecewiseLinearPath::zero(2.0);
    const auto W = teeth(2.0);
    SUBCASE("zero paths") {
        const auto b = envelope_bounds(u0, {{&H, &Z}}, 1.5, dual);
        CHECK(sup_diff(b.lower, u0) == 0.0);
        CHECK(sup_diff(b.upper, u0) == 0.0);
    }
    SUBCASE("single tooth") {
        const auto b = envelope_bounds(u0, {{&H, &W}}, 2.0, dual);
        CHECK(b.lower[0] == doctest::Approx(1.0));
        CHECK(b.upper[0] == doctest::Approx(2.0).epsilon(1e-6));
        const double exact = closedform_tooth_solution(0.5, 1.0, 0.0, 2.0);
        CHECK(exact == doctest::Approx(2.0));
        CHECK(b.lower[0] <= exact);
        CHECK(exact <= b.upper[0] + 1e-6);
    }
    SUBCASE("a zero Hamiltonian changes nothing") {
        const auto H0 = Hamiltonian1D::radial(1.0, 101, [](double) { return 0.0; });
        const auto a = envelope_bounds(u0, {{&H, &W}}, 2.0, dual);
        const auto b = envelope_bounds(u0, {{&H, &W}, {&H0, &W}}, 2.0, dual);
        CHECK(sup_diff(a.lower, b.lower) < 1e-12);
        CHECK(sup_diff(a.upper, b.upper) < 1e-12);
    }
    SUBCASE("both orders sandwich a convex two-Hamiltonian run") {
        const auto Hq = Hamiltonian1D::radial(1.0, 4097, [](double r) { return 0.5 * r * r; });
        const auto Hl = Hamiltonian1D::radial(1.0, 4097, [](double r) { return r; });
        const auto W2 = brownian(1.0, 16, {3, 0});
        const auto W1 = teeth(2.0).scaled(0.5);
        const auto W1c = scale_path(W1, 1, 0.0, 1.0);  // teeth on [0, 1]
        for (auto order : {CompositionOrder::ListOrder, CompositionOrder::Reversed}) {
            const auto b = envelope_bounds(u0, {{&Hq, &W1c}, {&Hl, &W2}}, 1.0, dual, order);
            for (std::size_t i = 0; i < prof.size(); ++i) CHECK(b.lower[i] <= b.upper[i] + 1e-12);
        }
    }
    SUBCASE("normalization enforced") {
        const auto Hs = Hamiltonian1D::radial(1.0, 101, [](double r) { return r + 0.5; });
        CHECK_THROWS_AS(envelope_bounds(u0, {{&Hs, &W}}, 2.0, dual), ContractViolation);
    }
}

TEST_CASE("fd_solve examples") {
    const auto H = Hamiltonian1D::radial(2.0, 201, [](double r) { return r; });
    const PiecewiseLinearPath lin({0.0, 1.0}, {0.0, 1.0});
    SUBCASE("ball expansion within first order") {
        for (std::size_t cells : {200, 400, 800}) {
            const Grid1D g(-4.0, 4.0, cells + 1);
            const auto u0 = GridFunction::sample(g, [](double x) { return std::abs(x); });
            const auto r = fd_solve(u0, H, lin, g, {1.0});
            double e = 0.0;
            for (std::size_t i = 0; i < g.size(); ++i) {
                if (std::abs(g.point(i)) <= 2.0) e = std::max(e, std::abs(r.at(1.0)[i] - (std::abs(g.point(i)) + 1.0)));
            }
            CHECK(e <= 2.0 * g.spacing());
        }
    }
    SUBCASE("erosion converges at half order near the kink") {
        for (std::size_t cells : {200, 800}) {
            const Grid1D g(-4.0, 4.0, cells + 1);
            const auto u0 = GridFunction::sample(g, [](double x) { return -std::abs(x); });
            const auto r = fd_solve(u0, H, lin, g, {1.0});
            double e = 0.0;
            for (std::size_t i = 0; i < g.size(); ++i) {
                const double x = g.point(i);
                if (std::abs(x) <= 2.0) e = std::max(e, std::abs(r.at(1.0)[i] + std::max(std::abs(x) - 1.0, 0.0)));
            }
            CHECK(e <= 2.0 * std::sqrt(g.spacing()));
        }
    }
    SUBCASE("snapshots, cfl and errors") {
        const Grid1D g(-2.0, 2.0, 201);
        const auto u0 = GridFunction::sample(g, [](double x) { return std::abs(x); });
        const auto r = fd_solve(u0, H, teeth(2.0), g, {0.0, 0.5, 2.0});
        CHECK(sup_diff(r.at(0.0), u0) == 0.0);
        CHECK(r.cfl_used <= 0.9 + 1e-12);
        CHECK(r.steps > 0);
        CHECK_THROWS_AS(fd_solve(u0, H, lin, g, {1.0}, {1.5, {}}), RangeError);
        CHECK_THROWS_AS(fd_solve(u0, H, lin, g, {1.0}, {0.0, {}}), RangeError);
        CHECK_THROWS_AS(fd_solve(u0, H, lin, g, {2.0}), RangeError);
    }
    SUBCASE("agrees with the conjugate engine under refinement") {
        const double beta = 0.5;
        const Grid1D prof(0.0, 8.0, 2049);
        const Grid1D dual(0.0, 1.0, 4097);
        const auto Hp = power_hamiltonian(beta, 1.0 / beta, 1.0, 4097);
        const auto cone = GridFunction::sample(prof, [](double r) { return std::max(r, 1.0); });
        const auto hs = hopf_solve(cone, 1.0, dual, Hp, teeth(2.0), {1.0});
        std::vector<double> errs;
        for (std::size_t cells : {160, 320, 640}) {
            const Grid1D g(-8.0, 8.0, cells + 1);
            FDOptions opt;
            opt.lipschitz = 1.0 / beta;  // slopes stay in [-1, 1], where |H'| is unbounded only at 0
            const auto r = fd_solve(radial_extension(cone, g), Hp, teeth(2.0), g, {1.0}, opt);
            double e = 0.0;
            for (std::size_t i = 0; i < g.size(); ++i) {
                const double x = g.point(i);
                if (std::abs(x) <= 3.0) e = std::max(e, std::abs(r.at(1.0)[i] - eval_primal(hs[0], x)));
            }
            errs.push_back(e);
        }
        CHECK(errs[1] < errs[0]);
        CHECK(errs[2] < errs[1]);
        CHECK(std::log2(errs[0] / errs[2]) / 2.0 >= 0.5);
    }
}

TEST_CASE("solver contracts on 100 randomized runs") {
    std::mt19937_64 eng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double L = 1.0;
    const Grid1D prof(0.0, 6.0, 385);
    const Grid1D dual(0.0, L, 513);
    const Grid1D xg(-3.0, 3.0, 241);
    for (int run = 0; run < 100; ++run) {
        const auto W = brownian(1.0, 8, {static_cast<std::uint64_t>(run), 11});
        const std::vector<double> ts{0.5, 1.0};
        const double c = 4.0 * u(eng) - 2.0;
        CAPTURE(run);

        // Conjugate engine.
        const Hamiltonian1D Hr = random_radial_H(eng, L);
        const auto u1 = random_radial(prof, eng, L);
        const auto u2 = random_radial(prof, eng, L);
        const auto u1c = GridFunction::sample(prof, [&](double r) { return u1.interpolate(r) + c; });
        const auto up = GridFunction::sample(prof, [&](double r) { return std::max(u1.interpolate(r), u2.interpolate(r)); });
        const auto s1 = hopf_solve(u1, L, dual, Hr, W, ts);
        const auto s2 = hopf_solve(u2, L, dual, Hr, W, ts);
        const auto s1c = hopf_solve(u1c, L, dual, Hr, W, ts);
        const auto sup = hopf_solve(up, L, dual, Hr, W, ts);
        const double d0 = sup_diff(u1, u2);
        const auto init_dom = conjugate_init(u1, L, dual).values.effective_domain();
        for (std::size_t k = 0; k < ts.size(); ++k) {
            const auto a = primal_on(s1[k], prof), b = primal_on(s2[k], prof);
            const auto ac = primal_on(s1c[k], prof), au = primal_on(sup[k], prof);
            CHECK(sup_diff(a, b) <= d0 + 1e-10);
            for (std::size_t i = 0; i < prof.size(); ++i) {
                CHECK(std::abs(ac[i] - a[i] - c) <= 1e-10);
                CHECK(a[i] <= au[i] + 1e-10);
            }
            const auto dom = s1[k].values.effective_domain();
            REQUIRE(dom.has_value());
            CHECK(dom->last <= init_dom->last);
            CHECK(max_slope_of(a) <= L + 1e-10);
        }

        // Finite differences.
        const Hamiltonian1D Hg = random_general_H(eng, 2.0 * L);
        const auto v1 = random_line(xg, eng, L);
        const double height = u(eng);
        const double centre = 2.0 * u(eng) - 1.0;
        const auto bump = GridFunction::sample(xg, [&](double x) { return height * std::max(0.0, 1.0 - std::abs(x - centre)); });
        const auto v2 = GridFunction::sample(xg, [&](double x) { return v1.interpolate(x) + bump.interpolate(x); });
        const auto v1c = GridFunction::sample(xg, [&](double x) { return v1.interpolate(x) + c; });
        const auto r1 = fd_solve(v1, Hg, W, xg, ts);
        const auto r2 = fd_solve(v2, Hg, W, xg, ts);
        const auto r1c = fd_solve(v1c, Hg, W, xg, ts);
        const double lip0 = std::max(v1.max_slope(), v2.max_slope());
        for (double t : ts) {
            const auto &a = r1.at(t), &b = r2.at(t), &ac = r1c.at(t);
            CHECK(sup_diff(a, b) <= height + 1e-10);
            for (std::size_t i = 0; i < xg.size(); ++i) {
                CHECK(std::abs(ac[i] - a[i] - c) <= 1e-10);
                CHECK(a[i] <= b[i] + 1e-10);
            }
            CHECK(a.max_slope() <= lip0 + 1e-9);
            CHECK(b.max_slope() <= lip0 + 1e-9);
        }
    }
}

TEST_CASE("stability_report") {
    const Grid1D prof(0.0, 4.0, 513);
    const auto u0 = GridFunction::sample(prof, [](double r) { return std::max(r, 1.0); });
    const TruncationResult tr = power_dc_truncation(0.5, 0.25, 1.0, 1025);
    const auto W = teeth(2.0);
    const auto Z = PiecewiseLinearPath::zero(2.0);
    SUBCASE("identical paths") {
        const auto rep = stability_report(tr.dc, W, W, u0, 1.0);
        CHECK(rep.sup_difference == 0.0);
        CHECK(rep.ratio_dc == 0.0);
        CHECK(rep.used_conjugate_engine);
    }
    SUBCASE("epsilon teeth against zero") {
        std::vector<double> ratios;
        for (int k = 2; k <= 6; ++k) {
            const double eps = std::ldexp(1.0, -k);
            const auto rep = stability_report(tr.dc, W.scaled(eps), Z, u0, 1.0);
            CHECK(rep.path_distance == doctest::Approx(eps));
            CHECK(rep.dc_bound == doctest::Approx(tr.dc.norm_upper() * eps));
            CHECK(rep.ratio_dc <= 2.0);
            REQUIRE(rep.ratio_easy.has_value());
            CHECK(*rep.ratio_easy <= 1.0 + 1e-9);
            ratios.push_back(rep.ratio_dc);
        }
        const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
        CHECK(*hi <= 2.0 * *lo);
    }
    SUBCASE("doubling the gap doubles the bound") {
        const auto a = stability_report(tr.dc, W.scaled(0.1), Z, u0, 1.0);
        const auto b = stability_report(tr.dc, W.scaled(0.2), Z, u0, 1.0);
        CHECK(b.dc_bound <= 2.0 * a.dc_bound * (1 + 1e-12));
    }
    SUBCASE("non-convex data uses finite differences") {
        const auto bumpy = GridFunction::sample(prof, [](double r) { return std::max(0.0, 1.0 - std::abs(r - 1.0)); });
        const auto rep = stability_report(tr.dc, W.scaled(0.25), Z, bumpy, 1.0);
        CHECK_FALSE(rep.used_conjugate_engine);
        CHECK(rep.ratio_dc <= 2.0);
    }
}

TEST_CASE("tooth_recursion") {
    const auto r = tooth_recursion(2.0, 0.5, 4);
    CHECK(r.a[0] == 2.0);
    CHECK(r.a[1] == doctest::Approx(2.5));
    CHECK(r.a[2] == doctest::Approx(2.9));
    CHECK(r.a[3] == doctest::Approx(3.2448).epsilon(1e-4));
    const auto eq = tooth_recursion(std::sqrt(2.0), 0.5, 2);
    CHECK(eq.a[1] == doctest::Approx(std::sqrt(2.0) + 1.0 / std::sqrt(2.0)));
    CHECK(eq.a[1] >= 2.0);
    CHECK_THROWS_AS(tooth_recursion(1.0, 0.5, 3), ContractViolation);
    CHECK_THROWS_AS(tooth_recursion(2.0, 1.0, 3), RangeError);
    const auto big = tooth_recursion(std::sqrt(2.0), 0.5, 1000000);
    CHECK(big.lower_bound_holds);
    CHECK(big.first_violation == 0);
}

TEST_CASE("closedform_tooth_solution") {
    const double beta = 0.5;
    for (double x : {-2.0, 0.0, 0.7}) {
        for (double t : {0.0, 0.3, 1.0}) CHECK(closedform_tooth_solution(beta, 0.0, x, t) == doctest::Approx(std::abs(x) + t / beta));
        CHECK(closedform_tooth_solution(beta, 0.0, x, 1.5) == doctest::Approx(std::max(std::abs(x), 1.0) + 1.0));
        CHECK(closedform_tooth_solution(beta, 0.0, x, 2.0) == doctest::Approx(std::max(std::abs(x), 1.0 / beta)));
        for (double a : {std::sqrt(2.0), 2.0, 3.5}) {
            const double top = a + (1 - beta) / beta * std::pow(a, -beta / (1 - beta));
            CHECK(closedform_tooth_solution(beta, a, x, 2.0) == doctest::Approx(std::max(std::abs(x), top)));
        }
    }
    CHECK_THROWS_AS(closedform_tooth_solution(beta, 0.0, 0.0, 2.5), RangeError);
    CHECK_THROWS_AS(closedform_tooth_solution(beta, 0.0, 0.0, -0.1), RangeError);
}
