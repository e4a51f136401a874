#include <doctest.h>

#include <cmath>
#include <functional>
#include <memory>
#include <vector>

#include "hslag/boundary.hpp"
#include "hslag/errors.hpp"
#include "hslag/greens.hpp"
#include "hslag/grid.hpp"
#include "hslag/rng.hpp"
#include "hslag/solver.hpp"
#include "hslag/spectral.hpp"
#include "hslag/variational.hpp"

using namespace hslag;

namespace {
constexpr double kPi = 3.1415926535897932384626433832795;
}

TEST_SUITE("variational") {

TEST_CASE("variational: grid solve tracks the closed form") {
    const SingularityConfig cfg = one_point(cplx{0.0, 0.0}, +1);
    const GreenField green(cfg);
    const BoundaryTrace psi = BoundaryTrace::monomial(1);
    const ModeSolution exact = solve_one_singularity(psi, 0.5, 1);

    auto grid = std::make_shared<DiscGrid>(1.0 / 32, cfg);
    const ElSystem sys = assemble_el_system(grid, green, psi, 0.5);
    const ScalarField u = solve_el(sys);
    double err2 = 0.0, ref2 = 0.0;
    for (std::uint32_t id = 0; id < grid->node_count(); ++id) {
        const cplx ue = exact.value(grid->position(id));
        err2 += std::norm(u[id] - ue);
        ref2 += std::norm(ue);
    }
    CHECK(std::sqrt(err2 / ref2) < 0.1);

    // Energy split against the closed forms.
    const QuadraticSplit split = quadratic_split(sys, u);
    CHECK(split.dirichlet ==
          doctest::Approx(0.5 * exact.dirichlet_energy()).epsilon(0.05));
    CHECK(split.coupling ==
          doctest::Approx(0.5 * exact.coupling_integral()).epsilon(0.08));
}

TEST_CASE("variational: the solver output minimizes the assembled energy") {
    const SingularityConfig cfg = two_point(cplx{0.5, 0.0}, cplx{-0.5, 0.0});
    auto grid = std::make_shared<DiscGrid>(1.0 / 24, cfg);
    const ElSystem sys = assemble_el_system(grid, GreenField(cfg), BoundaryTrace::monomial(2), 0.9);
    const ScalarField u = solve_el(sys);

    const double e0 = assembled_quadratic(sys, u);
    const QuadraticSplit split = quadratic_split(sys, u);
    CHECK(e0 == doctest::Approx(split.dirichlet + 0.9 * split.coupling).epsilon(1e-12));

    Rng rng(3);
    const auto& interior = grid->interior_ids();
    for (int trial = 0; trial < 8; ++trial) {
        ScalarField w = u;
        for (int k = 0; k < 5; ++k) {
            const auto id = interior[static_cast<std::size_t>(rng.uniform() * interior.size())];
            w[id] += cplx{0.02 * rng.gaussian(), 0.02 * rng.gaussian()};
        }
        CHECK(assembled_quadratic(sys, w) > e0);
    }
}

TEST_CASE("variational: both exec paths produce identical fields") {
    const SingularityConfig cfg = one_point(cplx{0.2, 0.1}, +1);
    auto grid = std::make_shared<DiscGrid>(1.0 / 24, cfg);
    const ElSystem sys = assemble_el_system(grid, GreenField(cfg), BoundaryTrace::monomial(1), 0.7);
    const ScalarField a = solve_el(sys, Exec::Serial);
    const ScalarField b = solve_el(sys, Exec::Parallel);
    CHECK(a.values() == b.values());
}

TEST_CASE("variational: spectral sweep reproduces the blow-up law") {
    std::vector<double> schedule;
    for (int k = 1; k <= 6; ++k) schedule.push_back(1.0 - std::pow(4.0, -k));
    const SweepResult sweep =
        t_sweep(one_point(cplx{0.0, 0.0}, +1), BoundaryTrace::monomial(-1), schedule, 1.0 / 32,
                SweepBackend::Spectral);
    CHECK(sweep.rows.size() == schedule.size());
    CHECK(std::abs(sweep.fit.slope - 0.5) < 0.1);
    CHECK(std::abs(sweep.fit.theta_hat - kPi) < 0.15 * kPi);
    // 2 E(t) sqrt(1-t) -> pi (2 - t): monotone growth along the schedule.
    for (std::size_t k = 1; k < sweep.rows.size(); ++k)
        CHECK(sweep.rows[k].dirichlet > sweep.rows[k - 1].dirichlet);
}

TEST_CASE("variational: grid sweep stays near the spectral one while it can") {
    std::vector<double> schedule = {0.5, 0.75};
    const SingularityConfig cfg = one_point(cplx{0.0, 0.0}, +1);
    const BoundaryTrace psi = BoundaryTrace::monomial(-1);
    const SweepResult fine =
        t_sweep(cfg, psi, schedule, 1.0 / 48, SweepBackend::Grid);
    const SweepResult exact = t_sweep(cfg, psi, schedule, 1.0 / 48, SweepBackend::Spectral);
    for (std::size_t k = 0; k < schedule.size(); ++k) {
        CHECK(fine.rows[k].dirichlet ==
              doctest::Approx(exact.rows[k].dirichlet).epsilon(0.05));
        CHECK(fine.rows[k].total == doctest::Approx(exact.rows[k].total).epsilon(0.05));
    }
}

TEST_CASE("variational: sweep schedule validation") {
    const SingularityConfig cfg = one_point(cplx{0.0, 0.0}, +1);
    const BoundaryTrace psi = BoundaryTrace::monomial(1);
    CHECK_THROWS_AS((void)t_sweep(cfg, psi, {}, 1.0 / 32, SweepBackend::Spectral), ConfigError);
    CHECK_THROWS_AS((void)t_sweep(cfg, psi, {0.5, 0.5}, 1.0 / 32, SweepBackend::Spectral),
                    ConfigError);
    CHECK_THROWS_AS((void)t_sweep(cfg, psi, {0.5, 1.0}, 1.0 / 32, SweepBackend::Spectral),
                    ConfigError);
    CHECK_THROWS_AS(
        (void)t_sweep(two_point(cplx{0.5, 0.0}, cplx{-0.5, 0.0}), psi, {0.5}, 1.0 / 32,
                      SweepBackend::Spectral),
        ConfigError);
}

TEST_CASE("variational: fit window and degenerate inputs") {
    CHECK_THROWS_AS((void)fit_blowup({}), ConfigError);
    CHECK_THROWS_AS((void)fit_blowup({EnergyRow{0.5, 1.0, 0.0, 1.0, 0.0}}), ConfigError);

    // Exact power law 2 E = pi (2 - t) / sqrt(1 - t): slope 1/2 recovered.
    std::vector<EnergyRow> rows;
    for (int k = 1; k <= 6; ++k) {
        const double t = 1.0 - std::pow(4.0, -k);
        EnergyRow r;
        r.t = t;
        r.dirichlet = 0.5 * kPi * (2.0 - t) / std::sqrt(1.0 - t);
        rows.push_back(r);
    }
    const BlowupFit fit = fit_blowup(rows);
    CHECK(std::abs(fit.slope - 0.5) < 0.02);
    CHECK(std::abs(fit.theta_hat - kPi) < 0.05 * kPi);
}

TEST_CASE("variational: weak quasinorm by hand") {
    CHECK(l2inf_quasinorm({3.0}, 1.0) == doctest::Approx(3.0).epsilon(1e-15));
    // Candidates: 1 * sqrt(2), 2 * 1 -> 2.
    CHECK(l2inf_quasinorm({1.0, 2.0}, 1.0) == doctest::Approx(2.0).epsilon(1e-15));
    // Sorted {1, 2} at h = 1/2: candidates 1 * sqrt(1/2) and 2 * 1/2 -> 1.
    CHECK(l2inf_quasinorm({2.0, 1.0}, 0.5) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("variational: planted separated mode is recovered exactly") {
    const SingularityConfig cfg = one_point(cplx{0.0, 0.0}, +1);
    const GreenField green(cfg);
    const SOneMap g(cfg);
    const double t = 0.6;
    const double alpha = std::sqrt(1.0 * (1.0 + t));
    const cplx amp{0.0, 2.5};
    // With the point at the origin, e^{alpha G} g = r^alpha e^{i theta}.
    const std::function<cplx(cplx)> u = [&](cplx z) {
        return amp * std::exp(alpha * green.value(z)) * g.value(z);
    };
    const double eps = default_contour_level(green, 0, 1.0 / 64);
    const auto worst_error = [&](double hc) {
        const ComponentCoefficients coeffs =
            extract_coefficients(u, green, g, 0, {-2, -1, 0, 1, 2}, t, eps, hc);
        CHECK(coeffs.winding == 1);
        double worst = 0.0;
        for (std::size_t m = 0; m < coeffs.modes.size(); ++m) {
            const cplx want = coeffs.modes[m] == 1 ? amp : cplx{0.0, 0.0};
            worst = std::max(worst, std::abs(coeffs.values[m] - want));
        }
        return worst;
    };
    // The polyline quadrature is second order in the contour step.
    const double coarse = worst_error(1.0 / 256);
    const double fine = worst_error(1.0 / 1024);
    CHECK(coarse < 5e-4);
    CHECK(fine < 5e-5);
    CHECK(coarse > 6.0 * fine);
}

TEST_CASE("variational: level contours isolate their singularity") {
    const SingularityConfig cfg = two_point(cplx{0.5, 0.0}, cplx{-0.5, 0.0});
    const GreenField green(cfg);
    const SOneMap g(cfg);
    const double eps = default_contour_level(green, 0, 1.0 / 32);
    const auto loop = level_contour(green, 0, eps, 1.0 / 128);
    CHECK(loop.size() >= 8);
    for (const cplx z : loop) {
        CHECK(std::abs(green.value(z) - (-eps)) < 0.2 * eps);
    }
    CHECK(maslov_winding(g, loop, 1e-3) == 1);

    const auto other = level_contour(green, 1, default_contour_level(green, 1, 1.0 / 32),
                                     1.0 / 128);
    CHECK(maslov_winding(g, other, 1e-3) == -1);
}

TEST_CASE("variational: matching and rank at a coarse spacing") {
    const SingularityConfig cfg = two_point(cplx{0.5, 0.0}, cplx{-0.5, 0.0});
    const SOneMap g(cfg);
    const auto basis = compatible_monomial_basis(g, 3);

    const MatchingResult match = matching_experiment(cfg, basis[0], 0.5, 1.0 / 32);
    CHECK(match.pass);
    CHECK(match.defect <= match.tolerance);

    const RankReport report = rank_experiment(cfg, basis, 0.5, 1.0 / 32);
    CHECK(report.matrix.size() == 2);
    CHECK(report.matrix[0].size() == basis.size());
    CHECK(report.rank == 1);
    CHECK(report.singular_values.front() > 0.0);

    // Incompatible data must be rejected before any solve.
    CHECK_THROWS_AS(
        (void)matching_experiment(cfg, BoundaryTrace::monomial(-1), 0.5, 1.0 / 32),
        ConfigError);
}

TEST_CASE("variational: hermitian eigenvalues of pinned matrices") {
    // [[2, i], [-i, 2]] has eigenvalues 3 and 1.
    const auto ev2 = hermitian_eigenvalues({{cplx{2.0, 0.0}, cplx{0.0, 1.0}},
                                            {cplx{0.0, -1.0}, cplx{2.0, 0.0}}});
    CHECK(ev2[0] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(ev2[1] == doctest::Approx(1.0).epsilon(1e-12));

    // diag(1, 2, 3) conjugated stays {3, 2, 1} sorted descending.
    const auto ev3 = hermitian_eigenvalues({{cplx{1.0, 0.0}, {}, {}},
                                            {{}, cplx{3.0, 0.0}, {}},
                                            {{}, {}, cplx{2.0, 0.0}}});
    CHECK(ev3[0] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(ev3[1] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(ev3[2] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("variational: zero-data probes stay at zero") {
    const UniquenessProbe probe =
        uniqueness_probe(two_point(cplx{0.5, 0.0}, cplx{-0.5, 0.0}), 0.9, 1.0 / 32, 42);
    CHECK(probe.grad_norm_zero <= 1e-9);
    CHECK(probe.grad_norm_perturbed <= 1e-9);
    CHECK(probe.noise == doctest::Approx(1e-13));
}

}  // TEST_SUITE
