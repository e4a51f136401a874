#include <doctest.h>

#include <cmath>
#include <memory>
#include <vector>

#include "hslag/errors.hpp"
#include "hslag/greens.hpp"
#include "hslag/grid.hpp"
#include "hslag/singularity.hpp"
#include "hslag/wente.hpp"

using namespace hslag;

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

TEST_SUITE("greens") {

TEST_CASE("greens: closed-form value, boundary zero, singular guard") {
    const GreenField green(one_point(cplx{0.3, 0.0}, +1));
    // |mobius(0.3, 0.6)| = 0.3 / 0.82.
    CHECK(green.value(cplx{0.6, 0.0}) ==
          doctest::Approx(-1.0055218656020977).epsilon(1e-14));
    for (int k = 0; k < 32; ++k) {
        const double th = kTwoPi * k / 32;
        CHECK(std::abs(green.value(std::polar(1.0, th))) < 1e-13);
    }
    CHECK_THROWS_AS(green.value(cplx{0.3, 0.0}), EvaluationAtSingularity);
}

TEST_CASE("greens: the potential is harmonic away from its points") {
    const SingularityConfig cfg = two_point(cplx{0.5, 0.0}, cplx{-0.5, 0.0});
    const GreenField green(cfg);
    const double h = 1.0 / 128;
    double worst = 0.0;
    for (int j = -100; j <= 100; ++j) {
        for (int i = -100; i <= 100; ++i) {
            const cplx z{(i + 0.5) * h, (j + 0.5) * h};
            if (std::abs(z) > 0.9) continue;
            if (cfg.min_distance_to(z) < 0.4) continue;
            const double lap = (green.value(z + h) + green.value(z - h) +
                                green.value(z + cplx{0.0, h}) + green.value(z - cplx{0.0, h}) -
                                4.0 * green.value(z)) /
                               (h * h);
            worst = std::max(worst, std::abs(lap));
        }
    }
    CHECK(worst < 5e-3);
}

TEST_CASE("greens: gradient and rotated gradient are consistent") {
    const GreenField green(two_point(cplx{0.2, 0.4}, cplx{-0.3, -0.1}));
    const double d = 1e-6;
    const cplx z{0.4, -0.35};
    const Vec2 g = green.gradient(z);
    const Vec2 p = green.perp_gradient(z);
    const double gx = (green.value(z + d) - green.value(z - d)) / (2 * d);
    const double gy = (green.value(z + cplx{0.0, d}) - green.value(z - cplx{0.0, d})) / (2 * d);
    CHECK(g.x == doctest::Approx(gx).epsilon(1e-7));
    CHECK(g.y == doctest::Approx(gy).epsilon(1e-7));
    CHECK(p.x == doctest::Approx(-g.y).epsilon(1e-14));
    CHECK(p.y == doctest::Approx(g.x).epsilon(1e-14));
}

TEST_CASE("greens: discrete delta reproduces the potential") {
    // Place the 2 pi charge at the node nearest p and compare against the
    // closed form for that shifted point; the remaining gap is the zero ring
    // against the O(h) true boundary values.
    const double h = 1.0 / 64;
    const cplx p{0.3, 0.2};
    auto grid = std::make_shared<DiscGrid>(h, one_point(p, +1));
    std::uint32_t nearest = 0;
    double best = 1e300;
    for (std::uint32_t id = 0; id < grid->node_count(); ++id) {
        const double d = std::abs(grid->position(id) - p);
        if (d < best) {
            best = d;
            nearest = id;
        }
    }
    const cplx pn = grid->position(nearest);
    ScalarField rhs(grid);
    rhs[nearest] = kTwoPi / (h * h);
    const ScalarField v = poisson_zero_bc(rhs);
    const GreenField shifted(one_point(pn, +1));
    double worst = 0.0;
    for (std::uint32_t id = 0; id < grid->node_count(); ++id) {
        const cplx z = grid->position(id);
        if (std::abs(z - pn) < 0.25 || std::abs(z) > 0.85) continue;
        worst = std::max(worst, std::abs(v[id].real() - shifted.value(z)));
    }
    CHECK(worst < 0.05);
}

TEST_CASE("greens: maslov windings count the enclosed degrees") {
    const SingularityConfig cfg = two_point(cplx{0.5, 0.0}, cplx{-0.5, 0.0});
    const SOneMap g(cfg);
    CHECK(maslov_winding_circle(g, cplx{0.5, 0.0}, 0.2) == 1);
    CHECK(maslov_winding_circle(g, cplx{-0.5, 0.0}, 0.2) == -1);
    CHECK(maslov_winding_circle(g, cplx{0.0, 0.0}, 0.9) == 0);

    std::vector<cplx> square = {{0.2, -0.3}, {0.8, -0.3}, {0.8, 0.3}, {0.2, 0.3}};
    std::vector<cplx> fine;
    for (std::size_t k = 0; k < square.size(); ++k) {
        const cplx a = square[k], b = square[(k + 1) % square.size()];
        for (int s = 0; s < 64; ++s) fine.push_back(a + (b - a) * (s / 64.0));
    }
    CHECK(maslov_winding(g, fine, 0.05) == 1);
    CHECK_THROWS_AS(maslov_winding(g, fine, 0.5), LoopTooCloseToSingularity);
}

TEST_CASE("greens: unit circle map and its boundary derivative") {
    const SingularityConfig cfg = two_point(cplx{0.4, 0.1}, cplx{-0.2, -0.5});
    const SOneMap g(cfg);
    for (int k = 0; k < 16; ++k) {
        const double th = kTwoPi * k / 16;
        CHECK(std::abs(std::abs(g.value(std::polar(1.0, th))) - 1.0) < 1e-13);
        const double d = 1e-6;
        const cplx fd =
            (g.value(std::polar(1.0, th + d)) - g.value(std::polar(1.0, th - d))) / (2 * d);
        CHECK(std::abs(g.boundary_theta_derivative(th) - fd) < 1e-6);
    }
}

TEST_CASE("greens: admissibility certificate") {
    const AdmissibilityReport good = admissibility_check(
        two_point(cplx{0.5, 0.0}, cplx{-0.5, 0.0}), 1.0 / 64);
    CHECK(good.balanced);
    CHECK(good.verdict == "admissible");
    for (const auto& census : good.levels) {
        for (const auto& comp : census.components) {
            CHECK(comp.simply_connected);
            CHECK(comp.singularities.size() == 1);
            CHECK(std::abs(std::abs(comp.flux) - kTwoPi) < 0.35 * kTwoPi);
        }
    }

    const AdmissibilityReport lone =
        admissibility_check(one_point(cplx{0.3, 0.0}, +1), 1.0 / 64);
    CHECK_FALSE(lone.balanced);
    CHECK(lone.verdict != "admissible");
}

}  // TEST_SUITE
