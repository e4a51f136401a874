#include <doctest.h>

#include <cmath>
#include <memory>

#include "hslag/errors.hpp"
#include "hslag/greens.hpp"
#include "hslag/grid.hpp"
#include "hslag/immersion.hpp"
#include "hslag/singularity.hpp"
#include "hslag/spectral.hpp"

using namespace hslag;

namespace {

ScalarField sample(std::shared_ptr<const DiscGrid> grid, cplx (*f)(cplx)) {
    ScalarField u(grid);
    for (std::uint32_t id = 0; id < grid->node_count(); ++id) u[id] = f(grid->position(id));
    return u;
}

// Largest deviation of v from v_exact over an annulus, after removing the
// free additive constant at the first usable corner.
double conjugate_gap(const CornerField& v, cplx (*v_exact)(cplx), double rmin, double rmax) {
    bool have_ref = false;
    cplx offset{0.0, 0.0};
    double worst = 0.0;
    for (int j = -v.m(); j <= v.m(); ++j) {
        for (int i = -v.m(); i <= v.m(); ++i) {
            if (!v.has(i, j)) continue;
            const cplx z = v.position(i, j);
            const double r = std::abs(z);
            if (r < rmin || r > rmax) continue;
            if (!have_ref) {
                offset = v.value(i, j) - v_exact(z);
                have_ref = true;
                continue;
            }
            worst = std::max(worst, std::abs(v.value(i, j) - v_exact(z) - offset));
        }
    }
    REQUIRE(have_ref);
    return worst;
}

cplx square_fn(cplx z) { return z * z; }
cplx conj_square_fn(cplx z) { return cplx{0.0, 1.0} * z * z; }
cplx identity_fn(cplx z) { return z; }

cplx cone_mode_fn(cplx z) {
    const double r = std::abs(z);
    return std::pow(r, std::sqrt(2.0)) * std::polar(1.0, std::atan2(z.imag(), z.real()));
}
cplx cone_conj_fn(cplx z) {
    const double r = std::abs(z);
    return cplx{0.0, 1.0} / std::sqrt(2.0) * std::pow(r, std::sqrt(2.0)) *
           std::polar(1.0, 2.0 * std::atan2(z.imag(), z.real()));
}

}  // namespace

TEST_SUITE("immersion") {

TEST_CASE("immersion: conjugate of a quadratic is exact") {
    const SingularityConfig empty;
    auto grid = std::make_shared<DiscGrid>(1.0 / 16, empty);
    const SOneMap g(empty);
    const ScalarField u = sample(grid, square_fn);

    const ConjugateResult res = harmonic_conjugate(u, g);
    // All edge increments are exact for a quadratic, so corner differences
    // reproduce i z^2 to rounding and every plaquette closes.
    CHECK(conjugate_gap(res.v, conj_square_fn, 0.0, 1.0) < 1e-12);
    CHECK(res.div_max < 1e-12);
    CHECK(res.loop_max < 1e-12);

    const double eu = u.dirichlet_energy();
    CHECK(std::abs(res.dirichlet - eu) < 1e-12 * (1.0 + eu));
}

TEST_CASE("immersion: conjugate pair at the model cone point") {
    const SingularityConfig cfg = one_point(cplx{0.0, 0.0}, +1);
    const SOneMap g(cfg);
    double gaps[2];
    int k = 0;
    for (const double h : {1.0 / 32, 1.0 / 64}) {
        auto grid = std::make_shared<DiscGrid>(h, cfg);
        const ScalarField u = sample(grid, cone_mode_fn);
        const ConjugateResult res = harmonic_conjugate(u, g);
        gaps[k++] = conjugate_gap(res.v, cone_conj_fn, 0.3, 0.9);
        const double eu = u.dirichlet_energy();
        CHECK(std::abs(res.dirichlet - eu) < 1e-12 * (1.0 + eu));
    }
    CHECK(gaps[0] < 0.05);
    CHECK(gaps[1] < gaps[0]);
}

TEST_CASE("immersion: corrupting the field shows up in the divergence audit") {
    const SingularityConfig cfg = one_point(cplx{0.0, 0.0}, +1);
    const SOneMap g(cfg);
    auto grid = std::make_shared<DiscGrid>(1.0 / 32, cfg);
    ScalarField u = sample(grid, cone_mode_fn);
    const double clean = harmonic_conjugate(u, g).div_max;

    for (std::uint32_t id = 0; id < grid->node_count(); ++id) {
        if (grid->is_interior(id) && !grid->is_masked(id) &&
            std::abs(grid->position(id) - cplx{0.5, 0.0}) < 0.05) {
            u[id] += cplx{0.5, 0.0};
            break;
        }
    }
    const ConjugateResult res = harmonic_conjugate(u, g);
    CHECK(res.div_max > 10.0 * clean);
    CHECK(res.div_max > 0.1);
}

TEST_CASE("immersion: assembled channels for the exact pair") {
    const SingularityConfig cfg = one_point(cplx{0.0, 0.0}, +1);
    const SOneMap g(cfg);
    auto grid = std::make_shared<DiscGrid>(1.0 / 48, cfg);
    const ScalarField u = sample(grid, cone_mode_fn);
    const ImmersionField imm = assemble_immersion(u, harmonic_conjugate(u, g), g);

    CHECK_FALSE(imm.degenerate());
    CHECK(imm.report(ImmersionField::Channel::Conformality, 0.3, 0.9).max < 0.05);
    CHECK(imm.report(ImmersionField::Channel::Orthogonality, 0.3, 0.9).max < 0.05);
    CHECK(imm.report(ImmersionField::Channel::Lagrangian, 0.3, 0.9).max < 0.05);
    CHECK(imm.report(ImmersionField::Channel::UnitAngle, 0.3, 0.9).max < 0.05);

    // The conformal factor of r^{sqrt 2} e^{i theta} is 3 r^{2 sqrt 2 - 2}.
    double factor_gap = 0.0;
    for (std::uint32_t id = 0; id < grid->node_count(); ++id) {
        if (!imm.defined(id) || grid->is_masked(id)) continue;
        const double r = std::abs(grid->position(id));
        if (r < 0.3 || r > 0.9) continue;
        const double ref = 3.0 * std::pow(r, 2.0 * std::sqrt(2.0) - 2.0);
        factor_gap = std::max(factor_gap, std::abs(imm.conformal_factor(id) - ref) / ref);
    }
    CHECK(factor_gap < 0.05);
}

TEST_CASE("immersion: schoen-wolfson cones are exactly conformal and lagrangian") {
    auto grid = std::make_shared<DiscGrid>(1.0 / 32, one_point(cplx{0.0, 0.0}, +1));
    for (const auto& pq : {ConeDescriptor{1, 1}, ConeDescriptor{2, 1}, ConeDescriptor{3, 2}}) {
        const ImmersionField imm = sw_cone(pq, grid);
        CHECK_FALSE(imm.degenerate());
        const double s = std::sqrt(static_cast<double>(pq.p) * pq.q);
        for (std::uint32_t id = 0; id < grid->node_count(); ++id) {
            if (!imm.defined(id)) continue;
            const cplx z = grid->position(id);
            const double ref = pq.p * pq.q * std::pow(std::abs(z), 2.0 * s - 2.0);
            CHECK(std::abs(imm.conformal_factor(id) - ref) <= 1e-11 * (1.0 + ref));
            CHECK(imm.defect(ImmersionField::Channel::Conformality, id) <= 1e-11 * (1.0 + ref));
            CHECK(imm.defect(ImmersionField::Channel::Orthogonality, id) <= 1e-11 * (1.0 + ref));
            CHECK(imm.defect(ImmersionField::Channel::UnitAngle, id) <= 1e-11 * (1.0 + ref));
            const cplx want =
                std::polar(1.0, (pq.p - pq.q) * std::atan2(z.imag(), z.real()));
            CHECK(std::abs(imm.angle(id) - want) <= 1e-11);
        }
    }
    CHECK_THROWS_AS((void)sw_cone(ConeDescriptor{0, 1}, grid), ConfigError);
}

TEST_CASE("immersion: cone structure residual refines") {
    const ConeDescriptor desc{2, 1};
    auto g32 = std::make_shared<DiscGrid>(1.0 / 32, one_point(cplx{0.0, 0.0}, +1));
    auto g64 = std::make_shared<DiscGrid>(1.0 / 64, one_point(cplx{0.0, 0.0}, +1));
    const double r32 = cone_structure_residual(sw_cone(desc, g32), desc, 0.3, 0.9).max;
    const double r64 = cone_structure_residual(sw_cone(desc, g64), desc, 0.3, 0.9).max;
    CHECK(r32 / r64 > 1.5);
}

TEST_CASE("immersion: mean curvature of a flat lagrangian plane vanishes") {
    const SingularityConfig empty;
    auto grid = std::make_shared<DiscGrid>(1.0 / 24, empty);
    const SOneMap g(empty);
    const ScalarField u = sample(grid, identity_fn);
    const ImmersionField imm = assemble_immersion(u, harmonic_conjugate(u, g), g);

    const GreenField green(empty);
    const MeanCurvatureField mc = mean_curvature(imm, angle_gradient(green));
    CHECK(mc.summary.max < 1e-10);
    for (std::size_t i = 0; i < mc.h_vec.size(); ++i) {
        if (!mc.defined[i]) continue;
        CHECK(std::abs(mc.h_vec[i][0]) < 1e-10);
        CHECK(std::abs(mc.h_vec[i][1]) < 1e-10);
    }

    CHECK_THROWS_AS((void)mean_curvature(ImmersionField(grid), angle_gradient(green)),
                    DegenerateMetric);
}

TEST_CASE("immersion: cone transport cancels the laplacian") {
    const ConeDescriptor desc{2, 1};
    double defect[2];
    int k = 0;
    for (const double h : {1.0 / 32, 1.0 / 64}) {
        auto grid = std::make_shared<DiscGrid>(h, one_point(cplx{0.0, 0.0}, +1));
        const MeanCurvatureField mc =
            mean_curvature(sw_cone(desc, grid), cone_angle_gradient(desc), 0.3, 0.9);
        defect[k++] = mc.summary.max;
    }
    CHECK(defect[0] / defect[1] > 1.5);
}

TEST_CASE("immersion: stationarity diagnostics of the degenerate solve") {
    const SingularityConfig cfg = one_point(cplx{0.0, 0.0}, +1);
    auto grid = std::make_shared<DiscGrid>(1.0 / 32, cfg);
    const ScalarField u = sample(grid, cone_mode_fn);
    const SOneMap g(cfg);
    const ImmersionField imm = assemble_immersion(u, harmonic_conjugate(u, g), g);

    const StationaryReport rep = verify_hamiltonian_stationary(imm, cfg, 0.25, 0.9);
    // G has zero tangential derivative on the circle, so the Neumann trace of
    // arg g vanishes identically; the interior residuals are truncation-sized.
    CHECK(rep.neumann.max < 1e-10);
    CHECK(rep.div_phi.max < 1.0);
    CHECK(rep.div_angle.max < 1.0);
    CHECK(rep.div_phi.channel == "div-g-grad-phi");
}

TEST_CASE("immersion: meshes index their vertices consistently") {
    auto grid = std::make_shared<DiscGrid>(1.0 / 16, one_point(cplx{0.0, 0.0}, +1));
    const ImmersionField imm = sw_cone(ConeDescriptor{2, 1}, grid);
    const MeshData disc = triangulate(imm);
    CHECK(disc.vertices.size() > 100);
    CHECK(disc.faces.size() > 100);
    for (const auto& f : disc.faces) {
        for (const auto ix : f) CHECK(ix < disc.vertices.size());
    }

    const MeshData fan = cone_fan_mesh(ConeDescriptor{2, 1}, 3, 8);
    CHECK(fan.vertices.size() == 8 + 3 * 8);
    CHECK(fan.faces.size() == 8 + 2 * 8 * 2);
    for (const auto& f : fan.faces) {
        for (const auto ix : f) CHECK(ix < fan.vertices.size());
    }
    CHECK_THROWS_AS((void)cone_fan_mesh(ConeDescriptor{2, 1}, 0, 8), ConfigError);
    CHECK_THROWS_AS((void)cone_fan_mesh(ConeDescriptor{2, 1}, 3, 2), ConfigError);
}

}  // TEST_SUITE
