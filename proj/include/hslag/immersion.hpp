#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "hslag/greens.hpp"
#include "hslag/grid.hpp"
#include "hslag/singularity.hpp"
#include "hslag/types.hpp"

namespace hslag {

// Schoen-Wolfson cone exponents; the Maslov degree of the cone is p - q.
struct ConeDescriptor {
    int p = 1;
    int q = 1;
};

// Complex samples on the corner lattice (i h, j h), i, j in [-m, m]. The
// harmonic conjugate lives here: corner differences across a grid edge are
// exactly the rotated flux g du of that edge.
class CornerField {
  public:
    CornerField(double h, int m)
        : h_(h), m_(m), values_(side() * side(), cplx{0.0, 0.0}), present_(side() * side(), 0) {}

    double h() const { return h_; }
    int m() const { return m_; }
    std::size_t side() const { return static_cast<std::size_t>(2 * m_ + 1); }

    bool in_range(int i, int j) const { return i >= -m_ && i <= m_ && j >= -m_ && j <= m_; }
    bool has(int i, int j) const { return in_range(i, j) && present_[slot(i, j)] != 0; }
    cplx value(int i, int j) const { return values_[slot(i, j)]; }
    void set(int i, int j, cplx v) {
        values_[slot(i, j)] = v;
        present_[slot(i, j)] = 1;
    }
    cplx position(int i, int j) const { return {i * h_, j * h_}; }
    std::size_t count() const;

  private:
    std::size_t slot(int i, int j) const {
        return static_cast<std::size_t>(j + m_) * side() + static_cast<std::size_t>(i + m_);
    }
    double h_;
    int m_;
    std::vector<cplx> values_;
    std::vector<std::uint8_t> present_;
};

// Harmonic conjugate v with perp grad v = g grad u, integrated edge by edge
// over a spanning tree of the corner lattice, anchored (v = 0) at the corner
// nearest z = 1. Every corner circulation equals -h^2 times the discrete
// divergence of g grad u at the enclosed node, so loop residues are bounded
// by div_l1 exactly; the audit re-checks every non-tree edge.
struct ConjugateResult {
    CornerField v;
    double dirichlet = 0.0;  // sum over integrated edges of |dv|^2 = |g du|^2
    double div_max = 0.0;    // max node |sum_edges g_mid (u_Q - u_P)|
    double div_l1 = 0.0;     // sum of the same over nodes
    double loop_max = 0.0;   // worst non-tree edge jump
};

ConjugateResult harmonic_conjugate(const ScalarField& u, const SOneMap& g);

struct ResidualReport {
    std::string channel;
    double max = 0.0;
    double l2 = 0.0;
    double h = 0.0;
};

// Conformal immersion Phi = (u, conj v) with its pointwise first-fundamental
// -form diagnostics. Channels hold absolute defects in the units of e^{2
// lambda}; `defined` marks nodes where all stencils exist.
class ImmersionField {
  public:
    enum class Channel { Conformality, Orthogonality, Lagrangian, UnitAngle };

    explicit ImmersionField(std::shared_ptr<const DiscGrid> grid);

    const DiscGrid& grid() const { return *grid_; }
    std::shared_ptr<const DiscGrid> grid_ptr() const { return grid_; }

    std::array<cplx, 2>& phi(std::uint32_t id) { return phi_[id]; }
    const std::array<cplx, 2>& phi(std::uint32_t id) const { return phi_[id]; }
    double conformal_factor(std::uint32_t id) const { return factor_[id]; }
    cplx angle(std::uint32_t id) const { return angle_[id]; }
    bool defined(std::uint32_t id) const { return defined_[id] != 0; }

    double defect(Channel c, std::uint32_t id) const;
    ResidualReport report(Channel c, double rmin = 0.0, double rmax = 1.0) const;
    bool degenerate() const;  // conformal factor vanishes everywhere

    // Filled by the builders below.
    std::vector<std::array<cplx, 2>>& raw_phi() { return phi_; }
    std::vector<double>& raw_factor() { return factor_; }
    std::vector<cplx>& raw_angle() { return angle_; }
    std::vector<double>& raw(Channel c);
    std::vector<std::uint8_t>& raw_defined() { return defined_; }

  private:
    std::shared_ptr<const DiscGrid> grid_;
    std::vector<std::array<cplx, 2>> phi_;
    std::vector<double> factor_;
    std::vector<cplx> angle_;
    std::vector<double> conformality_, orthogonality_, lagrangian_, unit_angle_;
    std::vector<std::uint8_t> defined_;
};

// Immersion from a solved field and its conjugate. The v-derivatives entering
// the diagnostics are taken from the local edge increments (g du), never from
// accumulated corner values, so the channels measure geometry rather than
// integration drift.
ImmersionField assemble_immersion(const ScalarField& u, const ConjugateResult& v,
                                  const SOneMap& g);

// Phi_{p,q}(r, theta) = r^{sqrt(pq)}/sqrt(p+q) (sqrt(q) e^{ip theta},
// i sqrt(p) e^{-iq theta}), sampled with analytic polar derivatives; the
// channel defects are exact zeros up to rounding.
ImmersionField sw_cone(const ConeDescriptor& desc, std::shared_ptr<const DiscGrid> grid);

std::array<cplx, 2> sw_cone_value(const ConeDescriptor& desc, cplx z);

// Residuals of the structural system: div(g grad Phi) = 0 in the interior,
// div(conj g grad g) = 0, and the Neumann trace conj(g) dg/dr = 0 on the
// boundary circle (G vanishes there, so the radial derivative of arg g does).
struct StationaryReport {
    ResidualReport div_phi;
    ResidualReport div_angle;
    ResidualReport neumann;
};

StationaryReport verify_hamiltonian_stationary(const ImmersionField& imm,
                                               const SingularityConfig& cfg, double rmin = 0.0,
                                               double rmax = 1.0);

// div(g grad Phi) residual of a sampled cone against its own angle map
// g = e^{-i(p-q) theta}.
ResidualReport cone_structure_residual(const ImmersionField& imm, const ConeDescriptor& desc,
                                       double rmin = 0.0, double rmax = 1.0);

// Mean curvature H = e^{-2 lambda}/2 Delta Phi and the pointwise defect
// |Delta Phi + i grad(arg g) . grad Phi|. Throws DegenerateMetric when a node
// inside the annulus has conformal factor below 1e-8 h^2.
struct MeanCurvatureField {
    std::vector<std::array<cplx, 2>> h_vec;
    std::vector<double> defect;
    std::vector<std::uint8_t> defined;
    ResidualReport summary;
};

MeanCurvatureField mean_curvature(const ImmersionField& imm,
                                  const std::function<Vec2(cplx)>& angle_gradient,
                                  double rmin = 0.0, double rmax = 1.0);

// grad(arg g) fields: perp grad G for a Green configuration, and the exact
// polar form -(p-q) e_theta / r for a cone.
std::function<Vec2(cplx)> angle_gradient(const GreenField& green);
std::function<Vec2(cplx)> cone_angle_gradient(const ConeDescriptor& desc);

// Triangulations for export; vertices carry (Re Phi1, Im Phi1, Re Phi2,
// Im Phi2) and the writer projects to 3-D.
struct MeshData {
    std::vector<std::array<double, 4>> vertices;
    std::vector<std::array<std::uint32_t, 3>> faces;
};

MeshData triangulate(const ImmersionField& imm);
// Polar fan with the apex vertex duplicated per sector (keeps the cone's
// creased normal in viewers).
MeshData cone_fan_mesh(const ConeDescriptor& desc, int rings, int sectors);

}  // namespace hslag
