#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "hslag/grid.hpp"
#include "hslag/singularity.hpp"
#include "hslag/solver.hpp"
#include "hslag/types.hpp"
#include "hslag/variational.hpp"

namespace hslag {

// Discrete Dirichlet problem: Delta phi = rhs in the interior, phi = 0 on the
// boundary ring. Converges to relative residual `tol` or throws NoConvergence.
ScalarField poisson_zero_bc(const ScalarField& rhs, Exec exec = Exec::Parallel,
                            double tol = 1e-11, SolveStats* stats = nullptr);

// grad a . perp grad b at every node with a full difference stencil (zero on
// the boundary ring); real fields carried in the real part.
ScalarField jacobian_density(const ScalarField& a, const ScalarField& b);

// <i grad u, perp grad u> = 2 Im(u_x conj u_y), same stencil convention.
ScalarField pairing_density(const ScalarField& u);

struct WentePair {
    ScalarField a;
    ScalarField b;
};

// Random smooth pair: harmonic plus |z|^2-weighted polynomial parts with
// complex Gaussian coefficients decaying like k^{-2}, truncation 16.
WentePair sample_wente_pair(std::shared_ptr<const DiscGrid> grid, std::uint64_t seed);

struct WenteReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;  // rhs - lhs
    bool pass = false;    // margin >= -1e-9 rhs
};

// Optimal two-sided bound |sum_l d_l phi(p_l)| <= (1/4pi)(int |grad a|^2 +
// int |grad b|^2) with Delta phi = grad a . perp grad b, phi = 0 on the
// boundary. Requires a balanced configuration certified admissible at the
// pair's grid spacing.
WenteReport check_optimal_wente(const WentePair& pair, const SingularityConfig& cfg,
                                Exec exec = Exec::Parallel);

// Classical bound ||b||_inf <= (1/2pi) int |grad u|^2 for Delta b =
// <i grad u, perp grad u>, b = 0 on the boundary.
WenteReport check_linf_wente(const ScalarField& u, Exec exec = Exec::Parallel);

struct WenteMarginRow {
    std::uint64_t seed = 0;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
};

// Seeded randomized audit of the optimal inequality; rows come back in seed
// order regardless of scheduling.
std::vector<WenteMarginRow> wente_audit(const SingularityConfig& cfg, double h, int count,
                                        std::uint64_t seed0, Exec exec = Exec::Parallel);

// Zero-data solves at t in {0.5, 0.9, 0.99} plus a 1e-13 noise probe each;
// throws UniquenessViolation when any gradient norm exceeds 1e-9.
struct UniquenessAudit {
    std::vector<double> ts;
    std::vector<UniquenessProbe> probes;
    bool pass = false;
};

UniquenessAudit uniqueness_audit(const SingularityConfig& cfg, double h, std::uint64_t seed,
                                 Exec exec = Exec::Parallel);

}  // namespace hslag
