#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "hslag/boundary.hpp"
#include "hslag/greens.hpp"
#include "hslag/grid.hpp"
#include "hslag/singularity.hpp"
#include "hslag/solver.hpp"
#include "hslag/spectral.hpp"
#include "hslag/types.hpp"

namespace hslag {

// One record of the t -> 1 continuation.
struct EnergyRow {
    double t = 0.0;
    double dirichlet = 0.0;  // 1/2 int |grad u_t|^2
    double coupling = 0.0;   // 1/2 int G <i grad u_t, perp grad u_t>
    double total = 0.0;      // dirichlet + t * coupling
    double l2inf = 0.0;      // weak-L2 quasinorm of |grad u_t|
};

// Least-squares fit of log(int |grad u|^2) against log(1/(1-t)) over the
// tail of the schedule, together with the fitted blow-up constant
// theta_hat = mean of int |grad u|^2 * sqrt(1-t) over the same window.
struct BlowupFit {
    double slope = 0.0;
    double theta_hat = 0.0;
    std::size_t window_begin = 0;
};

enum class SweepBackend { Spectral, Grid };

struct SweepResult {
    std::vector<EnergyRow> rows;
    BlowupFit fit;
    SweepBackend backend = SweepBackend::Spectral;
    double h = 0.0;
};

// One linear solve per schedule entry. The spectral backend evaluates the
// closed-form mode energies (single singularity only) and samples gradients
// on a lattice of spacing h for the quasinorm; the grid backend assembles
// and solves the discrete system at each t. The schedule must be strictly
// increasing inside [0, 1).
SweepResult t_sweep(const SingularityConfig& cfg, const BoundaryTrace& psi,
                    const std::vector<double>& schedule, double h, SweepBackend backend,
                    Exec exec = Exec::Parallel);

// Window = last half of the rows, capped at 4 (the default 8-point geometric
// schedule fits over its last 4 points).
BlowupFit fit_blowup(const std::vector<EnergyRow>& rows);

// Closed-form solve for a single conical point anywhere in the disc: the
// boundary datum is pulled back under the disc automorphism that centers the
// point, solved mode by mode, and conjugated back.
ConjugatedSolution spectral_solution(const SingularityConfig& cfg, const BoundaryTrace& psi,
                                     double t);

// sup over lambda of lambda * (h^2 #{|f| > lambda})^{1/2}, lambda sampled at
// the input magnitudes themselves.
double l2inf_quasinorm(std::vector<double> magnitudes, double h);
// Same, with magnitudes = |grad u| at every interior node.
double l2inf_quasinorm(const ScalarField& u);

// Closed level curve {G = -d_l eps} around singularity `which`, traced by
// marching squares on a lattice of spacing hc and oriented counterclockwise.
// Throws ContourCrossesZeroSet when no closed interior curve at that level
// isolates exactly that one singular point.
std::vector<cplx> level_contour(const GreenField& green, std::size_t which, double eps, double hc);

// Half the largest |G| at distance 2h from the singular point: a contour
// level that sits well inside the component at resolution h.
double default_contour_level(const GreenField& green, std::size_t which, double h);

// Amplitudes of the separated expansion u = sum_j A_j e^{d a_j(t) G} g^j on
// the component around one singularity, a_j(t) = sqrt(j (j + t)). Quadrature
// of (2 pi i w)^{-1} oint u g^{-j-1} dg on the level curve, corrected by
// e^{+a_j eps} because the weight is constant on level curves of G.
struct ComponentCoefficients {
    std::size_t which = 0;       // singularity index
    int winding = 0;             // g winding of the contour, equals d_l
    double eps = 0.0;            // |G| on the contour
    std::vector<int> modes;      // g-power indices j
    std::vector<cplx> values;    // A_j
};

ComponentCoefficients extract_coefficients(const std::function<cplx(cplx)>& u,
                                           const GreenField& green, const SOneMap& g,
                                           std::size_t which, const std::vector<int>& modes,
                                           double t, double eps, double hc);

// Slow-mode matching across the two components of an admissible two-point
// configuration: A^+_{-1} and A^-_{-1} agree exactly for compatible data, so
// their numerical gap must stay within the measured grid error.
struct MatchingResult {
    cplx a_plus;          // around the degree +1 point
    cplx a_minus;         // around the degree -1 point
    double defect = 0.0;  // |a_plus - a_minus|
    double grid_error = 0.0;  // Richardson gap between spacings h and 2h
    double tolerance = 0.0;   // max(10 * grid_error, 1e-4)
    bool pass = false;
};

MatchingResult matching_experiment(const SingularityConfig& cfg, const BoundaryTrace& psi,
                                   double t, double h, Exec exec = Exec::Parallel);

// The rank experiment: solve one field per basis element, integrate
// oint u_b dg over the level contour of every component, and report the
// singular values of the resulting N x B matrix. `rank_raw` counts sigma
// above 1e-6 sigma_max; `rank` uses an error-aware threshold calibrated by
// re-running the experiment at spacing 2h (never below 1e-9).
struct RankReport {
    std::vector<std::vector<cplx>> matrix;  // components x basis elements
    std::vector<double> singular_values;    // descending
    double threshold_raw = 0.0;
    double threshold = 0.0;
    double richardson = 0.0;
    int rank_raw = 0;
    int rank = 0;
};

RankReport rank_experiment(const SingularityConfig& cfg, const std::vector<BoundaryTrace>& basis,
                           double t, double h, Exec exec = Exec::Parallel);

// Eigenvalues of a small Hermitian matrix, descending (closed form for
// n <= 2, cyclic Jacobi above).
std::vector<double> hermitian_eigenvalues(std::vector<std::vector<cplx>> m);

// Zero-data and perturbed-data invertibility probes of the discrete system.
struct UniquenessProbe {
    double grad_norm_zero = 0.0;       // L2 gradient norm with psi = 0
    double grad_norm_perturbed = 0.0;  // with a random rhs of size `noise`
    double noise = 0.0;
};

UniquenessProbe uniqueness_probe(const SingularityConfig& cfg, double t, double h,
                                 std::uint64_t seed, Exec exec = Exec::Parallel);

}  // namespace hslag
