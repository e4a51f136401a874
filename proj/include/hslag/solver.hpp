#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "hslag/boundary.hpp"
#include "hslag/greens.hpp"
#include "hslag/grid.hpp"
#include "hslag/kernels.hpp"

namespace hslag {

// Discrete stationarity system for the perturbed energy
//   E_t(u) = 1/2 sum_edges |du|^2 + t sum_edges s_e Im(conj(u_P) u_Q),
// where s_e is the edge-averaged transport weight built from the rotated
// Green gradient (s_e = h/4 * (c(P) + c(Q)) dotted with the edge direction).
// Stationarity in the interior reads A u = 0 with A = L - i t S, L the graph
// Laplacian and S real antisymmetric, so A is Hermitian by construction and
// the interior solve is exactly the minimization of E_t with the ring pinned
// to the boundary trace.
struct ElSystem {
    std::shared_ptr<const DiscGrid> grid;
    double t = 0.0;
    Csr a;                   // interior x interior block, Hermitian
    std::vector<cplx> rhs;   // -A_{interior,ring} * trace
    std::vector<cplx> trace; // pinned values, indexed by node id (0 on interior)
    // Transport weight of the edge from node id to its +x / +y neighbour.
    std::vector<double> sx;
    std::vector<double> sy;
};

ElSystem assemble_el_system(std::shared_ptr<const DiscGrid> grid, const GreenField& green,
                            const BoundaryTrace& psi, double t);

struct SolveStats {
    std::uint64_t iterations = 0;
    double residual = 0.0;  // relative to |rhs|
};

// Unpreconditioned complex BiCGSTAB. All reductions go through the chunked
// kernels, so the iteration trajectory is bit-identical for both Exec paths.
// Throws NoConvergence when the iteration cap is hit or the recurrence breaks
// down.
std::vector<cplx> bicgstab(const Csr& a, const std::vector<cplx>& b, double tol,
                           std::uint64_t max_iter, Exec exec, SolveStats* stats = nullptr);

// Solve the pinned system and scatter interior and ring values into a field.
ScalarField solve_el(const ElSystem& sys, Exec exec = Exec::Parallel, double tol = 1e-10,
                     std::uint64_t max_iter = 50000, SolveStats* stats = nullptr);

// Max norm of the interior stencil residual of a nodal field, scaled by 1/h^2
// so it measures the PDE defect -Delta u - i t c . grad u. Nodes masked as
// too close to a singular point are skipped; their coefficients blow up and
// the pointwise defect there says nothing about the rest of the disc.
double el_residual(const ElSystem& sys, const ScalarField& u);

// E_t evaluated on an arbitrary nodal field (ring values taken from the
// field itself). The solver output minimizes this among fields with the same
// ring values; the minimum is attained exactly, not up to quadrature error.
double assembled_quadratic(const ElSystem& sys, const ScalarField& u);

// Split of the same sum into its Dirichlet and transport parts, each scaled
// as an integral: {1/2 int |grad u|^2, 1/2 int G <i grad u, perp grad u>}.
struct QuadraticSplit {
    double dirichlet = 0.0;
    double coupling = 0.0;
};
QuadraticSplit quadratic_split(const ElSystem& sys, const ScalarField& u);

}  // namespace hslag
