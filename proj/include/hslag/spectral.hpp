#pragma once

#include <vector>

#include "hslag/boundary.hpp"
#include "hslag/greens.hpp"
#include "hslag/types.hpp"

namespace hslag {

// Circulation integral of the boundary datum against dg along the unit
// circle, oriented counterclockwise; 2048-point trapezoid rule (spectrally
// accurate for smooth periodic integrands). A solution of the degenerate
// (t = 1) problem with finite energy exists iff this vanishes.
cplx compatibility_integral(const BoundaryTrace& psi, const SOneMap& g);

// Closed-form solution family for a single conical point at the origin:
//   u(r, theta) = sum_k A_k r^{alpha_k} e^{i k theta},
//   alpha_k = sqrt(k^2 + degree * t * k).
// For t < 1 every mode is admitted; at t = 1 the mode k = -degree (whose
// exponent degenerates to 0) must be absent from the boundary datum.
class ModeSolution {
  public:
    ModeSolution(std::vector<cplx> coeffs, double t, int degree);

    double t() const { return t_; }
    int degree() const { return degree_; }
    int truncation() const { return static_cast<int>(coeffs_.size() / 2); }
    cplx coeff(int k) const;
    double exponent(int k) const;

    cplx value(cplx z) const;
    CGrad gradient(cplx z) const;
    cplx laplacian(cplx z) const;

    // True when no nonzero mode has an exponent below 1 (gradient bounded at
    // the conical point). gradient() at the origin throws otherwise.
    bool gradient_bounded_at_origin() const;

    // Closed-form integral of |grad u|^2 over the disc.
    double dirichlet_energy() const;
    // Closed-form integral of G <i grad u, perp grad u> over the disc for the
    // origin potential G = degree * log r.
    double coupling_integral() const;

  private:
    std::vector<cplx> coeffs_;  // index k + K
    double t_;
    int degree_;
};

// Solve the single-point problem at parameter t for the given boundary datum.
// Throws IncompatibleBoundaryData when t = 1 and coeff(-degree) is nonzero
// beyond 1e-10.
ModeSolution solve_one_singularity(const BoundaryTrace& psi, double t, int degree);

// Pullback of a single-point solution under the disc automorphism that moves
// the conical point to p: evaluates sol at mobius(p, z). The composed field
// solves the same equation with potential centered at p (conformal
// invariance); derivatives use the holomorphic chain rule.
class ConjugatedSolution {
  public:
    ConjugatedSolution(ModeSolution base, cplx p) : base_(std::move(base)), p_(p) {}

    const ModeSolution& base() const { return base_; }
    cplx point() const { return p_; }

    cplx value(cplx z) const { return base_.value(mobius(p_, z)); }
    CGrad gradient(cplx z) const;
    cplx laplacian(cplx z) const;

  private:
    ModeSolution base_;
    cplx p_;
};

// Empirical Hoelder-quotient table for the regular part of a degenerate
// solution: sup over angles of |grad u|(r) / r^{sqrt(2)-1} at dyadic radii.
struct HolderProfile {
    std::vector<double> radii;
    std::vector<double> sup_ratio;
    double holder_constant = 0.0;  // max of sup_ratio
};

HolderProfile regularity_profile(const ModeSolution& u, int levels = 10, int angles = 512);

// Monomial boundary data projected onto the compatibility constraint: each
// returned trace satisfies compatibility_integral = 0 (a multiple of a fixed
// reference monomial is subtracted). Used by the rank experiment.
std::vector<BoundaryTrace> compatible_monomial_basis(const SOneMap& g, int count);

}  // namespace hslag
