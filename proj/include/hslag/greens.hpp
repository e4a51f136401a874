#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hslag/singularity.hpp"
#include "hslag/types.hpp"

namespace hslag {

// Disc automorphism vanishing at p: z -> (z - p) / (1 - conj(p) z).
cplx mobius(cplx p, cplx z);
// Derivative of the map above: (1 - |p|^2) / (1 - conj(p) z)^2.
cplx mobius_deriv(cplx p, cplx z);
// Logarithmic derivative: mobius_deriv / mobius = (1-|p|^2)/((z-p)(1-conj(p) z)).
cplx mobius_logderiv(cplx p, cplx z);

// Potential G with Delta G = 2*pi*sum_l d_l * delta_{p_l} and G = 0 on the
// unit circle, evaluated in closed form as sum_l d_l * log|mobius(p_l, z)|.
// All derivatives are analytic; no discrete solve is involved anywhere.
class GreenField {
  public:
    explicit GreenField(SingularityConfig cfg);

    const SingularityConfig& config() const { return cfg_; }

    // Throws EvaluationAtSingularity within `guard` of a singular point.
    double value(cplx z) const;
    Vec2 gradient(cplx z) const;
    // Rotated gradient (-dG/dy, dG/dx); tangential to level curves.
    Vec2 perp_gradient(cplx z) const;

    double guard() const { return guard_; }

  private:
    SingularityConfig cfg_;
    double guard_ = 1e-12;
};

// Unit-modulus map g(z) = prod_l (mobius_l/|mobius_l|)^{d_l}. Satisfies
// conj(g) * grad(g) = i * perp_grad(G) away from the singular points.
class SOneMap {
  public:
    explicit SOneMap(SingularityConfig cfg);

    const SingularityConfig& config() const { return cfg_; }

    cplx value(cplx z) const;
    CGrad gradient(cplx z) const;

    // d/dtheta of g(e^{i theta}) on the unit circle, where g restricts to a
    // finite Blaschke product and stays smooth.
    cplx boundary_theta_derivative(double theta) const;

    // Winding sum d_l * arg-derivative used by gradient(); exposed for line
    // integration along contours: dg = i g Im(Q dz).
    cplx logderiv_sum(cplx z) const;

  private:
    SingularityConfig cfg_;
};

// Total winding of g along a closed polyline, computed by accumulating
// principal argument increments between consecutive samples. The polyline
// must stay at least min_distance away from every singular point, and must
// be sampled finely enough that each increment is below pi/2.
int maslov_winding(const SOneMap& g, const std::vector<cplx>& loop, double min_distance);

// Convenience: winding along the circle |z - center| = radius (2048 samples).
int maslov_winding_circle(const SOneMap& g, cplx center, double radius);

// Census of one connected component of a sampled level region of G.
struct LevelComponent {
    std::uint64_t cells = 0;
    std::vector<std::size_t> singularities;  // indices into the config
    double flux = 0.0;                       // boundary integral of dG/dnu
    bool simply_connected = false;
    bool thin = false;  // too few cells across to trust the census
};

struct LevelCensus {
    double level = 0.0;
    std::vector<LevelComponent> components;
};

// Pixel-graph admissibility certificate at a fixed resolution. For sampled
// negative levels t the census covers components of {G <= t}; for positive
// levels, components of {G >= t}. Admissible means every component is simply
// connected, contains exactly one singular point, and carries |flux| = 2*pi.
struct AdmissibilityReport {
    double h = 0.0;
    bool balanced = false;
    std::vector<LevelCensus> levels;
    std::string verdict;  // "admissible" | "not_admissible" | "inconclusive"
};

AdmissibilityReport admissibility_check(const SingularityConfig& cfg, double h);

}  // namespace hslag
