#pragma once

#include <vector>

#include "hslag/types.hpp"

namespace hslag {

// Boundary datum on the unit circle as a truncated Fourier series
// psi(theta) = sum_{|k| <= K} c_k e^{i k theta}.
class BoundaryTrace {
  public:
    BoundaryTrace() : coeffs_(1, cplx{0.0, 0.0}) {}
    explicit BoundaryTrace(std::vector<cplx> coeffs);  // size 2K+1, index k+K

    static BoundaryTrace monomial(int k, cplx amplitude = {1.0, 0.0});
    // L2 projection of dense samples (uniformly spaced in theta) onto the
    // truncated series; exact for trig polynomials of degree <= K when the
    // sample count exceeds 2*(2K+1).
    static BoundaryTrace from_samples(const std::vector<cplx>& samples, int truncation);

    int truncation() const { return static_cast<int>(coeffs_.size() / 2); }
    cplx coeff(int k) const;
    void set_coeff(int k, cplx value);

    cplx value(double theta) const;
    cplx theta_derivative(double theta) const;

    double sup_norm_estimate() const;  // sum of coefficient magnitudes

    const std::vector<cplx>& raw() const { return coeffs_; }

  private:
    std::vector<cplx> coeffs_;
};

BoundaryTrace operator+(const BoundaryTrace& a, const BoundaryTrace& b);
BoundaryTrace operator*(cplx s, const BoundaryTrace& a);

}  // namespace hslag
