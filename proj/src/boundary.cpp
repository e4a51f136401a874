#include "hslag/boundary.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hslag/errors.hpp"

namespace hslag {

BoundaryTrace::BoundaryTrace(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty() || coeffs_.size() % 2 == 0) {
        throw ConfigError("boundary coefficient vector must have odd length 2K+1");
    }
}

BoundaryTrace BoundaryTrace::monomial(int k, cplx amplitude) {
    const int K = std::abs(k);
    std::vector<cplx> c(2 * K + 1, cplx{0.0, 0.0});
    c[k + K] = amplitude;
    return BoundaryTrace(std::move(c));
}

BoundaryTrace BoundaryTrace::from_samples(const std::vector<cplx>& samples, int truncation) {
    const std::size_t n = samples.size();
    if (truncation < 0 || n < 2 * static_cast<std::size_t>(2 * truncation + 1)) {
        throw ConfigError("not enough samples for the requested truncation");
    }
    std::vector<cplx> c(2 * truncation + 1, cplx{0.0, 0.0});
    for (int k = -truncation; k <= truncation; ++k) {
        cplx acc{0.0, 0.0};
        for (std::size_t i = 0; i < n; ++i) {
            const double theta = 2.0 * std::numbers::pi * static_cast<double>(i) / n;
            acc += samples[i] * std::polar(1.0, -k * theta);
        }
        c[k + truncation] = acc / static_cast<double>(n);
    }
    return BoundaryTrace(std::move(c));
}

cplx BoundaryTrace::coeff(int k) const {
    const int K = truncation();
    if (k < -K || k > K) return {0.0, 0.0};
    return coeffs_[k + K];
}

void BoundaryTrace::set_coeff(int k, cplx value) {
    const int K = truncation();
    if (k < -K || k > K) {
        const int K2 = std::abs(k);
        std::vector<cplx> c(2 * K2 + 1, cplx{0.0, 0.0});
        for (int m = -K; m <= K; ++m) c[m + K2] = coeffs_[m + K];
        coeffs_ = std::move(c);
    }
    coeffs_[k + truncation()] = value;
}

cplx BoundaryTrace::value(double theta) const {
    const int K = truncation();
    cplx acc{0.0, 0.0};
    for (int k = -K; k <= K; ++k) acc += coeffs_[k + K] * std::polar(1.0, k * theta);
    return acc;
}

cplx BoundaryTrace::theta_derivative(double theta) const {
    const int K = truncation();
    cplx acc{0.0, 0.0};
    for (int k = -K; k <= K; ++k) {
        acc += coeffs_[k + K] * cplx{0.0, static_cast<double>(k)} * std::polar(1.0, k * theta);
    }
    return acc;
}

double BoundaryTrace::sup_norm_estimate() const {
    double s = 0.0;
    for (const auto& c : coeffs_) s += std::abs(c);
    return s;
}

BoundaryTrace operator+(const BoundaryTrace& a, const BoundaryTrace& b) {
    const int K = std::max(a.truncation(), b.truncation());
    std::vector<cplx> c(2 * K + 1, cplx{0.0, 0.0});
    for (int k = -K; k <= K; ++k) c[k + K] = a.coeff(k) + b.coeff(k);
    return BoundaryTrace(std::move(c));
}

BoundaryTrace operator*(cplx s, const BoundaryTrace& a) {
    std::vector<cplx> c = a.raw();
    for (auto& v : c) v *= s;
    return BoundaryTrace(std::move(c));
}

}  // namespace hslag
