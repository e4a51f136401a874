#include "hslag/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "hslag/errors.hpp"

namespace hslag {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;
}

cplx compatibility_integral(const BoundaryTrace& psi, const SOneMap& g) {
    const int n = 2048;
    cplx acc{0.0, 0.0};
    for (int i = 0; i < n; ++i) {
        const double theta = 2.0 * kPi * i / n;
        acc += psi.value(theta) * g.boundary_theta_derivative(theta);
    }
    return acc * (2.0 * kPi / n);
}

ModeSolution::ModeSolution(std::vector<cplx> coeffs, double t, int degree)
    : coeffs_(std::move(coeffs)), t_(t), degree_(degree) {
    if (coeffs_.empty() || coeffs_.size() % 2 == 0) {
        throw ConfigError("mode coefficient vector must have odd length 2K+1");
    }
    if (t_ < 0.0 || t_ > 1.0) throw ConfigError("parameter t must lie in [0, 1]");
    if (degree_ != 1 && degree_ != -1) throw ConfigError("degree must be +1 or -1");
}

cplx ModeSolution::coeff(int k) const {
    const int K = truncation();
    if (k < -K || k > K) return {0.0, 0.0};
    return coeffs_[k + K];
}

double ModeSolution::exponent(int k) const {
    return std::sqrt(std::max(0.0, static_cast<double>(k) * (k + degree_ * t_)));
}

bool ModeSolution::gradient_bounded_at_origin() const {
    const int K = truncation();
    for (int k = -K; k <= K; ++k) {
        if (std::abs(coeffs_[k + K]) == 0.0) continue;
        const double a = exponent(k);
        if (a > 0.0 && a < 1.0 - 1e-12) return false;
    }
    return true;
}

cplx ModeSolution::value(cplx z) const {
    const double r = std::abs(z);
    const double theta = std::arg(z);
    const int K = truncation();
    cplx acc{0.0, 0.0};
    for (int k = -K; k <= K; ++k) {
        const cplx a = coeffs_[k + K];
        if (std::abs(a) == 0.0) continue;
        const double al = exponent(k);
        const double radial = (al == 0.0) ? 1.0 : std::pow(r, al);
        acc += a * radial * std::polar(1.0, k * theta);
    }
    return acc;
}

CGrad ModeSolution::gradient(cplx z) const {
    const double r = std::abs(z);
    if (r < 1e-14 && !gradient_bounded_at_origin()) {
        throw EvaluationAtSingularity("gradient unbounded at the conical point");
    }
    const double theta = std::arg(z);
    const int K = truncation();
    cplx du_dr{0.0, 0.0};
    cplx du_dtheta_over_r{0.0, 0.0};
    for (int k = -K; k <= K; ++k) {
        const cplx a = coeffs_[k + K];
        if (std::abs(a) == 0.0) continue;
        const double al = exponent(k);
        if (al == 0.0 && k == 0) continue;  // constant mode
        const double radial = std::pow(r, al - 1.0);
        const cplx phase = std::polar(1.0, k * theta);
        du_dr += a * al * radial * phase;
        du_dtheta_over_r += a * cplx{0.0, static_cast<double>(k)} * radial * phase;
    }
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return {c * du_dr - s * du_dtheta_over_r, s * du_dr + c * du_dtheta_over_r};
}

cplx ModeSolution::laplacian(cplx z) const {
    const double r = std::abs(z);
    const double theta = std::arg(z);
    const int K = truncation();
    cplx acc{0.0, 0.0};
    for (int k = -K; k <= K; ++k) {
        const cplx a = coeffs_[k + K];
        if (std::abs(a) == 0.0) continue;
        const double al = exponent(k);
        const double factor = al * al - static_cast<double>(k) * k;
        if (factor == 0.0) continue;
        acc += a * factor * std::pow(r, al - 2.0) * std::polar(1.0, k * theta);
    }
    return acc;
}

double ModeSolution::dirichlet_energy() const {
    const int K = truncation();
    double e = 0.0;
    for (int k = -K; k <= K; ++k) {
        const double a2 = std::norm(coeffs_[k + K]);
        if (a2 == 0.0) continue;
        const double al = exponent(k);
        if (al == 0.0) continue;
        e += 2.0 * kPi * a2 * (al * al + static_cast<double>(k) * k) / (2.0 * al);
    }
    return e;
}

double ModeSolution::coupling_integral() const {
    const int K = truncation();
    double e = 0.0;
    for (int k = -K; k <= K; ++k) {
        const double a2 = std::norm(coeffs_[k + K]);
        if (a2 == 0.0) continue;
        const double al = exponent(k);
        if (al == 0.0) continue;
        e += degree_ * 2.0 * kPi * a2 * static_cast<double>(k) / (2.0 * al);
    }
    return e;
}

ModeSolution solve_one_singularity(const BoundaryTrace& psi, double t, int degree) {
    if (t < 0.0 || t > 1.0) throw ConfigError("parameter t must lie in [0, 1]");
    std::vector<cplx> coeffs = psi.raw();
    if (t == 1.0) {
        const int K = psi.truncation();
        const int bad = -degree;
        if (std::abs(psi.coeff(bad)) > 1e-10) {
            throw IncompatibleBoundaryData(
                "boundary mode k = " + std::to_string(bad) +
                " obstructs the degenerate problem (circulation integral nonzero)");
        }
        if (bad >= -K && bad <= K) coeffs[bad + K] = {0.0, 0.0};
    }
    return ModeSolution(std::move(coeffs), t, degree);
}

CGrad ConjugatedSolution::gradient(cplx z) const {
    const cplx w = mobius(p_, z);
    const CGrad gw = base_.gradient(w);
    const cplx du_dw = 0.5 * (gw.dx - cplx{0.0, 1.0} * gw.dy);
    const cplx du_dwbar = 0.5 * (gw.dx + cplx{0.0, 1.0} * gw.dy);
    const cplx fp = mobius_deriv(p_, z);
    const cplx dz = du_dw * fp;
    const cplx dzbar = du_dwbar * std::conj(fp);
    return {dz + dzbar, cplx{0.0, 1.0} * (dz - dzbar)};
}

cplx ConjugatedSolution::laplacian(cplx z) const {
    const cplx fp = mobius_deriv(p_, z);
    return std::norm(fp) * base_.laplacian(mobius(p_, z));
}

HolderProfile regularity_profile(const ModeSolution& u, int levels, int angles) {
    if (u.t() != 1.0) {
        throw ConfigError("regularity profile is defined at the degenerate parameter t = 1");
    }
    // Strip the residual winding mode; what remains has every exponent
    // >= sqrt(2), so the gradient vanishes at the origin and the quotient
    // below measures the Hoelder seminorm of grad u at exponent sqrt(2)-1.
    const int K = u.truncation();
    std::vector<cplx> c(2 * K + 1);
    for (int k = -K; k <= K; ++k) c[k + K] = (k == -u.degree()) ? cplx{0.0, 0.0} : u.coeff(k);
    const ModeSolution tail(std::move(c), u.t(), u.degree());

    HolderProfile profile;
    for (int j = 1; j <= levels; ++j) {
        const double r = std::ldexp(1.0, -j);
        double sup = 0.0;
        for (int a = 0; a < angles; ++a) {
            const double theta = 2.0 * kPi * a / angles;
            const CGrad g = tail.gradient(std::polar(r, theta));
            const double mag = std::sqrt(std::norm(g.dx) + std::norm(g.dy));
            sup = std::max(sup, mag);
        }
        profile.radii.push_back(r);
        profile.sup_ratio.push_back(sup / std::pow(r, kSqrt2 - 1.0));
    }
    for (const double v : profile.sup_ratio) {
        profile.holder_constant = std::max(profile.holder_constant, v);
    }
    return profile;
}

std::vector<BoundaryTrace> compatible_monomial_basis(const SOneMap& g, int count) {
    const int scan = count + 3;
    std::vector<cplx> circ(2 * scan + 1);
    for (int m = -scan; m <= scan; ++m) {
        circ[m + scan] = compatibility_integral(BoundaryTrace::monomial(m), g);
    }
    int ref = 0;
    for (int m = -scan; m <= scan; ++m) {
        if (std::abs(circ[m + scan]) > std::abs(circ[ref + scan])) ref = m;
    }
    std::vector<BoundaryTrace> basis;
    for (int radius = 1; radius <= scan && static_cast<int>(basis.size()) < count; ++radius) {
        for (const int m : {radius, -radius}) {
            if (m == ref || static_cast<int>(basis.size()) >= count) continue;
            BoundaryTrace psi = BoundaryTrace::monomial(m);
            if (std::abs(circ[ref + scan]) > 1e-12) {
                const cplx lambda = circ[m + scan] / circ[ref + scan];
                psi = psi + (-lambda) * BoundaryTrace::monomial(ref);
            }
            basis.push_back(std::move(psi));
        }
    }
    return basis;
}

}  // namespace hslag
