#include "hslag/variational.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <unordered_map>
#include <utility>

#include "hslag/errors.hpp"
#include "hslag/rng.hpp"
#include "hslag/spectral.hpp"

namespace hslag {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Integer power of a unit-modulus complex number (negative exponents via
// conjugation).
cplx unit_ipow(cplx g, int n) {
    if (n < 0) {
        g = std::conj(g);
        n = -n;
    }
    cplx out{1.0, 0.0};
    for (int k = 0; k < n; ++k) out *= g;
    return out;
}

double mode_exponent(int j, double t) { return std::sqrt(std::max(0.0, j * (j + t))); }

int winding_number(const std::vector<cplx>& loop, cplx p) {
    double total = 0.0;
    const std::size_t n = loop.size();
    for (std::size_t k = 0; k < n; ++k) {
        const cplx a = loop[k] - p;
        const cplx b = loop[(k + 1) % n] - p;
        total += std::arg(b / a);
    }
    return static_cast<int>(std::lround(total / kTwoPi));
}

double shoelace_area(const std::vector<cplx>& loop) {
    double twice = 0.0;
    const std::size_t n = loop.size();
    for (std::size_t k = 0; k < n; ++k) {
        const cplx a = loop[k];
        const cplx b = loop[(k + 1) % n];
        twice += a.real() * b.imag() - b.real() * a.imag();
    }
    return 0.5 * twice;
}

// Marching squares over a corner lattice of spacing hc. Returns the closed
// polylines of {G = level}; curves that leave the sampled disc stay open and
// are dropped. Crossing points are computed once per lattice edge, so
// adjacent cells stitch exactly.
std::vector<std::vector<cplx>> trace_level_curves(const GreenField& green, double level,
                                                  double hc) {
    if (!(hc > 0.0) || hc > 0.05) throw ConfigError("contour lattice spacing must lie in (0, 0.05]");
    const int m = static_cast<int>(std::lround(std::ceil(2.0 / hc)));
    const int side = m + 1;
    const double invalid = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> f(static_cast<std::size_t>(side) * side, invalid);
    const SingularityConfig& cfg = green.config();

    auto sample = [&](cplx z) {
        double v;
        if (cfg.min_distance_to(z) < 1e-9) {
            // The sign of G is pinned by the nearest singular point.
            double best = 1e300;
            int deg = 1;
            for (const auto& s : cfg.points) {
                const double d = std::abs(z - s.p);
                if (d < best) {
                    best = d;
                    deg = s.degree;
                }
            }
            v = (deg > 0 ? -1e30 : 1e30) - level;
        } else {
            v = green.value(z) - level;
        }
        if (std::abs(v) < 1e-14) v = (v >= 0.0 ? 1e-13 : -1e-13);
        return v;
    };

    auto at = [&](int i, int j) { return cplx{-1.0 + i * hc, -1.0 + j * hc}; };
    for (int j = 0; j < side; ++j) {
        for (int i = 0; i < side; ++i) {
            const cplx z = at(i, j);
            if (std::abs(z) <= 0.999) f[static_cast<std::size_t>(j) * side + i] = sample(z);
        }
    }
    auto val = [&](int i, int j) { return f[static_cast<std::size_t>(j) * side + i]; };
    auto valid = [&](int i, int j) { return std::isfinite(val(i, j)); };

    // Edge keys: ((j * side + i) << 1) | axis, axis 0 = +x edge, 1 = +y edge.
    auto hkey = [&](int i, int j) { return (static_cast<std::int64_t>(j) * side + i) << 1; };
    auto vkey = [&](int i, int j) { return ((static_cast<std::int64_t>(j) * side + i) << 1) | 1; };

    std::unordered_map<std::int64_t, cplx> point;
    std::vector<std::int64_t> point_order;
    std::unordered_map<std::int64_t, std::vector<std::int64_t>> adj;

    auto crossing = [&](std::int64_t key, int i1, int j1, int i2, int j2) {
        if (!point.count(key)) {
            const double a = val(i1, j1);
            const double b = val(i2, j2);
            const double s = a / (a - b);
            point.emplace(key, at(i1, j1) + s * (at(i2, j2) - at(i1, j1)));
            point_order.push_back(key);
        }
    };
    auto link = [&](std::int64_t a, std::int64_t b) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    };

    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < m; ++i) {
            if (!valid(i, j) || !valid(i + 1, j) || !valid(i + 1, j + 1) || !valid(i, j + 1))
                continue;
            const bool cb = val(i, j) * val(i + 1, j) < 0.0;
            const bool cr = val(i + 1, j) * val(i + 1, j + 1) < 0.0;
            const bool ct = val(i, j + 1) * val(i + 1, j + 1) < 0.0;
            const bool cl = val(i, j) * val(i, j + 1) < 0.0;
            const int count = cb + cr + ct + cl;
            if (count == 0) continue;
            const std::int64_t kb = hkey(i, j), kr = vkey(i + 1, j), kt = hkey(i, j + 1),
                               kl = vkey(i, j);
            if (cb) crossing(kb, i, j, i + 1, j);
            if (cr) crossing(kr, i + 1, j, i + 1, j + 1);
            if (ct) crossing(kt, i, j + 1, i + 1, j + 1);
            if (cl) crossing(kl, i, j, i, j + 1);
            if (count == 2) {
                std::array<std::int64_t, 2> e;
                int n = 0;
                if (cb) e[n++] = kb;
                if (cr) e[n++] = kr;
                if (ct) e[n++] = kt;
                if (cl) e[n++] = kl;
                link(e[0], e[1]);
            } else {
                // Saddle cell: the centre sample decides which corners the
                // curve separates.
                const cplx zc = at(i, j) + cplx{0.5 * hc, 0.5 * hc};
                const double centre = sample(zc);
                if ((centre > 0.0) == (val(i, j) > 0.0)) {
                    link(kb, kr);
                    link(kt, kl);
                } else {
                    link(kb, kl);
                    link(kr, kt);
                }
            }
        }
    }

    std::vector<std::vector<cplx>> loops;
    std::unordered_map<std::int64_t, bool> used;
    for (const auto key : point_order) {
        if (used[key]) continue;
        std::vector<std::int64_t> chain{key};
        used[key] = true;
        std::int64_t prev = -1, cur = key;
        bool closed = false;
        while (true) {
            std::int64_t next = -1;
            for (const auto cand : adj[cur]) {
                if (cand != prev) {
                    next = cand;
                    break;
                }
            }
            if (next < 0) break;  // open end
            if (next == key) {
                closed = true;
                break;
            }
            if (used[next]) break;  // defensive; should not happen
            chain.push_back(next);
            used[next] = true;
            prev = cur;
            cur = next;
        }
        if (closed && chain.size() >= 8) {
            std::vector<cplx> loop;
            loop.reserve(chain.size());
            for (const auto k : chain) loop.push_back(point.at(k));
            loops.push_back(std::move(loop));
        }
    }
    return loops;
}

// Quadrature core shared by the extraction and rank paths: midpoint values
// against the exact increments of g along the polyline.
std::vector<cplx> loop_integrals(const std::vector<cplx>& loop,
                                 const std::function<cplx(cplx)>& u, const SOneMap& g,
                                 const std::vector<int>& modes) {
    const std::size_t n = loop.size();
    std::vector<cplx> gv(n);
    for (std::size_t k = 0; k < n; ++k) gv[k] = g.value(loop[k]);
    std::vector<cplx> acc(modes.size(), cplx{0.0, 0.0});
    for (std::size_t k = 0; k < n; ++k) {
        const cplx a = loop[k];
        const cplx b = loop[(k + 1) % n];
        const cplx dg = gv[(k + 1) % n] - gv[k];
        const cplx mid = 0.5 * (a + b);
        const cplx um = u(mid);
        const cplx gm = g.value(mid);
        for (std::size_t q = 0; q < modes.size(); ++q)
            acc[q] += um * unit_ipow(gm, -modes[q] - 1) * dg;
    }
    return acc;
}

std::function<cplx(cplx)> field_sampler(const ScalarField& u) {
    return [&u](cplx z) {
        cplx v;
        if (!u.interpolate(z, v)) throw NumericError("contour point left the sampled grid");
        return v;
    };
}

ScalarField solve_at(const SingularityConfig& cfg, const GreenField& green,
                     const BoundaryTrace& psi, double t, double h, Exec exec) {
    auto grid = std::make_shared<DiscGrid>(h, cfg);
    const ElSystem sys = assemble_el_system(grid, green, psi, t);
    return solve_el(sys, exec);
}

void require_compatible(const BoundaryTrace& psi, const SOneMap& g, const char* who) {
    const double scale = 1.0 + psi.sup_norm_estimate();
    if (std::abs(compatibility_integral(psi, g)) > 1e-6 * scale)
        throw ConfigError(std::string(who) + " requires compatible boundary data");
}

}  // namespace

double default_contour_level(const GreenField& green, std::size_t which, double h) {
    const cplx p = green.config().points.at(which).p;
    double worst = 0.0;
    for (int k = 0; k < 16; ++k) {
        const double a = kTwoPi * k / 16.0;
        const cplx z = p + 2.0 * h * cplx{std::cos(a), std::sin(a)};
        worst = std::max(worst, std::abs(green.value(z)));
    }
    return 0.5 * worst;
}

std::vector<cplx> level_contour(const GreenField& green, std::size_t which, double eps,
                                double hc) {
    if (!(eps > 0.0)) throw ConfigError("contour level must be positive");
    const SingularityConfig& cfg = green.config();
    const Singularity& s = cfg.points.at(which);
    const double level = -s.degree * eps;
    const auto loops = trace_level_curves(green, level, hc);
    for (const auto& raw : loops) {
        std::vector<cplx> loop = raw;
        if (shoelace_area(loop) < 0.0) std::reverse(loop.begin(), loop.end());
        double dist = 1e300;
        for (const auto& z : loop) dist = std::min(dist, std::abs(z - s.p));
        if (dist < 1e-12) continue;
        if (winding_number(loop, s.p) != 1) continue;
        if (dist < 3.0 * hc)
            throw LoopTooCloseToSingularity("level curve runs too close to its singular point");
        for (std::size_t l = 0; l < cfg.size(); ++l) {
            if (l == which) continue;
            if (winding_number(loop, cfg.points[l].p) != 0)
                throw ContourCrossesZeroSet(
                    "level curve fails to isolate its singular point from the others");
        }
        return loop;
    }
    throw ContourCrossesZeroSet("no closed level curve isolates the singular point at this level");
}

ComponentCoefficients extract_coefficients(const std::function<cplx(cplx)>& u,
                                           const GreenField& green, const SOneMap& g,
                                           std::size_t which, const std::vector<int>& modes,
                                           double t, double eps, double hc) {
    if (!(t >= 0.0 && t <= 1.0)) throw ConfigError("parameter t must lie in [0, 1]");
    const std::vector<cplx> loop = level_contour(green, which, eps, hc);
    const int w = maslov_winding(g, loop, 2.0 * hc);
    const int d = green.config().points.at(which).degree;
    if (w != d)
        throw ContourCrossesZeroSet("contour winding disagrees with the singularity degree");
    const std::vector<cplx> raw = loop_integrals(loop, u, g, modes);
    ComponentCoefficients out;
    out.which = which;
    out.winding = w;
    out.eps = eps;
    out.modes = modes;
    out.values.resize(modes.size());
    const cplx norm = cplx{0.0, kTwoPi} * static_cast<double>(w);  // 2 pi i w
    for (std::size_t q = 0; q < modes.size(); ++q)
        out.values[q] = raw[q] * std::exp(mode_exponent(modes[q], t) * eps) / norm;
    return out;
}

MatchingResult matching_experiment(const SingularityConfig& cfg, const BoundaryTrace& psi,
                                   double t, double h, Exec exec) {
    if (cfg.size() != 2 || !cfg.balanced())
        throw ConfigError("matching experiment needs exactly one +1 and one -1 point");
    const GreenField green(cfg);
    const SOneMap g(cfg);
    require_compatible(psi, g, "the matching experiment");
    const std::size_t plus = cfg.points[0].degree > 0 ? 0 : 1;
    const std::size_t minus = 1 - plus;

    const double hc = h / 4.0;
    const std::vector<int> slow{-1};
    struct Side {
        std::size_t which;
        double eps;
        std::vector<cplx> loop;
    };
    std::array<Side, 2> sides{Side{plus, 0.0, {}}, Side{minus, 0.0, {}}};
    for (auto& side : sides) {
        side.eps = default_contour_level(green, side.which, h);
        side.loop = level_contour(green, side.which, side.eps, hc);
        const int w = maslov_winding(g, side.loop, 2.0 * hc);
        if (w != cfg.points[side.which].degree)
            throw ContourCrossesZeroSet("contour winding disagrees with the singularity degree");
    }

    std::array<std::array<cplx, 2>, 2> a{};  // [spacing][side]
    const double alpha = mode_exponent(-1, t);
    for (int si = 0; si < 2; ++si) {
        const double spacing = si == 0 ? h : 2.0 * h;
        const ScalarField u = solve_at(cfg, green, psi, t, spacing, exec);
        const auto sampler = field_sampler(u);
        for (int side = 0; side < 2; ++side) {
            const cplx raw = loop_integrals(sides[side].loop, sampler, g, slow)[0];
            const double w = cfg.points[sides[side].which].degree;
            a[si][side] = raw * std::exp(alpha * sides[side].eps) / (cplx{0.0, kTwoPi} * w);
        }
    }

    MatchingResult out;
    out.a_plus = a[0][0];
    out.a_minus = a[0][1];
    out.defect = std::abs(out.a_plus - out.a_minus);
    out.grid_error = std::abs(a[0][0] - a[1][0]) + std::abs(a[0][1] - a[1][1]);
    out.tolerance = std::max(10.0 * out.grid_error, 1e-4);
    out.pass = out.defect <= out.tolerance;
    return out;
}

RankReport rank_experiment(const SingularityConfig& cfg, const std::vector<BoundaryTrace>& basis,
                           double t, double h, Exec exec) {
    const AdmissibilityReport cert = admissibility_check(cfg, h);
    if (cert.verdict != "admissible")
        throw ConfigError("rank experiment requires a certified admissible configuration");
    const GreenField green(cfg);
    const SOneMap g(cfg);
    for (const auto& psi : basis) require_compatible(psi, g, "the rank experiment");

    const std::size_t n = cfg.size();
    const std::size_t nb = basis.size();
    const double hc = h / 4.0;
    std::vector<std::vector<cplx>> loops(n);
    for (std::size_t l = 0; l < n; ++l) {
        const double eps = default_contour_level(green, l, h);
        loops[l] = level_contour(green, l, eps, hc);
        if (maslov_winding(g, loops[l], 2.0 * hc) != cfg.points[l].degree)
            throw ContourCrossesZeroSet("contour winding disagrees with the singularity degree");
    }

    const std::vector<int> slow{-1};
    auto fill = [&](double spacing, std::vector<std::vector<cplx>>& m) {
        m.assign(n, std::vector<cplx>(nb, cplx{0.0, 0.0}));
        for (std::size_t b = 0; b < nb; ++b) {
            const ScalarField u = solve_at(cfg, green, basis[b], t, spacing, exec);
            const auto sampler = field_sampler(u);
            for (std::size_t l = 0; l < n; ++l)
                m[l][b] = loop_integrals(loops[l], sampler, g, slow)[0];
        }
    };
    std::vector<std::vector<cplx>> fine, coarse;
    fill(h, fine);
    fill(2.0 * h, coarse);

    RankReport out;
    out.matrix = fine;
    double gap2 = 0.0;
    for (std::size_t l = 0; l < n; ++l)
        for (std::size_t b = 0; b < nb; ++b) gap2 += std::norm(fine[l][b] - coarse[l][b]);
    out.richardson = std::sqrt(gap2);

    std::vector<std::vector<cplx>> gram(n, std::vector<cplx>(n, cplx{0.0, 0.0}));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t b = 0; b < nb; ++b) gram[i][k] += fine[i][b] * std::conj(fine[k][b]);
    const std::vector<double> eig = hermitian_eigenvalues(gram);
    out.singular_values.reserve(eig.size());
    for (const double lam : eig) out.singular_values.push_back(std::sqrt(std::max(0.0, lam)));

    const double smax = out.singular_values.empty() ? 0.0 : out.singular_values.front();
    out.threshold_raw = 1e-6 * smax;
    out.threshold = std::max(10.0 * out.richardson, 1e-9);
    for (const double s : out.singular_values) {
        if (s > out.threshold_raw && out.threshold_raw > 0.0) ++out.rank_raw;
        if (s > out.threshold) ++out.rank;
    }
    return out;
}

std::vector<double> hermitian_eigenvalues(std::vector<std::vector<cplx>> m) {
    const std::size_t n = m.size();
    std::vector<double> eig;
    if (n == 0) return eig;
    if (n == 1) return {m[0][0].real()};
    if (n == 2) {
        const double a = m[0][0].real();
        const double b = m[1][1].real();
        const double off = std::abs(m[0][1]);
        const double mid = 0.5 * (a + b);
        const double rad = std::sqrt(0.25 * (a - b) * (a - b) + off * off);
        return {mid + rad, mid - rad};
    }
    double norm2 = 0.0;
    for (const auto& row : m)
        for (const auto& v : row) norm2 += std::norm(v);
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += std::norm(m[p][q]);
        if (off <= 1e-30 * norm2) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx w = m[p][q];
                if (std::abs(w) < 1e-300) continue;
                const cplx phase = w / std::abs(w);
                const double tau = (m[p][p].real() - m[q][q].real()) / (2.0 * std::abs(w));
                const double sign = tau >= 0.0 ? 1.0 : -1.0;
                const double tf = sign / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + tf * tf);
                const double s = tf * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx hp = m[k][p], hq = m[k][q];
                    m[k][p] = c * hp + s * std::conj(phase) * hq;
                    m[k][q] = -s * phase * hp + c * hq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx hp = m[p][k], hq = m[q][k];
                    m[p][k] = c * hp + s * phase * hq;
                    m[q][k] = -s * std::conj(phase) * hp + c * hq;
                }
            }
        }
    }
    eig.reserve(n);
    for (std::size_t k = 0; k < n; ++k) eig.push_back(m[k][k].real());
    std::sort(eig.rbegin(), eig.rend());
    return eig;
}

double l2inf_quasinorm(std::vector<double> magnitudes, double h) {
    if (magnitudes.empty()) return 0.0;
    std::sort(magnitudes.begin(), magnitudes.end());
    const std::size_t n = magnitudes.size();
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double mu = h * h * static_cast<double>(n - i);
        best = std::max(best, magnitudes[i] * std::sqrt(mu));
    }
    return best;
}

double l2inf_quasinorm(const ScalarField& u) {
    std::vector<double> mags;
    mags.reserve(u.grid().interior_count());
    CGrad grad;
    for (const auto id : u.grid().interior_ids()) {
        if (!u.gradient(id, grad)) continue;
        mags.push_back(std::sqrt(std::norm(grad.dx) + std::norm(grad.dy)));
    }
    return l2inf_quasinorm(std::move(mags), u.grid().h());
}

BlowupFit fit_blowup(const std::vector<EnergyRow>& rows) {
    const std::size_t n = rows.size();
    if (n < 2) throw ConfigError("the blow-up fit needs at least two sweep rows");
    std::size_t w = n / 2;
    w = std::max<std::size_t>(2, std::min<std::size_t>(4, w));
    const std::size_t begin = n - w;
    std::vector<double> xs, ys, thetas;
    for (std::size_t k = begin; k < n; ++k) {
        const EnergyRow& r = rows[k];
        if (!(r.t < 1.0) || !(r.dirichlet > 0.0)) continue;
        xs.push_back(std::log(1.0 / (1.0 - r.t)));
        ys.push_back(std::log(2.0 * r.dirichlet));
        thetas.push_back(2.0 * r.dirichlet * std::sqrt(1.0 - r.t));
    }
    if (xs.size() < 2) throw ConfigError("not enough usable rows in the fitting window");
    double mx = 0.0, my = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        mx += xs[k];
        my += ys[k];
    }
    mx /= xs.size();
    my /= xs.size();
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        sxx += (xs[k] - mx) * (xs[k] - mx);
        sxy += (xs[k] - mx) * (ys[k] - my);
    }
    BlowupFit fit;
    fit.slope = sxy / sxx;
    fit.theta_hat = 0.0;
    for (const double th : thetas) fit.theta_hat += th;
    fit.theta_hat /= thetas.size();
    fit.window_begin = begin;
    return fit;
}

namespace {

// Boundary data seen from the model disc when the singular point is pulled
// back to the origin: psi_tilde(theta') = psi(arg mobius(-p, e^{i theta'})).
BoundaryTrace conjugated_trace(const BoundaryTrace& psi, cplx p) {
    const double ap = std::abs(p);
    int extra = 0;
    if (ap > 1e-12) {
        extra = static_cast<int>(std::ceil(-14.0 / std::log10(ap)));
        extra = std::min(extra, 256);
    }
    const int kt = psi.truncation() + extra;
    const int nsamp = 4 * (2 * kt + 1);
    std::vector<cplx> samples(nsamp);
    for (int i = 0; i < nsamp; ++i) {
        const double tp = kTwoPi * i / nsamp;
        const cplx w = mobius(-p, cplx{std::cos(tp), std::sin(tp)});
        samples[i] = psi.value(std::atan2(w.imag(), w.real()));
    }
    return BoundaryTrace::from_samples(samples, kt);
}

std::vector<double> sampled_gradient_magnitudes(const std::function<CGrad(cplx)>& grad, double h) {
    const int m = static_cast<int>(std::lround(std::ceil(1.0 / h)));
    std::vector<double> mags;
    for (int j = -m; j < m; ++j) {
        for (int i = -m; i < m; ++i) {
            const cplx z{(i + 0.5) * h, (j + 0.5) * h};
            if (std::abs(z) >= 1.0) continue;
            const CGrad d = grad(z);
            mags.push_back(std::sqrt(std::norm(d.dx) + std::norm(d.dy)));
        }
    }
    return mags;
}

}  // namespace

ConjugatedSolution spectral_solution(const SingularityConfig& cfg, const BoundaryTrace& psi,
                                     double t) {
    if (cfg.size() != 1)
        throw ConfigError("the spectral backend handles a single singularity");
    const cplx p = cfg.points[0].p;
    const BoundaryTrace data = std::abs(p) > 1e-12 ? conjugated_trace(psi, p) : psi;
    return ConjugatedSolution(solve_one_singularity(data, t, cfg.points[0].degree), p);
}

SweepResult t_sweep(const SingularityConfig& cfg, const BoundaryTrace& psi,
                    const std::vector<double>& schedule, double h, SweepBackend backend,
                    Exec exec) {
    if (schedule.empty()) throw ConfigError("the sweep schedule is empty");
    for (std::size_t k = 0; k < schedule.size(); ++k) {
        if (!(schedule[k] >= 0.0 && schedule[k] < 1.0))
            throw ConfigError("sweep parameters must lie in [0, 1)");
        if (k > 0 && !(schedule[k] > schedule[k - 1]))
            throw ConfigError("sweep schedule must be strictly increasing");
    }
    SweepResult out;
    out.backend = backend;
    out.h = h;
    if (backend == SweepBackend::Spectral) {
        if (cfg.size() != 1)
            throw ConfigError("the spectral sweep backend handles a single singularity");
        const cplx p = cfg.points[0].p;
        const int d = cfg.points[0].degree;
        const BoundaryTrace data = std::abs(p) > 1e-12 ? conjugated_trace(psi, p) : psi;
        for (const double t : schedule) {
            const ModeSolution sol = solve_one_singularity(data, t, d);
            EnergyRow row;
            row.t = t;
            row.dirichlet = 0.5 * sol.dirichlet_energy();
            row.coupling = 0.5 * sol.coupling_integral();
            row.total = row.dirichlet + t * row.coupling;
            if (std::abs(p) > 1e-12) {
                const ConjugatedSolution moved(sol, p);
                row.l2inf = l2inf_quasinorm(
                    sampled_gradient_magnitudes([&](cplx z) { return moved.gradient(z); }, h), h);
            } else {
                row.l2inf = l2inf_quasinorm(
                    sampled_gradient_magnitudes([&](cplx z) { return sol.gradient(z); }, h), h);
            }
            out.rows.push_back(row);
        }
    } else {
        auto grid = std::make_shared<DiscGrid>(h, cfg);
        const GreenField green(cfg);
        for (const double t : schedule) {
            const ElSystem sys = assemble_el_system(grid, green, psi, t);
            const ScalarField u = solve_el(sys, exec);
            const QuadraticSplit q = quadratic_split(sys, u);
            EnergyRow row;
            row.t = t;
            row.dirichlet = q.dirichlet;
            row.coupling = q.coupling;
            row.total = q.dirichlet + t * q.coupling;
            row.l2inf = l2inf_quasinorm(u);
            out.rows.push_back(row);
        }
    }
    out.fit = fit_blowup(out.rows);
    return out;
}

UniquenessProbe uniqueness_probe(const SingularityConfig& cfg, double t, double h,
                                 std::uint64_t seed, Exec exec) {
    auto grid = std::make_shared<DiscGrid>(h, cfg);
    const GreenField green(cfg);
    const BoundaryTrace zero;
    const ElSystem sys = assemble_el_system(grid, green, zero, t);

    UniquenessProbe out;
    out.noise = 1e-13;
    const ScalarField u0 = solve_el(sys, exec);
    out.grad_norm_zero = std::sqrt(u0.dirichlet_energy(exec));

    Rng rng(seed);
    std::vector<cplx> eta(sys.a.n);
    double norm = 0.0;
    for (auto& v : eta) {
        v = cplx{rng.gaussian(), rng.gaussian()};
        norm += std::norm(v);
    }
    norm = std::sqrt(norm);
    for (auto& v : eta) v *= out.noise / norm;
    const std::vector<cplx> x = bicgstab(sys.a, eta, 1e-10, 50000, exec);
    ScalarField up(grid);
    const auto& interior = grid->interior_ids();
    for (std::size_t r = 0; r < interior.size(); ++r) up[interior[r]] = x[r];
    out.grad_norm_perturbed = std::sqrt(up.dirichlet_energy(exec));
    return out;
}

}  // namespace hslag
