#include "hslag/greens.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <queue>
#include <unordered_map>
#include <unordered_set>

#include "hslag/errors.hpp"

namespace hslag {

namespace {
constexpr double kPi = std::numbers::pi;
}

cplx mobius(cplx p, cplx z) { return (z - p) / (1.0 - std::conj(p) * z); }

cplx mobius_deriv(cplx p, cplx z) {
    const cplx d = 1.0 - std::conj(p) * z;
    return (1.0 - std::norm(p)) / (d * d);
}

cplx mobius_logderiv(cplx p, cplx z) {
    return (1.0 - std::norm(p)) / ((z - p) * (1.0 - std::conj(p) * z));
}

GreenField::GreenField(SingularityConfig cfg) : cfg_(std::move(cfg)) { cfg_.validate(); }

double GreenField::value(cplx z) const {
    double s = 0.0;
    for (const auto& q : cfg_.points) {
        const double a = std::abs(mobius(q.p, z));
        if (a < guard_) {
            throw EvaluationAtSingularity("potential evaluated at a singular point");
        }
        s += q.degree * std::log(a);
    }
    return s;
}

Vec2 GreenField::gradient(cplx z) const {
    cplx grad{0.0, 0.0};  // packs (dG/dx, dG/dy) as re/im
    for (const auto& q : cfg_.points) {
        if (std::abs(z - q.p) < guard_) {
            throw EvaluationAtSingularity("potential gradient at a singular point");
        }
        grad += static_cast<double>(q.degree) * std::conj(mobius_logderiv(q.p, z));
    }
    return to_vec(grad);
}

Vec2 GreenField::perp_gradient(cplx z) const {
    const Vec2 g = gradient(z);
    return {-g.y, g.x};
}

SOneMap::SOneMap(SingularityConfig cfg) : cfg_(std::move(cfg)) { cfg_.validate(); }

cplx SOneMap::value(cplx z) const {
    cplx g{1.0, 0.0};
    for (const auto& q : cfg_.points) {
        const cplx m = mobius(q.p, z);
        const double a = std::abs(m);
        if (a < 1e-14) {
            throw EvaluationAtSingularity("circle map evaluated at a singular point");
        }
        const cplx unit = m / a;
        g *= (q.degree > 0) ? unit : std::conj(unit);
    }
    return g;
}

cplx SOneMap::logderiv_sum(cplx z) const {
    cplx s{0.0, 0.0};
    for (const auto& q : cfg_.points) {
        s += static_cast<double>(q.degree) * mobius_logderiv(q.p, z);
    }
    return s;
}

CGrad SOneMap::gradient(cplx z) const {
    const cplx g = value(z);
    const cplx q = logderiv_sum(z);
    const cplx ig = cplx{0.0, 1.0} * g;
    return {ig * q.imag(), ig * q.real()};
}

cplx SOneMap::boundary_theta_derivative(double theta) const {
    const cplx z = std::polar(1.0, theta);
    const cplx q = logderiv_sum(z);
    return cplx{0.0, 1.0} * value(z) * (cplx{0.0, 1.0} * z * q).imag();
}

int maslov_winding(const SOneMap& g, const std::vector<cplx>& loop, double min_distance) {
    if (loop.size() < 3) throw ConfigError("winding loop needs at least 3 vertices");
    for (const auto& q : g.config().points) {
        for (std::size_t i = 0; i < loop.size(); ++i) {
            const cplx a = loop[i];
            const cplx b = loop[(i + 1) % loop.size()];
            const cplx ab = b - a;
            const double len2 = std::norm(ab);
            double t = len2 > 0.0 ? std::clamp((((q.p - a) * std::conj(ab)).real()) / len2, 0.0, 1.0)
                                  : 0.0;
            if (std::abs(a + t * ab - q.p) < min_distance) {
                throw LoopTooCloseToSingularity("winding loop passes within min_distance of a singular point");
            }
        }
    }
    double total = 0.0;
    cplx prev = g.value(loop.back());
    for (const auto& z : loop) {
        const cplx cur = g.value(z);
        const double step = std::arg(cur / prev);
        if (std::abs(step) > kPi / 2.0) {
            throw NumericError("winding loop undersampled: argument step exceeds pi/2");
        }
        total += step;
        prev = cur;
    }
    const double w = total / (2.0 * kPi);
    const int wi = static_cast<int>(std::lround(w));
    if (std::abs(w - wi) > 1e-6) {
        throw NumericError("winding did not close up to an integer");
    }
    return wi;
}

int maslov_winding_circle(const SOneMap& g, cplx center, double radius) {
    const int n = 2048;
    std::vector<cplx> loop(n);
    for (int i = 0; i < n; ++i) {
        loop[i] = center + std::polar(radius, 2.0 * kPi * i / n);
    }
    double min_dist = radius;
    for (const auto& q : g.config().points) {
        min_dist = std::min(min_dist, std::abs(std::abs(q.p - center) - radius));
    }
    return maslov_winding(g, loop, std::max(1e-3, 0.5 * min_dist));
}

namespace {

// Cell-centered pixel lattice covering the disc; index packing for hashing.
struct PixelGrid {
    double h;
    int m;  // indices i, j range over [-m, m)
    std::vector<std::int64_t> marked;  // packed keys of cells in the level region
    std::unordered_map<std::int64_t, std::uint32_t> comp;  // key -> component id

    static std::int64_t pack(int i, int j) {
        return (static_cast<std::int64_t>(i) << 32) ^ (static_cast<std::uint32_t>(j));
    }
    static std::pair<int, int> unpack(std::int64_t k) {
        return {static_cast<int>(k >> 32), static_cast<int>(static_cast<std::uint32_t>(k))};
    }
    cplx center(int i, int j) const { return {(i + 0.5) * h, (j + 0.5) * h}; }
};

LevelCensus census_one_level(const GreenField& G, double level, double h) {
    PixelGrid grid{h, static_cast<int>(std::lround(1.0 / h)), {}, {}};
    const bool sublevel = level < 0.0;
    std::unordered_set<std::int64_t> in_region;
    for (int j = -grid.m; j < grid.m; ++j) {
        for (int i = -grid.m; i < grid.m; ++i) {
            const cplx z = grid.center(i, j);
            if (std::abs(z) > 1.0 - 0.5 * h) continue;
            double v;
            if (G.config().min_distance_to(z) < 1e-12) {
                // A singular point on a cell center is on the deep side of
                // every sampled level of its own sign.
                v = sublevel ? -1e300 : 1e300;
            } else {
                v = G.value(z);
            }
            const bool in = sublevel ? (v <= level) : (v >= level);
            if (in) {
                const auto key = PixelGrid::pack(i, j);
                grid.marked.push_back(key);
                in_region.insert(key);
            }
        }
    }
    std::sort(grid.marked.begin(), grid.marked.end());

    LevelCensus out;
    out.level = level;
    const int di[4] = {1, -1, 0, 0};
    const int dj[4] = {0, 0, 1, -1};
    std::uint32_t next_id = 0;
    for (const auto seed : grid.marked) {
        if (grid.comp.count(seed)) continue;
        const std::uint32_t id = next_id++;
        std::vector<std::int64_t> cells;
        std::queue<std::int64_t> frontier;
        grid.comp[seed] = id;
        frontier.push(seed);
        while (!frontier.empty()) {
            const auto key = frontier.front();
            frontier.pop();
            cells.push_back(key);
            const auto [i, j] = PixelGrid::unpack(key);
            for (int d = 0; d < 4; ++d) {
                const auto nb = PixelGrid::pack(i + di[d], j + dj[d]);
                if (in_region.count(nb) && !grid.comp.count(nb)) {
                    grid.comp[nb] = id;
                    frontier.push(nb);
                }
            }
        }

        LevelComponent comp;
        comp.cells = cells.size();

        // Euler characteristic of the union of closed unit squares:
        // chi = corners - edges + cells; a disc-like component has chi = 1.
        std::unordered_set<std::int64_t> corners;
        std::unordered_set<std::int64_t> edges;
        int imin = 1 << 30, imax = -(1 << 30), jmin = 1 << 30, jmax = -(1 << 30);
        for (const auto key : cells) {
            const auto [i, j] = PixelGrid::unpack(key);
            imin = std::min(imin, i); imax = std::max(imax, i);
            jmin = std::min(jmin, j); jmax = std::max(jmax, j);
            for (int a = 0; a <= 1; ++a)
                for (int b = 0; b <= 1; ++b)
                    corners.insert(PixelGrid::pack(i + a, j + b));
            // Horizontal edges tagged with bit 1, vertical with bit 0, offset
            // to keep packed keys distinct.
            edges.insert(4 * PixelGrid::pack(i, j) + 0);      // bottom
            edges.insert(4 * PixelGrid::pack(i, j + 1) + 0);  // top
            edges.insert(4 * PixelGrid::pack(i, j) + 1);      // left
            edges.insert(4 * PixelGrid::pack(i + 1, j) + 1);  // right
        }
        const std::int64_t chi = static_cast<std::int64_t>(corners.size()) -
                                 static_cast<std::int64_t>(edges.size()) +
                                 static_cast<std::int64_t>(cells.size());
        comp.simply_connected = (chi == 1);
        comp.thin = (comp.cells < 9) || (imax - imin + 1 < 3) || (jmax - jmin + 1 < 3);

        for (std::size_t l = 0; l < G.config().size(); ++l) {
            const cplx p = G.config().points[l].p;
            const int pi_ = static_cast<int>(std::floor(p.real() / h));
            const int pj_ = static_cast<int>(std::floor(p.imag() / h));
            const auto it = grid.comp.find(PixelGrid::pack(pi_, pj_));
            if (it != grid.comp.end() && it->second == id) comp.singularities.push_back(l);
        }

        double flux = 0.0;
        for (const auto key : cells) {
            const auto [i, j] = PixelGrid::unpack(key);
            const cplx c = grid.center(i, j);
            for (int d = 0; d < 4; ++d) {
                if (in_region.count(PixelGrid::pack(i + di[d], j + dj[d]))) continue;
                const cplx mid = c + 0.5 * h * cplx(di[d], dj[d]);
                const Vec2 gr = G.gradient(mid);
                flux += (gr.x * di[d] + gr.y * dj[d]) * h;
            }
        }
        comp.flux = flux;
        out.components.push_back(std::move(comp));
    }
    return out;
}

}  // namespace

AdmissibilityReport admissibility_check(const SingularityConfig& cfg, double h) {
    cfg.validate();
    if (cfg.size() >= 2 && cfg.min_pairwise_distance() < 4.0 * h) {
        throw ResolutionTooCoarse("singular points closer than 4 cells at this resolution");
    }
    const GreenField G(cfg);

    AdmissibilityReport report;
    report.h = h;
    report.balanced = cfg.balanced();

    bool has_plus = false;
    bool has_minus = false;
    for (const auto& q : cfg.points) (q.degree > 0 ? has_plus : has_minus) = true;

    const double magnitudes[4] = {0.25, 0.5, 1.0, 2.0};
    bool failed = false;
    bool thin_seen = false;
    for (const double mag : magnitudes) {
        for (const int sign : {-1, +1}) {
            // Negative levels carve neighbourhoods of degree +1 points (where
            // G -> -inf); positive levels carve neighbourhoods of degree -1.
            if (sign < 0 && !has_plus) continue;
            if (sign > 0 && !has_minus) continue;
            LevelCensus census = census_one_level(G, sign * mag, h);
            for (const auto& comp : census.components) {
                if (comp.thin) {
                    thin_seen = true;
                    continue;
                }
                const bool flux_ok = std::abs(std::abs(comp.flux) - 2.0 * kPi) < 0.25 * 2.0 * kPi;
                if (!comp.simply_connected || comp.singularities.size() != 1 || !flux_ok) {
                    failed = true;
                }
            }
            report.levels.push_back(std::move(census));
        }
    }
    if (!report.balanced) failed = true;
    report.verdict = failed ? "not_admissible" : (thin_seen ? "inconclusive" : "admissible");
    return report;
}

}  // namespace hslag
