#include "hslag/immersion.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>
#include <utility>

#include "hslag/errors.hpp"

namespace hslag {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Lattice bookkeeping shared by the conjugate and the diagnostics: node ids
// addressed by cell coordinates (i, j), node at ((i+1/2) h, (j+1/2) h).
struct NodeLattice {
    int m = 0;
    double h = 0.0;
    std::vector<std::int32_t> at;

    explicit NodeLattice(const DiscGrid& grid) : h(grid.h()) {
        m = static_cast<int>(std::lround(std::ceil(1.0 / h)));
        at.assign(static_cast<std::size_t>(2 * m) * (2 * m), -1);
        for (std::uint32_t id = 0; id < grid.node_count(); ++id) {
            const cplx z = grid.position(id);
            const int i = static_cast<int>(std::lround(z.real() / h - 0.5));
            const int j = static_cast<int>(std::lround(z.imag() / h - 0.5));
            at[slot(i, j)] = static_cast<std::int32_t>(id);
        }
    }
    std::size_t slot(int i, int j) const {
        return static_cast<std::size_t>(j + m) * (2 * m) + static_cast<std::size_t>(i + m);
    }
    std::int32_t node(int i, int j) const {
        if (i < -m || i >= m || j < -m || j >= m) return -1;
        return at[slot(i, j)];
    }
    void coords(const DiscGrid& grid, std::uint32_t id, int& i, int& j) const {
        const cplx z = grid.position(id);
        i = static_cast<int>(std::lround(z.real() / h - 0.5));
        j = static_cast<int>(std::lround(z.imag() / h - 0.5));
    }
};

// Rotated-flux increments, one per grid edge, keyed by the lower node.
// exc[id]: crossing the east edge of id, equals v(top) - v(bottom) on the
// corner column to the east. nyc[id]: crossing the north edge, equals
// v(right) - v(left) on the corner row to the north.
struct EdgeIncrements {
    std::vector<cplx> exc, nyc;
    std::vector<std::uint8_t> has_exc, has_nyc;

    EdgeIncrements(const ScalarField& u, const SOneMap& g, const NodeLattice& lat) {
        const DiscGrid& grid = u.grid();
        const double h = grid.h();
        const std::size_t n = grid.node_count();
        exc.assign(n, cplx{0.0, 0.0});
        nyc.assign(n, cplx{0.0, 0.0});
        has_exc.assign(n, 0);
        has_nyc.assign(n, 0);
        for (std::uint32_t id = 0; id < n; ++id) {
            int i, j;
            lat.coords(grid, id, i, j);
            const std::int64_t e = grid.neighbor(id, 0);
            if (e >= 0) {
                const cplx mid{(i + 1) * h, (j + 0.5) * h};
                exc[id] = -g.value(mid) * (u[static_cast<std::uint32_t>(e)] - u[id]);
                has_exc[id] = 1;
            }
            const std::int64_t nn = grid.neighbor(id, 2);
            if (nn >= 0) {
                const cplx mid{(i + 0.5) * h, (j + 1) * h};
                nyc[id] = g.value(mid) * (u[static_cast<std::uint32_t>(nn)] - u[id]);
                has_nyc[id] = 1;
            }
        }
    }
};

struct Stats {
    double max = 0.0;
    double sum2 = 0.0;
    std::size_t count = 0;
    void add(double v) {
        max = std::max(max, v);
        sum2 += v * v;
        ++count;
    }
    ResidualReport report(const std::string& channel, double h) const {
        ResidualReport r;
        r.channel = channel;
        r.max = max;
        r.l2 = std::sqrt(h * h * sum2);
        r.h = h;
        return r;
    }
};

bool in_annulus(cplx z, double rmin, double rmax) {
    const double r = std::abs(z);
    return r >= rmin && r <= rmax;
}

}  // namespace

std::size_t CornerField::count() const {
    std::size_t n = 0;
    for (const auto p : present_)
        if (p) ++n;
    return n;
}

ConjugateResult harmonic_conjugate(const ScalarField& u, const SOneMap& g) {
    const DiscGrid& grid = u.grid();
    const double h = grid.h();
    const NodeLattice lat(grid);
    const EdgeIncrements inc(u, g, lat);

    double scale = 0.0;
    for (std::uint32_t id = 0; id < grid.node_count(); ++id) scale = std::max(scale, std::abs(u[id]));

    // Divergence audit over nodes with all four edges: the circulation around
    // the four corners of a node is exactly minus this flux.
    double div_max = 0.0, div_l1 = 0.0;
    for (std::uint32_t id = 0; id < grid.node_count(); ++id) {
        int i, j;
        lat.coords(grid, id, i, j);
        const std::int32_t w = lat.node(i - 1, j);
        const std::int32_t s = lat.node(i, j - 1);
        if (w < 0 || s < 0 || !inc.has_exc[id] || !inc.has_nyc[id] || !inc.has_exc[w] ||
            !inc.has_nyc[s])
            continue;
        const double flux = std::abs(-inc.exc[id] + inc.exc[w] + inc.nyc[id] - inc.nyc[s]);
        div_max = std::max(div_max, flux);
        div_l1 += flux;
    }

    ConjugateResult out{CornerField(h, lat.m), 0.0, div_max, div_l1, 0.0};

    for (std::uint32_t id = 0; id < grid.node_count(); ++id) {
        if (inc.has_exc[id]) out.dirichlet += std::norm(inc.exc[id]);
        if (inc.has_nyc[id]) out.dirichlet += std::norm(inc.nyc[id]);
    }

    // Increment for the corner move (a, b) -> neighbour; false when the
    // crossing grid edge does not exist.
    auto move = [&](int a, int b, int dir, cplx& delta) {
        std::int32_t p;
        switch (dir) {
            case 0:  // up
                p = lat.node(a - 1, b);
                if (p < 0 || !inc.has_exc[p]) return false;
                delta = inc.exc[p];
                return true;
            case 1:  // down
                p = lat.node(a - 1, b - 1);
                if (p < 0 || !inc.has_exc[p]) return false;
                delta = -inc.exc[p];
                return true;
            case 2:  // right
                p = lat.node(a, b - 1);
                if (p < 0 || !inc.has_nyc[p]) return false;
                delta = inc.nyc[p];
                return true;
            default:  // left
                p = lat.node(a - 1, b - 1);
                if (p < 0 || !inc.has_nyc[p]) return false;
                delta = -inc.nyc[p];
                return true;
        }
    };
    const std::array<std::array<int, 2>, 4> step{{{0, 1}, {0, -1}, {1, 0}, {-1, 0}}};

    int a0 = lat.m + 1, b0 = 0;
    for (int a = lat.m; a >= -lat.m && a0 > lat.m; --a) {
        cplx delta;
        for (int dir = 0; dir < 4 && a0 > lat.m; ++dir) {
            if (move(a, 0, dir, delta)) a0 = a;
        }
    }
    if (a0 > lat.m) throw NumericError("harmonic conjugate found no usable grid edge");

    out.v.set(a0, b0, cplx{0.0, 0.0});
    std::queue<std::pair<int, int>> queue;
    queue.push({a0, b0});
    while (!queue.empty()) {
        const auto [a, b] = queue.front();
        queue.pop();
        const cplx base = out.v.value(a, b);
        for (int dir = 0; dir < 4; ++dir) {
            cplx delta;
            if (!move(a, b, dir, delta)) continue;
            const int na = a + step[dir][0];
            const int nb = b + step[dir][1];
            if (!out.v.in_range(na, nb)) continue;
            if (out.v.has(na, nb)) {
                out.loop_max = std::max(out.loop_max, std::abs(out.v.value(na, nb) - base - delta));
            } else {
                out.v.set(na, nb, base + delta);
                queue.push({na, nb});
            }
        }
    }

    if (out.loop_max > 10.0 * out.div_l1 + 1e-10 * (1.0 + scale))
        throw PathDependence("conjugate loop residues exceed the divergence budget");
    return out;
}

ImmersionField::ImmersionField(std::shared_ptr<const DiscGrid> grid)
    : grid_(std::move(grid)),
      phi_(grid_->node_count(), {cplx{0.0, 0.0}, cplx{0.0, 0.0}}),
      factor_(grid_->node_count(), 0.0),
      angle_(grid_->node_count(), cplx{0.0, 0.0}),
      conformality_(grid_->node_count(), 0.0),
      orthogonality_(grid_->node_count(), 0.0),
      lagrangian_(grid_->node_count(), 0.0),
      unit_angle_(grid_->node_count(), 0.0),
      defined_(grid_->node_count(), 0) {}

std::vector<double>& ImmersionField::raw(Channel c) {
    switch (c) {
        case Channel::Conformality: return conformality_;
        case Channel::Orthogonality: return orthogonality_;
        case Channel::Lagrangian: return lagrangian_;
        default: return unit_angle_;
    }
}

double ImmersionField::defect(Channel c, std::uint32_t id) const {
    switch (c) {
        case Channel::Conformality: return conformality_[id];
        case Channel::Orthogonality: return orthogonality_[id];
        case Channel::Lagrangian: return lagrangian_[id];
        default: return unit_angle_[id];
    }
}

ResidualReport ImmersionField::report(Channel c, double rmin, double rmax) const {
    Stats stats;
    for (std::uint32_t id = 0; id < grid_->node_count(); ++id) {
        if (!defined_[id] || grid_->is_masked(id)) continue;
        if (!in_annulus(grid_->position(id), rmin, rmax)) continue;
        stats.add(defect(c, id));
    }
    const char* name = "";
    switch (c) {
        case Channel::Conformality: name = "conformality"; break;
        case Channel::Orthogonality: name = "orthogonality"; break;
        case Channel::Lagrangian: name = "lagrangian"; break;
        default: name = "unit-angle"; break;
    }
    return stats.report(name, grid_->h());
}

bool ImmersionField::degenerate() const {
    double worst = 0.0;
    for (std::uint32_t id = 0; id < grid_->node_count(); ++id)
        if (defined_[id]) worst = std::max(worst, factor_[id]);
    return worst < 1e-30;
}

namespace {

void fill_channels(ImmersionField& imm, std::uint32_t id, const std::array<cplx, 2>& dx,
                   const std::array<cplx, 2>& dy) {
    const double e = std::norm(dx[0]) + std::norm(dx[1]);
    const double gq = std::norm(dy[0]) + std::norm(dy[1]);
    const double f =
        (dx[0] * std::conj(dy[0])).real() + (dx[1] * std::conj(dy[1])).real();
    const double omega = std::imag(std::conj(dx[0]) * dy[0] + std::conj(dx[1]) * dy[1]);
    const cplx jac = dx[0] * dy[1] - dy[0] * dx[1];
    imm.raw_factor()[id] = e;
    imm.raw(ImmersionField::Channel::Conformality)[id] = std::abs(e - gq);
    imm.raw(ImmersionField::Channel::Orthogonality)[id] = std::abs(f);
    imm.raw(ImmersionField::Channel::Lagrangian)[id] = std::abs(omega);
    imm.raw(ImmersionField::Channel::UnitAngle)[id] = std::abs(std::abs(jac) - e);
    imm.raw_angle()[id] = e > 1e-300 ? jac / e : cplx{0.0, 0.0};
    imm.raw_defined()[id] = 1;
}

}  // namespace

ImmersionField assemble_immersion(const ScalarField& u, const ConjugateResult& v,
                                  const SOneMap& g) {
    auto grid_ptr = u.grid_ptr();
    const DiscGrid& grid = *grid_ptr;
    const double h = grid.h();
    const NodeLattice lat(grid);
    ImmersionField imm(grid_ptr);

    for (std::uint32_t id = 0; id < grid.node_count(); ++id) {
        int i, j;
        lat.coords(grid, id, i, j);
        imm.raw_phi()[id][0] = u[id];
        if (v.v.has(i, j) && v.v.has(i + 1, j) && v.v.has(i, j + 1) && v.v.has(i + 1, j + 1)) {
            const cplx vavg = 0.25 * (v.v.value(i, j) + v.v.value(i + 1, j) +
                                      v.v.value(i, j + 1) + v.v.value(i + 1, j + 1));
            imm.raw_phi()[id][1] = std::conj(vavg);
        }

        const std::int64_t e = grid.neighbor(id, 0), w = grid.neighbor(id, 1),
                           nn = grid.neighbor(id, 2), s = grid.neighbor(id, 3);
        if (e < 0 || w < 0 || nn < 0 || s < 0) continue;
        const cplx ue = u[static_cast<std::uint32_t>(e)], uw = u[static_cast<std::uint32_t>(w)],
                   un = u[static_cast<std::uint32_t>(nn)], us = u[static_cast<std::uint32_t>(s)];
        const cplx up = u[id];
        const cplx ux = (ue - uw) / (2.0 * h);
        const cplx uy = (un - us) / (2.0 * h);

        // v-derivatives from the local rotated fluxes; no accumulated values.
        const cplx gs = g.value(cplx{(i + 0.5) * h, j * h});
        const cplx gn = g.value(cplx{(i + 0.5) * h, (j + 1) * h});
        const cplx gw = g.value(cplx{i * h, (j + 0.5) * h});
        const cplx ge = g.value(cplx{(i + 1) * h, (j + 0.5) * h});
        const cplx vx = (gs * (up - us) + gn * (un - up)) / (2.0 * h);
        const cplx vy = -(gw * (up - uw) + ge * (ue - up)) / (2.0 * h);

        const std::array<cplx, 2> dx{ux, std::conj(vx)};
        const std::array<cplx, 2> dy{uy, std::conj(vy)};
        fill_channels(imm, id, dx, dy);
    }
    return imm;
}

std::array<cplx, 2> sw_cone_value(const ConeDescriptor& desc, cplx z) {
    const double p = desc.p, q = desc.q;
    const double r = std::abs(z);
    const double theta = std::atan2(z.imag(), z.real());
    const double s = std::sqrt(p * q);
    const double c0 = std::pow(r, s) / std::sqrt(p + q);
    const cplx eip = std::polar(1.0, p * theta);
    const cplx eiq = std::polar(1.0, -q * theta);
    return {c0 * std::sqrt(q) * eip, cplx{0.0, 1.0} * c0 * std::sqrt(p) * eiq};
}

ImmersionField sw_cone(const ConeDescriptor& desc, std::shared_ptr<const DiscGrid> grid) {
    if (desc.p < 1 || desc.q < 1) throw ConfigError("cone exponents must satisfy p, q >= 1");
    const double p = desc.p, q = desc.q;
    const double s = std::sqrt(p * q);
    const double root = std::sqrt(p + q);
    ImmersionField imm(grid);
    for (std::uint32_t id = 0; id < grid->node_count(); ++id) {
        const cplx z = grid->position(id);
        const double r = std::abs(z);
        const double theta = std::atan2(z.imag(), z.real());
        const cplx eip = std::polar(1.0, p * theta);
        const cplx eiq = std::polar(1.0, -q * theta);
        const double rs = std::pow(r, s);
        imm.raw_phi()[id] = {rs / root * std::sqrt(q) * eip,
                             cplx{0.0, 1.0} * rs / root * std::sqrt(p) * eiq};

        const double rs1 = std::pow(r, s - 1.0);
        const std::array<cplx, 2> dr{s * rs1 / root * std::sqrt(q) * eip,
                                     cplx{0.0, 1.0} * s * rs1 / root * std::sqrt(p) * eiq};
        const std::array<cplx, 2> dt{cplx{0.0, p} * rs1 / root * std::sqrt(q) * eip,
                                     q * rs1 / root * std::sqrt(p) * eiq};
        const double c = std::cos(theta), sn = std::sin(theta);
        const std::array<cplx, 2> dx{c * dr[0] - sn * dt[0], c * dr[1] - sn * dt[1]};
        const std::array<cplx, 2> dy{sn * dr[0] + c * dt[0], sn * dr[1] + c * dt[1]};
        fill_channels(imm, id, dx, dy);
    }
    return imm;
}

namespace {

// Shared divergence-flux scan with g sampled at edge midpoints.
ResidualReport divergence_scan(const ImmersionField& imm,
                               const std::function<cplx(cplx)>& gmid, bool against_angle,
                               const std::function<cplx(cplx)>& gnode, const char* channel,
                               double rmin, double rmax) {
    const DiscGrid& grid = imm.grid();
    const double h = grid.h();
    const NodeLattice lat(grid);
    Stats stats;
    for (std::uint32_t id = 0; id < grid.node_count(); ++id) {
        if (grid.is_masked(id)) continue;
        const cplx z = grid.position(id);
        if (!in_annulus(z, rmin, rmax)) continue;
        const std::int64_t e = grid.neighbor(id, 0), w = grid.neighbor(id, 1),
                           nn = grid.neighbor(id, 2), s = grid.neighbor(id, 3);
        if (e < 0 || w < 0 || nn < 0 || s < 0) continue;
        if (!against_angle &&
            (!imm.defined(id) || !imm.defined(static_cast<std::uint32_t>(e)) ||
             !imm.defined(static_cast<std::uint32_t>(w)) ||
             !imm.defined(static_cast<std::uint32_t>(nn)) ||
             !imm.defined(static_cast<std::uint32_t>(s))))
            continue;
        int i, j;
        lat.coords(grid, id, i, j);
        const cplx ge = gmid(cplx{(i + 1) * h, (j + 0.5) * h});
        const cplx gw = gmid(cplx{i * h, (j + 0.5) * h});
        const cplx gn = gmid(cplx{(i + 0.5) * h, (j + 1) * h});
        const cplx gs = gmid(cplx{(i + 0.5) * h, j * h});
        double res;
        if (against_angle) {
            const cplx gp = gnode(z);
            const cplx flux = std::conj(ge) * (gnode(grid.position(static_cast<std::uint32_t>(e))) - gp) +
                              std::conj(gw) * (gnode(grid.position(static_cast<std::uint32_t>(w))) - gp) +
                              std::conj(gn) * (gnode(grid.position(static_cast<std::uint32_t>(nn))) - gp) +
                              std::conj(gs) * (gnode(grid.position(static_cast<std::uint32_t>(s))) - gp);
            res = std::abs(flux) / (h * h);
        } else {
            double acc = 0.0;
            for (int c = 0; c < 2; ++c) {
                const cplx fp = imm.phi(id)[c];
                const cplx flux = ge * (imm.phi(static_cast<std::uint32_t>(e))[c] - fp) +
                                  gw * (imm.phi(static_cast<std::uint32_t>(w))[c] - fp) +
                                  gn * (imm.phi(static_cast<std::uint32_t>(nn))[c] - fp) +
                                  gs * (imm.phi(static_cast<std::uint32_t>(s))[c] - fp);
                acc += std::norm(flux);
            }
            res = std::sqrt(acc) / (h * h);
        }
        stats.add(res);
    }
    return stats.report(channel, h);
}

}  // namespace

StationaryReport verify_hamiltonian_stationary(const ImmersionField& imm,
                                               const SingularityConfig& cfg, double rmin,
                                               double rmax) {
    const SOneMap g(cfg);
    auto gmap = [&g](cplx z) { return g.value(z); };
    StationaryReport out;
    out.div_phi = divergence_scan(imm, gmap, false, gmap, "div-g-grad-phi", rmin, rmax);
    out.div_angle = divergence_scan(imm, gmap, true, gmap, "div-conj-g-grad-g", rmin, rmax);

    Stats neumann;
    const int nb = 512;
    for (int k = 0; k < nb; ++k) {
        const double theta = kTwoPi * k / nb;
        const cplx z = std::polar(1.0, theta);
        neumann.add(std::abs(std::imag(z * g.logderiv_sum(z))));
    }
    out.neumann.channel = "boundary-neumann";
    out.neumann.max = neumann.max;
    out.neumann.l2 = std::sqrt(kTwoPi / nb * neumann.sum2);
    out.neumann.h = imm.grid().h();
    return out;
}

ResidualReport cone_structure_residual(const ImmersionField& imm, const ConeDescriptor& desc,
                                       double rmin, double rmax) {
    const double k = desc.p - desc.q;
    auto gmap = [k](cplx z) {
        const double theta = std::atan2(z.imag(), z.real());
        return std::polar(1.0, -k * theta);
    };
    return divergence_scan(imm, gmap, false, gmap, "cone-structure", rmin, rmax);
}

MeanCurvatureField mean_curvature(const ImmersionField& imm,
                                  const std::function<Vec2(cplx)>& angle_gradient, double rmin,
                                  double rmax) {
    const DiscGrid& grid = imm.grid();
    const double h = grid.h();
    const std::size_t n = grid.node_count();
    MeanCurvatureField out;
    out.h_vec.assign(n, {cplx{0.0, 0.0}, cplx{0.0, 0.0}});
    out.defect.assign(n, 0.0);
    out.defined.assign(n, 0);
    Stats stats;
    for (std::uint32_t id = 0; id < n; ++id) {
        if (grid.is_masked(id) || !imm.defined(id)) continue;
        const cplx z = grid.position(id);
        if (!in_annulus(z, rmin, rmax)) continue;
        const std::int64_t e = grid.neighbor(id, 0), w = grid.neighbor(id, 1),
                           nn = grid.neighbor(id, 2), s = grid.neighbor(id, 3);
        if (e < 0 || w < 0 || nn < 0 || s < 0) continue;
        if (!imm.defined(static_cast<std::uint32_t>(e)) ||
            !imm.defined(static_cast<std::uint32_t>(w)) ||
            !imm.defined(static_cast<std::uint32_t>(nn)) ||
            !imm.defined(static_cast<std::uint32_t>(s)))
            continue;
        const double factor = imm.conformal_factor(id);
        if (factor < 1e-8 * h * h)
            throw DegenerateMetric("conformal factor vanishes inside the evaluation annulus");
        const Vec2 a = angle_gradient(z);
        double acc = 0.0;
        for (int c = 0; c < 2; ++c) {
            const cplx fp = imm.phi(id)[c];
            const cplx fe = imm.phi(static_cast<std::uint32_t>(e))[c];
            const cplx fw = imm.phi(static_cast<std::uint32_t>(w))[c];
            const cplx fn = imm.phi(static_cast<std::uint32_t>(nn))[c];
            const cplx fs = imm.phi(static_cast<std::uint32_t>(s))[c];
            const cplx lap = (fe + fw + fn + fs - 4.0 * fp) / (h * h);
            const cplx dx = (fe - fw) / (2.0 * h);
            const cplx dy = (fn - fs) / (2.0 * h);
            const cplx transport = cplx{0.0, 1.0} * (a.x * dx + a.y * dy);
            out.h_vec[id][c] = 0.5 / factor * lap;
            acc += std::norm(lap + transport);
        }
        out.defect[id] = std::sqrt(acc);
        out.defined[id] = 1;
        stats.add(out.defect[id]);
    }
    if (stats.count == 0)
        throw DegenerateMetric("no node admits a mean curvature evaluation in the annulus");
    out.summary = stats.report("mean-curvature-defect", h);
    return out;
}

std::function<Vec2(cplx)> angle_gradient(const GreenField& green) {
    return [green](cplx z) { return green.perp_gradient(z); };
}

std::function<Vec2(cplx)> cone_angle_gradient(const ConeDescriptor& desc) {
    const double k = desc.p - desc.q;
    return [k](cplx z) {
        const double r2 = std::norm(z);
        return Vec2{k * z.imag() / r2, -k * z.real() / r2};
    };
}

MeshData triangulate(const ImmersionField& imm) {
    const DiscGrid& grid = imm.grid();
    MeshData mesh;
    std::vector<std::int64_t> vertex_of(grid.node_count(), -1);
    auto vertex = [&](std::uint32_t id) {
        if (vertex_of[id] < 0) {
            vertex_of[id] = static_cast<std::int64_t>(mesh.vertices.size());
            const auto& f = imm.phi(id);
            mesh.vertices.push_back(
                {f[0].real(), f[0].imag(), f[1].real(), f[1].imag()});
        }
        return static_cast<std::uint32_t>(vertex_of[id]);
    };
    for (std::uint32_t id = 0; id < grid.node_count(); ++id) {
        const std::int64_t e = grid.neighbor(id, 0);
        const std::int64_t nn = grid.neighbor(id, 2);
        if (e < 0 || nn < 0) continue;
        const std::int64_t ne = grid.neighbor(static_cast<std::uint32_t>(e), 2);
        if (ne < 0) continue;
        const auto vp = vertex(id);
        const auto ve = vertex(static_cast<std::uint32_t>(e));
        const auto vne = vertex(static_cast<std::uint32_t>(ne));
        const auto vn = vertex(static_cast<std::uint32_t>(nn));
        mesh.faces.push_back({vp, ve, vne});
        mesh.faces.push_back({vp, vne, vn});
    }
    return mesh;
}

MeshData cone_fan_mesh(const ConeDescriptor& desc, int rings, int sectors) {
    if (rings < 1 || sectors < 3) throw ConfigError("cone mesh needs rings >= 1, sectors >= 3");
    MeshData mesh;
    // Apex duplicated once per sector.
    for (int i = 0; i < sectors; ++i) mesh.vertices.push_back({0.0, 0.0, 0.0, 0.0});
    auto ring_vertex = [&](int j, int i) {
        return static_cast<std::uint32_t>(sectors + (j - 1) * sectors + (i % sectors));
    };
    for (int j = 1; j <= rings; ++j) {
        const double r = static_cast<double>(j) / rings;
        for (int i = 0; i < sectors; ++i) {
            const double theta = kTwoPi * i / sectors;
            const auto f = sw_cone_value(desc, std::polar(r, theta));
            mesh.vertices.push_back({f[0].real(), f[0].imag(), f[1].real(), f[1].imag()});
        }
    }
    for (int i = 0; i < sectors; ++i)
        mesh.faces.push_back({static_cast<std::uint32_t>(i), ring_vertex(1, i), ring_vertex(1, i + 1)});
    for (int j = 1; j < rings; ++j) {
        for (int i = 0; i < sectors; ++i) {
            mesh.faces.push_back({ring_vertex(j, i), ring_vertex(j + 1, i), ring_vertex(j + 1, i + 1)});
            mesh.faces.push_back({ring_vertex(j, i), ring_vertex(j + 1, i + 1), ring_vertex(j, i + 1)});
        }
    }
    return mesh;
}

}  // namespace hslag
