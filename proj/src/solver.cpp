#include "hslag/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>

#include "hslag/errors.hpp"

namespace hslag {

namespace {

// Transport weight of one edge: h/4 * (c(P) + c(Q)) where c is the relevant
// component of the rotated Green gradient. The average sits on the edge
// midpoint, and since div c = 0 identically the averaged stencil stays
// second order consistent.
void edge_weights(const DiscGrid& grid, const GreenField& green, std::vector<double>& sx,
                  std::vector<double>& sy) {
    const std::size_t n = grid.node_count();
    std::vector<Vec2> c(n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t id = 0; id < static_cast<std::ptrdiff_t>(n); ++id) {
        c[id] = green.perp_gradient(grid.position(static_cast<std::uint32_t>(id)));
    }
    sx.assign(n, 0.0);
    sy.assign(n, 0.0);
    const double quarter_h = 0.25 * grid.h();
    for (std::uint32_t id = 0; id < n; ++id) {
        const auto e = grid.neighbor(id, 0);
        const auto nn = grid.neighbor(id, 2);
        if (e >= 0) sx[id] = quarter_h * (c[id].x + c[e].x);
        if (nn >= 0) sy[id] = quarter_h * (c[id].y + c[nn].y);
    }
}

double tiny_guard(double scale) { return 1e-280 * std::max(1.0, scale); }

}  // namespace

ElSystem assemble_el_system(std::shared_ptr<const DiscGrid> grid, const GreenField& green,
                            const BoundaryTrace& psi, double t) {
    if (!(t >= 0.0 && t <= 1.0)) throw ConfigError("parameter t must lie in [0, 1]");
    const SingularityConfig& cfg = grid->config();
    const SingularityConfig& gcfg = green.config();
    if (cfg.size() != gcfg.size()) throw ConfigError("grid and potential disagree on singularities");
    for (std::size_t l = 0; l < cfg.size(); ++l) {
        if (cfg.points[l].p != gcfg.points[l].p || cfg.points[l].degree != gcfg.points[l].degree)
            throw ConfigError("grid and potential disagree on singularities");
    }
    const double h = grid->h();
    if (cfg.size() >= 2 && cfg.min_pairwise_distance() < 8.0 * h)
        throw TooCoarse("singular points closer than 8 h; refine the grid");
    for (const auto& s : cfg.points) {
        if (1.0 - std::abs(s.p) < 8.0 * h)
            throw TooCoarse("singular point closer than 8 h to the boundary; refine the grid");
    }
    if (psi.truncation() > 0.5 / h)
        throw TooCoarse("boundary trace truncation beyond the ring Nyquist limit");

    ElSystem sys;
    sys.grid = grid;
    sys.t = t;
    edge_weights(*grid, green, sys.sx, sys.sy);

    const std::size_t n = grid->node_count();
    sys.trace.assign(n, cplx{0.0, 0.0});
    for (const auto id : grid->ring_ids()) {
        const cplx z = grid->position(id);
        sys.trace[id] = psi.value(std::atan2(z.imag(), z.real()));
    }

    const auto& interior = grid->interior_ids();
    const std::size_t ni = interior.size();
    sys.a.n = ni;
    sys.a.rowptr.assign(ni + 1, 0);
    sys.rhs.assign(ni, cplx{0.0, 0.0});
    sys.a.col.reserve(5 * ni);
    sys.a.val.reserve(5 * ni);

    std::vector<std::pair<std::int32_t, cplx>> row;
    for (std::size_t r = 0; r < ni; ++r) {
        const std::uint32_t p = interior[r];
        row.clear();
        row.emplace_back(static_cast<std::int32_t>(r), cplx{4.0, 0.0});
        for (int dir = 0; dir < 4; ++dir) {
            const auto q64 = grid->neighbor(p, dir);
            const auto q = static_cast<std::uint32_t>(q64);
            double s_pq = 0.0;
            switch (dir) {
                case 0: s_pq = sys.sx[p]; break;
                case 1: s_pq = -sys.sx[q]; break;
                case 2: s_pq = sys.sy[p]; break;
                default: s_pq = -sys.sy[q]; break;
            }
            const cplx entry = cplx{-1.0, 0.0} - cplx{0.0, 1.0} * (t * s_pq);
            const auto qi = grid->interior_index(q);
            if (qi >= 0) {
                row.emplace_back(static_cast<std::int32_t>(qi), entry);
            } else {
                sys.rhs[r] -= entry * sys.trace[q];
            }
        }
        std::sort(row.begin(), row.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (const auto& [cidx, v] : row) {
            sys.a.col.push_back(cidx);
            sys.a.val.push_back(v);
        }
        sys.a.rowptr[r + 1] = static_cast<std::int64_t>(sys.a.col.size());
    }
    return sys;
}

std::vector<cplx> bicgstab(const Csr& a, const std::vector<cplx>& b, double tol,
                           std::uint64_t max_iter, Exec exec, SolveStats* stats) {
    using kernels::axpby;
    using kernels::dot;
    using kernels::matvec;
    using kernels::norm2;
    const std::size_t n = a.n;
    std::vector<cplx> x(n, cplx{0.0, 0.0});
    const double bnorm = norm2(b, exec);
    if (bnorm == 0.0) {
        if (stats) *stats = {0, 0.0};
        return x;
    }
    std::vector<cplx> r = b;  // x0 = 0
    const std::vector<cplx> rhat = r;
    std::vector<cplx> p(n, cplx{0.0, 0.0}), v(n, cplx{0.0, 0.0}), s(n), tvec(n);
    cplx rho_old{1.0, 0.0}, alpha{1.0, 0.0}, omega{1.0, 0.0};
    double rel = 1.0;
    for (std::uint64_t iter = 1; iter <= max_iter; ++iter) {
        const cplx rho = dot(rhat, r, exec);
        if (std::abs(rho) < tiny_guard(bnorm * bnorm) || std::abs(omega) < 1e-280)
            throw NoConvergence(iter, rel, "bicgstab recurrence broke down");
        const cplx beta = (rho / rho_old) * (alpha / omega);
        axpby(cplx{1.0, 0.0}, p, -omega, v, p, exec);
        axpby(cplx{1.0, 0.0}, r, beta, p, p, exec);
        matvec(a, p, v, exec);
        const cplx denom = dot(rhat, v, exec);
        if (std::abs(denom) < tiny_guard(bnorm * bnorm))
            throw NoConvergence(iter, rel, "bicgstab recurrence broke down");
        alpha = rho / denom;
        axpby(cplx{1.0, 0.0}, r, -alpha, v, s, exec);
        const double snorm = norm2(s, exec);
        if (snorm <= tol * bnorm) {
            axpby(alpha, p, cplx{1.0, 0.0}, x, x, exec);
            if (stats) *stats = {iter, snorm / bnorm};
            return x;
        }
        matvec(a, s, tvec, exec);
        const cplx tt = dot(tvec, tvec, exec);
        if (std::abs(tt) < tiny_guard(bnorm * bnorm))
            throw NoConvergence(iter, rel, "bicgstab recurrence broke down");
        omega = dot(tvec, s, exec) / tt;
        axpby(alpha, p, cplx{1.0, 0.0}, x, x, exec);
        axpby(omega, s, cplx{1.0, 0.0}, x, x, exec);
        axpby(cplx{1.0, 0.0}, s, -omega, tvec, r, exec);
        const double rnorm = norm2(r, exec);
        rel = rnorm / bnorm;
        if (rnorm <= tol * bnorm) {
            if (stats) *stats = {iter, rel};
            return x;
        }
        rho_old = rho;
    }
    throw NoConvergence(max_iter, rel, "bicgstab hit the iteration cap");
}

ScalarField solve_el(const ElSystem& sys, Exec exec, double tol, std::uint64_t max_iter,
                     SolveStats* stats) {
    const auto xi = bicgstab(sys.a, sys.rhs, tol, max_iter, exec, stats);
    ScalarField u(sys.grid);
    const auto& interior = sys.grid->interior_ids();
    for (std::size_t r = 0; r < interior.size(); ++r) u[interior[r]] = xi[r];
    for (const auto id : sys.grid->ring_ids()) u[id] = sys.trace[id];
    // Wente-type bound: the coupling part of the energy never exceeds the
    // Dirichlet part (up to discretization slack), which is what keeps L_t
    // coercive for t < 1.
    const QuadraticSplit q = quadratic_split(sys, u);
    if (std::abs(q.coupling) > q.dirichlet * (1.0 + 8.0 * sys.grid->h()) + 1e-9)
        throw NumericError("coupling energy exceeded the Dirichlet bound on a solve");
    return u;
}

double el_residual(const ElSystem& sys, const ScalarField& u) {
    const DiscGrid& grid = *sys.grid;
    const auto& interior = grid.interior_ids();
    const double inv_h2 = 1.0 / (grid.h() * grid.h());
    double worst = 0.0;
#pragma omp parallel for schedule(static) reduction(max : worst)
    for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(interior.size()); ++r) {
        const std::uint32_t p = interior[static_cast<std::size_t>(r)];
        if (grid.is_masked(p)) continue;
        const auto e = static_cast<std::uint32_t>(grid.neighbor(p, 0));
        const auto w = static_cast<std::uint32_t>(grid.neighbor(p, 1));
        const auto nn = static_cast<std::uint32_t>(grid.neighbor(p, 2));
        const auto s = static_cast<std::uint32_t>(grid.neighbor(p, 3));
        const cplx lap = 4.0 * u[p] - u[e] - u[w] - u[nn] - u[s];
        const cplx trans = sys.sx[p] * u[e] - sys.sx[w] * u[w] + sys.sy[p] * u[nn] - sys.sy[s] * u[s];
        const double res = std::abs(lap - cplx{0.0, 1.0} * (sys.t * trans)) * inv_h2;
        worst = std::max(worst, res);
    }
    return worst;
}

QuadraticSplit quadratic_split(const ElSystem& sys, const ScalarField& u) {
    const DiscGrid& grid = *sys.grid;
    const std::size_t n = grid.node_count();
    const std::size_t chunks = (n + kernels::kChunk - 1) / kernels::kChunk;
    std::vector<double> pd(chunks, 0.0), pc(chunks, 0.0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(chunks); ++c) {
        const std::size_t lo = static_cast<std::size_t>(c) * kernels::kChunk;
        const std::size_t hi = std::min(n, lo + kernels::kChunk);
        double d = 0.0, cp = 0.0;
        for (std::size_t idx = lo; idx < hi; ++idx) {
            const auto id = static_cast<std::uint32_t>(idx);
            const auto e = grid.neighbor(id, 0);
            const auto nn = grid.neighbor(id, 2);
            if (e >= 0) {
                d += 0.5 * std::norm(u[static_cast<std::uint32_t>(e)] - u[id]);
                cp += sys.sx[id] * std::imag(std::conj(u[id]) * u[static_cast<std::uint32_t>(e)]);
            }
            if (nn >= 0) {
                d += 0.5 * std::norm(u[static_cast<std::uint32_t>(nn)] - u[id]);
                cp += sys.sy[id] * std::imag(std::conj(u[id]) * u[static_cast<std::uint32_t>(nn)]);
            }
        }
        pd[static_cast<std::size_t>(c)] = d;
        pc[static_cast<std::size_t>(c)] = cp;
    }
    QuadraticSplit out;
    for (std::size_t c = 0; c < chunks; ++c) {
        out.dirichlet += pd[c];
        out.coupling += pc[c];
    }
    return out;
}

double assembled_quadratic(const ElSystem& sys, const ScalarField& u) {
    const QuadraticSplit q = quadratic_split(sys, u);
    return q.dirichlet + sys.t * q.coupling;
}

}  // namespace hslag
