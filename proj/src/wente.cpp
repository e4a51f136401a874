#include "hslag/wente.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "hslag/errors.hpp"
#include "hslag/greens.hpp"
#include "hslag/kernels.hpp"
#include "hslag/rng.hpp"

namespace hslag {

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;

void require_same_grid(const ScalarField& a, const ScalarField& b) {
    if (&a.grid() != &b.grid()) throw ConfigError("fields live on different grids");
}

void certify(const SingularityConfig& cfg, double h, const char* who) {
    if (!cfg.balanced())
        throw ConfigError(std::string(who) + " requires a balanced configuration");
    const AdmissibilityReport cert = admissibility_check(cfg, h);
    if (cert.verdict != "admissible")
        throw ConfigError(std::string(who) + " requires a certified admissible configuration");
}

WenteReport optimal_core(const WentePair& pair, const SingularityConfig& cfg, Exec exec) {
    const ScalarField rhs = jacobian_density(pair.a, pair.b);
    const ScalarField phi = poisson_zero_bc(rhs, exec);
    cplx acc{0.0, 0.0};
    for (const auto& s : cfg.points) {
        cplx v;
        if (!phi.interpolate(s.p, v))
            throw NumericError("singular point fell outside the interpolation stencil");
        acc += static_cast<double>(s.degree) * v;
    }
    WenteReport rep;
    rep.lhs = std::abs(acc);
    rep.rhs = (pair.a.dirichlet_energy(exec) + pair.b.dirichlet_energy(exec)) / (4.0 * kPi);
    rep.margin = rep.rhs - rep.lhs;
    rep.pass = rep.margin >= -1e-9 * rep.rhs;
    return rep;
}

}  // namespace

ScalarField poisson_zero_bc(const ScalarField& rhs, Exec exec, double tol, SolveStats* stats) {
    const auto grid = rhs.grid_ptr();
    const auto& interior = grid->interior_ids();
    const std::size_t ni = interior.size();
    const double h = grid->h();

    Csr a;
    a.n = ni;
    a.rowptr.assign(ni + 1, 0);
    std::vector<cplx> b(ni, cplx{0.0, 0.0});
    for (std::size_t r = 0; r < ni; ++r) {
        const std::uint32_t id = interior[r];
        a.rowptr[r + 1] = a.rowptr[r];
        auto push = [&](std::int32_t col, cplx val) {
            a.col.push_back(col);
            a.val.push_back(val);
            ++a.rowptr[r + 1];
        };
        push(static_cast<std::int32_t>(r), cplx{4.0, 0.0});
        for (int dir = 0; dir < 4; ++dir) {
            const std::int64_t q = grid->neighbor(id, dir);
            const std::int64_t rq = grid->interior_index(static_cast<std::uint32_t>(q));
            if (rq >= 0) push(static_cast<std::int32_t>(rq), cplx{-1.0, 0.0});
            // Ring values are pinned to zero: nothing moves to the rhs.
        }
        b[r] = -h * h * rhs[id];
        // Keep columns ascending for reproducible matvec accumulation.
        const std::int64_t begin = a.rowptr[r], end = a.rowptr[r + 1];
        for (std::int64_t i = begin + 1; i < end; ++i) {
            for (std::int64_t k = i; k > begin && a.col[k - 1] > a.col[k]; --k) {
                std::swap(a.col[k - 1], a.col[k]);
                std::swap(a.val[k - 1], a.val[k]);
            }
        }
    }

    const std::vector<cplx> x = bicgstab(a, b, tol, 50000, exec, stats);
    ScalarField phi(grid);
    for (std::size_t r = 0; r < ni; ++r) phi[interior[r]] = x[r];
    return phi;
}

ScalarField jacobian_density(const ScalarField& a, const ScalarField& b) {
    require_same_grid(a, b);
    ScalarField out(a.grid_ptr());
    CGrad da, db;
    for (std::uint32_t id = 0; id < a.grid().node_count(); ++id) {
        if (!a.gradient(id, da) || !b.gradient(id, db)) continue;
        const double val = da.dy.real() * db.dx.real() - da.dx.real() * db.dy.real();
        out[id] = cplx{val, 0.0};
    }
    return out;
}

ScalarField pairing_density(const ScalarField& u) {
    ScalarField out(u.grid_ptr());
    CGrad du;
    for (std::uint32_t id = 0; id < u.grid().node_count(); ++id) {
        if (!u.gradient(id, du)) continue;
        out[id] = cplx{2.0 * std::imag(du.dx * std::conj(du.dy)), 0.0};
    }
    return out;
}

WentePair sample_wente_pair(std::shared_ptr<const DiscGrid> grid, std::uint64_t seed) {
    constexpr int kTrunc = 16;
    Rng rng(seed);
    std::array<std::array<cplx, kTrunc + 1>, 4> tables;  // a: harm, r^2; b: harm, r^2
    for (auto& table : tables) {
        for (int k = 0; k <= kTrunc; ++k) {
            const double decay = 1.0 / (1.0 + static_cast<double>(k) * k);
            table[k] = cplx{rng.gaussian(), rng.gaussian()} * decay;
        }
    }
    WentePair pair{ScalarField(grid), ScalarField(grid)};
    for (std::uint32_t id = 0; id < grid->node_count(); ++id) {
        const cplx z = grid->position(id);
        const double r2 = std::norm(z);
        cplx pow{1.0, 0.0};
        cplx sa{0.0, 0.0}, sb{0.0, 0.0};
        for (int k = 0; k <= kTrunc; ++k) {
            sa += (tables[0][k] + r2 * tables[1][k]) * pow;
            sb += (tables[2][k] + r2 * tables[3][k]) * pow;
            pow *= z;
        }
        pair.a[id] = cplx{sa.real(), 0.0};
        pair.b[id] = cplx{sb.real(), 0.0};
    }
    return pair;
}

WenteReport check_optimal_wente(const WentePair& pair, const SingularityConfig& cfg, Exec exec) {
    require_same_grid(pair.a, pair.b);
    certify(cfg, pair.a.grid().h(), "the optimal Wente check");
    return optimal_core(pair, cfg, exec);
}

WenteReport check_linf_wente(const ScalarField& u, Exec exec) {
    const ScalarField rhs = pairing_density(u);
    const ScalarField b = poisson_zero_bc(rhs, exec);
    WenteReport rep;
    for (std::uint32_t id = 0; id < u.grid().node_count(); ++id)
        rep.lhs = std::max(rep.lhs, std::abs(b[id]));
    rep.rhs = u.dirichlet_energy(exec) / (2.0 * kPi);
    rep.margin = rep.rhs - rep.lhs;
    rep.pass = rep.margin >= -1e-9 * rep.rhs;
    return rep;
}

std::vector<WenteMarginRow> wente_audit(const SingularityConfig& cfg, double h, int count,
                                        std::uint64_t seed0, Exec exec) {
    if (count < 1) throw ConfigError("audit count must be positive");
    certify(cfg, h, "the Wente audit");
    auto grid = std::make_shared<DiscGrid>(h, cfg);
    std::vector<WenteMarginRow> rows(count);

    const bool parallel = exec == Exec::Parallel;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
    for (int i = 0; i < count; ++i) {
        const std::uint64_t seed = seed0 + static_cast<std::uint64_t>(i);
        const WentePair pair = sample_wente_pair(grid, seed);
        const WenteReport rep = optimal_core(pair, cfg, parallel ? Exec::Serial : exec);
        rows[i] = {seed, rep.lhs, rep.rhs, rep.margin};
    }
    return rows;
}

UniquenessAudit uniqueness_audit(const SingularityConfig& cfg, double h, std::uint64_t seed,
                                 Exec exec) {
    UniquenessAudit audit;
    audit.ts = {0.5, 0.9, 0.99};
    for (std::size_t k = 0; k < audit.ts.size(); ++k) {
        const UniquenessProbe probe =
            uniqueness_probe(cfg, audit.ts[k], h, seed + k, exec);
        if (probe.grad_norm_zero > 1e-9 || probe.grad_norm_perturbed > 1e-9)
            throw UniquenessViolation("nonzero solution escaped the zero-data problem");
        audit.probes.push_back(probe);
    }
    audit.pass = true;
    return audit;
}

}  // namespace hslag
