#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "hslag/errors.hpp"
#include "hslag/greens.hpp"
#include "hslag/grid.hpp"
#include "hslag/immersion.hpp"
#include "hslag/io.hpp"
#include "hslag/kernels.hpp"
#include "hslag/solver.hpp"
#include "hslag/spectral.hpp"
#include "hslag/variational.hpp"
#include "hslag/verify.hpp"

namespace {

using namespace hslag;

std::string join(const std::string& dir, const char* name) {
    return (std::filesystem::path(dir) / name).string();
}

// Interior rows of A u - rhs, rescaled by 1/h^2 to the PDE defect.
ResidualReport discrete_residual(const ElSystem& sys, const ScalarField& u, Exec exec) {
    const auto& ids = sys.grid->interior_ids();
    std::vector<cplx> x(ids.size());
    for (std::size_t k = 0; k < ids.size(); ++k) x[k] = u[ids[k]];
    std::vector<cplx> r(ids.size());
    kernels::matvec(sys.a, x, r, exec);
    const double h = sys.grid->h();
    ResidualReport rep;
    rep.channel = "discrete-equation";
    rep.h = h;
    double sum2 = 0.0;
    for (std::size_t k = 0; k < ids.size(); ++k) {
        const double d = std::abs(r[k] - sys.rhs[k]) / (h * h);
        rep.max = std::max(rep.max, d);
        sum2 += d * d;
    }
    rep.l2 = std::sqrt(h * h * sum2);
    return rep;
}

// Pointwise defect of the closed-form solution at the unmasked nodes.
ResidualReport spectral_residual(const ConjugatedSolution& sol, const GreenField& green,
                                 double t, const DiscGrid& grid) {
    ResidualReport rep;
    rep.channel = "equation";
    rep.h = grid.h();
    double sum2 = 0.0;
    for (std::uint32_t id = 0; id < grid.node_count(); ++id) {
        if (grid.is_masked(id)) continue;
        const cplx z = grid.position(id);
        const CGrad du = sol.gradient(z);
        const Vec2 pg = green.perp_gradient(z);
        const double d =
            std::abs(sol.laplacian(z) + cplx{0.0, t} * (pg.x * du.dx + pg.y * du.dy));
        rep.max = std::max(rep.max, d);
        sum2 += d * d;
    }
    rep.l2 = std::sqrt(grid.h() * grid.h() * sum2);
    return rep;
}

struct SolveOpts {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    double resolution = 0.0;
    std::string backend = "grid";
    bool dry_run = false;
    bool ply = false;
    bool ascii = false;
    bool out_given = false, seed_given = false, res_given = false;
};

void apply_overrides(RunConfig& rc, const SolveOpts& o) {
    if (o.out_given) rc.out_dir = o.out_dir;
    if (o.seed_given) rc.seed = o.seed;
    if (o.res_given) {
        if (!(o.resolution > 0.0 && o.resolution <= 0.25))
            throw ConfigError("--resolution must lie in (0, 0.25]");
        rc.h = o.resolution;
    }
}

int cmd_solve(const SolveOpts& o, Exec exec) {
    RunConfig rc = load_run_config(o.config_path);
    apply_overrides(rc, o);
    if (rc.schedule.empty()) throw ConfigError("the schedule is empty; nothing to solve");
    const double t = rc.schedule.back();
    if (!(t >= 0.0 && t <= 1.0))
        throw ConfigError("the final schedule entry must lie in [0, 1]");
    const bool spectral = o.backend == "spectral";
    if (spectral && rc.singularities.size() != 1)
        throw ConfigError("the spectral backend handles a single singularity");
    if (o.ply && t != 1.0)
        throw ConfigError("surface export needs the final schedule entry at t = 1");

    std::printf("solve: %zu singular point(s), t = %.6g, h = %.6g, backend = %s\n",
                rc.singularities.size(), t, rc.h, o.backend.c_str());
    std::vector<std::string> outputs = {join(rc.out_dir, "field.bin"),
                                        join(rc.out_dir, "field.json"),
                                        join(rc.out_dir, "energy.csv"),
                                        join(rc.out_dir, "residuals.json")};
    if (o.ply) outputs.push_back(join(rc.out_dir, "surface.ply"));
    if (o.dry_run) {
        std::string names;
        for (const auto& p : outputs) names += " " + p;
        std::printf("  would write%s\n  dry run, nothing written\n", names.c_str());
        return 0;
    }

    auto grid = std::make_shared<DiscGrid>(rc.h, rc.singularities);
    const GreenField green(rc.singularities);
    const SOneMap g(rc.singularities);

    ScalarField u(grid);
    EnergyRow row;
    row.t = t;
    std::vector<ResidualReport> reports;
    if (spectral) {
        const ConjugatedSolution sol = spectral_solution(rc.singularities, rc.boundary, t);
        for (std::uint32_t id = 0; id < grid->node_count(); ++id)
            u[id] = sol.value(grid->position(id));
        row.dirichlet = 0.5 * sol.base().dirichlet_energy();
        row.coupling = 0.5 * sol.base().coupling_integral();
        reports.push_back(spectral_residual(sol, green, t, *grid));
    } else {
        const ElSystem sys = assemble_el_system(grid, green, rc.boundary, t);
        u = solve_el(sys, exec);
        const QuadraticSplit split = quadratic_split(sys, u);
        row.dirichlet = split.dirichlet;
        row.coupling = split.coupling;
        reports.push_back(discrete_residual(sys, u, exec));
    }
    row.total = row.dirichlet + t * row.coupling;
    row.l2inf = l2inf_quasinorm(u);

    // The conjugating map is single-valued only at t = 1, so the immersion
    // and its diagnostics exist only there.
    if (t == 1.0) {
        const ConjugateResult conj = harmonic_conjugate(u, g);
        const ImmersionField imm = assemble_immersion(u, conj, g);
        reports.push_back(imm.report(ImmersionField::Channel::Conformality));
        reports.push_back(imm.report(ImmersionField::Channel::Orthogonality));
        reports.push_back(imm.report(ImmersionField::Channel::Lagrangian));
        reports.push_back(imm.report(ImmersionField::Channel::UnitAngle));
        const StationaryReport st = verify_hamiltonian_stationary(imm, rc.singularities);
        reports.push_back(st.div_phi);
        reports.push_back(st.div_angle);
        reports.push_back(st.neumann);
        if (o.ply) write_ply(outputs[4], triangulate(imm), o.ascii);
    }

    atomic_write_bytes(outputs[0], field_bytes(u));
    atomic_write_text(outputs[1], field_sidecar_json(u));
    atomic_write_text(outputs[2], energy_csv({row}));
    atomic_write_text(outputs[3], residual_json(reports));

    std::printf("  dirichlet %.6g, coupling %.6g, total %.6g\n", row.dirichlet, row.coupling,
                row.total);
    std::string names;
    for (const auto& p : outputs) names += " " + p;
    std::printf("  wrote%s\n", names.c_str());
    return 0;
}

int cmd_sweep(const SolveOpts& o, Exec exec) {
    RunConfig rc = load_run_config(o.config_path);
    apply_overrides(rc, o);
    const SweepBackend backend =
        o.backend == "spectral" ? SweepBackend::Spectral : SweepBackend::Grid;
    const SweepResult sweep =
        t_sweep(rc.singularities, rc.boundary, rc.schedule, rc.h, backend, exec);
    std::printf("sweep: %zu steps, backend = %s, h = %.6g\n", sweep.rows.size(),
                o.backend.c_str(), rc.h);
    std::printf("  slope %.4f, theta_hat %.6g\n", sweep.fit.slope, sweep.fit.theta_hat);
    const std::string csv = join(rc.out_dir, "sweep.csv");
    const std::string fit = join(rc.out_dir, "fit.json");
    atomic_write_text(csv, energy_csv(sweep.rows));
    atomic_write_text(fit, fit_json(sweep));
    std::printf("  wrote %s %s\n", csv.c_str(), fit.c_str());
    return 0;
}

struct ConeOpts {
    int p = 1;
    int q = 1;
    double resolution = 1.0 / 64;
    std::string out_dir = "out";
    bool ascii = false;
};

int cmd_cone(const ConeOpts& o) {
    const ConeDescriptor desc{o.p, o.q};
    const double h = o.resolution;
    if (!(h > 0.0 && h <= 0.25)) throw ConfigError("--resolution must lie in (0, 0.25]");

    // Mask config keeps apex-adjacent stencils out of the residual scan.
    auto grid = std::make_shared<DiscGrid>(h, one_point(cplx{0.0, 0.0}, +1));
    const ImmersionField imm = sw_cone(desc, grid);
    const double s = std::sqrt(static_cast<double>(desc.p) * desc.q);
    double factor_err = 0.0, angle_err = 0.0;
    for (std::uint32_t id = 0; id < grid->node_count(); ++id) {
        if (!imm.defined(id) || grid->is_masked(id)) continue;
        const cplx z = grid->position(id);
        const double ref = desc.p * desc.q * std::pow(std::abs(z), 2.0 * s - 2.0);
        factor_err = std::max(factor_err, std::abs(imm.conformal_factor(id) - ref));
        const cplx aref = std::polar(1.0, (desc.p - desc.q) * std::atan2(z.imag(), z.real()));
        angle_err = std::max(angle_err, std::abs(imm.angle(id) - aref));
    }
    const ResidualReport structure = cone_structure_residual(imm, desc, 0.1, 0.95);

    const int rings = std::max(4, static_cast<int>(std::lround(0.5 / h)));
    const MeshData mesh = cone_fan_mesh(desc, rings, 4 * rings);

    nlohmann::json doc;
    doc["p"] = desc.p;
    doc["q"] = desc.q;
    doc["maslov_degree"] = desc.p - desc.q;
    doc["h"] = h;
    doc["conformal_factor_error"] = factor_err;
    doc["angle_error"] = angle_err;
    doc["structure_residual"] = {{"max", structure.max}, {"l2", structure.l2}};

    const std::string ply = join(o.out_dir, "cone.ply");
    const std::string json_path = join(o.out_dir, "cone.json");
    write_ply(ply, mesh, o.ascii);
    atomic_write_text(json_path, doc.dump(2) + "\n");

    std::printf("cone (%d,%d): maslov degree %d, h = %.6g\n", desc.p, desc.q, desc.p - desc.q, h);
    std::printf("  conformal factor error %.3g, angle error %.3g, structure residual %.3g\n",
                factor_err, angle_err, structure.max);
    std::printf("  wrote %s %s\n", ply.c_str(), json_path.c_str());
    return 0;
}

struct VerifyOpts {
    std::string suite = "all";
    std::string out_dir = "out";
    std::uint64_t seed = 1;
};

int cmd_verify(const VerifyOpts& o, Exec exec) {
    (void)suite_criteria(o.suite);  // unknown suite -> ConfigError before any work
    std::printf("verify suite '%s' (seed %llu)\n", o.suite.c_str(),
                static_cast<unsigned long long>(o.seed));
    const std::vector<CheckResult> checks = run_suite(o.suite, o.seed, exec);
    int passed = 0;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& c : checks) {
        if (c.pass) ++passed;
        std::printf("[%s] %2d %-20s %8.2f s  %s\n", c.pass ? "PASS" : "FAIL", c.index,
                    c.name.c_str(), c.seconds, c.detail.c_str());
        rows.push_back({{"index", c.index},
                        {"name", c.name},
                        {"pass", c.pass},
                        {"seconds", c.seconds},
                        {"detail", c.detail}});
    }
    const bool all_pass = passed == static_cast<int>(checks.size());
    nlohmann::json doc;
    doc["suite"] = o.suite;
    doc["seed"] = o.seed;
    doc["pass"] = all_pass;
    doc["checks"] = rows;
    const std::string path = join(o.out_dir, "verify.json");
    atomic_write_text(path, doc.dump(2) + "\n");
    std::printf("%d/%zu passed\nwrote %s\n", passed, checks.size(), path.c_str());
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hamiltonian stationary Lagrangian discs: solve, continue, verify"};
    app.require_subcommand(1);
    bool serial = false;
    app.add_flag("--serial", serial, "run every kernel on the serial reference path");

    SolveOpts so;
    CLI::App* solve = app.add_subcommand(
        "solve", "solve at the last schedule entry and export the field");
    solve->add_option("--config", so.config_path, "run description (JSON)")->required();
    CLI::Option* so_out = solve->add_option("--out", so.out_dir, "output directory override");
    CLI::Option* so_seed = solve->add_option("--seed", so.seed, "seed override");
    CLI::Option* so_res = solve->add_option("--resolution", so.resolution, "grid spacing override");
    solve->add_option("--backend", so.backend, "grid|spectral (default grid)")
        ->check(CLI::IsMember({"grid", "spectral"}));
    solve->add_flag("--dry-run", so.dry_run, "validate and print the plan without writing");
    solve->add_flag("--ply", so.ply, "export the immersed surface (needs t = 1)");
    solve->add_flag("--ascii", so.ascii, "ascii PLY body");

    SolveOpts wo;
    CLI::App* sweep = app.add_subcommand("sweep", "continuation along the schedule");
    sweep->add_option("--config", wo.config_path, "run description (JSON)")->required();
    CLI::Option* wo_out = sweep->add_option("--out", wo.out_dir, "output directory override");
    CLI::Option* wo_res = sweep->add_option("--resolution", wo.resolution, "grid spacing override");
    sweep->add_option("--backend", wo.backend, "grid|spectral (default grid)")
        ->check(CLI::IsMember({"grid", "spectral"}));

    ConeOpts co;
    CLI::App* cone = app.add_subcommand("cone", "sample and export a Schoen-Wolfson cone");
    cone->add_option("p", co.p, "first cone exponent")->required();
    cone->add_option("q", co.q, "second cone exponent")->required();
    cone->add_option("--resolution", co.resolution, "sampling grid spacing");
    cone->add_option("--out", co.out_dir, "output directory");
    cone->add_flag("--ascii", co.ascii, "ascii PLY body");

    VerifyOpts vo;
    CLI::App* verify = app.add_subcommand("verify", "run an acceptance suite");
    verify->add_option("suite", vo.suite, "all|blowup|rank|cones|wente|uniqueness");
    verify->add_option("--out", vo.out_dir, "output directory");
    verify->add_option("--seed", vo.seed, "audit seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    const hslag::Exec exec = serial ? hslag::Exec::Serial : hslag::Exec::Parallel;
    so.out_given = so_out->count() > 0;
    so.seed_given = so_seed->count() > 0;
    so.res_given = so_res->count() > 0;
    wo.out_given = wo_out->count() > 0;
    wo.res_given = wo_res->count() > 0;

    try {
        if (solve->parsed()) return cmd_solve(so, exec);
        if (sweep->parsed()) return cmd_sweep(wo, exec);
        if (cone->parsed()) return cmd_cone(co);
        return cmd_verify(vo, exec);
    } catch (const hslag::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const hslag::NumericError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
