// Side-by-side timings of the serial reference kernels and the OpenMP path,
// on raw vectors and on a full pinned solve. The two paths must agree bit for
// bit; the last column reports the worst discrepancy actually observed.
#include <omp.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <vector>

#include "hslag/boundary.hpp"
#include "hslag/greens.hpp"
#include "hslag/grid.hpp"
#include "hslag/kernels.hpp"
#include "hslag/rng.hpp"
#include "hslag/singularity.hpp"
#include "hslag/solver.hpp"

using namespace hslag;
using namespace hslag::kernels;

namespace {

template <class F>
double time_loop(int reps, F&& f) {
    const double t0 = omp_get_wtime();
    for (int r = 0; r < reps; ++r) f();
    return (omp_get_wtime() - t0) / reps;
}

double max_gap(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

void row(const char* name, std::size_t n, double ts, double tp, double gap) {
    std::printf("%-10s %10zu %12.6f %12.6f %8.2fx %10.3g\n", name, n, ts * 1e3, tp * 1e3,
                ts / tp, gap);
}

}  // namespace

int main(int argc, char** argv) {
    int inv_h = 128;
    int reps = 50;
    if (argc > 1) inv_h = std::atoi(argv[1]);
    if (argc > 2) reps = std::atoi(argv[2]);
    if (inv_h < 8 || reps < 1) {
        std::fprintf(stderr, "usage: %s [inverse-spacing >= 8] [reps >= 1]\n", argv[0]);
        return 2;
    }

    const SingularityConfig cfg = two_point(cplx{0.5, 0.0}, cplx{-0.5, 0.0});
    auto grid = std::make_shared<DiscGrid>(1.0 / inv_h, cfg);
    const GreenField green(cfg);
    const ElSystem sys = assemble_el_system(grid, green, BoundaryTrace::monomial(1), 0.9);
    const std::size_t n = grid->interior_count();

    Rng rng(7);
    std::vector<cplx> x(n), y(n), out_s(n), out_p(n);
    for (auto& v : x) v = {rng.gaussian(), rng.gaussian()};
    for (auto& v : y) v = {rng.gaussian(), rng.gaussian()};

    std::printf("threads: %d, h = 1/%d, interior nodes: %zu, reps: %d\n", omp_get_max_threads(),
                inv_h, n, reps);
    std::printf("%-10s %10s %12s %12s %9s %10s\n", "kernel", "size", "serial ms", "openmp ms",
                "speedup", "max gap");

    const cplx a{0.3, -0.1}, b{1.1, 0.2};
    double ts = time_loop(reps, [&] { axpby(a, x, b, y, out_s, Exec::Serial); });
    double tp = time_loop(reps, [&] { axpby(a, x, b, y, out_p, Exec::Parallel); });
    row("axpby", n, ts, tp, max_gap(out_s, out_p));

    cplx dot_s{}, dot_p{};
    ts = time_loop(reps, [&] { dot_s = dot(x, y, Exec::Serial); });
    tp = time_loop(reps, [&] { dot_p = dot(x, y, Exec::Parallel); });
    row("dot", n, ts, tp, std::abs(dot_s - dot_p));

    double n_s = 0.0, n_p = 0.0;
    ts = time_loop(reps, [&] { n_s = norm2(x, Exec::Serial); });
    tp = time_loop(reps, [&] { n_p = norm2(x, Exec::Parallel); });
    row("norm2", n, ts, tp, std::abs(n_s - n_p));

    ts = time_loop(reps, [&] { matvec(sys.a, x, out_s, Exec::Serial); });
    tp = time_loop(reps, [&] { matvec(sys.a, x, out_p, Exec::Parallel); });
    row("matvec", sys.a.val.size(), ts, tp, max_gap(out_s, out_p));

    SolveStats st_s, st_p;
    ScalarField u_s(grid), u_p(grid);
    ts = time_loop(1, [&] { u_s = solve_el(sys, Exec::Serial, 1e-10, 50000, &st_s); });
    tp = time_loop(1, [&] { u_p = solve_el(sys, Exec::Parallel, 1e-10, 50000, &st_p); });
    double gap = 0.0;
    for (std::uint32_t id = 0; id < grid->node_count(); ++id)
        gap = std::max(gap, std::abs(u_s[id] - u_p[id]));
    row("solve_el", st_p.iterations, ts, tp, gap);
    if (gap != 0.0) {
        std::fprintf(stderr, "serial and openmp solves disagree (max gap %.3g)\n", gap);
        return 1;
    }
    return 0;
}
