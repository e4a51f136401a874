#include "hslag/kernels.hpp"

#include <cmath>
#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hslag::kernels {

namespace {

// Chunked reduction: per-chunk partial sums are computed independently (in
// parallel or serially) and folded in chunk order, so the rounding pattern is
// independent of the schedule.
template <typename Body>
cplx chunked_sum(std::size_t n, Exec exec, const Body& body) {
    const std::size_t chunks = (n + kChunk - 1) / kChunk;
    std::vector<cplx> partial(chunks, cplx{0.0, 0.0});
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(chunks); ++c) {
            cplx acc{0.0, 0.0};
            const std::size_t lo = static_cast<std::size_t>(c) * kChunk;
            const std::size_t hi = std::min(n, lo + kChunk);
            for (std::size_t i = lo; i < hi; ++i) acc += body(i);
            partial[static_cast<std::size_t>(c)] = acc;
        }
    } else {
        for (std::size_t c = 0; c < chunks; ++c) {
            cplx acc{0.0, 0.0};
            const std::size_t lo = c * kChunk;
            const std::size_t hi = std::min(n, lo + kChunk);
            for (std::size_t i = lo; i < hi; ++i) acc += body(i);
            partial[c] = acc;
        }
    }
    cplx total{0.0, 0.0};
    for (const auto& p : partial) total += p;
    return total;
}

}  // namespace

void axpby(cplx alpha, const std::vector<cplx>& x, cplx beta, const std::vector<cplx>& y,
           std::vector<cplx>& out, Exec exec) {
    const std::size_t n = x.size();
    out.resize(n);
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
            out[i] = alpha * x[i] + beta * y[i];
        }
    } else {
        axpby_serial(alpha, x, beta, y, out);
    }
}

void axpby_serial(cplx alpha, const std::vector<cplx>& x, cplx beta, const std::vector<cplx>& y,
                  std::vector<cplx>& out) {
    const std::size_t n = x.size();
    out.resize(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = alpha * x[i] + beta * y[i];
}

cplx dot(const std::vector<cplx>& x, const std::vector<cplx>& y, Exec exec) {
    return chunked_sum(x.size(), exec, [&](std::size_t i) { return std::conj(x[i]) * y[i]; });
}

cplx dot_serial(const std::vector<cplx>& x, const std::vector<cplx>& y) {
    return dot(x, y, Exec::Serial);
}

double norm2(const std::vector<cplx>& x, Exec exec) {
    return std::sqrt(dot(x, x, exec).real());
}

void matvec(const Csr& a, const std::vector<cplx>& x, std::vector<cplx>& out, Exec exec) {
    out.resize(a.n);
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(a.n); ++r) {
            cplx acc{0.0, 0.0};
            for (std::int64_t k = a.rowptr[r]; k < a.rowptr[r + 1]; ++k) {
                acc += a.val[k] * x[a.col[k]];
            }
            out[r] = acc;
        }
    } else {
        matvec_serial(a, x, out);
    }
}

void matvec_serial(const Csr& a, const std::vector<cplx>& x, std::vector<cplx>& out) {
    out.resize(a.n);
    for (std::size_t r = 0; r < a.n; ++r) {
        cplx acc{0.0, 0.0};
        for (std::int64_t k = a.rowptr[r]; k < a.rowptr[r + 1]; ++k) {
            acc += a.val[k] * x[a.col[k]];
        }
        out[r] = acc;
    }
}

}  // namespace hslag::kernels
