#pragma once

#include <cstdint>
#include <vector>

#include "hslag/types.hpp"

namespace hslag {

// Compressed sparse row matrix over complex entries.
struct Csr {
    std::size_t n = 0;
    std::vector<std::int64_t> rowptr;
    std::vector<std::int32_t> col;
    std::vector<cplx> val;
};

// Building block kernels. Every kernel has an OpenMP path and a serial
// reference path selected by Exec; both produce bit-identical results
// (reductions are chunked with a fixed chunk size and folded in index order),
// so solver trajectories do not depend on the thread count.
namespace kernels {

constexpr std::size_t kChunk = 4096;

// out = alpha * x + beta * y (out may alias x or y).
void axpby(cplx alpha, const std::vector<cplx>& x, cplx beta, const std::vector<cplx>& y,
           std::vector<cplx>& out, Exec exec);

// Hermitian inner product sum conj(x_i) * y_i.
cplx dot(const std::vector<cplx>& x, const std::vector<cplx>& y, Exec exec);

double norm2(const std::vector<cplx>& x, Exec exec);

void matvec(const Csr& a, const std::vector<cplx>& x, std::vector<cplx>& out, Exec exec);

// Serial reference implementations, kept separate so tests and the benchmark
// can compare the two paths directly.
void axpby_serial(cplx alpha, const std::vector<cplx>& x, cplx beta, const std::vector<cplx>& y,
                  std::vector<cplx>& out);
cplx dot_serial(const std::vector<cplx>& x, const std::vector<cplx>& y);
void matvec_serial(const Csr& a, const std::vector<cplx>& x, std::vector<cplx>& out);

}  // namespace kernels
}  // namespace hslag
