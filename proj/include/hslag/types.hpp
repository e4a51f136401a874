#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace hslag {

using cplx = std::complex<double>;

// 2-vector in the plane; doubles as the real/imag parts of a point z = x + iy.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline cplx to_cplx(Vec2 v) { return {v.x, v.y}; }
inline Vec2 to_vec(cplx z) { return {z.real(), z.imag()}; }

// Gradient of a complex-valued function: the pair (d/dx, d/dy), each complex.
struct CGrad {
    cplx dx{0.0, 0.0};
    cplx dy{0.0, 0.0};
};

// Execution policy for kernels: a serial reference path is kept alongside the
// OpenMP path so the two can be compared bit-for-bit in tests and benchmarks.
enum class Exec : std::uint8_t { Serial, Parallel };

}  // namespace hslag
