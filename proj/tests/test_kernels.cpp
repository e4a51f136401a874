#include <doctest.h>

#include <vector>

#include "hslag/kernels.hpp"
#include "hslag/rng.hpp"

using namespace hslag;
using namespace hslag::kernels;

namespace {

std::vector<cplx> random_vector(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<cplx> v(n);
    for (auto& x : v) x = {rng.gaussian(), rng.gaussian()};
    return v;
}

// Pentadiagonal-ish Hermitian test matrix in CSR form.
Csr band_matrix(std::size_t n) {
    Csr a;
    a.n = n;
    a.rowptr.push_back(0);
    for (std::size_t r = 0; r < n; ++r) {
        if (r >= 1) {
            a.col.push_back(static_cast<std::int32_t>(r - 1));
            a.val.push_back(cplx{-1.0, -0.25});
        }
        a.col.push_back(static_cast<std::int32_t>(r));
        a.val.push_back(cplx{4.0, 0.0});
        if (r + 1 < n) {
            a.col.push_back(static_cast<std::int32_t>(r + 1));
            a.val.push_back(cplx{-1.0, 0.25});
        }
        a.rowptr.push_back(static_cast<std::int64_t>(a.col.size()));
    }
    return a;
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("kernels: serial and openmp paths agree bit for bit") {
    // 3 * kChunk + 17 exercises both full chunks and the ragged tail.
    const std::size_t n = 3 * kChunk + 17;
    const auto x = random_vector(n, 11);
    const auto y = random_vector(n, 12);

    std::vector<cplx> out_s, out_p;
    axpby(cplx{0.3, -0.7}, x, cplx{1.1, 0.2}, y, out_s, Exec::Serial);
    axpby(cplx{0.3, -0.7}, x, cplx{1.1, 0.2}, y, out_p, Exec::Parallel);
    CHECK(out_s == out_p);

    CHECK(dot(x, y, Exec::Serial) == dot(x, y, Exec::Parallel));
    CHECK(norm2(x, Exec::Serial) == norm2(x, Exec::Parallel));

    const Csr a = band_matrix(n);
    matvec(a, x, out_s, Exec::Serial);
    matvec(a, x, out_p, Exec::Parallel);
    CHECK(out_s == out_p);
}

TEST_CASE("kernels: dot conjugates the left argument") {
    const std::vector<cplx> x = {{1.0, 1.0}, {0.0, 2.0}};
    const std::vector<cplx> y = {{2.0, 0.0}, {1.0, -1.0}};
    // conj(1+i)*2 + conj(2i)*(1-i) = (2-2i) + (-2-2i) = -4i.
    const cplx d = dot(x, y, Exec::Serial);
    CHECK(std::abs(d - cplx{0.0, -4.0}) < 1e-15);
    CHECK(norm2(x, Exec::Serial) == doctest::Approx(std::sqrt(6.0)).epsilon(1e-15));
}

TEST_CASE("kernels: matvec against a hand-evaluated stencil") {
    Csr a;
    a.n = 2;
    a.rowptr = {0, 2, 4};
    a.col = {0, 1, 0, 1};
    a.val = {{2.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}, {1.0, 0.0}};
    const std::vector<cplx> x = {{1.0, 0.0}, {1.0, 1.0}};
    std::vector<cplx> out;
    matvec(a, x, out, Exec::Parallel);
    CHECK(std::abs(out[0] - cplx{1.0, 1.0}) < 1e-15);
    CHECK(std::abs(out[1] - cplx{1.0, 0.0}) < 1e-15);
}

TEST_CASE("kernels: axpby may alias its output") {
    auto x = random_vector(257, 5);
    const auto y = random_vector(257, 6);
    std::vector<cplx> expect;
    axpby(cplx{2.0, 0.0}, x, cplx{0.0, 1.0}, y, expect, Exec::Serial);
    axpby(cplx{2.0, 0.0}, x, cplx{0.0, 1.0}, y, x, Exec::Parallel);
    CHECK(x == expect);
}

}  // TEST_SUITE
