#include "hslag/grid.hpp"

#include <cmath>
#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "hslag/errors.hpp"
#include "hslag/kernels.hpp"

namespace hslag {

DiscGrid::DiscGrid(double h, const SingularityConfig& cfg) : h_(h), cfg_(cfg) {
    if (!(h > 0.0) || h > 0.25) throw ConfigError("grid spacing must lie in (0, 0.25]");
    cfg_.validate();
    m_ = static_cast<int>(std::lround(std::ceil(1.0 / h)));
    const int side = 2 * m_;
    index_.assign(static_cast<std::size_t>(side) * side, -1);

    for (int j = -m_; j < m_; ++j) {
        for (int i = -m_; i < m_; ++i) {
            const cplx z{(i + 0.5) * h_, (j + 0.5) * h_};
            if (std::abs(z) >= 1.0) continue;
            const auto id = static_cast<std::int32_t>(pos_.size());
            index_[lattice_slot(i, j)] = id;
            pos_.push_back(z);
        }
    }

    interior_index_.assign(pos_.size(), -1);
    masked_.assign(pos_.size(), 0);
    for (std::uint32_t id = 0; id < pos_.size(); ++id) {
        const cplx z = pos_[id];
        const double dist = cfg_.min_distance_to(z);
        if (dist < 1e-9) {
            throw SingularityOnNode("a singular point coincides with a grid node; nudge h");
        }
        if (dist < 2.0 * h_) masked_[id] = 1;
        bool interior = true;
        for (int dir = 0; dir < 4; ++dir) {
            if (neighbor(id, dir) < 0) interior = false;
        }
        if (interior) {
            interior_index_[id] = static_cast<std::int64_t>(interior_.size());
            interior_.push_back(id);
        } else {
            ring_.push_back(id);
        }
    }
}

std::size_t DiscGrid::lattice_slot(int i, int j) const {
    return static_cast<std::size_t>(j + m_) * (2 * m_) + static_cast<std::size_t>(i + m_);
}

std::int64_t DiscGrid::neighbor(std::uint32_t id, int dir) const {
    const cplx z = pos_[id];
    int i = static_cast<int>(std::lround(z.real() / h_ - 0.5));
    int j = static_cast<int>(std::lround(z.imag() / h_ - 0.5));
    switch (dir) {
        case 0: ++i; break;
        case 1: --i; break;
        case 2: ++j; break;
        default: --j; break;
    }
    if (i < -m_ || i >= m_ || j < -m_ || j >= m_) return -1;
    return index_[lattice_slot(i, j)];
}

bool ScalarField::gradient(std::uint32_t id, CGrad& out) const {
    const auto e = grid_->neighbor(id, 0);
    const auto w = grid_->neighbor(id, 1);
    const auto n = grid_->neighbor(id, 2);
    const auto s = grid_->neighbor(id, 3);
    if (e < 0 || w < 0 || n < 0 || s < 0) return false;
    const double inv2h = 0.5 / grid_->h();
    out.dx = (values_[e] - values_[w]) * inv2h;
    out.dy = (values_[n] - values_[s]) * inv2h;
    return true;
}

bool ScalarField::interpolate(cplx z, cplx& out) const {
    const double h = grid_->h();
    const double gx = z.real() / h - 0.5;
    const double gy = z.imag() / h - 0.5;
    const int i0 = static_cast<int>(std::floor(gx));
    const int j0 = static_cast<int>(std::floor(gy));
    const double fx = gx - i0;
    const double fy = gy - j0;
    cplx corner[4];
    const int offs[4][2] = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
    for (int c = 0; c < 4; ++c) {
        const int i = i0 + offs[c][0];
        const int j = j0 + offs[c][1];
        if (i < -grid_->m_ || i >= grid_->m_ || j < -grid_->m_ || j >= grid_->m_) return false;
        const auto id = grid_->index_[grid_->lattice_slot(i, j)];
        if (id < 0) return false;
        corner[c] = values_[id];
    }
    out = corner[0] * (1 - fx) * (1 - fy) + corner[1] * fx * (1 - fy) +
          corner[2] * (1 - fx) * fy + corner[3] * fx * fy;
    return true;
}

double ScalarField::dirichlet_energy(Exec exec) const {
    const std::size_t n = grid_->node_count();
    const std::size_t chunks = (n + kernels::kChunk - 1) / kernels::kChunk;
    std::vector<double> partial(chunks, 0.0);
    const auto body = [&](std::size_t lo, std::size_t hi) {
        double acc = 0.0;
        for (std::size_t id = lo; id < hi; ++id) {
            // Each node owns its +x and +y edges; every grid edge is counted
            // exactly once.
            const auto e = grid_->neighbor(static_cast<std::uint32_t>(id), 0);
            const auto nn = grid_->neighbor(static_cast<std::uint32_t>(id), 2);
            if (e >= 0) acc += std::norm(values_[e] - values_[id]);
            if (nn >= 0) acc += std::norm(values_[nn] - values_[id]);
        }
        return acc;
    };
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(chunks); ++c) {
            const std::size_t lo = static_cast<std::size_t>(c) * kernels::kChunk;
            partial[static_cast<std::size_t>(c)] = body(lo, std::min(n, lo + kernels::kChunk));
        }
    } else {
        for (std::size_t c = 0; c < chunks; ++c) {
            const std::size_t lo = c * kernels::kChunk;
            partial[c] = body(lo, std::min(n, lo + kernels::kChunk));
        }
    }
    double total = 0.0;
    for (const double p : partial) total += p;
    return total;
}

}  // namespace hslag
