#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "hslag/singularity.hpp"
#include "hslag/types.hpp"

namespace hslag {

// Cell-centered Cartesian sampling of the closed unit disc. Nodes sit at
// ((i+1/2) h, (j+1/2) h), so a singular point on the axes never coincides
// with a node for the usual dyadic resolutions; coincidence is checked and
// rejected anyway. Nodes whose four axis neighbours all lie inside the disc
// are interior unknowns; the remaining nodes form the boundary ring and carry
// interpolated trace values (first order).
class DiscGrid {
  public:
    DiscGrid(double h, const SingularityConfig& cfg);

    double h() const { return h_; }
    const SingularityConfig& config() const { return cfg_; }

    std::size_t node_count() const { return pos_.size(); }
    std::size_t interior_count() const { return interior_.size(); }

    cplx position(std::uint32_t id) const { return pos_[id]; }
    bool is_interior(std::uint32_t id) const { return interior_index_[id] >= 0; }
    bool is_ring(std::uint32_t id) const { return interior_index_[id] < 0; }
    bool is_masked(std::uint32_t id) const { return masked_[id] != 0; }

    // Neighbour in direction dir (0:+x, 1:-x, 2:+y, 3:-y); -1 when absent.
    std::int64_t neighbor(std::uint32_t id, int dir) const;

    const std::vector<std::uint32_t>& interior_ids() const { return interior_; }
    const std::vector<std::uint32_t>& ring_ids() const { return ring_; }
    // Position of id within interior_ids(), or -1.
    std::int64_t interior_index(std::uint32_t id) const { return interior_index_[id]; }

  private:
    double h_;
    int m_;
    SingularityConfig cfg_;
    std::vector<cplx> pos_;
    std::vector<std::int32_t> index_;  // dense (2m)^2 lattice -> node id or -1
    std::vector<std::int64_t> interior_index_;
    std::vector<std::uint8_t> masked_;
    std::vector<std::uint32_t> interior_;
    std::vector<std::uint32_t> ring_;

    std::size_t lattice_slot(int i, int j) const;
    friend class ScalarField;
};

// Complex-valued nodal field over a DiscGrid.
class ScalarField {
  public:
    explicit ScalarField(std::shared_ptr<const DiscGrid> grid)
        : grid_(std::move(grid)), values_(grid_->node_count(), cplx{0.0, 0.0}) {}

    const DiscGrid& grid() const { return *grid_; }
    std::shared_ptr<const DiscGrid> grid_ptr() const { return grid_; }

    cplx& operator[](std::uint32_t id) { return values_[id]; }
    cplx operator[](std::uint32_t id) const { return values_[id]; }
    std::vector<cplx>& values() { return values_; }
    const std::vector<cplx>& values() const { return values_; }

    // Centered-difference gradient; defined only where all 4 neighbours
    // exist (returns false otherwise).
    bool gradient(std::uint32_t id, CGrad& out) const;

    // Bilinear interpolation from the four surrounding nodes; false when a
    // corner is missing.
    bool interpolate(cplx z, cplx& out) const;

    // Edge-based Dirichlet integral: sum over grid edges of |du|^2, which
    // discretizes integral |grad u|^2 dx.
    double dirichlet_energy(Exec exec = Exec::Parallel) const;

  private:
    std::shared_ptr<const DiscGrid> grid_;
    std::vector<cplx> values_;
};

}  // namespace hslag
