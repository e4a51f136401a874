#pragma once

#include <cstddef>
#include <vector>

#include "hslag/types.hpp"

namespace hslag {

// One prescribed conical point: position inside the open unit disc and an
// integer winding degree (+1 or -1 in every construction we support).
struct Singularity {
    cplx p{0.0, 0.0};
    int degree = 1;
};

// Ordered list of conical points. An empty list is legal and describes the
// smooth case (potential identically zero, unit circle map identically one).
struct SingularityConfig {
    std::vector<Singularity> points;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }

    int total_degree() const {
        int s = 0;
        for (const auto& q : points) s += q.degree;
        return s;
    }
    bool balanced() const { return total_degree() == 0; }

    // Throws ConfigError unless every point is strictly inside the disc,
    // every degree is +1 or -1, and no two points coincide.
    void validate() const;

    double min_pairwise_distance() const;
    double min_distance_to(cplx z) const;
};

SingularityConfig one_point(cplx p, int degree);
SingularityConfig two_point(cplx p_plus, cplx p_minus);

}  // namespace hslag
