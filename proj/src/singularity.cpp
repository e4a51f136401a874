#include "hslag/singularity.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "hslag/errors.hpp"

namespace hslag {

void SingularityConfig::validate() const {
    for (std::size_t l = 0; l < points.size(); ++l) {
        const auto& q = points[l];
        if (!(std::abs(q.p) < 1.0)) {
            throw ConfigError("singularities[" + std::to_string(l) +
                              "]: point must lie strictly inside the unit disc");
        }
        if (q.degree != 1 && q.degree != -1) {
            throw ConfigError("singularities[" + std::to_string(l) +
                              "].degree: only +1 and -1 are supported");
        }
        for (std::size_t m = 0; m < l; ++m) {
            if (std::abs(points[m].p - q.p) < 1e-14) {
                throw ConfigError("singularities[" + std::to_string(l) +
                                  "]: coincides with singularities[" + std::to_string(m) + "]");
            }
        }
    }
}

double SingularityConfig::min_pairwise_distance() const {
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < points.size(); ++l)
        for (std::size_t m = l + 1; m < points.size(); ++m)
            d = std::min(d, std::abs(points[l].p - points[m].p));
    return d;
}

double SingularityConfig::min_distance_to(cplx z) const {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& q : points) d = std::min(d, std::abs(z - q.p));
    return d;
}

SingularityConfig one_point(cplx p, int degree) { return {{{p, degree}}}; }

SingularityConfig two_point(cplx p_plus, cplx p_minus) {
    return {{{p_plus, +1}, {p_minus, -1}}};
}

}  // namespace hslag
