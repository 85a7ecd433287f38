#include "vianalab/orbit.hpp"

#include <stdexcept>

namespace viana {

OrbitScalars orbit(const MapParams& mp, PhasePoint p0, std::int64_t n) {
    if (n < 1) throw std::invalid_argument("orbit: n must be >= 1");
    OrbitScalars rec;
    rec.start = p0;
    rec.log_inv_norm.reserve(n);
    rec.log_abs_det.reserve(n);
    rec.dist.reserve(n);
    rec.fault = iterate(mp, p0, n, [&](std::int64_t, const PhasePoint& p, const Jacobian& J) {
        rec.log_inv_norm.push_back(J.log_inv_norm());
        rec.log_abs_det.push_back(std::log(std::fabs(J.det())));
        rec.dist.push_back(dist_to_critical(p));
    });
    return rec;
}

}  // namespace viana
