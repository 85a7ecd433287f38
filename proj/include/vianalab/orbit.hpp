#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "vianalab/map.hpp"

namespace viana {

struct OrbitFault {
    std::int64_t step_index = -1;
    PhasePoint point;
    std::string what;
};

// Per-step scalars along an orbit p_0, ..., p_{n-1}: at each point, the log
// inverse-derivative norm u_j = log||Df(p_j)^{-1}||, log|det Df(p_j)| and the
// distance to the critical line. Points themselves are not retained.
struct OrbitScalars {
    PhasePoint start;
    std::vector<double> log_inv_norm;  // u_j
    std::vector<double> log_abs_det;
    std::vector<double> dist;          // dist(p_j, C) = |x_j|
    std::optional<OrbitFault> fault;

    std::int64_t size() const { return static_cast<std::int64_t>(dist.size()); }
};

// Streaming iteration: calls visit(j, p_j, J_j) for j = 0..n-1 and advances.
// Returns the fault on strip escape (visit is not called for the escaped
// point), nothing otherwise.
template <class Visitor>
std::optional<OrbitFault> iterate(const MapParams& mp, PhasePoint p, std::int64_t n,
                                  Visitor&& visit) {
    for (std::int64_t j = 0; j < n; ++j) {
        if (!(std::fabs(p.x) <= mp.beta) || !std::isfinite(p.x) || !std::isfinite(p.theta))
            return OrbitFault{j, p, "orbit left the invariant strip"};
        visit(j, p, jacobian(mp, p));
        p = step(mp, p);
    }
    return std::nullopt;
}

OrbitScalars orbit(const MapParams& mp, PhasePoint p0, std::int64_t n);

}  // namespace viana
