#include "vianalab/map.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "vianalab/rng.hpp"

namespace viana {

namespace {

// F(a) = h^2(0) + q(a), strictly decreasing through the root in (1,2)
double misiurewicz_gap(double a) {
    double q = 0.5 * (-1.0 + std::sqrt(1.0 + 4.0 * a));
    return a - a * a + q;
}

}  // namespace

double MapParams::misiurewicz_a0(double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("misiurewicz_a0: tol must be > 0");
    double lo = 1.0, hi = 2.0;  // F(1) > 0, F(2) = -1 < 0
    for (int i = 0; i < 200 && (hi - lo) > 0.25 * tol; ++i) {
        double mid = 0.5 * (lo + hi);
        if (misiurewicz_gap(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double MapParams::default_beta(double a0, double alpha) {
    double lo = a0 + alpha;
    double hi = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * (a0 - alpha)));
    return 0.5 * (lo + hi);
}

MapParams MapParams::create(int d, double a0, double alpha, double beta) {
    if (d < 2) throw std::invalid_argument("MapParams: d must be >= 2");
    if (!(a0 > 1.0 && a0 < 2.0)) throw std::invalid_argument("MapParams: a0 must be in (1,2)");
    if (!(alpha >= 0.0)) throw std::invalid_argument("MapParams: alpha must be >= 0");
    double upper = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * a0));
    if (!(beta > a0 + alpha && beta < upper))
        throw std::invalid_argument(
            "MapParams: beta must satisfy a0+alpha < beta < (1+sqrt(1+4*a0))/2");
    return MapParams{d, a0, alpha, beta};
}

MapParams MapParams::preset(double alpha, int d) {
    double a0 = misiurewicz_a0();
    return create(d, a0, alpha, default_beta(a0, alpha));
}

MapParams MapParams::unchecked(int d, double a0, double alpha, double beta) {
    return MapParams{d, a0, alpha, beta};
}

std::vector<std::string> MapParams::notes() const {
    std::vector<std::string> out;
    if (d < 16)
        out.push_back("d < 16: two positive exponents are only guaranteed for higher "
                      "smoothness; results remain well-defined");
    if (alpha > 0.05)
        out.push_back("alpha > 0.05: outside the small-coupling presets; the partially "
                      "hyperbolic regime may degrade");
    return out;
}

std::optional<PhasePoint> step_checked(const MapParams& mp, const PhasePoint& p) {
    PhasePoint q = step(mp, p);
    if (std::fabs(q.x) >= mp.beta) return std::nullopt;
    return q;
}

RegionCheck invariant_region_check(const MapParams& mp, std::int64_t n_samples) {
    if (n_samples < 1) throw std::invalid_argument("invariant_region_check: n_samples >= 1");
    RegionCheck rc;
    rc.margin = std::numeric_limits<double>::infinity();
    // the x-image of the fiber over theta is [a(theta)-beta^2, a(theta)]; both
    // extremes are hit on the boundary/critical sections x in {+-beta, 0}
    const double xs[3] = {-mp.beta, 0.0, mp.beta};
    for (std::int64_t i = 0; i < n_samples; ++i) {
        double theta = static_cast<double>(i) / static_cast<double>(n_samples);
        for (double x : xs) {
            double xi = mp.a0 + mp.alpha * morse_b(theta) - x * x;
            double m = mp.beta - std::fabs(xi);
            if (m < rc.margin) {
                rc.margin = m;
                rc.worst_theta = theta;
                rc.worst_x = x;
            }
        }
    }
    rc.ok = rc.margin > 0.0;
    return rc;
}

PowerDistanceReport power_of_distance_check(const MapParams& mp,
                                            const PowerDistanceParams& pd,
                                            std::int64_t n_pairs,
                                            std::uint64_t rng_seed) {
    if (pd.ell <= 0.0) throw std::invalid_argument("power_of_distance_check: ell must be > 0");
    Rng rng(rng_seed);
    PowerDistanceReport rep;
    for (std::int64_t i = 0; i < n_pairs; ++i) {
        PhasePoint p{rng.uniform01(), rng.uniform(-mp.beta, mp.beta)};
        double dc = dist_to_critical(p);
        if (dc == 0.0) continue;
        // q within dist(p,q) < dist(p,C)/2, off the critical line
        double r = 0.499 * dc * rng.uniform01();
        double ang = 2.0 * kPi * rng.uniform01();
        PhasePoint q{wrap_unit(p.theta + r * std::cos(ang)), p.x + r * std::sin(ang)};
        if (q.x == 0.0) continue;

        double dpq = phase_dist(p, q);
        if (dpq == 0.0 || !(2.0 * dpq < dc)) continue;
        double dcl = std::pow(dc, pd.ell);

        Jacobian Jp = jacobian(mp, p);
        Jacobian Jq = jacobian(mp, q);

        // weak-direction norm against dist^ell
        double smin = Jp.smin();
        double b1 = std::max(smin / dcl, dcl / smin);
        // log-Lipschitz constants for log||Df^{-1}|| and log|det Df^{-1}|
        double b2 = std::fabs(Jp.log_inv_norm() - Jq.log_inv_norm()) * dcl / dpq;
        double b3 = std::fabs(std::log(std::fabs(Jp.det())) - std::log(std::fabs(Jq.det()))) *
                    dcl / dpq;

        rep.worst_norm = std::max(rep.worst_norm, b1);
        rep.worst_lip_inv = std::max(rep.worst_lip_inv, b2);
        rep.worst_lip_det = std::max(rep.worst_lip_det, b3);
        if (!std::isfinite(b1) || !std::isfinite(b2) || !std::isfinite(b3))
            rep.all_finite = false;
        if (pd.B > 0.0 && (b1 > pd.B || b2 > pd.B || b3 > pd.B)) ++rep.violations;
        ++rep.pairs_tested;
    }
    return rep;
}

}  // namespace viana
