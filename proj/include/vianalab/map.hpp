#pragma once

// Skew products over the expanding circle map coupled to a quadratic family:
//
//   f(theta, x) = (d*theta mod 1, a0 + alpha*b(theta) - x^2),  b = sin(2*pi*theta)
//
// acting on the forward-invariant strip S^1 x [-beta, beta]. The derivative is
// lower triangular and singular exactly on the critical line x = 0.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace viana {

inline constexpr double kPi = 3.14159265358979323846;

struct PhasePoint {
    double theta = 0.0;  // in [0,1)
    double x = 0.0;
};

inline double wrap_unit(double t) {
    t -= std::floor(t);
    return t < 1.0 ? t : 0.0;  // guard against floor(t) == t - 1 rounding
}

// distance on the circle, in [0, 1/2]
inline double circle_dist(double a, double b) {
    double d = std::fabs(a - b);
    return d <= 0.5 ? d : 1.0 - d;
}

inline double phase_dist(const PhasePoint& p, const PhasePoint& q) {
    double dt = circle_dist(p.theta, q.theta);
    double dx = p.x - q.x;
    return std::sqrt(dt * dt + dx * dx);
}

// 2x2 derivative [[d, 0], [alpha*b'(theta), -2x]].
struct Jacobian {
    double m00 = 0.0, m01 = 0.0, m10 = 0.0, m11 = 0.0;

    double det() const { return m00 * m11 - m01 * m10; }

    // closed-form singular values; smin computed through |det|/smax to avoid
    // cancellation near the critical line
    double smax() const {
        double t = m00 * m00 + m01 * m01 + m10 * m10 + m11 * m11;
        double dd = det();
        double disc = t * t - 4.0 * dd * dd;
        if (disc < 0.0) disc = 0.0;
        return std::sqrt(0.5 * (t + std::sqrt(disc)));
    }
    double smin() const {
        double sx = smax();
        return sx > 0.0 ? std::fabs(det()) / sx : 0.0;
    }
    // log ||Df^{-1}|| = -log smin; +inf on the critical set
    double log_inv_norm() const {
        double s = smin();
        return -std::log(s);
    }
};

struct MapParams {
    int d = 16;          // integer circle expansion factor, >= 2
    double a0 = 0.0;     // quadratic parameter, in (1,2)
    double alpha = 0.0;  // coupling strength, >= 0
    double beta = 0.0;   // half-width of the invariant interval I = [-beta, beta]

    // Parameter with 0 pre-periodic for h(x) = a - x^2: the root of
    // a^3 - 2a^2 + 2a - 2 in (1,2), located by bisection on
    // F(a) = h^2(0) + q with q the positive fixed point of h.
    static double misiurewicz_a0(double tol = 1e-12);

    // Feasible beta interval is (a0+alpha, r) with r the positive root of
    // beta^2 - beta - (a0-alpha) = 0; the default is its midpoint.
    static double default_beta(double a0, double alpha);

    // Validates the parameter bounds; throws std::invalid_argument on failure.
    static MapParams create(int d, double a0, double alpha, double beta);

    // a0 = misiurewicz_a0(), beta = default_beta.
    static MapParams preset(double alpha = 0.01, int d = 16);

    // No validation. For oracle configurations outside the admissible box
    // (e.g. a0 = 2 on the x-factor).
    static MapParams unchecked(int d, double a0, double alpha, double beta);

    // Non-fatal observations (e.g. d below 16); empty when none.
    std::vector<std::string> notes() const;
};

inline double morse_b(double theta) { return std::sin(2.0 * kPi * theta); }
inline double morse_b_prime(double theta) { return 2.0 * kPi * std::cos(2.0 * kPi * theta); }

inline PhasePoint step(const MapParams& mp, const PhasePoint& p) {
    double tn = wrap_unit(static_cast<double>(mp.d) * p.theta);
    double xn = mp.a0 + mp.alpha * morse_b(p.theta) - p.x * p.x;
    return {tn, xn};
}

// As step(), but verifies the image stays inside the strip.
std::optional<PhasePoint> step_checked(const MapParams& mp, const PhasePoint& p);

inline Jacobian jacobian(const MapParams& mp, const PhasePoint& p) {
    return {static_cast<double>(mp.d), 0.0, mp.alpha * morse_b_prime(p.theta), -2.0 * p.x};
}

// Distance to the critical set C = S^1 x {0}; with delta, the truncated
// variant that is 1 whenever the distance is >= delta.
inline double dist_to_critical(const PhasePoint& p) { return std::fabs(p.x); }
inline double dist_to_critical(const PhasePoint& p, double delta) {
    double s = std::fabs(p.x);
    return s >= delta ? 1.0 : s;
}

struct RegionCheck {
    double margin = 0.0;       // min over boundary samples of beta - |x'|
    double worst_theta = 0.0;  // sample attaining the margin
    double worst_x = 0.0;
    bool ok = false;           // margin > 0
};

// Samples the strip boundary x = +-beta over theta and measures how far the
// image stays inside I.
RegionCheck invariant_region_check(const MapParams& mp, std::int64_t n_samples);

struct PowerDistanceParams {
    double B = 0.0;    // comparability constant, > 1
    double ell = 1.0;  // distance power, > 0
};

struct PowerDistanceReport {
    // Empirical worst constants over the sampled pairs for the three
    // comparabilities: weak-direction norm vs dist^ell, and the log-Lipschitz
    // bounds for log||Df^{-1}|| and log|det Df^{-1}|.
    double worst_norm = 0.0;
    double worst_lip_inv = 0.0;
    double worst_lip_det = 0.0;
    std::int64_t pairs_tested = 0;
    std::int64_t violations = 0;  // pairs exceeding the supplied B (0 when B unset)
    bool all_finite = true;
};

// Samples pairs p,q with 2*dist(p,q) < dist(p,C), both off the critical set,
// and measures the constants in the power-of-the-distance comparabilities.
PowerDistanceReport power_of_distance_check(const MapParams& mp,
                                            const PowerDistanceParams& pd,
                                            std::int64_t n_pairs,
                                            std::uint64_t rng_seed);

}  // namespace viana
