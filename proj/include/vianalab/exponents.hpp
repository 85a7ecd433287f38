#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "vianalab/map.hpp"

namespace viana {

struct ExponentEstimate {
    double lambda_u = 0.0;     // larger exponent, nats per iterate
    double lambda_c = 0.0;     // central exponent
    double log_det_avg = 0.0;  // Birkhoff average of log|det Df|
    std::int64_t n = 0;
    double stderr_u = 0.0;     // block-mean standard errors of the averages
    double stderr_c = 0.0;
    bool converged = false;
    bool hit_critical = false;  // orbit met x = 0 exactly; logs degenerate
    bool cone_escaped = false;  // split method only
};

struct LyapunovOptions {
    // Steps between orthogonalizations. The block product's condition number
    // grows like exp((lambda_u - lambda_c) * T); past ~14 the weak singular
    // value cancels to noise in doubles, so keep T small.
    int reorth_period = 5;
    std::int64_t stat_block = 1000;  // steps per block for the standard error
    double stderr_threshold = 0.01;  // convergence gate on stderr_u, stderr_c
};

// Both exponents through an orthogonalized cocycle product.
ExponentEstimate lyapunov_qr(const MapParams& mp, PhasePoint p0, std::int64_t n,
                             const LyapunovOptions& opt = {});

// lambda_u from a vector driven inside the horizontal cone; lambda_c recovered
// from the determinant average.
ExponentEstimate lyapunov_split(const MapParams& mp, PhasePoint p0, std::int64_t n,
                                const LyapunovOptions& opt = {});

inline bool conformal_bound_check(const ExponentEstimate& est, int d, double eps) {
    return std::log(d - eps) <= est.lambda_u && est.lambda_u <= std::log(d + eps);
}

// Derived constants zeta = c0 - log(d+eps)/log(d-eps), sigma = exp(-zeta/12),
// kappa0 = (1/4)log d. sigma only exists in the expanding regime zeta > 0.
struct ThermoConstants {
    double c0 = 0.0;
    double eps = 0.0;
    int d = 16;
    double zeta = 0.0;
    double kappa0 = 0.0;
    std::optional<double> sigma;

    static ThermoConstants derive(double c0, double eps, int d);
    // Throws std::runtime_error naming the zeta <= 0 obstruction when absent.
    double sigma_or_throw() const;
};

struct ExponentSurvey {
    std::vector<double> lambda_c;  // per sampled point, in point order
    std::vector<double> lambda_u;
    double c0_empirical = 0.0;   // 1st percentile of lambda_c
    double frac_positive = 0.0;  // fraction of points with lambda_c > 0
    double lambda_u_spread = 0.0;  // max over points of |exp(lambda_u) - d|
    double eps_default = 0.0;      // max(0.01, 2 * lambda_u_spread)
    std::int64_t n_iter = 0;
};

// Finite-time exponents over Lebesgue-random starting points.
ExponentSurvey exponent_survey(const MapParams& mp, std::int64_t n_points,
                               std::int64_t n_iter, std::uint64_t rng_seed,
                               int threads = 0);

// Approximate central direction at p_j: the most contracted direction of the
// w-step cocycle starting at p_j, obtained by normalized backward application
// of the inverse derivatives. Returns log||Df(p_j) e_c(p_j)|| for
// j = 0..n-w. Exact vertical at alpha = 0.
std::vector<double> central_log_norm_series(const MapParams& mp, PhasePoint p0,
                                            std::int64_t n, int window);

struct IntegrabilityReport {
    double avg_abs_log_dist = 0.0;  // finite-n average of |log dist(p_j, C)|
    bool finite = true;             // false when the orbit hits x = 0 exactly
    double worst_ratio = 1.0;  // max over j of max(rho_j, 1/rho_j), rho = ||Df|Ec||/dist
    std::int64_t violations = 0;  // points where the ratio leaves [1/3, 3]
    std::vector<std::int64_t> violation_indices;  // first few offenders
    std::int64_t checked = 0;
};

// Birkhoff average of |log dist| along the orbit plus the pointwise
// comparability between dist(.,C) and the approximate central derivative norm.
IntegrabilityReport integrability_estimate(const MapParams& mp, PhasePoint p0,
                                           std::int64_t n, int window = 50);

}  // namespace viana
