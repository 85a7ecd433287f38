#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "vianalab/map.hpp"
#include "vianalab/orbit.hpp"

namespace viana {

// n is a (sigma,delta)-hyperbolic time for p when, for every 1 <= k <= n,
//   sum_{j=n-k}^{n-1} u_j <= k log sigma   (u_j = log||Df(p_j)^{-1}||)
//   log dist_delta(p_{n-k}, C) >= b k log sigma.
// Canonical encoding used throughout: T_0 = 0, T_{j+1} = T_j + (u_j - log sigma),
// first condition <=> T_n <= min_{m<n} T_m; c_m = m + r_m/(b log sigma) with
// r_m = log dist_delta(p_m, C), second condition <=> n >= max_{m<n} c_m.
struct HTParams {
    double sigma = 0.0;  // in (0,1)
    double delta = 0.0;  // > 0
    double b = 0.25;     // in (0, min(1/2, 1/(2*ell)))

    static HTParams create(double sigma, double delta, double b, double ell = 1.0);
    static double default_b(double ell = 1.0) {
        double cap = std::min(0.5, 1.0 / (2.0 * ell));
        return 0.5 * cap;
    }
};

struct HTReport {
    std::vector<std::int64_t> times;  // ascending, in [1, horizon]
    double density = 0.0;             // times.size() / horizon
    HTParams params;
    std::int64_t horizon = 0;
};

// O(N) scan via prefix sums and running extrema.
HTReport detect(const OrbitScalars& rec, const HTParams& ht);

// O(N^2) evaluation of the definition's quantifier over all window lengths,
// on the same canonical arrays. Reference implementation for cross-checks.
HTReport detect_bruteforce(const OrbitScalars& rec, const HTParams& ht);

struct DensityRow {
    std::int64_t horizon = 0;
    double mean_density = 0.0;
    double min_density = 0.0;
    double max_density = 0.0;
};

struct DensityStudy {
    std::vector<DensityRow> rows;
    std::int64_t points_sampled = 0;
    std::int64_t members = 0;  // points passing the H(sigma) screen
    bool zero_density = false;  // some member produced no times at the top horizon
};

// Empirical hyperbolic-time density over H(sigma)-candidate starting points.
DensityStudy density_study(const MapParams& mp, const HTParams& ht,
                           const std::vector<std::int64_t>& horizons,
                           std::int64_t n_points, double gamma,
                           std::uint64_t rng_seed, int threads = 0);

struct RecurrenceProfile {
    std::optional<double> delta;  // largest dyadic delta with average <= gamma/2
    std::vector<std::pair<double, double>> curve;  // (delta, average), delta descending
    double gamma = 0.0;
};

// Scans delta over 2^-1..2^-k_max and evaluates the finite-n average of
// -log dist_delta along the orbit.
RecurrenceProfile slow_recurrence_profile(const std::vector<double>& dist, double gamma,
                                          int k_max = 20);

struct HSigmaResult {
    bool member = false;
    double avg_log_inv_norm = 0.0;  // must be <= 3 log sigma
    double contraction_margin = 0.0;  // 3 log sigma - avg (>= 0 when member)
    double avg_trunc_recurrence = 0.0;  // average of -log dist_delta, <= gamma
    double recurrence_margin = 0.0;
};

// Finite-n proxy of the H(sigma) membership conditions. log_inv_norm may be
// the full 2x2 inverse norm series or the central-restriction variant.
HSigmaResult h_sigma_membership(const std::vector<double>& log_inv_norm,
                                const std::vector<double>& dist, double sigma,
                                double gamma, double delta);

struct ExpansivityReport {
    double worst_ratio = 0.0;       // max over instances of lhs/(sigma^{k/2} rhs)
    std::int64_t instances = 0;     // (pair, k) cases tested
    std::int64_t violations = 0;    // cases with ratio > 1 + rel_tol
    std::int64_t pullback_failures = 0;  // branch preimage left the admissible region
    double frac_ok = 1.0;
    std::vector<std::pair<std::int64_t, std::int64_t>> violating;  // (pair, k), first few
};

// Verifies backward contraction dist(f^{n-k}y, f^{n-k}z) <= sigma^{k/2}
// dist(f^n y, f^n z) for probe pairs pulled back along the orbit branch from a
// ball of the given radius around f^n(p). Instances with sigma^{k/2} * rhs
// below the floating resolution floor are skipped.
ExpansivityReport expansivity_check(const MapParams& mp, PhasePoint p, std::int64_t n,
                                    double sigma, std::int64_t n_pairs, double radius,
                                    std::uint64_t rng_seed, double rel_tol = 0.05);

// Largest radius (dyadic bisection) at which expansivity_check passes with
// >= 99% of instances across the supplied hyperbolic times. Empirical delta_1.
double estimate_delta1(const MapParams& mp, PhasePoint p,
                       const std::vector<std::int64_t>& times, double sigma,
                       std::int64_t n_pairs, std::uint64_t rng_seed);

struct SeparationReport {
    bool all_separated = false;
    std::vector<std::int64_t> first_separation;  // per probe, -1 when none within N
    std::int64_t stubborn = 0;
};

// Probes z != p at distance < eps; finds the first iterate where the orbits
// separate beyond eps.
SeparationReport separation_experiment(const MapParams& mp, PhasePoint p, double eps,
                                       std::int64_t N, std::int64_t n_probes,
                                       std::uint64_t rng_seed);

}  // namespace viana
