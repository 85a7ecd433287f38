#include "vianalab/hyperbolic_times.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "vianalab/parallel.hpp"
#include "vianalab/rng.hpp"

namespace viana {

namespace {

struct CanonicalArrays {
    std::vector<double> T;  // size N+1
    std::vector<double> c;  // size N
};

CanonicalArrays canonical_arrays(const OrbitScalars& rec, const HTParams& ht) {
    const std::int64_t N = rec.size();
    const double ls = std::log(ht.sigma);
    CanonicalArrays ca;
    ca.T.resize(N + 1);
    ca.c.resize(N);
    ca.T[0] = 0.0;
    for (std::int64_t j = 0; j < N; ++j) {
        ca.T[j + 1] = ca.T[j] + (rec.log_inv_norm[j] - ls);
        double dd = rec.dist[j] >= ht.delta ? 1.0 : rec.dist[j];
        double r = std::log(dd);  // 0 when truncated, -inf on the critical set
        ca.c[j] = static_cast<double>(j) + r / (ht.b * ls);
    }
    return ca;
}

}  // namespace

HTParams HTParams::create(double sigma, double delta, double b, double ell) {
    if (!(sigma > 0.0 && sigma < 1.0))
        throw std::invalid_argument("HTParams: sigma must be in (0,1)");
    if (!(delta > 0.0)) throw std::invalid_argument("HTParams: delta must be > 0");
    double cap = std::min(0.5, 1.0 / (2.0 * ell));
    if (!(b > 0.0 && b < cap))
        throw std::invalid_argument("HTParams: b must be in (0, min(1/2, 1/(2*ell)))");
    return HTParams{sigma, delta, b};
}

HTReport detect(const OrbitScalars& rec, const HTParams& ht) {
    const std::int64_t N = rec.size();
    auto ca = canonical_arrays(rec, ht);
    HTReport rep;
    rep.params = ht;
    rep.horizon = N;
    double min_T = ca.T[0];
    double max_c = -std::numeric_limits<double>::infinity();
    for (std::int64_t n = 1; n <= N; ++n) {
        max_c = std::max(max_c, ca.c[n - 1]);
        if (ca.T[n] <= min_T && static_cast<double>(n) >= max_c)
            rep.times.push_back(n);
        min_T = std::min(min_T, ca.T[n]);
    }
    rep.density = static_cast<double>(rep.times.size()) / static_cast<double>(N);
    return rep;
}

HTReport detect_bruteforce(const OrbitScalars& rec, const HTParams& ht) {
    const std::int64_t N = rec.size();
    auto ca = canonical_arrays(rec, ht);
    HTReport rep;
    rep.params = ht;
    rep.horizon = N;
    for (std::int64_t n = 1; n <= N; ++n) {
        bool ok = true;
        for (std::int64_t m = 0; m < n && ok; ++m) {
            if (!(ca.T[n] <= ca.T[m])) ok = false;
            if (!(static_cast<double>(n) >= ca.c[m])) ok = false;
        }
        if (ok) rep.times.push_back(n);
    }
    rep.density = static_cast<double>(rep.times.size()) / static_cast<double>(N);
    return rep;
}

DensityStudy density_study(const MapParams& mp, const HTParams& ht,
                           const std::vector<std::int64_t>& horizons,
                           std::int64_t n_points, double gamma,
                           std::uint64_t rng_seed, int threads) {
    if (horizons.empty()) throw std::invalid_argument("density_study: horizons empty");
    std::int64_t n_max = *std::max_element(horizons.begin(), horizons.end());

    struct PerPoint {
        bool member = false;
        std::vector<double> density;  // per horizon
    };
    std::vector<PerPoint> res(n_points);

    parallel_for(n_points, threads, [&](std::int64_t i) {
        Rng rng(seed_stream(rng_seed, static_cast<std::uint64_t>(i)));
        PhasePoint p{rng.uniform01(), rng.uniform(-mp.beta, mp.beta)};
        OrbitScalars rec = orbit(mp, p, n_max);
        if (rec.fault) return;
        auto hs = h_sigma_membership(rec.log_inv_norm, rec.dist, ht.sigma, gamma, ht.delta);
        if (!hs.member) return;
        res[i].member = true;
        HTReport rep = detect(rec, ht);
        res[i].density.reserve(horizons.size());
        for (std::int64_t N : horizons) {
            auto it = std::upper_bound(rep.times.begin(), rep.times.end(), N);
            res[i].density.push_back(static_cast<double>(it - rep.times.begin()) /
                                     static_cast<double>(N));
        }
    });

    DensityStudy st;
    st.points_sampled = n_points;
    for (std::size_t h = 0; h < horizons.size(); ++h) {
        DensityRow row;
        row.horizon = horizons[h];
        row.min_density = std::numeric_limits<double>::infinity();
        std::int64_t members = 0;
        double acc = 0.0;
        for (const auto& pp : res) {
            if (!pp.member) continue;
            ++members;
            double d = pp.density[h];
            acc += d;
            row.min_density = std::min(row.min_density, d);
            row.max_density = std::max(row.max_density, d);
        }
        if (members > 0) row.mean_density = acc / static_cast<double>(members);
        if (members == 0) row.min_density = 0.0;
        st.rows.push_back(row);
        st.members = members;
    }
    if (!st.rows.empty() && st.rows.back().min_density == 0.0) st.zero_density = true;
    return st;
}

RecurrenceProfile slow_recurrence_profile(const std::vector<double>& dist, double gamma,
                                          int k_max) {
    if (!(gamma > 0.0)) throw std::invalid_argument("slow_recurrence_profile: gamma > 0");
    RecurrenceProfile prof;
    prof.gamma = gamma;
    const double n = static_cast<double>(dist.size());
    for (int k = 1; k <= k_max; ++k) {
        double delta = std::ldexp(1.0, -k);
        double acc = 0.0;
        for (double s : dist)
            if (s < delta) acc += -std::log(s);  // truncated points contribute 0
        double avg = acc / n;
        prof.curve.emplace_back(delta, avg);
        if (!prof.delta && avg <= 0.5 * gamma) prof.delta = delta;
    }
    return prof;
}

HSigmaResult h_sigma_membership(const std::vector<double>& log_inv_norm,
                                const std::vector<double>& dist, double sigma,
                                double gamma, double delta) {
    if (log_inv_norm.size() != dist.size() || log_inv_norm.empty())
        throw std::invalid_argument("h_sigma_membership: series mismatch");
    const double n = static_cast<double>(dist.size());
    double su = 0.0, sr = 0.0;
    for (double u : log_inv_norm) su += u;
    for (double s : dist) {
        double dd = s >= delta ? 1.0 : s;
        sr += -std::log(dd);
    }
    HSigmaResult hs;
    hs.avg_log_inv_norm = su / n;
    hs.avg_trunc_recurrence = sr / n;
    double bound = 3.0 * std::log(sigma);
    hs.contraction_margin = bound - hs.avg_log_inv_norm;
    hs.recurrence_margin = gamma - hs.avg_trunc_recurrence;
    hs.member = hs.contraction_margin >= 0.0 && hs.recurrence_margin >= 0.0;
    return hs;
}

namespace {

struct BranchData {
    std::vector<double> theta;  // reference orbit
    std::vector<double> x;
    std::vector<int> branch;    // floor(d * theta_j)
    std::vector<double> sign;   // sign of x_j
};

BranchData reference_orbit(const MapParams& mp, PhasePoint p, std::int64_t n) {
    BranchData bd;
    bd.theta.reserve(n + 1);
    bd.x.reserve(n + 1);
    bd.branch.reserve(n);
    bd.sign.reserve(n);
    for (std::int64_t j = 0; j < n; ++j) {
        bd.theta.push_back(p.theta);
        bd.x.push_back(p.x);
        bd.branch.push_back(static_cast<int>(std::floor(mp.d * p.theta)));
        bd.sign.push_back(p.x >= 0.0 ? 1.0 : -1.0);
        p = step(mp, p);
    }
    bd.theta.push_back(p.theta);
    bd.x.push_back(p.x);
    return bd;
}

// One inverse-branch step: preimage of q at level j+1 along the reference branch.
bool pull_back(const MapParams& mp, const BranchData& bd, std::int64_t j, PhasePoint& q) {
    // unwrap q.theta to the lift closest to the reference image fraction
    double frac = static_cast<double>(mp.d) * bd.theta[j] - bd.branch[j];
    double t = q.theta;
    double dt = t - frac;
    if (dt > 0.5) t -= 1.0;
    if (dt < -0.5) t += 1.0;
    double theta_pre = (t + bd.branch[j]) / static_cast<double>(mp.d);
    double rad = mp.a0 + mp.alpha * morse_b(theta_pre) - q.x;
    if (rad < 0.0) return false;
    q.theta = wrap_unit(theta_pre);
    q.x = bd.sign[j] * std::sqrt(rad);
    return true;
}

}  // namespace

ExpansivityReport expansivity_check(const MapParams& mp, PhasePoint p, std::int64_t n,
                                    double sigma, std::int64_t n_pairs, double radius,
                                    std::uint64_t rng_seed, double rel_tol) {
    if (n < 1) throw std::invalid_argument("expansivity_check: n >= 1");
    constexpr double kResolutionFloor = 1e-12;
    BranchData bd = reference_orbit(mp, p, n);
    PhasePoint pn{bd.theta[n], bd.x[n]};
    Rng rng(rng_seed);
    ExpansivityReport rep;

    for (std::int64_t pair = 0; pair < n_pairs; ++pair) {
        auto sample = [&] {
            double r = radius * std::sqrt(rng.uniform01());
            double ang = 2.0 * kPi * rng.uniform01();
            return PhasePoint{wrap_unit(pn.theta + r * std::cos(ang)),
                              pn.x + r * std::sin(ang)};
        };
        PhasePoint y = sample(), z = sample();
        double dn = phase_dist(y, z);
        if (dn == 0.0) continue;
        bool failed = false;
        for (std::int64_t k = 1; k <= n; ++k) {
            std::int64_t j = n - k;
            if (!pull_back(mp, bd, j, y) || !pull_back(mp, bd, j, z)) {
                ++rep.pullback_failures;
                failed = true;
                break;
            }
            double bound = std::pow(sigma, 0.5 * static_cast<double>(k)) * dn;
            if (bound < kResolutionFloor) break;  // below float resolution
            double lhs = phase_dist(y, z);
            double ratio = lhs / bound;
            rep.worst_ratio = std::max(rep.worst_ratio, ratio);
            ++rep.instances;
            if (ratio > 1.0 + rel_tol) {
                ++rep.violations;
                if (rep.violating.size() < 50) rep.violating.emplace_back(pair, k);
            }
        }
        (void)failed;
    }
    rep.frac_ok = rep.instances == 0
                      ? 1.0
                      : 1.0 - static_cast<double>(rep.violations) /
                                  static_cast<double>(rep.instances);
    return rep;
}

double estimate_delta1(const MapParams& mp, PhasePoint p,
                       const std::vector<std::int64_t>& times, double sigma,
                       std::int64_t n_pairs, std::uint64_t rng_seed) {
    if (times.empty()) throw std::invalid_argument("estimate_delta1: no hyperbolic times");
    auto passes = [&](double radius) {
        std::int64_t idx = 0;
        for (std::int64_t n : times) {
            auto rep = expansivity_check(mp, p, n, sigma, n_pairs, radius,
                                         seed_stream(rng_seed, idx++));
            if (rep.pullback_failures > 0 || rep.frac_ok < 0.99) return false;
        }
        return true;
    };
    double lo = 0.0, hi = 0.5;
    if (!passes(1e-6)) return 0.0;
    lo = 1e-6;
    for (int i = 0; i < 24 && (hi - lo) > 1e-6; ++i) {
        double mid = 0.5 * (lo + hi);
        if (passes(mid))
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

SeparationReport separation_experiment(const MapParams& mp, PhasePoint p, double eps,
                                       std::int64_t N, std::int64_t n_probes,
                                       std::uint64_t rng_seed) {
    if (!(eps > 0.0)) throw std::invalid_argument("separation_experiment: eps > 0");
    Rng rng(rng_seed);
    SeparationReport rep;
    rep.first_separation.resize(n_probes, -1);
    for (std::int64_t i = 0; i < n_probes; ++i) {
        double r = eps * rng.uniform01();
        if (r == 0.0) r = 0.5 * eps;
        double ang = 2.0 * kPi * rng.uniform01();
        PhasePoint z{wrap_unit(p.theta + r * std::cos(ang)), p.x + r * std::sin(ang)};
        PhasePoint a = p, b = z;
        for (std::int64_t j = 1; j <= N; ++j) {
            a = step(mp, a);
            b = step(mp, b);
            if (phase_dist(a, b) > eps) {
                rep.first_separation[i] = j;
                break;
            }
        }
        if (rep.first_separation[i] < 0) ++rep.stubborn;
    }
    rep.all_separated = rep.stubborn == 0;
    return rep;
}

}  // namespace viana
