#include "vianalab/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "vianalab/orbit.hpp"
#include "vianalab/parallel.hpp"
#include "vianalab/rng.hpp"

namespace viana {

namespace {

struct Mat2 {
    double a = 1.0, b = 0.0, c = 0.0, d = 1.0;  // [[a,b],[c,d]]
};

inline Mat2 mul(const Mat2& L, const Mat2& R) {
    return {L.a * R.a + L.b * R.c, L.a * R.b + L.b * R.d,
            L.c * R.a + L.d * R.c, L.c * R.b + L.d * R.d};
}

inline Mat2 from_jacobian(const Jacobian& J) { return {J.m00, J.m01, J.m10, J.m11}; }

// accumulates block means and reports the standard error of the global mean
class BlockStats {
public:
    explicit BlockStats(std::int64_t block_len) : block_len_(block_len) {}

    void add(double increment, std::int64_t weight = 1) {
        sum_ += increment;
        count_ += weight;
        block_sum_ += increment;
        block_count_ += weight;
        if (block_count_ >= block_len_) flush();
    }

    double mean() const { return count_ > 0 ? sum_ / static_cast<double>(count_) : 0.0; }

    double stderr_of_mean() const {
        if (block_means_.size() < 2) return std::numeric_limits<double>::infinity();
        double m = 0.0;
        for (double v : block_means_) m += v;
        m /= static_cast<double>(block_means_.size());
        double s2 = 0.0;
        for (double v : block_means_) s2 += (v - m) * (v - m);
        s2 /= static_cast<double>(block_means_.size() - 1);
        return std::sqrt(s2 / static_cast<double>(block_means_.size()));
    }

private:
    void flush() {
        if (block_count_ > 0)
            block_means_.push_back(block_sum_ / static_cast<double>(block_count_));
        block_sum_ = 0.0;
        block_count_ = 0;
    }

    std::int64_t block_len_;
    double sum_ = 0.0;
    std::int64_t count_ = 0;
    double block_sum_ = 0.0;
    std::int64_t block_count_ = 0;
    std::vector<double> block_means_;
};

inline Mat2 inverse(const Jacobian& J) {
    // J = [[d,0],[c,b]] with b = -2x
    double det = J.m00 * J.m11;
    return {1.0 / J.m00, 0.0, -J.m10 / det, 1.0 / J.m11};
}

}  // namespace

ExponentEstimate lyapunov_qr(const MapParams& mp, PhasePoint p0, std::int64_t n,
                             const LyapunovOptions& opt) {
    if (n < 1000) throw std::invalid_argument("lyapunov_qr: n must be >= 1e3");
    const int T = std::max(1, opt.reorth_period);
    const std::int64_t block = std::max<std::int64_t>(T, opt.stat_block - opt.stat_block % T);

    ExponentEstimate est;
    est.n = n;
    // Q orthogonal, columns tracked as (cq, sq) rotation
    double cq = 1.0, sq = 0.0;
    Mat2 B;  // current block product
    int in_block = 0;
    double sum1 = 0.0, sum2 = 0.0, sum_det = 0.0;
    BlockStats st1(block), st2(block), stdet(block);
    std::int64_t done = 0;

    auto flush_block = [&](int steps) {
        if (steps == 0) return;
        // M = B * Q, then Givens QR of M
        Mat2 M = mul(B, Mat2{cq, -sq, sq, cq});
        double r1 = std::hypot(M.a, M.c);
        if (r1 == 0.0) {
            est.hit_critical = true;
            return;
        }
        double c = M.a / r1, s = M.c / r1;
        double r22 = c * M.d - s * M.b;
        double l1 = std::log(r1);
        double l2 = std::log(std::fabs(r22));
        if (!std::isfinite(l2)) est.hit_critical = true;
        sum1 += l1;
        sum2 += l2;
        st1.add(l1, steps);
        st2.add(l2, steps);
        cq = c;
        sq = s;
        B = Mat2{};
    };

    est.hit_critical = false;
    auto fault = iterate(mp, p0, n, [&](std::int64_t, const PhasePoint& p, const Jacobian& J) {
        B = mul(from_jacobian(J), B);
        ++in_block;
        double ld = std::log(std::fabs(J.det()));
        sum_det += ld;
        stdet.add(ld);
        if (p.x == 0.0) est.hit_critical = true;
        ++done;
        if (in_block == T) {
            flush_block(in_block);
            in_block = 0;
        }
    });
    flush_block(in_block);
    if (fault) est.n = fault->step_index;
    if (est.n == 0) throw std::runtime_error("lyapunov_qr: orbit faulted at step 0");

    double m1 = sum1 / static_cast<double>(done);
    double m2 = sum2 / static_cast<double>(done);
    est.lambda_u = std::max(m1, m2);
    est.lambda_c = std::min(m1, m2);
    est.log_det_avg = sum_det / static_cast<double>(done);
    bool swapped = m2 > m1;
    est.stderr_u = swapped ? st2.stderr_of_mean() : st1.stderr_of_mean();
    est.stderr_c = swapped ? st1.stderr_of_mean() : st2.stderr_of_mean();
    est.converged = !est.hit_critical && !fault &&
                    est.stderr_u <= opt.stderr_threshold &&
                    est.stderr_c <= opt.stderr_threshold;
    return est;
}

ExponentEstimate lyapunov_split(const MapParams& mp, PhasePoint p0, std::int64_t n,
                                const LyapunovOptions& opt) {
    if (n < 1000) throw std::invalid_argument("lyapunov_split: n must be >= 1e3");
    const std::int64_t block = std::max<std::int64_t>(1, opt.stat_block);

    ExponentEstimate est;
    est.n = n;
    double w = 0.0;  // slope of the cone vector (1, w)
    double sum_u = 0.0, sum_det = 0.0;
    BlockStats stu(block), stc(block);

    auto fault = iterate(mp, p0, n, [&](std::int64_t, const PhasePoint& p, const Jacobian& J) {
        double wn = (J.m10 + J.m11 * w) / J.m00;
        double g = std::log(J.m00) +
                   0.5 * (std::log1p(wn * wn) - std::log1p(w * w));
        double ld = std::log(std::fabs(J.det()));
        if (p.x == 0.0) est.hit_critical = true;
        if (std::fabs(wn) > 1.0) est.cone_escaped = true;
        sum_u += g;
        sum_det += ld;
        stu.add(g);
        stc.add(ld - g);
        w = wn;
    });
    if (fault) est.n = fault->step_index;
    if (est.n == 0) throw std::runtime_error("lyapunov_split: orbit faulted at step 0");

    double dn = static_cast<double>(est.n);
    est.lambda_u = sum_u / dn;
    est.log_det_avg = sum_det / dn;
    est.lambda_c = est.log_det_avg - est.lambda_u;
    est.stderr_u = stu.stderr_of_mean();
    est.stderr_c = stc.stderr_of_mean();
    est.converged = !est.hit_critical && !est.cone_escaped && !fault &&
                    est.stderr_u <= opt.stderr_threshold &&
                    est.stderr_c <= opt.stderr_threshold;
    return est;
}

ThermoConstants ThermoConstants::derive(double c0, double eps, int d) {
    if (!(eps > 0.0)) throw std::invalid_argument("ThermoConstants: eps must be > 0");
    if (d < 2) throw std::invalid_argument("ThermoConstants: d must be >= 2");
    if (!(d - eps > 1.0))
        throw std::invalid_argument("ThermoConstants: need d - eps > 1");
    ThermoConstants tc;
    tc.c0 = c0;
    tc.eps = eps;
    tc.d = d;
    tc.zeta = c0 - std::log(d + eps) / std::log(d - eps);
    tc.kappa0 = 0.25 * std::log(static_cast<double>(d));
    if (tc.zeta > 0.0) tc.sigma = std::exp(-tc.zeta / 12.0);
    return tc;
}

double ThermoConstants::sigma_or_throw() const {
    if (!sigma)
        throw std::runtime_error(
            "ThermoConstants: zeta = c0 - log(d+eps)/log(d-eps) <= 0, sigma undefined; "
            "supply a larger c0 (the expanding-regime floor) or a smaller eps");
    return *sigma;
}

ExponentSurvey exponent_survey(const MapParams& mp, std::int64_t n_points,
                               std::int64_t n_iter, std::uint64_t rng_seed, int threads) {
    if (n_points < 1 || n_iter < 1)
        throw std::invalid_argument("exponent_survey: n_points and n_iter must be >= 1");
    ExponentSurvey sv;
    sv.n_iter = n_iter;
    sv.lambda_c.resize(n_points);
    sv.lambda_u.resize(n_points);

    parallel_for(n_points, threads, [&](std::int64_t i) {
        Rng rng(seed_stream(rng_seed, static_cast<std::uint64_t>(i)));
        PhasePoint p{rng.uniform01(), rng.uniform(-mp.beta, mp.beta)};
        double w = 0.0, sum_u = 0.0, sum_det = 0.0;
        iterate(mp, p, n_iter, [&](std::int64_t, const PhasePoint& q, const Jacobian& J) {
            double wn = (J.m10 + J.m11 * w) / J.m00;
            sum_u += std::log(J.m00) + 0.5 * (std::log1p(wn * wn) - std::log1p(w * w));
            sum_det += std::log(std::fabs(J.det()));
            (void)q;
            w = wn;
        });
        double lu = sum_u / static_cast<double>(n_iter);
        sv.lambda_u[i] = lu;
        sv.lambda_c[i] = sum_det / static_cast<double>(n_iter) - lu;
    });

    std::int64_t pos = 0;
    for (double v : sv.lambda_c)
        if (v > 0.0) ++pos;
    sv.frac_positive = static_cast<double>(pos) / static_cast<double>(n_points);
    std::vector<double> sorted = sv.lambda_c;
    std::sort(sorted.begin(), sorted.end());
    std::int64_t idx = static_cast<std::int64_t>(
        std::ceil(0.01 * static_cast<double>(n_points))) - 1;
    idx = std::clamp<std::int64_t>(idx, 0, n_points - 1);
    sv.c0_empirical = sorted[idx];
    double spread = 0.0;
    for (double lu : sv.lambda_u)
        spread = std::max(spread, std::fabs(std::exp(lu) - static_cast<double>(mp.d)));
    sv.lambda_u_spread = spread;
    sv.eps_default = std::max(0.01, 2.0 * spread);
    return sv;
}

std::vector<double> central_log_norm_series(const MapParams& mp, PhasePoint p0,
                                            std::int64_t n, int window) {
    if (window < 1) throw std::invalid_argument("central_log_norm_series: window >= 1");
    if (n < window) return {};
    std::vector<Jacobian> ring(window);
    std::vector<double> out;
    out.reserve(n - window + 1);

    iterate(mp, p0, n, [&](std::int64_t j, const PhasePoint&, const Jacobian& J) {
        ring[j % window] = J;
        if (j + 1 < window) return;
        std::int64_t lo = j + 1 - window;
        // backward inverse application: most contracted direction at p_lo
        double v0 = 0.3, v1 = 1.0;
        bool ok = true;
        for (std::int64_t k = j; k >= lo; --k) {
            const Jacobian& Jk = ring[k % window];
            if (Jk.m11 == 0.0) {
                ok = false;
                break;
            }
            Mat2 inv = inverse(Jk);
            double n0 = inv.a * v0;
            double n1 = inv.c * v0 + inv.d * v1;
            double nn = std::hypot(n0, n1);
            v0 = n0 / nn;
            v1 = n1 / nn;
        }
        if (!ok) {
            out.push_back(std::numeric_limits<double>::quiet_NaN());
            return;
        }
        const Jacobian& J0 = ring[lo % window];
        double w0 = J0.m00 * v0;
        double w1 = J0.m10 * v0 + J0.m11 * v1;
        out.push_back(std::log(std::hypot(w0, w1)));
    });
    return out;
}

IntegrabilityReport integrability_estimate(const MapParams& mp, PhasePoint p0,
                                           std::int64_t n, int window) {
    if (n < window) throw std::invalid_argument("integrability_estimate: n >= window required");
    IntegrabilityReport rep;
    auto central = central_log_norm_series(mp, p0, n, window);
    OrbitScalars rec = orbit(mp, p0, n);

    double acc = 0.0;
    for (std::int64_t j = 0; j < rec.size(); ++j) {
        double s = rec.dist[j];
        if (s == 0.0) {
            rep.finite = false;
            continue;
        }
        acc += std::fabs(std::log(s));
    }
    rep.avg_abs_log_dist = acc / static_cast<double>(rec.size());

    for (std::size_t j = 0; j < central.size(); ++j) {
        if (!std::isfinite(central[j])) continue;
        double s = rec.dist[j];
        if (s == 0.0) continue;
        double rho = std::exp(central[j]) / s;
        double r = std::max(rho, 1.0 / rho);
        rep.worst_ratio = std::max(rep.worst_ratio, r);
        ++rep.checked;
        if (rho < 1.0 / 3.0 || rho > 3.0) {
            ++rep.violations;
            if (rep.violation_indices.size() < 100)
                rep.violation_indices.push_back(static_cast<std::int64_t>(j));
        }
    }
    return rep;
}

}  // namespace viana
