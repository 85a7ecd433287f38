#include "vianalab/ulam.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vianalab/exponents.hpp"
#include "vianalab/parallel.hpp"
#include "vianalab/rng.hpp"
#include "vianalab/scc.hpp"

namespace viana {

Grid Grid::regular(double beta, int n_theta, int n_x, double band, int refine) {
    if (n_theta < 1 || n_x < 1) throw std::invalid_argument("Grid: cell counts must be >= 1");
    if (refine < 1) throw std::invalid_argument("Grid: refine must be >= 1");
    Grid g;
    g.n_theta = n_theta;
    g.beta = beta;
    double width = 2.0 * beta / n_x;
    g.x_edges.reserve(n_x + 1);
    for (int i = 0; i < n_x; ++i) {
        double lo = -beta + i * width;
        double hi = (i + 1 == n_x) ? beta : -beta + (i + 1) * width;
        bool in_band = refine > 1 && band > 0.0 && hi > -band && lo < band;
        int parts = in_band ? refine : 1;
        for (int k = 0; k < parts; ++k)
            g.x_edges.push_back(lo + (hi - lo) * k / parts);
    }
    g.x_edges.push_back(beta);
    return g;
}

std::int64_t Grid::x_index(double x) const {
    auto it = std::upper_bound(x_edges.begin(), x_edges.end(), x);
    std::int64_t i = static_cast<std::int64_t>(it - x_edges.begin()) - 1;
    if (i < 0) i = 0;
    if (i >= n_x()) i = n_x() - 1;
    return i;
}

PhasePoint Grid::center(std::int64_t cell) const {
    std::int64_t it = cell / n_x();
    std::int64_t ix = cell % n_x();
    return {(static_cast<double>(it) + 0.5) / n_theta,
            0.5 * (x_edges[ix] + x_edges[ix + 1])};
}

void Grid::x_bounds(std::int64_t cell, double& lo, double& hi) const {
    std::int64_t ix = cell % n_x();
    lo = x_edges[ix];
    hi = x_edges[ix + 1];
}

void MeasureOnGrid::normalize() {
    double s = total();
    if (s <= 0.0) throw std::runtime_error("MeasureOnGrid: cannot normalize zero mass");
    for (double& v : w) v /= s;
}

namespace {

// stratified quasi-uniform offsets in [0,1)^2: van der Corput pair with a
// seeded Cranley-Patterson rotation per cell
struct CellSampler {
    double r1, r2;
    explicit CellSampler(std::uint64_t seed) {
        Rng rng(seed);
        r1 = rng.uniform01();
        r2 = rng.uniform01();
    }
    void offsets(int i, double& u, double& v) const {
        u = radical_inverse(static_cast<std::uint64_t>(i) + 1, 2) + r1;
        if (u >= 1.0) u -= 1.0;
        v = radical_inverse(static_cast<std::uint64_t>(i) + 1, 3) + r2;
        if (v >= 1.0) v -= 1.0;
    }
};

}  // namespace

TransitionMatrix build_ulam(const MapParams& mp, const Grid& grid, int samples_per_cell,
                            std::uint64_t rng_seed, int threads) {
    if (samples_per_cell < 16)
        throw std::invalid_argument("build_ulam: samples_per_cell must be >= 16");
    if (grid.x_edges.front() < -mp.beta - 1e-12 || grid.x_edges.back() > mp.beta + 1e-12)
        throw std::invalid_argument("build_ulam: grid leaves the invariant strip");
    const std::int64_t n = grid.size();
    const std::int64_t nx = grid.n_x();
    const int spc = samples_per_cell;

    // per-cell destination cells, recomputed identically in both passes
    auto cell_destinations = [&](std::int64_t cell, std::vector<std::int32_t>& dst) {
        dst.clear();
        CellSampler cs(seed_stream(rng_seed, static_cast<std::uint64_t>(cell)));
        std::int64_t it = cell / nx;
        double xlo, xhi;
        grid.x_bounds(cell, xlo, xhi);
        for (int i = 0; i < spc; ++i) {
            double u, v;
            cs.offsets(i, u, v);
            PhasePoint p{(static_cast<double>(it) + u) / grid.n_theta,
                         xlo + v * (xhi - xlo)};
            PhasePoint q = step(mp, p);
            dst.push_back(static_cast<std::int32_t>(grid.cell_of(q)));
        }
        std::sort(dst.begin(), dst.end());
    };

    TransitionMatrix P;
    P.n = n;
    P.samples_per_cell = spc;
    P.row_ptr.assign(n + 1, 0);

    // pass 1: row sizes
    parallel_for(n, threads, [&](std::int64_t cell) {
        thread_local std::vector<std::int32_t> dst;
        cell_destinations(cell, dst);
        std::int64_t distinct = 0;
        for (std::size_t k = 0; k < dst.size(); ++k)
            if (k == 0 || dst[k] != dst[k - 1]) ++distinct;
        P.row_ptr[cell + 1] = distinct;
    });
    for (std::int64_t i = 0; i < n; ++i) P.row_ptr[i + 1] += P.row_ptr[i];
    P.col.resize(P.row_ptr[n]);
    P.val.resize(P.row_ptr[n]);

    // pass 2: fill
    parallel_for(n, threads, [&](std::int64_t cell) {
        thread_local std::vector<std::int32_t> dst;
        cell_destinations(cell, dst);
        std::int64_t at = P.row_ptr[cell];
        std::size_t k = 0;
        while (k < dst.size()) {
            std::size_t k2 = k;
            while (k2 < dst.size() && dst[k2] == dst[k]) ++k2;
            P.col[at] = dst[k];
            P.val[at] = static_cast<double>(k2 - k) / static_cast<double>(spc);
            ++at;
            k = k2;
        }
    });
    return P;
}

TransitionMatrix build_ulam_quadratic(double a0, const std::vector<double>& x_edges,
                                      int samples_per_cell, std::uint64_t rng_seed) {
    if (samples_per_cell < 16)
        throw std::invalid_argument("build_ulam_quadratic: samples_per_cell must be >= 16");
    const std::int64_t n = static_cast<std::int64_t>(x_edges.size()) - 1;
    const int spc = samples_per_cell;
    auto x_index = [&](double x) {
        auto it = std::upper_bound(x_edges.begin(), x_edges.end(), x);
        std::int64_t i = static_cast<std::int64_t>(it - x_edges.begin()) - 1;
        return std::clamp<std::int64_t>(i, 0, n - 1);
    };
    TransitionMatrix P;
    P.n = n;
    P.samples_per_cell = spc;
    P.row_ptr.assign(n + 1, 0);
    std::vector<std::vector<std::int32_t>> rows(n);
    for (std::int64_t cell = 0; cell < n; ++cell) {
        CellSampler cs(seed_stream(rng_seed, static_cast<std::uint64_t>(cell)));
        auto& dst = rows[cell];
        for (int i = 0; i < spc; ++i) {
            double u, v;
            cs.offsets(i, u, v);
            (void)u;
            double x = x_edges[cell] + v * (x_edges[cell + 1] - x_edges[cell]);
            dst.push_back(static_cast<std::int32_t>(x_index(a0 - x * x)));
        }
        std::sort(dst.begin(), dst.end());
    }
    for (std::int64_t cell = 0; cell < n; ++cell) {
        const auto& dst = rows[cell];
        for (std::size_t k = 0; k < dst.size(); ++k) {
            if (k == 0 || dst[k] != dst[k - 1]) {
                P.col.push_back(dst[k]);
                P.val.push_back(0.0);
            }
            P.val.back() += 1.0 / static_cast<double>(spc);
        }
        P.row_ptr[cell + 1] = static_cast<std::int64_t>(P.col.size());
    }
    return P;
}

namespace {

// CSC view for deterministic parallel left-multiplication
struct Transpose {
    std::vector<std::int64_t> col_ptr;
    std::vector<std::int32_t> row;
    std::vector<double> val;
};

Transpose transpose(const TransitionMatrix& P) {
    Transpose T;
    T.col_ptr.assign(P.n + 1, 0);
    for (std::int32_t c : P.col) ++T.col_ptr[c + 1];
    for (std::int64_t j = 0; j < P.n; ++j) T.col_ptr[j + 1] += T.col_ptr[j];
    T.row.resize(P.col.size());
    T.val.resize(P.col.size());
    std::vector<std::int64_t> at(T.col_ptr.begin(), T.col_ptr.end() - 1);
    for (std::int64_t i = 0; i < P.n; ++i)
        for (std::int64_t e = P.row_ptr[i]; e < P.row_ptr[i + 1]; ++e) {
            std::int64_t slot = at[P.col[e]]++;
            T.row[slot] = static_cast<std::int32_t>(i);
            T.val[slot] = P.val[e];
        }
    return T;
}

// nu = mu P via the transpose (gather form, deterministic under threading)
void left_multiply(const Transpose& T, const std::vector<double>& mu,
                   std::vector<double>& nu, int threads) {
    std::int64_t n = static_cast<std::int64_t>(nu.size());
    parallel_for(n, threads, [&](std::int64_t j) {
        double acc = 0.0;
        for (std::int64_t e = T.col_ptr[j]; e < T.col_ptr[j + 1]; ++e)
            acc += mu[T.row[e]] * T.val[e];
        nu[j] = acc;
    });
}

}  // namespace

StationaryResult stationary(const TransitionMatrix& P, double tol, std::int64_t max_iter,
                            int threads, ReducibilityDiagnosis diagnose) {
    if (P.n == 0) throw std::invalid_argument("stationary: empty matrix");
    StationaryResult res;
    Transpose T = transpose(P);

    const std::int64_t n = P.n;
    std::vector<double> mu(n, 1.0 / static_cast<double>(n));
    std::vector<double> acc(n, 0.0), cand(n), tmp(n);
    constexpr int kCesaro = 32;

    auto residual_of = [&](const std::vector<double>& m) {
        left_multiply(T, m, tmp, threads);
        double r = 0.0;
        for (std::int64_t i = 0; i < n; ++i) r += std::fabs(tmp[i] - m[i]);
        return r;
    };

    std::int64_t it = 0;
    bool done = false;
    while (it < max_iter && !done) {
        for (int s = 0; s < kCesaro && it < max_iter; ++s, ++it) {
            left_multiply(T, mu, tmp, threads);
            mu.swap(tmp);
            for (std::int64_t i = 0; i < n; ++i) acc[i] += mu[i];
        }
        double total = 0.0;
        for (std::int64_t i = 0; i < n; ++i) total += acc[i];
        for (std::int64_t i = 0; i < n; ++i) cand[i] = acc[i] / total;
        res.residual = residual_of(cand);
        if (res.residual <= tol) {
            done = true;
        } else {
            mu = cand;
            std::fill(acc.begin(), acc.end(), 0.0);
        }
    }
    res.mu.w = cand;
    res.iterations = it;
    res.converged = done;

    bool check = diagnose == ReducibilityDiagnosis::kOn ||
                 (diagnose == ReducibilityDiagnosis::kAuto && n <= 300000);
    if (check) {
        auto scc = strongly_connected_components(n, P.row_ptr, P.col);
        res.reducible = scc.n_terminal != 1;
    }
    return res;
}

double avg_log_2absx(double lo, double hi) {
    if (!(hi > lo)) throw std::invalid_argument("avg_log_2absx: empty interval");
    // antiderivative of log(2|x|) is x log(2|x|) - x, extended by 0 at x = 0
    auto F = [](double x) {
        if (x == 0.0) return 0.0;
        return x * std::log(2.0 * std::fabs(x)) - x;
    };
    return (F(hi) - F(lo)) / (hi - lo);
}

namespace {

// bottom right-singular direction as the perp of the top one (from J^T J)
void central_direction(const Jacobian& J, double& v0, double& v1) {
    double A = J.m00 * J.m00 + J.m10 * J.m10;
    double C = J.m01 * J.m01 + J.m11 * J.m11;
    double B = J.m00 * J.m01 + J.m10 * J.m11;
    double t = 0.5 * (A - C);
    double lmax = 0.5 * (A + C) + std::hypot(t, B);
    // eigenvector of the larger eigenvalue
    double e0, e1;
    if (std::fabs(lmax - C) >= std::fabs(lmax - A)) {
        e0 = lmax - C;
        e1 = B;
    } else {
        e0 = B;
        e1 = lmax - A;
    }
    double nn = std::hypot(e0, e1);
    if (nn == 0.0) {
        e0 = 1.0;
        e1 = 0.0;
        nn = 1.0;
    }
    v0 = -e1 / nn;
    v1 = e0 / nn;
}

}  // namespace

MeasureExponents measure_exponents(const MapParams& mp, const Grid& grid,
                                   const MeasureOnGrid& mu, int samples_per_cell,
                                   std::uint64_t rng_seed, int threads) {
    if (static_cast<std::int64_t>(mu.w.size()) != grid.size())
        throw std::invalid_argument("measure_exponents: measure does not match grid");
    const std::int64_t n = grid.size();
    const std::int64_t nx = grid.n_x();
    const int spc = samples_per_cell;
    std::vector<double> cell_u(n, 0.0), cell_rem(n, 0.0);

    parallel_for(n, threads, [&](std::int64_t cell) {
        if (mu.w[cell] == 0.0) return;
        CellSampler cs(seed_stream(rng_seed ^ 0x9e3779b97f4a7c15ULL,
                                   static_cast<std::uint64_t>(cell)));
        std::int64_t it = cell / nx;
        double xlo, xhi;
        grid.x_bounds(cell, xlo, xhi);
        double su = 0.0, srem = 0.0;
        for (int i = 0; i < spc; ++i) {
            double u, v;
            cs.offsets(i, u, v);
            PhasePoint p{(static_cast<double>(it) + u) / grid.n_theta,
                         xlo + v * (xhi - xlo)};
            Jacobian J = jacobian(mp, p);
            su += std::log(J.smax());
            double v0, v1;
            central_direction(J, v0, v1);
            double w0 = J.m00 * v0 + J.m01 * v1;
            double w1 = J.m10 * v0 + J.m11 * v1;
            // log ||J e_c|| - log(2|x|): bounded through the critical line
            double central = std::hypot(w0, w1);
            srem += std::log(central / (2.0 * std::fabs(p.x)));
        }
        cell_u[cell] = su / spc;
        cell_rem[cell] = srem / spc;
    });

    MeasureExponents me;
    double logd = std::log(static_cast<double>(mp.d));
    for (std::int64_t cell = 0; cell < n; ++cell) {
        double w = mu.w[cell];
        if (w == 0.0) continue;
        double xlo, xhi;
        grid.x_bounds(cell, xlo, xhi);
        double base = avg_log_2absx(xlo, xhi);
        me.lambda_u += w * cell_u[cell];
        me.lambda_c += w * (base + cell_rem[cell]);
        me.log_det_avg += w * (base + logd);
    }
    return me;
}

double entropy_pesin(const MeasureExponents& me) {
    double h = 0.0;
    if (me.lambda_u > 0.0) h += me.lambda_u;
    if (me.lambda_c > 0.0) h += me.lambda_c;
    return h;
}

bool k_membership(const MeasureExponents& me, const ThermoConstants& tc) {
    if (!(tc.zeta > 0.0))
        throw std::runtime_error(
            "k_membership: zeta <= 0, the exponent threshold zeta/4 is undefined; "
            "see the c0 configuration caveat");
    return me.lambda_c > 0.25 * tc.zeta;
}

MeasureOnGrid coarsen_measure(const Grid& fine, const MeasureOnGrid& mu,
                              const Grid& coarse) {
    if (static_cast<std::int64_t>(mu.w.size()) != fine.size())
        throw std::invalid_argument("coarsen_measure: measure does not match grid");
    MeasureOnGrid out;
    out.w.assign(coarse.size(), 0.0);
    for (std::int64_t cell = 0; cell < fine.size(); ++cell) {
        if (mu.w[cell] == 0.0) continue;
        out.w[coarse.cell_of(fine.center(cell))] += mu.w[cell];
    }
    return out;
}

double tv_distance(const MeasureOnGrid& a, const MeasureOnGrid& b) {
    if (a.w.size() != b.w.size())
        throw std::invalid_argument("tv_distance: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.w.size(); ++i) s += std::fabs(a.w[i] - b.w[i]);
    return 0.5 * s;
}

}  // namespace viana
