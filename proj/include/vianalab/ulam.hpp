#pragma once

#include <cstdint>
#include <vector>

#include "vianalab/map.hpp"

namespace viana {

// Product grid over S^1 x [-beta, beta]. Theta cells are uniform; x cells are
// uniform outside a refinement band around the critical line and `refine`
// times finer inside it (band edges snapped to base cells so the partition
// stays exact). Cell id = theta_index * n_x + x_index.
struct Grid {
    int n_theta = 0;
    std::vector<double> x_edges;  // ascending, x_edges.front() = -beta, back() = beta
    double beta = 0.0;

    static Grid regular(double beta, int n_theta, int n_x, double band = 0.05,
                        int refine = 4);

    std::int64_t n_x() const { return static_cast<std::int64_t>(x_edges.size()) - 1; }
    std::int64_t size() const { return static_cast<std::int64_t>(n_theta) * n_x(); }

    std::int64_t theta_index(double theta) const {
        auto i = static_cast<std::int64_t>(theta * n_theta);
        return i < 0 ? 0 : (i >= n_theta ? n_theta - 1 : i);
    }
    std::int64_t x_index(double x) const;
    std::int64_t cell_of(const PhasePoint& p) const {
        return theta_index(p.theta) * n_x() + x_index(p.x);
    }
    PhasePoint center(std::int64_t cell) const;
    // x-cell bounds of a cell id
    void x_bounds(std::int64_t cell, double& lo, double& hi) const;
};

// Row-stochastic transition matrix in CSR layout; every row sums to 1 up to
// 1e-12 by construction.
struct TransitionMatrix {
    std::int64_t n = 0;
    std::vector<std::int64_t> row_ptr;
    std::vector<std::int32_t> col;
    std::vector<double> val;
    int samples_per_cell = 0;
};

struct MeasureOnGrid {
    std::vector<double> w;

    double total() const {
        double s = 0.0;
        for (double v : w) s += v;
        return s;
    }
    void normalize();
};

// P[i][j] = fraction of stratified sample points of cell i mapping into cell j.
// Deterministic given the seed, independent of the thread count.
TransitionMatrix build_ulam(const MapParams& mp, const Grid& grid, int samples_per_cell,
                            std::uint64_t rng_seed, int threads = 0);

// 1-D variant for the quadratic factor x -> a0 - x^2 on the same x partition.
TransitionMatrix build_ulam_quadratic(double a0, const std::vector<double>& x_edges,
                                      int samples_per_cell, std::uint64_t rng_seed);

struct StationaryResult {
    MeasureOnGrid mu;
    double residual = 0.0;  // ||mu P - mu||_1 at return
    std::int64_t iterations = 0;
    bool converged = false;
    bool reducible = false;  // more than one terminal communicating class
};

enum class ReducibilityDiagnosis { kAuto, kOn, kOff };

// Left fixed vector by power iteration with Cesaro averaging every 32 steps.
StationaryResult stationary(const TransitionMatrix& P, double tol = 1e-10,
                            std::int64_t max_iter = 20000, int threads = 0,
                            ReducibilityDiagnosis diagnose = ReducibilityDiagnosis::kAuto);

// Exact mean of log(2|x|) over [lo, hi] (the integrable singularity at x = 0
// is handled in closed form).
double avg_log_2absx(double lo, double hi);

struct MeasureExponents {
    double lambda_u = 0.0;     // integral of log s_max(Df)
    double lambda_c = 0.0;     // integral of log ||Df e_c||
    double log_det_avg = 0.0;  // integral of log|det Df| (closed form)
};

// Cell-sampled integrals of the log-derivative quantities against mu. Near the
// critical line the log(2|x|) part is integrated analytically and only the
// bounded remainder is sampled.
MeasureExponents measure_exponents(const MapParams& mp, const Grid& grid,
                                   const MeasureOnGrid& mu, int samples_per_cell,
                                   std::uint64_t rng_seed, int threads = 0);

// Sum of the positive exponents.
double entropy_pesin(const MeasureExponents& me);

// lambda_c(mu) > zeta/4. Throws when zeta <= 0 (constants not in the
// expanding regime).
struct ThermoConstants;
bool k_membership(const MeasureExponents& me, const ThermoConstants& tc);

// Push a fine-grid measure onto a coarser grid by cell centers.
MeasureOnGrid coarsen_measure(const Grid& fine, const MeasureOnGrid& mu,
                              const Grid& coarse);

// Total-variation distance (1/2 L1) between measures on the same grid.
double tv_distance(const MeasureOnGrid& a, const MeasureOnGrid& b);

}  // namespace viana
