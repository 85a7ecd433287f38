#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vianalab/exponents.hpp"
#include "vianalab/map.hpp"
#include "vianalab/ulam.hpp"

namespace viana {

// Potential values, piecewise constant on grid cells (or abstract states).
struct PotentialSpec {
    std::vector<double> phi;

    double oscillation() const;
    static PotentialSpec zero(std::int64_t n) { return {std::vector<double>(n, 0.0)}; }
    // phi(cell) = amplitude * sin(2 pi theta_center)
    static PotentialSpec sin_theta(const Grid& grid, double amplitude);
};

// oscillation(phi) < zeta/2, strictly. Throws when zeta <= 0.
bool nearly_constant_check(const PotentialSpec& phi, const ThermoConstants& tc);

// 0/1 adjacency with a per-state potential; the weighted matrix is
// M[i][j] = A[i][j] * exp(phi[j]).
struct MarkovModel {
    std::int64_t n = 0;
    std::vector<std::int64_t> row_ptr;
    std::vector<std::int32_t> col;
    std::vector<double> phi;
    bool strongly_connected = false;

    std::int64_t edges() const { return static_cast<std::int64_t>(col.size()); }

    // A[i][j] = 1 iff P[i][j] > cut
    static MarkovModel from_transition(const TransitionMatrix& P, double cut,
                                       const PotentialSpec& phi);
    static MarkovModel full_shift(int n_symbols, std::vector<double> phi = {});
    static MarkovModel golden_mean();

    // Restriction to the largest strongly connected component; node_map (when
    // given) receives the original state index of each restricted state.
    MarkovModel largest_scc(std::vector<std::int64_t>* node_map = nullptr) const;
};

struct PressureResult {
    double log_rho = 0.0;
    double residual = 0.0;  // Collatz-Wielandt bracket width at return
    std::int64_t iterations = 0;
    bool converged = false;
    bool reducible_warning = false;
};

// log of the spectral radius of the phi-weighted adjacency, by shifted power
// iteration with Collatz-Wielandt bounds. Throws on an empty edge set.
PressureResult pressure(const MarkovModel& model, double tol = 1e-12,
                        std::int64_t max_iter = 200000);

struct GibbsResult {
    double pressure = 0.0;
    std::vector<double> right;       // Perron eigenvectors, positive
    std::vector<double> left;
    std::vector<double> stationary;  // state marginal pi
    double entropy = 0.0;            // of the stochasticized chain
    double phi_integral = 0.0;
    double identity_residual = 0.0;  // |entropy + phi_integral - pressure|
    bool converged = false;
};

// Stationary Markov measure from the Perron eigenvectors (Parry construction
// when phi = 0); attains the finite-model variational principle.
GibbsResult gibbs_measure(const MarkovModel& model, double tol = 1e-12,
                          std::int64_t max_iter = 200000);

struct MmeOptions {
    double cut = -1.0;       // < 0: 1/(4 * samples_per_cell)
    double lambda0 = 0.01;   // hyperbolicity floor
    int samples_per_cell = 64;  // for measure_exponents
    double tol = 1e-11;
    std::uint64_t rng_seed = 1;
    int threads = 0;
};

struct MmeReport {
    PressureResult pressure;
    double entropy = 0.0;
    double phi_integral = 0.0;
    double identity_residual = 0.0;
    MeasureExponents exponents;
    bool k_member = false;
    bool hyperbolic = false;  // min(lambda_u, lambda_c) > lambda0
    bool nearly_constant = false;
    MeasureOnGrid measure;    // Gibbs state marginal pushed to the full grid
    std::int64_t scc_states = 0;
    std::int64_t total_states = 0;
};

// Equilibrium-state pipeline: threshold the Ulam matrix to a Markov model,
// take its Gibbs/Parry measure, push the state marginal back to the grid and
// measure exponents and membership flags.
MmeReport mme_candidate(const MapParams& mp, const Grid& grid, const TransitionMatrix& P,
                        const PotentialSpec& phi, const ThermoConstants& tc,
                        const MmeOptions& opt = {});

struct GapCandidate {
    std::string name;
    double value = 0.0;  // entropy + integral of phi
    double lambda_c = 0.0;
};

struct GapRow {
    std::string name;
    double value = 0.0;
    double lambda_c = 0.0;
    bool in_k = false;
    double margin = 0.0;  // best value - value, for non-K candidates
    bool ok = true;       // margin >= kappa0
};

struct GapReport {
    double best_value = 0.0;
    std::string best_name;
    double kappa0 = 0.0;
    std::vector<GapRow> rows;
    bool all_ok = true;
};

// Every candidate outside K (lambda_c <= zeta/4) must trail the best candidate
// by at least kappa0 = (1/4) log d. Report-only.
GapReport gap_check(const std::vector<GapCandidate>& candidates, const ThermoConstants& tc);

struct PeriodicOrbit {
    int period = 0;
    std::vector<double> xs;  // orbit on the invariant fiber theta = 0
    double lambda_c = 0.0;   // average of log(2|x_j|)
    double lambda_u = 0.0;   // log d
    double min_dist = 0.0;   // min_j |x_j|
};

// Periodic orbits of the quadratic fiber map over the fixed point theta = 0
// (b(0) = 0, so the fiber dynamics is x -> a0 - x^2 for every coupling).
// Sorted by lambda_c ascending; orbits through x = 0 are skipped.
std::vector<PeriodicOrbit> find_fiber_periodic_orbits(const MapParams& mp, int max_period);

// Atomic candidate from a periodic orbit: entropy 0, value = orbit average of
// phi over the fiber cells.
GapCandidate atomic_candidate(const PeriodicOrbit& po, const Grid& grid,
                              const PotentialSpec& phi, const std::string& name);

}  // namespace viana
