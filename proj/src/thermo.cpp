#include "vianalab/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "vianalab/scc.hpp"

namespace viana {

double PotentialSpec::oscillation() const {
    if (phi.empty()) return 0.0;
    auto [lo, hi] = std::minmax_element(phi.begin(), phi.end());
    return *hi - *lo;
}

PotentialSpec PotentialSpec::sin_theta(const Grid& grid, double amplitude) {
    PotentialSpec ps;
    ps.phi.resize(grid.size());
    for (std::int64_t c = 0; c < grid.size(); ++c)
        ps.phi[c] = amplitude * std::sin(2.0 * kPi * grid.center(c).theta);
    return ps;
}

bool nearly_constant_check(const PotentialSpec& phi, const ThermoConstants& tc) {
    if (!(tc.zeta > 0.0))
        throw std::runtime_error(
            "nearly_constant_check: zeta <= 0 so the oscillation bound zeta/2 is "
            "empty; raise c0 (see the exponent-floor configuration caveat)");
    for (double v : phi.phi)
        if (!std::isfinite(v))
            throw std::invalid_argument("nearly_constant_check: potential not finite");
    return phi.oscillation() < 0.5 * tc.zeta;
}

MarkovModel MarkovModel::from_transition(const TransitionMatrix& P, double cut,
                                         const PotentialSpec& phi) {
    if (static_cast<std::int64_t>(phi.phi.size()) != P.n)
        throw std::invalid_argument("MarkovModel: potential size mismatch");
    MarkovModel m;
    m.n = P.n;
    m.phi = phi.phi;
    m.row_ptr.assign(P.n + 1, 0);
    for (std::int64_t i = 0; i < P.n; ++i) {
        for (std::int64_t e = P.row_ptr[i]; e < P.row_ptr[i + 1]; ++e)
            if (P.val[e] > cut) ++m.row_ptr[i + 1];
    }
    for (std::int64_t i = 0; i < P.n; ++i) m.row_ptr[i + 1] += m.row_ptr[i];
    m.col.resize(m.row_ptr[P.n]);
    std::int64_t at = 0;
    for (std::int64_t i = 0; i < P.n; ++i)
        for (std::int64_t e = P.row_ptr[i]; e < P.row_ptr[i + 1]; ++e)
            if (P.val[e] > cut) m.col[at++] = P.col[e];
    auto scc = strongly_connected_components(m.n, m.row_ptr, m.col);
    m.strongly_connected = scc.n_comp == 1;
    return m;
}

MarkovModel MarkovModel::full_shift(int n_symbols, std::vector<double> phi) {
    if (n_symbols < 1) throw std::invalid_argument("full_shift: n_symbols >= 1");
    MarkovModel m;
    m.n = n_symbols;
    if (phi.empty()) phi.assign(n_symbols, 0.0);
    if (static_cast<int>(phi.size()) != n_symbols)
        throw std::invalid_argument("full_shift: potential size mismatch");
    m.phi = std::move(phi);
    m.row_ptr.resize(n_symbols + 1);
    m.col.resize(static_cast<std::int64_t>(n_symbols) * n_symbols);
    for (int i = 0; i <= n_symbols; ++i)
        m.row_ptr[i] = static_cast<std::int64_t>(i) * n_symbols;
    for (int i = 0; i < n_symbols; ++i)
        for (int j = 0; j < n_symbols; ++j)
            m.col[static_cast<std::int64_t>(i) * n_symbols + j] = j;
    m.strongly_connected = true;
    return m;
}

MarkovModel MarkovModel::golden_mean() {
    MarkovModel m;
    m.n = 2;
    m.phi = {0.0, 0.0};
    m.row_ptr = {0, 2, 3};
    m.col = {0, 1, 0};
    m.strongly_connected = true;
    return m;
}

MarkovModel MarkovModel::largest_scc(std::vector<std::int64_t>* node_map) const {
    auto scc = strongly_connected_components(n, row_ptr, col);
    std::int32_t keep = scc.largest;
    std::vector<std::int64_t> old_of;
    std::vector<std::int64_t> new_of(n, -1);
    for (std::int64_t v = 0; v < n; ++v) {
        if (scc.comp[v] == keep) {
            new_of[v] = static_cast<std::int64_t>(old_of.size());
            old_of.push_back(v);
        }
    }
    MarkovModel sub;
    sub.n = static_cast<std::int64_t>(old_of.size());
    sub.row_ptr.assign(sub.n + 1, 0);
    sub.phi.resize(sub.n);
    for (std::int64_t s = 0; s < sub.n; ++s) {
        std::int64_t v = old_of[s];
        sub.phi[s] = phi[v];
        for (std::int64_t e = row_ptr[v]; e < row_ptr[v + 1]; ++e)
            if (new_of[col[e]] >= 0) ++sub.row_ptr[s + 1];
    }
    for (std::int64_t s = 0; s < sub.n; ++s) sub.row_ptr[s + 1] += sub.row_ptr[s];
    sub.col.resize(sub.row_ptr[sub.n]);
    std::int64_t at = 0;
    for (std::int64_t s = 0; s < sub.n; ++s) {
        std::int64_t v = old_of[s];
        for (std::int64_t e = row_ptr[v]; e < row_ptr[v + 1]; ++e)
            if (new_of[col[e]] >= 0) sub.col[at++] = static_cast<std::int32_t>(new_of[col[e]]);
    }
    sub.strongly_connected = true;
    if (node_map) *node_map = std::move(old_of);
    return sub;
}

namespace {

// (M v)_i = sum_j A_ij e^{phi_j} v_j
void apply_weighted(const MarkovModel& m, const std::vector<double>& expphi,
                    const std::vector<double>& v, std::vector<double>& out) {
    for (std::int64_t i = 0; i < m.n; ++i) {
        double acc = 0.0;
        for (std::int64_t e = m.row_ptr[i]; e < m.row_ptr[i + 1]; ++e)
            acc += expphi[m.col[e]] * v[m.col[e]];
        out[i] = acc;
    }
}

void apply_weighted_transpose(const MarkovModel& m, const std::vector<double>& expphi,
                              const std::vector<double>& v, std::vector<double>& out) {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::int64_t i = 0; i < m.n; ++i)
        for (std::int64_t e = m.row_ptr[i]; e < m.row_ptr[i + 1]; ++e)
            out[m.col[e]] += expphi[m.col[e]] * v[i];
}

struct PerronVector {
    std::vector<double> v;
    double rho_lo = 0.0, rho_hi = 0.0;
    std::int64_t iterations = 0;
    bool converged = false;
};

// Shifted power iteration: the Perron vector of M + sI equals that of M, and
// the shift removes periodicity. Collatz-Wielandt bounds on M certify rho.
template <class Apply>
PerronVector perron(const MarkovModel& m, Apply&& apply, double tol,
                    std::int64_t max_iter) {
    std::vector<double> expphi(m.n);
    double s = 0.0;
    for (std::int64_t i = 0; i < m.n; ++i) expphi[i] = std::exp(m.phi[i]);
    for (std::int64_t i = 0; i < m.n; ++i) {
        double row = 0.0;
        for (std::int64_t e = m.row_ptr[i]; e < m.row_ptr[i + 1]; ++e)
            row += expphi[m.col[e]];
        s = std::max(s, row);
    }
    PerronVector pv;
    pv.v.assign(m.n, 1.0);
    std::vector<double> w(m.n);
    for (pv.iterations = 1; pv.iterations <= max_iter; ++pv.iterations) {
        apply(m, expphi, pv.v, w);
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        for (std::int64_t i = 0; i < m.n; ++i) {
            double r = w[i] / pv.v[i];
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
        pv.rho_lo = lo;
        pv.rho_hi = hi;
        // next iterate of M + sI, sup-normalized
        double mx = 0.0;
        for (std::int64_t i = 0; i < m.n; ++i) {
            w[i] += s * pv.v[i];
            mx = std::max(mx, w[i]);
        }
        for (std::int64_t i = 0; i < m.n; ++i) pv.v[i] = w[i] / mx;
        if (hi - lo <= tol * std::max(1.0, hi)) {
            pv.converged = true;
            break;
        }
    }
    return pv;
}

}  // namespace

PressureResult pressure(const MarkovModel& model, double tol, std::int64_t max_iter) {
    if (model.edges() == 0) throw std::invalid_argument("pressure: model has no edges");
    for (std::int64_t i = 0; i < model.n; ++i)
        if (model.row_ptr[i + 1] == model.row_ptr[i])
            throw std::invalid_argument(
                "pressure: state without outgoing edges; restrict to a strongly "
                "connected component first");
    auto pv = perron(model, apply_weighted, tol, max_iter);
    PressureResult pr;
    pr.log_rho = std::log(0.5 * (pv.rho_lo + pv.rho_hi));
    pr.residual = pv.rho_hi - pv.rho_lo;
    pr.iterations = pv.iterations;
    pr.converged = pv.converged;
    pr.reducible_warning = !model.strongly_connected;
    return pr;
}

GibbsResult gibbs_measure(const MarkovModel& model, double tol, std::int64_t max_iter) {
    PressureResult pr = pressure(model, tol, max_iter);
    auto right = perron(model, apply_weighted, tol, max_iter);
    auto left = perron(model, apply_weighted_transpose, tol, max_iter);
    if (!right.converged || !left.converged)
        throw std::runtime_error("gibbs_measure: Perron eigenvector iteration did not converge");

    GibbsResult g;
    g.pressure = pr.log_rho;
    g.converged = pr.converged;
    g.right = right.v;
    g.left = left.v;

    const double rho = std::exp(pr.log_rho);
    std::vector<double> expphi(model.n);
    for (std::int64_t i = 0; i < model.n; ++i) expphi[i] = std::exp(model.phi[i]);

    g.stationary.resize(model.n);
    double z = 0.0;
    for (std::int64_t i = 0; i < model.n; ++i) {
        g.stationary[i] = g.left[i] * g.right[i];
        z += g.stationary[i];
    }
    for (double& v : g.stationary) v /= z;

    // p_ij = A_ij e^{phi_j} r_j / (rho r_i)
    double h = 0.0, integral = 0.0;
    for (std::int64_t i = 0; i < model.n; ++i) {
        double hi = 0.0;
        for (std::int64_t e = model.row_ptr[i]; e < model.row_ptr[i + 1]; ++e) {
            std::int32_t j = model.col[e];
            double p = expphi[j] * g.right[j] / (rho * g.right[i]);
            if (p > 0.0) hi -= p * std::log(p);
        }
        h += g.stationary[i] * hi;
    }
    for (std::int64_t j = 0; j < model.n; ++j) integral += g.stationary[j] * model.phi[j];
    g.entropy = h;
    g.phi_integral = integral;
    g.identity_residual = std::fabs(g.entropy + g.phi_integral - g.pressure);
    return g;
}

MmeReport mme_candidate(const MapParams& mp, const Grid& grid, const TransitionMatrix& P,
                        const PotentialSpec& phi, const ThermoConstants& tc,
                        const MmeOptions& opt) {
    if (static_cast<std::int64_t>(phi.phi.size()) != grid.size())
        throw std::invalid_argument("mme_candidate: potential does not match grid");
    MmeReport rep;
    rep.nearly_constant = phi.oscillation() == 0.0 ? true : nearly_constant_check(phi, tc);
    if (!rep.nearly_constant)
        throw std::invalid_argument("mme_candidate: potential is not nearly constant");

    double cut = opt.cut >= 0.0 ? opt.cut : 1.0 / (4.0 * P.samples_per_cell);
    MarkovModel model = MarkovModel::from_transition(P, cut, phi);
    rep.total_states = model.n;
    std::vector<std::int64_t> node_map;
    MarkovModel sub = model.largest_scc(&node_map);
    rep.scc_states = sub.n;

    GibbsResult g = gibbs_measure(sub, opt.tol);
    rep.pressure.log_rho = g.pressure;
    rep.pressure.converged = g.converged;
    rep.pressure.reducible_warning = !model.strongly_connected;
    rep.entropy = g.entropy;
    rep.phi_integral = g.phi_integral;
    rep.identity_residual = g.identity_residual;

    rep.measure.w.assign(grid.size(), 0.0);
    for (std::int64_t s = 0; s < sub.n; ++s) rep.measure.w[node_map[s]] = g.stationary[s];
    rep.exponents = measure_exponents(mp, grid, rep.measure, opt.samples_per_cell,
                                      opt.rng_seed, opt.threads);
    rep.k_member = k_membership(rep.exponents, tc);
    rep.hyperbolic =
        std::min(rep.exponents.lambda_u, rep.exponents.lambda_c) > opt.lambda0;
    return rep;
}

GapReport gap_check(const std::vector<GapCandidate>& candidates, const ThermoConstants& tc) {
    if (candidates.size() < 2)
        throw std::invalid_argument("gap_check: need at least two candidates");
    if (!(tc.zeta > 0.0))
        throw std::runtime_error("gap_check: zeta <= 0, membership threshold undefined");
    GapReport rep;
    rep.kappa0 = tc.kappa0;
    std::size_t best = 0;
    for (std::size_t i = 1; i < candidates.size(); ++i)
        if (candidates[i].value > candidates[best].value) best = i;
    rep.best_value = candidates[best].value;
    rep.best_name = candidates[best].name;

    for (std::size_t i = 0; i < candidates.size(); ++i) {
        GapRow row;
        row.name = candidates[i].name;
        row.value = candidates[i].value;
        row.lambda_c = candidates[i].lambda_c;
        row.in_k = candidates[i].lambda_c > 0.25 * tc.zeta;
        row.margin = rep.best_value - row.value;
        if (!row.in_k && i != best) row.ok = row.margin >= tc.kappa0;
        rep.rows.push_back(row);
        rep.all_ok = rep.all_ok && row.ok;
    }
    return rep;
}

std::vector<PeriodicOrbit> find_fiber_periodic_orbits(const MapParams& mp, int max_period) {
    if (max_period < 1) throw std::invalid_argument("find_fiber_periodic_orbits: period >= 1");
    if (max_period > 24) throw std::invalid_argument("find_fiber_periodic_orbits: period <= 24");
    auto h = [&](double x) { return mp.a0 - x * x; };

    std::vector<PeriodicOrbit> out;
    std::vector<double> seen;  // representative min-x of orbits already found
    for (int p = 1; p <= max_period; ++p) {
        // one inverse-branch composition per sign itinerary: backward iteration
        // converges to the unique periodic point with that itinerary (no
        // attracting cycles at a Misiurewicz-type parameter), and itineraries
        // through the fold x ~ 0 are found where forward root scans fold over
        for (std::uint64_t word = 0; word < (1ULL << p); ++word) {
            double x = 0.0;
            bool valid = true;
            for (int it = 0; it < 200 && valid; ++it) {
                double y = x;
                for (int k = p - 1; k >= 0; --k) {
                    double rad = mp.a0 - y;
                    if (rad < 0.0) {
                        valid = false;
                        break;
                    }
                    y = (word >> k) & 1 ? std::sqrt(rad) : -std::sqrt(rad);
                }
                if (!valid) break;
                if (it > 30 && std::fabs(y - x) < 1e-14) {
                    x = y;
                    break;
                }
                x = y;
            }
            if (!valid) continue;

            PeriodicOrbit po;
            po.period = p;
            po.lambda_u = std::log(static_cast<double>(mp.d));
            double xx = x, acc = 0.0, mind = std::numeric_limits<double>::infinity();
            bool degenerate = false;
            for (int k = 0; k < p; ++k) {
                // the backward composition realizes the word reversed, so the
                // forward sign of xs[k] is bit k
                bool want_pos = (word >> k) & 1;
                if ((xx >= 0.0) != want_pos) degenerate = true;  // itinerary mismatch
                po.xs.push_back(xx);
                mind = std::min(mind, std::fabs(xx));
                if (xx == 0.0) degenerate = true;
                acc += std::log(2.0 * std::fabs(xx));
                xx = h(xx);
            }
            if (degenerate || std::fabs(xx - x) > 1e-8) continue;
            po.lambda_c = acc / p;
            po.min_dist = mind;
            double key = *std::min_element(po.xs.begin(), po.xs.end());
            bool dup = false;
            for (double s : seen)
                if (std::fabs(s - key) < 1e-9) dup = true;
            if (!dup) {
                seen.push_back(key);
                out.push_back(std::move(po));
            }
        }
    }
    // Backward iteration only reaches repelling cycles. When the fiber map has
    // an attracting cycle, the critical orbit converges to it: detect it
    // forward and append.
    {
        double x = 0.0;
        for (int i = 0; i < 200000; ++i) x = h(x);
        std::vector<double> tail(2 * max_period);
        for (auto& t : tail) {
            t = x;
            x = h(x);
        }
        for (int p = 1; p <= max_period; ++p) {
            if (std::fabs(tail[p] - tail[0]) > 1e-10) continue;
            PeriodicOrbit po;
            po.period = p;
            po.lambda_u = std::log(static_cast<double>(mp.d));
            double acc = 0.0, mind = std::numeric_limits<double>::infinity();
            bool degenerate = false;
            for (int k = 0; k < p; ++k) {
                po.xs.push_back(tail[k]);
                mind = std::min(mind, std::fabs(tail[k]));
                if (tail[k] == 0.0) degenerate = true;
                acc += std::log(2.0 * std::fabs(tail[k]));
            }
            if (degenerate) break;
            po.lambda_c = acc / p;
            po.min_dist = mind;
            double key = *std::min_element(po.xs.begin(), po.xs.end());
            bool dup = false;
            for (double s : seen)
                if (std::fabs(s - key) < 1e-9) dup = true;
            if (!dup) out.push_back(std::move(po));
            break;
        }
    }

    std::sort(out.begin(), out.end(),
              [](const PeriodicOrbit& a, const PeriodicOrbit& b) {
                  return a.lambda_c < b.lambda_c;
              });
    return out;
}

GapCandidate atomic_candidate(const PeriodicOrbit& po, const Grid& grid,
                              const PotentialSpec& phi, const std::string& name) {
    GapCandidate gc;
    gc.name = name;
    gc.lambda_c = po.lambda_c;
    double integral = 0.0;
    for (double x : po.xs) integral += phi.phi[grid.cell_of({0.0, x})];
    integral /= static_cast<double>(po.xs.size());
    gc.value = 0.0 + integral;  // atomic measure on a periodic orbit has zero entropy
    return gc;
}

}  // namespace viana
