// Acceptance suite: one line per criterion, nonzero exit when any fails.
// argv[1] (optional) is the CLI binary, used by the reproducibility check.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"
#include "vianalab/exponents.hpp"
#include "vianalab/hyperbolic_times.hpp"
#include "vianalab/orbit.hpp"
#include "vianalab/parallel.hpp"
#include "vianalab/rng.hpp"
#include "vianalab/thermo.hpp"
#include "vianalab/ulam.hpp"

using namespace viana;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int id, bool ok, const std::string& what) {
    std::printf("[%s] criterion %2d: %s\n", ok ? "PASS" : "FAIL", id, what.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

// ---------------------------------------------------------------------------

void criterion_1_exactness() {
    Stopwatch sw;
    bool ok = true;
    std::string detail;
    for (int d : {2, 16}) {
        MapParams mp = MapParams::preset(0.0, d);
        ExponentEstimate est = lyapunov_qr(mp, {0.37, 0.41}, 1000000);
        double err = std::fabs(est.lambda_u - std::log(double(d)));
        ok = ok && err <= 1e-6;
        detail += " d=" + std::to_string(d) + " err=" + fmt(err);
    }
    double t = sw.seconds();
    ok = ok && t < 5.0;
    report(1, ok, "alpha=0 exactness: lambda_u = log d within 1e-6 over 1e6 iterates;" +
                      detail + "; " + fmt(t) + "s (< 5s)");
}

void criterion_2_conformal() {
    Stopwatch sw;
    MapParams mp = MapParams::preset(0.01);
    const int orbits = 100;
    std::vector<double> lu(orbits);
    parallel_for(orbits, 0, [&](std::int64_t i) {
        Rng rng(seed_stream(201, i));
        PhasePoint p0{rng.uniform01(), rng.uniform(-mp.beta, mp.beta)};
        lu[i] = lyapunov_qr(mp, p0, 100000).lambda_u;
    });
    int inside = 0;
    double lo = std::log(16.0 - 0.05), hi = std::log(16.0 + 0.05);
    for (double v : lu)
        if (lo <= v && v <= hi) ++inside;
    double t = sw.seconds();
    report(2, inside == orbits && t < 120.0,
           "conformal bound at alpha=0.01, eps=0.05: " + std::to_string(inside) +
               "/100 orbits inside [log(d-eps), log(d+eps)]; " + fmt(t) + "s (< 120s)");
}

double criterion_3_positive_exponents(double* c0_out) {
    Stopwatch sw;
    MapParams mp = MapParams::preset(0.01);
    ExponentSurvey sv = exponent_survey(mp, 200, 1000000, 301, 0);
    *c0_out = sv.c0_empirical;
    double t = sw.seconds();
    report(3, sv.frac_positive >= 0.99 && t < 600.0,
           "finite-time lambda_c > 0 for " + fmt(100.0 * sv.frac_positive) +
               "% of 200 points at n=1e6 (need >= 99%); empirical c0 = " +
               fmt(sv.c0_empirical) + "; " + fmt(t) + "s (< 600s)");
    return sv.frac_positive;
}

void criterion_4_detect_exact() {
    bool ok = true;
    std::int64_t checked = 0;

    // synthetic series, including exact-equality and burst structures
    Rng rng(404);
    for (int trial = 0; trial < 500 && ok; ++trial) {
        const int N = 1000;
        double sigma = rng.uniform(0.7, 0.995);
        double ls = std::log(sigma);
        std::vector<double> u(N), dist(N);
        int kind = trial % 4;
        for (int j = 0; j < N; ++j) {
            switch (kind) {
                case 0:  // generic
                    u[j] = ls * rng.uniform(-0.5, 2.5);
                    dist[j] = rng.uniform01() < 0.05 ? rng.uniform(1e-7, 1e-2)
                                                     : rng.uniform(0.05, 1.5);
                    break;
                case 1:  // exact equality of the contraction condition
                    u[j] = ls;
                    dist[j] = 1.0;
                    break;
                case 2:  // bursts over a contracting background
                    u[j] = rng.uniform01() < 0.02 ? -2.0 * ls : 1.5 * ls;
                    dist[j] = rng.uniform(0.2, 1.0);
                    break;
                default:  // near-critical passes
                    u[j] = 1.2 * ls;
                    dist[j] = rng.uniform01() < 0.2 ? rng.uniform(1e-9, 1e-3)
                                                    : rng.uniform(0.3, 1.2);
            }
        }
        OrbitScalars rec;
        rec.log_inv_norm = std::move(u);
        rec.dist = std::move(dist);
        rec.log_abs_det.assign(N, 0.0);
        HTParams ht = HTParams::create(sigma, rng.uniform(0.001, 0.2),
                                       rng.uniform(0.05, 0.45));
        ok = detect(rec, ht).times == detect_bruteforce(rec, ht).times;
        ++checked;
    }

    // real orbits at the standard preset constants
    MapParams mp = MapParams::preset(0.01);
    ThermoConstants tc = ThermoConstants::derive(1.2, 0.05, 16);
    HTParams ht = HTParams::create(tc.sigma_or_throw(), 1.0 / 64.0, 0.25);
    for (int trial = 0; trial < 500 && ok; ++trial) {
        Rng orng(seed_stream(405, trial));
        PhasePoint p0{orng.uniform01(), orng.uniform(-mp.beta, mp.beta)};
        OrbitScalars rec = orbit(mp, p0, 1000);
        ok = detect(rec, ht).times == detect_bruteforce(rec, ht).times;
        ++checked;
    }
    report(4, ok, "detect() equals O(N^2) brute force on " + std::to_string(checked) +
                      "/1000 orbits of length 1e3, exactly");
}

void criterion_5_expansivity() {
    MapParams mp = MapParams::preset(0.01);
    ThermoConstants tc = ThermoConstants::derive(1.2, 0.05, 16);
    double sigma = tc.sigma_or_throw();
    PhasePoint p0{0.613, 0.254};
    OrbitScalars rec = orbit(mp, p0, 30000);
    auto prof = slow_recurrence_profile(rec.dist, 0.1);
    if (!prof.delta) {
        report(5, false, "expansivity: no truncation scale found");
        return;
    }
    HTParams ht = HTParams::create(sigma, *prof.delta, 0.25);
    HTReport times = detect(rec, ht);
    std::vector<std::int64_t> probe;
    for (std::int64_t t : times.times) {
        if (t > 1500) break;
        probe.push_back(t);
        if (probe.size() >= 5) break;
    }
    if (probe.empty()) {
        report(5, false, "expansivity: no hyperbolic times below the probe horizon");
        return;
    }
    double delta1 = estimate_delta1(mp, p0, probe, sigma, 40, 501);
    if (delta1 <= 0.0) {
        report(5, false, "expansivity: radius search failed");
        return;
    }
    std::int64_t instances = 0, violations = 0;
    std::int64_t idx = 0;
    for (std::int64_t t : times.times) {
        if (t > 2500) break;
        auto er = expansivity_check(mp, p0, t, sigma, 60, 0.5 * delta1,
                                    seed_stream(502, idx++), 0.05);
        instances += er.instances;
        violations += er.violations;
        if (instances >= 20000) break;
    }
    double frac = instances == 0
                      ? 0.0
                      : 1.0 - double(violations) / double(instances);
    report(5, instances >= 10000 && frac >= 0.99,
           "backward contraction sigma^{k/2} at radius delta1/2 = " + fmt(0.5 * delta1) +
               ": " + fmt(100.0 * frac) + "% of " + std::to_string(instances) +
               " (pair,k) instances (need >= 99% of >= 1e4)");
}

void criterion_6_slow_recurrence() {
    MapParams mp = MapParams::preset(0.01);
    const int orbits = 100;
    std::vector<char> found(orbits, 0);
    parallel_for(orbits, 0, [&](std::int64_t i) {
        Rng rng(seed_stream(601, i));
        PhasePoint p0{rng.uniform01(), rng.uniform(-mp.beta, mp.beta)};
        OrbitScalars rec = orbit(mp, p0, 1000000);
        auto prof = slow_recurrence_profile(rec.dist, 0.1);
        found[i] = prof.delta.has_value() ? 1 : 0;
    });
    int n_found = 0;
    for (char c : found) n_found += c;
    report(6, n_found >= 95,
           "slow recurrence at gamma=0.1: truncation scale found on " +
               std::to_string(n_found) + "/100 orbits of length 1e6 (need >= 95)");
}

struct UlamBundle {
    Grid grid;
    TransitionMatrix P;
    StationaryResult st;
};

UlamBundle build_bundle(const MapParams& mp, int n_theta, int n_x, std::uint64_t seed) {
    UlamBundle b{Grid::regular(mp.beta, n_theta, n_x, 0.05, 4), {}, {}};
    b.P = build_ulam(mp, b.grid, 64, seed, 0);
    b.st = stationary(b.P, 1e-10, 20000, 0, ReducibilityDiagnosis::kOff);
    return b;
}

void criterion_7_ulam(const MapParams& mp, const UlamBundle& coarse) {
    UlamBundle fine = build_bundle(mp, 512, 1024, 702);
    double tv_refine =
        tv_distance(coarsen_measure(fine.grid, fine.st.mu, coarse.grid), coarse.st.mu);

    // uncoupled factorization at 256x512
    MapParams m0 = MapParams::preset(0.0);
    UlamBundle u0 = build_bundle(m0, 256, 512, 703);
    TransitionMatrix Q = build_ulam_quadratic(m0.a0, u0.grid.x_edges, 256, 704);
    StationaryResult sq = stationary(Q, 1e-10, 20000);
    MeasureOnGrid product;
    product.w.resize(u0.grid.size());
    for (std::int64_t c = 0; c < u0.grid.size(); ++c)
        product.w[c] = sq.mu.w[c % u0.grid.n_x()] / double(u0.grid.n_theta);
    double tv_factor = tv_distance(u0.st.mu, product);

    bool ok = coarse.st.converged && fine.st.converged && sq.converged &&
              tv_refine <= 0.05 && tv_factor <= 0.05;
    report(7, ok,
           "Ulam convergence: refinement TV = " + fmt(tv_refine) +
               ", alpha=0 factorization TV = " + fmt(tv_factor) + " (both <= 0.05)");
}

void criterion_8_entropy_bound(const MapParams& mp, const UlamBundle& coarse, double c0) {
    MeasureExponents me = measure_exponents(mp, coarse.grid, coarse.st.mu, 64, 801, 0);
    double h = entropy_pesin(me);
    double rhs = std::log(16.0 - 0.05) + c0;
    bool ok = 1.02 * h >= rhs;
    report(8, ok,
           "SRB entropy bound: pesin entropy " + fmt(h) + " (x1.02) >= log(d-eps) + c0 = " +
               fmt(rhs));
}

void criterion_9_thermo_oracles() {
    bool ok = true;
    std::string detail;

    PressureResult full = pressure(MarkovModel::full_shift(16), 1e-13);
    double e1 = std::fabs(full.log_rho - std::log(16.0));
    ok = ok && e1 <= 1e-10;

    PressureResult gm = pressure(MarkovModel::golden_mean(), 1e-13);
    double e2 = std::fabs(gm.log_rho - std::log(0.5 * (1.0 + std::sqrt(5.0))));
    ok = ok && e2 <= 1e-10;

    std::vector<double> phi{0.2, -0.4, 0.1, 0.33, -0.05};
    double zsum = 0.0;
    for (double v : phi) zsum += std::exp(v);
    PressureResult pc = pressure(MarkovModel::full_shift(5, phi), 1e-13);
    double e3 = std::fabs(pc.log_rho - std::log(zsum));
    ok = ok && e3 <= 1e-10;

    double worst_identity = 0.0;
    for (std::uint64_t s = 0; s < 10; ++s) {
        MarkovModel m = testing::random_connected_model(50, 0.15, 0.5, 900 + s);
        GibbsResult g = gibbs_measure(m, 1e-13);
        worst_identity = std::max(worst_identity, g.identity_residual);
    }
    ok = ok && worst_identity <= 1e-8;

    double worst_dense = 0.0;
    for (std::uint64_t s = 0; s < 10; ++s) {
        MarkovModel m = testing::random_connected_model(3 + (s % 6), 0.4, 0.6, 950 + s);
        double oracle = testing::dense_log_spectral_radius(testing::dense_weighted(m));
        worst_dense = std::max(worst_dense,
                               std::fabs(pressure(m, 1e-13).log_rho - oracle));
    }
    ok = ok && worst_dense <= 1e-10;

    report(9, ok,
           "thermo oracles: |full16 - log 16| = " + fmt(e1) + ", |golden - log phi| = " +
               fmt(e2) + ", |locally-const - log sum| = " + fmt(e3) +
               ", max Gibbs residual = " + fmt(worst_identity) +
               ", max dense-oracle gap = " + fmt(worst_dense));
}

void criterion_10_equilibrium() {
    // period-3 window: the equilibrium candidate lives on the expanding
    // repeller while the attracting cycle supplies a genuine non-K competitor
    MapParams mp = MapParams::create(16, 1.76, 0.01, MapParams::default_beta(1.76, 0.01));
    ThermoConstants tc = ThermoConstants::derive(1.2, 0.05, 16);
    UlamBundle b = build_bundle(mp, 256, 512, 1001);

    PotentialSpec phi = PotentialSpec::zero(b.grid.size());
    MmeOptions opt;
    opt.lambda0 = 0.01;
    opt.rng_seed = 1002;
    MmeReport rep = mme_candidate(mp, b.grid, b.P, phi, tc, opt);

    MeasureExponents srb = measure_exponents(mp, b.grid, b.st.mu, 64, 1003, 0);
    double pesin = entropy_pesin(srb);

    std::vector<GapCandidate> cands;
    cands.push_back({"equilibrium", rep.entropy + rep.phi_integral, rep.exponents.lambda_c});
    cands.push_back({"srb_proxy", pesin, srb.lambda_c});
    auto orbits = find_fiber_periodic_orbits(mp, 12);
    for (std::size_t i = 0; i < orbits.size() && i < 3; ++i)
        cands.push_back(atomic_candidate(orbits[i], b.grid, phi,
                                         "periodic_p" + std::to_string(orbits[i].period)));
    GapReport gap = gap_check(cands, tc);
    bool has_non_k = false;
    for (const auto& row : gap.rows) has_non_k = has_non_k || !row.in_k;

    bool entropy_ok = rep.entropy >= pesin - 0.05;
    bool ok = entropy_ok && rep.k_member && rep.hyperbolic && rep.identity_residual <= 1e-8 &&
              gap.all_ok && has_non_k;
    report(10, ok,
           "equilibrium candidate: entropy " + fmt(rep.entropy) + " >= pesin " + fmt(pesin) +
               " - 0.05; lambda_c " + fmt(rep.exponents.lambda_c) + " > zeta/4 = " +
               fmt(0.25 * tc.zeta) + "; min exponent > 0.01; gap margins >= kappa0 = " +
               fmt(tc.kappa0) + " with a non-K competitor present");
}

void criterion_11_reproducibility(const char* cli) {
    if (!cli) {
        report(11, false, "reproducibility: CLI path not supplied");
        return;
    }
    fs::path dir = fs::temp_directory_path() / "vianalab_acceptance_repro";
    fs::remove_all(dir);
    fs::create_directories(dir);
    {
        std::ofstream cfg(dir / "cfg");
        cfg << "[map]\nalpha = 0.01\n[orbit]\nn = 20000\n"
            << "[exponents]\nn_points = 16\nn_iter = 20000\n"
            << "[recurrence]\nn = 50000\nn_orbits = 4\n";
    }
    auto run = [&](const std::string& sub) {
        std::string cmd = std::string(cli) + " " + sub + " --config " +
                          (dir / "cfg").string() + " --seed 99 --reproducible --out " +
                          (dir / "out").string() + " > /dev/null 2>&1";
        return WEXITSTATUS(std::system(cmd.c_str()));
    };
    bool ok = true;
    for (const std::string sub : {"exponents", "recurrence", "simulate"})
        ok = ok && run(sub) == 0;
    if (ok) {
        fs::copy(dir / "out", dir / "first", fs::copy_options::recursive);
        for (const std::string sub : {"exponents", "recurrence", "simulate"})
            ok = ok && run(sub) == 0;
    }
    if (ok) {
        // byte-compare every produced file between the two passes
        std::vector<fs::path> rel;
        for (auto& e : fs::recursive_directory_iterator(dir / "first"))
            if (e.is_regular_file()) rel.push_back(fs::relative(e.path(), dir / "first"));
        ok = !rel.empty();
        for (const auto& r : rel) {
            std::ifstream fa(dir / "out" / r, std::ios::binary);
            std::ifstream fb(dir / "first" / r, std::ios::binary);
            std::stringstream sa, sb;
            sa << fa.rdbuf();
            sb << fb.rdbuf();
            if (!fa || !fb || sa.str() != sb.str()) {
                ok = false;
                break;
            }
        }
    }
    report(11, ok, "identical config/seed with --reproducible: byte-identical outputs "
                   "across subcommands");
}

}  // namespace

int main(int argc, char** argv) {
    const char* cli = argc > 1 ? argv[1] : nullptr;

    criterion_1_exactness();
    criterion_2_conformal();
    double c0_emp = 0.0;
    criterion_3_positive_exponents(&c0_emp);
    criterion_4_detect_exact();
    criterion_5_expansivity();
    criterion_6_slow_recurrence();

    MapParams std_map = MapParams::preset(0.01);
    UlamBundle coarse = build_bundle(std_map, 256, 512, 701);
    criterion_7_ulam(std_map, coarse);
    criterion_8_entropy_bound(std_map, coarse, c0_emp);
    criterion_9_thermo_oracles();
    criterion_10_equilibrium();
    criterion_11_reproducibility(cli);

    if (g_failures == 0)
        std::printf("all acceptance criteria passed\n");
    else
        std::printf("%d acceptance criteria FAILED\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
