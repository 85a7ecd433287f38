#pragma once

// Test-side oracles, independent of the library implementations they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "vianalab/rng.hpp"
#include "vianalab/thermo.hpp"

namespace viana::testing {

// Spectral radius of a small dense nonnegative matrix by repeated squaring:
// log rho = sum_k 2^{-k} log s_k with s_k the max-norm of the running square.
// Entirely different algorithm from the library's power iteration.
inline double dense_log_spectral_radius(std::vector<std::vector<double>> A) {
    const std::size_t n = A.size();
    double acc = 0.0;
    for (int k = 1; k <= 80; ++k) {
        double s = 0.0;
        for (const auto& row : A)
            for (double v : row) s = std::max(s, v);
        acc += std::ldexp(std::log(s), 1 - k);  // 2^{1-k} log s_k
        for (auto& row : A)
            for (double& v : row) v /= s;
        std::vector<std::vector<double>> B(n, std::vector<double>(n, 0.0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t l = 0; l < n; ++l) {
                double a = A[i][l];
                if (a == 0.0) continue;
                for (std::size_t j = 0; j < n; ++j) B[i][j] += a * A[l][j];
            }
        A = std::move(B);
    }
    return acc;
}

inline std::vector<std::vector<double>> dense_weighted(const MarkovModel& m) {
    std::vector<std::vector<double>> A(m.n, std::vector<double>(m.n, 0.0));
    for (std::int64_t i = 0; i < m.n; ++i)
        for (std::int64_t e = m.row_ptr[i]; e < m.row_ptr[i + 1]; ++e)
            A[i][m.col[e]] = std::exp(m.phi[m.col[e]]);
    return A;
}

// Strongly connected random model: a Hamiltonian cycle plus random chords.
inline MarkovModel random_connected_model(std::int64_t n, double edge_prob,
                                          double phi_range, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::vector<std::int32_t>> adj(n);
    for (std::int64_t i = 0; i < n; ++i)
        adj[i].push_back(static_cast<std::int32_t>((i + 1) % n));
    for (std::int64_t i = 0; i < n; ++i)
        for (std::int64_t j = 0; j < n; ++j) {
            if (j == (i + 1) % n) continue;
            if (rng.uniform01() < edge_prob) adj[i].push_back(static_cast<std::int32_t>(j));
        }
    MarkovModel m;
    m.n = n;
    m.strongly_connected = true;
    m.row_ptr.assign(n + 1, 0);
    for (std::int64_t i = 0; i < n; ++i) {
        std::sort(adj[i].begin(), adj[i].end());
        m.row_ptr[i + 1] = m.row_ptr[i] + static_cast<std::int64_t>(adj[i].size());
        for (auto c : adj[i]) m.col.push_back(c);
    }
    m.phi.resize(n);
    for (auto& v : m.phi) v = rng.uniform(-phi_range, phi_range);
    return m;
}

// Birkhoff average of log(2|x|) for the quadratic factor x -> a0 - x^2.
inline double quadratic_exponent_oracle(double a0, double x0, std::int64_t n) {
    double x = x0, acc = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
        acc += std::log(2.0 * std::fabs(x));
        x = a0 - x * x;
    }
    return acc / static_cast<double>(n);
}

}  // namespace viana::testing
