// Shared fixtures for the unit and acceptance suites.

#pragma once

#include <random>

#include <Eigen/Eigenvalues>

#include "qbat/dynamics.hpp"
#include "qbat/errors.hpp"
#include "qbat/model.hpp"

namespace qbat::test {

// Blue reference configuration: strong coherence in both stations.
inline BatteryParams blue()
{
    BatteryParams p;
    p.eps = 0.1;
    p.eps_b = 0.4;
    p.eps_a = 1.5;
    p.r = 1.0;
    p.g = 1.0;
    p.p_h = 0.61;
    p.p_c = 0.97;
    p.T_c = 5.0;
    p.T_ell = 1.0;
    p.T_h = 6.36;
    p.tau = 0.95;
    return p;
}

// Grey reference configuration: blue with p_h = 0.9, p_c = 0.1, T_c = 0.1, T_h = 2.
inline BatteryParams grey()
{
    BatteryParams p = blue();
    p.p_h = 0.9;
    p.p_c = 0.1;
    p.T_c = 0.1;
    p.T_h = 2.0;
    return p;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Draw inside the sampling box used for dataset generation.
inline BatteryParams random_params(std::mt19937_64& rng)
{
    BatteryParams p;
    p.T_c = uniform(rng, 0.1, 7.0);
    p.T_h = uniform(rng, 0.1, 7.0);
    p.T_ell = uniform(rng, 0.1, 7.0);
    p.eps = uniform(rng, 0.01, 2.0);
    p.eps_b = p.eps + uniform(rng, 0.01, 2.0);
    p.eps_a = p.eps_b + uniform(rng, 0.01, 2.0);
    p.p_c = uniform(rng, 0.1, 1.0);
    p.p_h = uniform(rng, 0.1, 1.0);
    p.tau = uniform(rng, 0.01, 2.0);
    p.r = 1.0;
    p.g = 1.0;
    return p;
}

// The generator is unstable or has a non-physical steady state on a few
// percent of the box; those tuples are redrawn. rejected counts redraws.
inline bool physically_stable(const BatteryParams& p)
{
    Eigen::EigenSolver<Matrix5> solver(build_generator(p, 0.0).entries, false);
    for (int i = 0; i < 5; ++i) {
        if (solver.eigenvalues()(i).real() > 1e-9) return false;
    }
    try {
        steady_state(p);
    } catch (const Error&) {
        return false;
    }
    return true;
}

inline BatteryParams random_stable_params(std::mt19937_64& rng, int* rejected = nullptr)
{
    for (;;) {
        const BatteryParams p = random_params(rng);
        if (physically_stable(p)) return p;
        if (rejected) ++*rejected;
    }
}

inline StateVector random_physical_state(std::mt19937_64& rng)
{
    // Ground populations equal, as the model produces; coherence within
    // |rho12| <= sqrt(rho11 rho22).
    std::exponential_distribution<double> e(1.0);
    const double g = e(rng), b = e(rng), a = e(rng);
    const double total = 2.0 * g + b + a;
    StateVector s{g / total, g / total, b / total, a / total, 0.0};
    s.re_rho12 = uniform(rng, -1.0, 1.0) * s.rho11;
    return s;
}

} // namespace qbat::test
