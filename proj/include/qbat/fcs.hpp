// fcs.hpp — Full counting statistics of cavity quanta exchange

#pragma once

#include <array>
#include <vector>

#include "qbat/model.hpp"

namespace qbat {

struct CumulantOptions {
    double step{5e-3};            // stencil step h
    double richardson_tol{1e-3};  // relative agreement of the h and h/2 estimates
    double baseline_floor{1e-12}; // |j0| below this makes C undefined
    double lambda_max{0.5};
};

// Raw cumulants j(1..4) = d^i S / d lambda^i at 0, plus the coherence-free
// baseline j0 and the scaled ratios C = j / j0.
struct CumulantSet {
    std::array<double, 4> j{};
    std::array<double, 4> j0{};
    std::array<double, 4> C{};
    double h_used{0.0};
    std::array<bool, 4> valid{};               // C(i) usable
    std::array<bool, 4> unstable{};            // Richardson pair disagreed (j or j0)
    std::array<bool, 4> baseline_degenerate{}; // |j0(i)| below the floor

    bool all_valid() const { return valid[0] && valid[1] && valid[2] && valid[3]; }
};

struct RawCumulants {
    std::array<double, 4> coarse{}; // step h
    std::array<double, 4> fine{};   // step h/2
    std::array<bool, 4> stable{};
};

// Weights w_k, k = -half_width..half_width, such that
// f^(order)(0) ~ sum_k w_k f(k h) / h^order. Fornberg's recursion.
std::vector<long double> centered_stencil(int order, int half_width);

// Dominant real eigenvalue S(lambda) of the tilted generator, followed by
// nearest-value continuation from lambda = 0. The branch is anchored at the
// stationary (zero) eigenvalue for the trace-preserving generator and at the
// largest-real-part eigenvalue for the verbatim one.
// Throws Domain for |lambda| > lambda_max, BranchAmbiguous, ComplexDominant.
double dominant_eigenvalue(const BatteryParams& params, double lambda,
                           Variant variant = Variant::trace_preserving,
                           double lambda_max = 0.5);

// S along a path that starts at 0 and moves monotonically away from it.
std::vector<double> dominant_branch(const BatteryParams& params,
                                    const std::vector<double>& path,
                                    Variant variant = Variant::trace_preserving);

// 9-point centered stencils at h and h/2 for orders 1..4.
RawCumulants raw_cumulants(const BatteryParams& params,
                           Variant variant = Variant::trace_preserving,
                           const CumulantOptions& options = {});

CumulantSet cumulants(const BatteryParams& params,
                      Variant variant = Variant::trace_preserving,
                      const CumulantOptions& options = {});

// g^2 (n~_ell rho_bb - n_ell rho_aa) at the given state: the analytic
// lambda-derivative of the generator contracted with the state.
double cavity_flux(const BatteryParams& params, const StateVector& state);

// cavity_flux at steady_state(params).
double first_cumulant_flux(const BatteryParams& params,
                           Variant variant = Variant::trace_preserving);

} // namespace qbat
