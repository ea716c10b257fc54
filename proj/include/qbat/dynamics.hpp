// dynamics.hpp — Steady state, time evolution and battery indicators

#pragma once

#include <vector>

#include "qbat/model.hpp"

namespace qbat {

struct Trajectory {
    std::vector<double> times;      // scaled time r t, starts at 0
    std::vector<StateVector> states;
};

struct EvolveOptions {
    double rel_tol{1e-8};
    double abs_tol{1e-12};
};

// Energies of the charging, storage and leakage observables. Ratio accessors
// throw Error(DivisionDegenerate) when the denominator energy is below 1e-14.
struct IndicatorSet {
    double e_charge{0.0};
    double e_store{0.0};
    double e_leak{0.0};

    double store_over_charge() const;
    double leak_over_store() const;
    double leak_over_charge() const;
};

// Empty battery: ground manifold equally occupied.
StateVector default_initial_state();

// Null direction of L(0) (right singular vector of the least singular value),
// normalized so the populations sum to one.
// Throws NullSpaceDegenerate when the two smallest singular values are within
// 1e-8, NonPhysical when a population is below -1e-9.
StateVector steady_state(const BatteryParams& params,
                         Variant variant = Variant::trace_preserving);

// Integrates d rho/dt = L(0) rho with embedded Dormand-Prince error control,
// reporting n_out equally spaced times on [0, t_end].
Trajectory evolve(const BatteryParams& params, const StateVector& rho0, double t_end,
                  int n_out, Variant variant = Variant::trace_preserving,
                  const EvolveOptions& options = {});

IndicatorSet indicators(const StateVector& state, const BatteryParams& params);

} // namespace qbat
