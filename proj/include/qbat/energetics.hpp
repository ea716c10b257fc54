// energetics.hpp — Ergotropy and steady-state thermodynamic quantities

#pragma once

#include <array>

#include "qbat/model.hpp"

namespace qbat {

// Level energies in basis order (1, 2, b, a); must be non-decreasing.
using LevelEnergies = std::array<double, 4>;

LevelEnergies level_energies(const BatteryParams& params);

// Eigenvalues of the block-diagonal density matrix, sorted descending.
// Eigenvalues in (-1e-9, 0) are clamped to zero and the set renormalized;
// anything more negative throws NonPhysical.
std::array<double, 4> passive_spectrum(const StateVector& state);

// Tr(H rho) minus the energy of the passive state (descending spectrum paired
// with ascending energies).
double ergotropy(const StateVector& state, const LevelEnergies& energies);

struct EnergeticsRecord {
    double ergotropy{0.0};
    double baseline{0.0};  // coherence-free steady state
    double ratio{0.0};     // NaN when the baseline is degenerate
    bool baseline_degenerate{false};
    double W{0.0};
    double F{0.0};
    double Q_h{0.0};
    double Q_c{0.0};
    double eta{0.0};
};

struct ThermoQuantities {
    double W{0.0};
    double F{0.0};
    double Q_h{0.0};
    double Q_c{0.0};
    double eta{0.0};
};

// Q_h = eps_a - eps, Q_c = eps_b - eps,
// F = n~_c n_h n~_ell / (n_c n~_h n_ell), W = Q_h - T_c ln F, eta = W / Q_h.
// Throws AffinityDegenerate if n_c, n~_h or n_ell is below 1e-300.
ThermoQuantities thermo(const BatteryParams& params);

// Steady-state ergotropy against the p_c = p_h = tau = 0 fixed point. A
// degenerate baseline (|E0| <= 1e-12) is flagged rather than thrown; use
// require_ratio() for the throwing form.
EnergeticsRecord ergotropy_ratio(const BatteryParams& params,
                                 Variant variant = Variant::trace_preserving);

double require_ratio(const EnergeticsRecord& record);

} // namespace qbat
