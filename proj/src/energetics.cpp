// energetics.cpp

#include "qbat/energetics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "qbat/dynamics.hpp"
#include "qbat/errors.hpp"

namespace qbat {

namespace {
constexpr double kNegativeTol = 1e-9;
constexpr double kBaselineFloor = 1e-12;
constexpr double kOccupationFloor = 1e-300;
} // namespace

LevelEnergies level_energies(const BatteryParams& params)
{
    return {params.eps, params.eps, params.eps_b, params.eps_a};
}

std::array<double, 4> passive_spectrum(const StateVector& s)
{
    // Ground block [[rho11, rho12], [rho12, rho22]]; rho11 +/- rho12 when rho11 = rho22.
    const double mean = 0.5 * (s.rho11 + s.rho22);
    const double split = std::hypot(0.5 * (s.rho11 - s.rho22), s.re_rho12);
    std::array<double, 4> spec{mean + split, mean - split, s.rho_bb, s.rho_aa};

    const double trace = s.population_sum();
    bool clamped = false;
    for (double& v : spec) {
        if (v < -kNegativeTol) {
            throw Error(ErrorKind::NonPhysical, "passive_spectrum: eigenvalue below -1e-9");
        }
        if (v < 0.0) {
            v = 0.0;
            clamped = true;
        }
    }
    if (clamped) {
        const double sum = spec[0] + spec[1] + spec[2] + spec[3];
        if (sum > 0.0) {
            for (double& v : spec) v *= trace / sum;
        }
    }
    std::stable_sort(spec.begin(), spec.end(), std::greater<>());
    return spec;
}

double ergotropy(const StateVector& state, const LevelEnergies& energies)
{
    if (!std::is_sorted(energies.begin(), energies.end())) {
        throw Error(ErrorKind::Domain, "ergotropy: level energies must be ascending");
    }
    const auto spec = passive_spectrum(state);
    const double mean_energy = energies[0] * state.rho11 + energies[1] * state.rho22 +
                               energies[2] * state.rho_bb + energies[3] * state.rho_aa;
    double passive_energy = 0.0;
    for (std::size_t i = 0; i < 4; ++i) passive_energy += spec[i] * energies[i];
    return mean_energy - passive_energy;
}

ThermoQuantities thermo(const BatteryParams& params)
{
    require_valid(params);
    const Occupations o = occupations(params);
    if (o.n_c < kOccupationFloor || o.tilde_n_h < kOccupationFloor || o.n_ell < kOccupationFloor) {
        throw Error(ErrorKind::AffinityDegenerate, "thermo: vanishing occupation in the affinity denominator");
    }
    ThermoQuantities t;
    t.Q_h = params.eps_a - params.eps;
    t.Q_c = params.eps_b - params.eps;
    t.F = (o.tilde_n_c * o.n_h * o.tilde_n_ell) / (o.n_c * o.tilde_n_h * o.n_ell);
    t.W = t.Q_h - params.T_c * std::log(t.F);
    t.eta = t.W / t.Q_h;
    return t;
}

EnergeticsRecord ergotropy_ratio(const BatteryParams& params, Variant variant)
{
    const LevelEnergies energies = level_energies(params);
    const BatteryParams baseline_params = params.coherence_free();

    EnergeticsRecord rec;
    rec.ergotropy = ergotropy(steady_state(params, variant), energies);
    rec.baseline = params == baseline_params
                       ? rec.ergotropy
                       : ergotropy(steady_state(baseline_params, variant), energies);
    rec.baseline_degenerate = !(std::abs(rec.baseline) > kBaselineFloor);
    rec.ratio = rec.baseline_degenerate ? std::numeric_limits<double>::quiet_NaN()
                                        : rec.ergotropy / rec.baseline;

    const ThermoQuantities t = thermo(params);
    rec.W = t.W;
    rec.F = t.F;
    rec.Q_h = t.Q_h;
    rec.Q_c = t.Q_c;
    rec.eta = t.eta;
    return rec;
}

double require_ratio(const EnergeticsRecord& record)
{
    if (record.baseline_degenerate) {
        throw Error(ErrorKind::BaselineDegenerate, "ergotropy_ratio: |E0| <= 1e-12");
    }
    return record.ratio;
}

} // namespace qbat
