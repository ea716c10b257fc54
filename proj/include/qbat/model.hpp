// model.hpp — Battery parameters, reservoir occupations and the tilted generator

#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qbat {

// Units: hbar = k_B = 1. Ground states are degenerate (eps_1 = eps_2 = eps).
struct BatteryParams {
    double T_c{5.0};     // leak-mode bath temperature
    double T_h{6.36};    // charging bath temperature
    double T_ell{1.0};   // cavity (storage mode) temperature
    double eps{0.1};     // ground-state energy
    double eps_b{0.4};
    double eps_a{1.5};
    double p_c{0.97};    // cold-bath noise-induced coherence
    double p_h{0.61};    // hot-bath noise-induced coherence
    double tau{0.95};    // pure dephasing
    double r{1.0};       // symmetric system-bath rate
    double g{1.0};       // cavity coupling

    // Same configuration with all coherence sources switched off.
    BatteryParams coherence_free() const {
        BatteryParams out = *this;
        out.p_c = 0.0;
        out.p_h = 0.0;
        out.tau = 0.0;
        return out;
    }

    bool operator==(const BatteryParams&) const = default;
};

struct Occupations {
    double n_h{0.0}, n_c{0.0}, n_ell{0.0};
    double tilde_n_h{1.0}, tilde_n_c{1.0}, tilde_n_ell{1.0};
    double gbar{0.0};    // r (n_h + n_c)
    double gamma12{0.0}; // r (p_c n_c + p_h n_h) / 2
};

// Liouville-space vector (rho11, rho22, rho_bb, rho_aa, Re rho12).
struct StateVector {
    double rho11{0.0};
    double rho22{0.0};
    double rho_bb{0.0};
    double rho_aa{0.0};
    double re_rho12{0.0};

    double population_sum() const { return rho11 + rho22 + rho_bb + rho_aa; }

    Eigen::Matrix<double, 5, 1> to_vector() const {
        Eigen::Matrix<double, 5, 1> v;
        v << rho11, rho22, rho_bb, rho_aa, re_rho12;
        return v;
    }

    static StateVector from_vector(const Eigen::Matrix<double, 5, 1>& v) {
        return {v(0), v(1), v(2), v(3), v(4)};
    }

    bool operator==(const StateVector&) const = default;
};

// verbatim: entries as printed. trace_preserving: the population-row
// couplings to the coherence (entries (3,5), (4,5)) both carry a factor 2,
// which makes (1,1,1,1,0) a left null vector at lambda = 0.
enum class Variant { verbatim, trace_preserving };

std::string to_string(Variant v);
Variant parse_variant(const std::string& text);

using Matrix5 = Eigen::Matrix<double, 5, 5>;
using Vector5 = Eigen::Matrix<double, 5, 1>;

struct GeneratorMatrix {
    Matrix5 entries{Matrix5::Zero()};
    double lambda{0.0};
    Variant variant{Variant::trace_preserving};
};

// Mean boson number 1/(exp(gap/T) - 1). Returns exactly 0 once gap/T > 700.
// Throws Error(Domain) for gap <= 0 or T <= 0.
double bose_occupation(double gap, double T);

// n_h over eps_a - eps at T_h, n_c over eps_b - eps at T_c and the cavity
// occupation over the resonant gap eps_a - eps_b at T_ell.
Occupations occupations(const BatteryParams& params);

// Every violated parameter invariant, in a fixed order. Empty when valid.
std::vector<std::string> validate_params(const BatteryParams& params);

// Throws Error(InvalidParams) listing all violations.
void require_valid(const BatteryParams& params);

// Counting-field tilted generator. Only entries (3,4) and (4,3) (1-based)
// depend on lambda, through exp(-lambda) and exp(+lambda).
GeneratorMatrix build_generator(const BatteryParams& params, double lambda,
                                Variant variant = Variant::trace_preserving);

} // namespace qbat
