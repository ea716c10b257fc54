// dynamics.cpp — Steady state via SVD, odeint time evolution, indicators

#include "qbat/dynamics.hpp"

#include <array>
#include <cmath>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "qbat/errors.hpp"

namespace qbat {

namespace {

constexpr double kDenominatorFloor = 1e-14;

double checked_ratio(double num, double den, const char* what)
{
    if (std::abs(den) < kDenominatorFloor) {
        throw Error(ErrorKind::DivisionDegenerate,
                    std::string(what) + ": denominator energy below 1e-14");
    }
    return num / den;
}

} // namespace

double IndicatorSet::store_over_charge() const
{
    return checked_ratio(e_store, e_charge, "store/charge");
}

double IndicatorSet::leak_over_store() const
{
    return checked_ratio(e_leak, e_store, "leak/store");
}

double IndicatorSet::leak_over_charge() const
{
    return checked_ratio(e_leak, e_charge, "leak/charge");
}

StateVector default_initial_state()
{
    return {0.5, 0.5, 0.0, 0.0, 0.0};
}

StateVector steady_state(const BatteryParams& params, Variant variant)
{
    const Matrix5 L = build_generator(params, 0.0, variant).entries;
    Eigen::JacobiSVD<Matrix5> svd(L, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues(); // descending
    if (sv(3) - sv(4) < 1e-8) {
        throw Error(ErrorKind::NullSpaceDegenerate,
                    "steady_state: two smallest singular values within 1e-8");
    }
    Vector5 v = svd.matrixV().col(4);
    const double pop = v.head<4>().sum();
    if (std::abs(pop) < 1e-300) {
        throw Error(ErrorKind::NullSpaceDegenerate, "steady_state: null vector has zero trace");
    }
    v /= pop;
    for (int i = 0; i < 4; ++i) {
        if (v(i) < -1e-9) {
            throw Error(ErrorKind::NonPhysical, "steady_state: negative population");
        }
    }
    return StateVector::from_vector(v);
}

Trajectory evolve(const BatteryParams& params, const StateVector& rho0, double t_end,
                  int n_out, Variant variant, const EvolveOptions& options)
{
    namespace odeint = boost::numeric::odeint;
    using State = std::array<double, 5>;

    if (!(t_end > 0.0)) throw Error(ErrorKind::Domain, "evolve: t_end must be > 0");
    if (n_out < 2) throw Error(ErrorKind::Domain, "evolve: n_out must be >= 2");
    if (std::abs(rho0.population_sum() - 1.0) > 1e-9) {
        throw Error(ErrorKind::Domain, "evolve: initial state is not normalized");
    }

    const Matrix5 L = build_generator(params, 0.0, variant).entries;
    const auto rhs = [&L](const State& x, State& dxdt, double) {
        const Eigen::Map<const Vector5> xv(x.data());
        Eigen::Map<Vector5> dv(dxdt.data());
        dv.noalias() = L * xv;
    };

    // Times are reported in units of 1/r.
    Trajectory traj;
    traj.times.reserve(static_cast<std::size_t>(n_out));
    std::vector<double> physical;
    physical.reserve(static_cast<std::size_t>(n_out));
    for (int k = 0; k < n_out; ++k) {
        const double rt = t_end * static_cast<double>(k) / static_cast<double>(n_out - 1);
        traj.times.push_back(rt);
        physical.push_back(rt / params.r);
    }

    State x{rho0.rho11, rho0.rho22, rho0.rho_bb, rho0.rho_aa, rho0.re_rho12};
    auto stepper = odeint::make_dense_output(options.abs_tol, options.rel_tol,
                                             odeint::runge_kutta_dopri5<State>());
    try {
        odeint::integrate_times(stepper, rhs, x, physical.begin(), physical.end(),
                                physical[1] / 16.0,
                                [&traj](const State& s, double) {
                                    traj.states.push_back({s[0], s[1], s[2], s[3], s[4]});
                                },
                                odeint::max_step_checker(1000000));
    } catch (const odeint::odeint_error& e) {
        throw Error(ErrorKind::StepSizeUnderflow, std::string("evolve: ") + e.what());
    }
    return traj;
}

IndicatorSet indicators(const StateVector& s, const BatteryParams& p)
{
    IndicatorSet out;
    const double ground = s.rho11 + s.rho22;
    out.e_charge = p.eps * ground + p.eps_a * s.rho_aa;
    out.e_store = p.eps_a * s.rho_aa + p.eps_b * s.rho_bb;
    out.e_leak = p.eps * ground + p.eps_b * s.rho_bb;
    return out;
}

} // namespace qbat
