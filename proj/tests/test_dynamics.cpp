#include <doctest.h>

#include <cmath>
#include <random>

#include "qbat/dynamics.hpp"
#include "qbat/errors.hpp"
#include "test_support.hpp"

using namespace qbat;

namespace {

double max_abs_diff(const StateVector& a, const StateVector& b)
{
    return (a.to_vector() - b.to_vector()).cwiseAbs().maxCoeff();
}

} // namespace

TEST_CASE("steady state is a normalized null vector")
{
    std::mt19937_64 rng(21);
    for (int i = 0; i < 300; ++i) {
        const BatteryParams p = test::random_stable_params(rng);
        const StateVector s = steady_state(p);
        const Matrix5 L = build_generator(p, 0.0).entries;
        const double scale = std::max(1.0, L.cwiseAbs().maxCoeff());
        CHECK((L * s.to_vector()).cwiseAbs().maxCoeff() < 1e-10 * scale);
        CHECK(std::abs(s.population_sum() - 1.0) < 1e-12);
        CHECK(s.rho11 >= -1e-9);
        CHECK(s.rho22 >= -1e-9);
        CHECK(s.rho_bb >= -1e-9);
        CHECK(s.rho_aa >= -1e-9);
    }
}

TEST_CASE("blue steady state stores more than it charges")
{
    const BatteryParams p = test::blue();
    const IndicatorSet ind = indicators(steady_state(p), p);
    CHECK(ind.store_over_charge() > 1.0);
}

TEST_CASE("steady state agrees with long-time integration at a common temperature")
{
    // Coherence-free, equal temperatures: the integration is the oracle.
    BatteryParams p = test::blue().coherence_free();
    p.T_c = p.T_h = p.T_ell = 1.0;
    const StateVector ss = steady_state(p);
    const Trajectory traj = evolve(p, default_initial_state(), 60.0, 7);
    CHECK(max_abs_diff(traj.states.back(), ss) < 1e-7);
    CHECK(ss.re_rho12 == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(ss.rho11 == doctest::Approx(ss.rho22).epsilon(1e-12));
}

TEST_CASE("evolve from the steady state stays put")
{
    const BatteryParams p = test::blue();
    const StateVector ss = steady_state(p);
    const Trajectory traj = evolve(p, ss, 20.0, 41);
    REQUIRE(traj.states.size() == 41);
    for (const auto& s : traj.states) CHECK(max_abs_diff(s, ss) < 1e-7);
}

TEST_CASE("evolve output grid and population conservation")
{
    const BatteryParams p = test::grey();
    const Trajectory traj = evolve(p, default_initial_state(), 10.0, 101);
    REQUIRE(traj.times.size() == 101);
    REQUIRE(traj.states.size() == 101);
    CHECK(traj.times.front() == 0.0);
    CHECK(traj.times.back() == doctest::Approx(10.0));
    for (std::size_t k = 1; k < traj.times.size(); ++k) CHECK(traj.times[k] > traj.times[k - 1]);
    for (const auto& s : traj.states) CHECK(std::abs(s.population_sum() - 1.0) < 1e-7);
    CHECK(traj.states.front() == default_initial_state());
}

TEST_CASE("evolve approaches the steady state")
{
    std::mt19937_64 rng(5);
    for (int i = 0; i < 10; ++i) {
        const BatteryParams p = test::random_stable_params(rng);
        const Trajectory traj = evolve(p, default_initial_state(), 80.0, 3);
        CHECK(max_abs_diff(traj.states.back(), steady_state(p)) < 1e-6);
    }
}

TEST_CASE("evolution is linear in the initial state")
{
    const BatteryParams p = test::blue();
    const StateVector a{0.5, 0.5, 0.0, 0.0, 0.0};
    const StateVector b{0.1, 0.1, 0.3, 0.5, 0.05};
    const double w = 0.3;
    const StateVector mix = StateVector::from_vector(w * a.to_vector() + (1.0 - w) * b.to_vector());
    const auto ta = evolve(p, a, 5.0, 11);
    const auto tb = evolve(p, b, 5.0, 11);
    const auto tm = evolve(p, mix, 5.0, 11);
    for (std::size_t k = 0; k < tm.states.size(); ++k) {
        const Vector5 expect = w * ta.states[k].to_vector() + (1.0 - w) * tb.states[k].to_vector();
        CHECK((tm.states[k].to_vector() - expect).cwiseAbs().maxCoeff() < 1e-7);
    }
}

TEST_CASE("blue leakage-to-storage ratio falls toward the steady state")
{
    const BatteryParams p = test::blue();
    const Trajectory traj = evolve(p, default_initial_state(), 50.0, 51);
    double prev = 1e300;
    for (std::size_t k = 1; k < traj.states.size(); ++k) {
        const double ls = indicators(traj.states[k], p).leak_over_store();
        CHECK(ls <= prev * (1.0 + 1e-7));
        prev = ls;
    }
    CHECK(indicators(traj.states.back(), p).leak_over_store() <
          indicators(traj.states[1], p).leak_over_store());
}

TEST_CASE("evolve rejects bad inputs")
{
    const BatteryParams p = test::blue();
    CHECK_THROWS_AS(evolve(p, default_initial_state(), 0.0, 10), Error);
    CHECK_THROWS_AS(evolve(p, default_initial_state(), 1.0, 1), Error);
    CHECK_THROWS_AS(evolve(p, StateVector{0.2, 0.2, 0.0, 0.0, 0.0}, 1.0, 10), Error);
}

TEST_CASE("indicators on single-level and hand-computed states")
{
    const BatteryParams p = test::blue();

    IndicatorSet ind = indicators(StateVector{0.0, 0.0, 0.0, 1.0, 0.0}, p);
    CHECK(ind.e_charge == doctest::Approx(p.eps_a));
    CHECK(ind.e_store == doctest::Approx(p.eps_a));
    CHECK(ind.e_leak == 0.0);
    CHECK(ind.store_over_charge() == doctest::Approx(1.0));

    ind = indicators(StateVector{0.5, 0.5, 0.0, 0.0, 0.0}, p);
    CHECK(ind.e_charge == doctest::Approx(p.eps));
    CHECK(ind.e_leak == doctest::Approx(p.eps));
    CHECK(ind.e_store == 0.0);
    CHECK_THROWS_AS(ind.leak_over_store(), Error);

    // 0.1*0.4 + 1.5*0.25, 1.5*0.25 + 0.4*0.35, 0.1*0.4 + 0.4*0.35
    ind = indicators(StateVector{0.2, 0.2, 0.35, 0.25, 0.0}, p);
    CHECK(ind.e_charge == doctest::Approx(0.415).epsilon(1e-14));
    CHECK(ind.e_store == doctest::Approx(0.515).epsilon(1e-14));
    CHECK(ind.e_leak == doctest::Approx(0.18).epsilon(1e-14));
    CHECK(ind.store_over_charge() == doctest::Approx(0.515 / 0.415).epsilon(1e-12));
    CHECK(ind.leak_over_store() == doctest::Approx(0.18 / 0.515).epsilon(1e-12));
    CHECK(ind.leak_over_charge() == doctest::Approx(0.18 / 0.415).epsilon(1e-12));
}

TEST_CASE("indicator energies are non-negative on physical states")
{
    std::mt19937_64 rng(9);
    for (int i = 0; i < 1000; ++i) {
        const IndicatorSet ind = indicators(test::random_physical_state(rng), test::random_params(rng));
        CHECK(ind.e_charge >= 0.0);
        CHECK(ind.e_store >= 0.0);
        CHECK(ind.e_leak >= 0.0);
    }
}
