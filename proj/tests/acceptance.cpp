// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>

#include "qbat/datagen.hpp"
#include "qbat/dynamics.hpp"
#include "qbat/energetics.hpp"
#include "qbat/errors.hpp"
#include "qbat/fcs.hpp"
#include "test_support.hpp"

using namespace qbat;

namespace {

struct Outcome {
    bool pass{false};
    std::string detail;
};

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, format, a, b, c);
    return buf;
}

int failures = 0;

void criterion(const char* name, double limit_s, const std::function<Outcome()>& body)
{
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const Error& e) {
        o = {false, std::string("threw ") + std::string(to_string(e.kind())) + ": " + e.what()};
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (dt > limit_s) {
        o.pass = false;
        o.detail += fmt("; exceeded %.0f s", limit_s);
    }
    if (!o.pass) ++failures;
    std::printf("%s  %-28s %8.2f s  %s\n", o.pass ? "PASS" : "FAIL", name, dt, o.detail.c_str());
    std::fflush(stdout);
}

std::string text_of(const Dataset& d)
{
    std::ostringstream os;
    write_dataset(d, os);
    return os.str();
}

Outcome generator_sanity()
{
    std::mt19937_64 rng(1001);
    double worst_col = 0.0, worst_s0 = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const BatteryParams p = test::random_params(rng);
        const Matrix5 L = build_generator(p, 0.0).entries;
        worst_col = std::max(worst_col, L.topRows<4>().colwise().sum().cwiseAbs().maxCoeff());
        worst_s0 = std::max(worst_s0, std::abs(dominant_eigenvalue(p, 0.0)));
    }
    return {worst_col < 1e-12 && worst_s0 < 1e-9,
            fmt("max |column sum| %.2e, max |S(0)| %.2e over 1000 tuples", worst_col, worst_s0)};
}

Outcome flux_oracle()
{
    std::mt19937_64 rng(1002);
    int rejected = 0;
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const BatteryParams p = test::random_stable_params(rng, &rejected);
        const double j1 = cumulants(p).j[0];
        const double flux = first_cumulant_flux(p);
        worst = std::max(worst, std::abs(j1 - flux) / std::max(std::abs(j1), 1e-12));
    }
    return {worst < 1e-6,
            fmt("max rel err %.2e over 100 tuples (%.0f redrawn: no physical steady state)", worst,
                rejected)};
}

Outcome cumulant_stability()
{
    std::mt19937_64 rng(1003);
    int fully = 0;
    bool consistent = true;
    const CumulantOptions opts;
    for (int i = 0; i < 20; ++i) {
        const BatteryParams p = test::random_params(rng);
        const RawCumulants raw = raw_cumulants(p);
        const CumulantSet cs = cumulants(p);
        for (std::size_t k = 1; k < 4; ++k) {
            const double scale = std::max(std::abs(raw.coarse[k]), std::abs(raw.fine[k]));
            const bool agree = std::abs(raw.coarse[k] - raw.fine[k]) <= opts.richardson_tol * scale;
            // Disagreement must surface as an invalid order.
            if (!agree && cs.valid[k]) consistent = false;
        }
        fully += cs.all_valid();
    }
    return {consistent && fully >= 16, fmt("%.0f/20 tuples fully valid, flags consistent: ", fully) +
                                           (consistent ? "yes" : "no")};
}

Outcome equilibrium_zero_current()
{
    std::mt19937_64 rng(1004);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        BatteryParams p = test::random_params(rng);
        p.p_c = p.p_h = p.tau = 0.0;
        p.T_h = p.T_ell = p.T_c;
        worst = std::max(worst, std::abs(cumulants(p).j[0]));
    }
    return {worst < 1e-9, fmt("max |j1| %.3e over 20 energy triplets at a common temperature", worst)};
}

Outcome reference_configurations()
{
    const BatteryParams blue = test::blue();
    const BatteryParams grey = test::grey();
    const double blue_ratio = require_ratio(ergotropy_ratio(blue));
    const double grey_ratio = require_ratio(ergotropy_ratio(grey));
    const double soc = indicators(steady_state(blue), blue).store_over_charge();

    const Trajectory traj = evolve(blue, default_initial_state(), 50.0, 51);
    const IndicatorSet at1 = indicators(traj.states[1], blue);
    const IndicatorSet at50 = indicators(traj.states.back(), blue);
    const bool leak_falls = at50.leak_over_store() < at1.leak_over_store() &&
                            at50.leak_over_charge() < at1.leak_over_charge();

    std::string d = fmt("blue E/E0 %.4f, Hs/Hc %.4f, grey E/E0 %.4f", blue_ratio, soc, grey_ratio);
    d += fmt("; leak/store %.4f -> %.4f", at1.leak_over_store(), at50.leak_over_store());
    d += fmt(", leak/charge %.4f -> %.4f", at1.leak_over_charge(), at50.leak_over_charge());
    return {blue_ratio > 1.0 && soc > 1.0 && grey_ratio < 1.0 && leak_falls, d};
}

Outcome ergotropy_properties()
{
    std::mt19937_64 rng(1006);
    double min_e = 1e300, max_passive = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const StateVector s = test::random_physical_state(rng);
        const LevelEnergies en = level_energies(test::random_params(rng));
        min_e = std::min(min_e, ergotropy(s, en));
        const auto spec = passive_spectrum(s);
        max_passive = std::max(max_passive, std::abs(ergotropy({spec[0], spec[1], spec[2], spec[3], 0.0}, en)));
    }
    int unit = 0, checked = 0;
    for (int i = 0; i < 50; ++i) {
        const BatteryParams p = test::random_stable_params(rng).coherence_free();
        const EnergeticsRecord rec = ergotropy_ratio(p);
        if (rec.baseline_degenerate) continue;
        ++checked;
        unit += rec.ratio == 1.0;
    }
    const double hand = ergotropy(StateVector{0.2, 0.2, 0.35, 0.25, 0.15}, {0.1, 0.1, 0.4, 1.5});
    const bool pass = min_e >= -1e-12 && max_passive <= 1e-12 && unit == checked && checked > 0 &&
                      std::abs(hand - 0.310) <= 1e-12;
    std::string d = fmt("min E %.2e, max passive E %.2e, hand example %.15f", min_e, max_passive, hand);
    d += fmt("; ratio == 1 in %.0f/%.0f coherence-free tuples", unit, checked);
    return {pass, d};
}

Outcome sweep_determinism()
{
    SweepConfig cfg;
    cfg.values_per_param = 4;
    cfg.seed = 20250101;
    const int hw = static_cast<int>(std::max(2u, std::thread::hardware_concurrency()));

    cfg.workers = hw;
    const Dataset a = sweep(cfg);
    const Dataset b = sweep(cfg);
    cfg.workers = 1;
    const Dataset c = sweep(cfg);
    const std::string ta = text_of(a);
    const bool runs_equal = ta == text_of(b);
    const bool workers_equal = ta == text_of(c);

    std::istringstream in(ta);
    const bool round_trip = text_of(read_dataset(in)) == ta;

    const FilterResult f = filter(a);
    const bool idempotent = text_of(filter(f.kept).kept) == text_of(f.kept);

    const Split s = group_split(f.kept, 0.70, cfg.seed);
    std::set<DatasetRecord::GroupKey> dev;
    for (const auto& r : s.dev) dev.insert(r.group_key());
    std::size_t shared = 0;
    for (const auto& r : s.test) shared += dev.count(r.group_key());

    const bool pass = a.size() == 16384 && runs_equal && workers_equal && round_trip && idempotent && shared == 0;
    std::string d = fmt("%.0f records, %.0f kept, dev/test %.0f", static_cast<double>(a.size()),
                        static_cast<double>(f.kept.size()), static_cast<double>(s.dev.size()));
    d += fmt("/%.0f; shared keys %.0f", static_cast<double>(s.test.size()), static_cast<double>(shared));
    d += std::string("; identical across runs: ") + (runs_equal ? "yes" : "no") +
         ", across 1/" + std::to_string(hw) + " workers: " + (workers_equal ? "yes" : "no") +
         ", round-trip: " + (round_trip ? "yes" : "no") + ", filter idempotent: " + (idempotent ? "yes" : "no");
    return {pass, d};
}

} // namespace

int main()
{
    criterion("generator-sanity", 10.0, generator_sanity);
    criterion("flux-oracle", 60.0, flux_oracle);
    criterion("cumulant-stability", 120.0, cumulant_stability);
    criterion("equilibrium-zero-current", 60.0, equilibrium_zero_current);
    criterion("reference-configurations", 5.0, reference_configurations);
    criterion("ergotropy-properties", 60.0, ergotropy_properties);
    criterion("sweep-determinism", 300.0, sweep_determinism);
    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
