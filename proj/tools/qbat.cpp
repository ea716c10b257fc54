// qbat — command-line front end for the battery model and dataset pipeline

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qbat/datagen.hpp"
#include "qbat/dynamics.hpp"
#include "qbat/energetics.hpp"
#include "qbat/errors.hpp"
#include "qbat/fcs.hpp"

using namespace qbat;

namespace {

std::string num(double v)
{
    if (std::isnan(v)) return "nan";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return {buf, res.ptr};
}

void kv(const std::string& key, double v) { std::cout << key << '=' << num(v) << '\n'; }
void kv(const std::string& key, const std::string& v) { std::cout << key << '=' << v << '\n'; }

struct Common {
    std::string config;
    std::vector<std::string> sets; // key=value overrides
    std::string variant{"trace-preserving"};
    std::string out;
};

KeyValues gather(const Common& c)
{
    KeyValues kvs = c.config.empty() ? KeyValues{} : load_key_values(c.config);
    for (const auto& s : c.sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw Error(ErrorKind::Schema, "--set expects key=value, got '" + s + "'");
        std::istringstream line(s);
        for (const auto& [k, v] : parse_key_values(line)) kvs[k] = v;
    }
    return kvs;
}

BatteryParams load_params(const Common& c)
{
    BatteryParams p = params_from(gather(c));
    require_valid(p);
    return p;
}

void cmd_steady(const Common& c)
{
    const BatteryParams p = load_params(c);
    const StateVector s = steady_state(p, parse_variant(c.variant));
    kv("rho11", s.rho11);
    kv("rho22", s.rho22);
    kv("rho_bb", s.rho_bb);
    kv("rho_aa", s.rho_aa);
    kv("re_rho12", s.re_rho12);
    const IndicatorSet ind = indicators(s, p);
    kv("e_charge", ind.e_charge);
    kv("e_store", ind.e_store);
    kv("e_leak", ind.e_leak);
    kv("cavity_flux", cavity_flux(p, s));
}

void cmd_evolve(const Common& c, double t_end, int n_out)
{
    const BatteryParams p = load_params(c);
    const Trajectory traj = evolve(p, default_initial_state(), t_end, n_out, parse_variant(c.variant));
    std::ofstream file;
    if (!c.out.empty()) {
        file.open(c.out);
        if (!file) throw Error(ErrorKind::Io, "cannot open '" + c.out + "' for writing");
    }
    std::ostream& os = c.out.empty() ? std::cout : file;
    os << "rt,rho11,rho22,rho_bb,rho_aa,re_rho12,e_charge,e_store,e_leak\n";
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const StateVector& s = traj.states[k];
        const IndicatorSet ind = indicators(s, p);
        os << num(traj.times[k]) << ',' << num(s.rho11) << ',' << num(s.rho22) << ',' << num(s.rho_bb)
           << ',' << num(s.rho_aa) << ',' << num(s.re_rho12) << ',' << num(ind.e_charge) << ','
           << num(ind.e_store) << ',' << num(ind.e_leak) << '\n';
    }
    if (!c.out.empty()) kv("points", static_cast<double>(traj.times.size()));
}

void cmd_cumulants(const Common& c)
{
    const BatteryParams p = load_params(c);
    const CumulantSet cs = cumulants(p, parse_variant(c.variant));
    for (std::size_t i = 0; i < 4; ++i) {
        const std::string n = std::to_string(i + 1);
        kv("j" + n, cs.j[i]);
        kv("j0_" + n, cs.j0[i]);
        kv("C" + n, cs.C[i]);
        kv("valid" + n, cs.valid[i] ? "true" : "false");
    }
    kv("h", cs.h_used);
}

void cmd_ergotropy(const Common& c)
{
    const BatteryParams p = load_params(c);
    const EnergeticsRecord e = ergotropy_ratio(p, parse_variant(c.variant));
    kv("ergotropy", e.ergotropy);
    kv("baseline", e.baseline);
    kv("ratio", e.ratio);
    kv("baseline_degenerate", e.baseline_degenerate ? "true" : "false");
    const ThermoQuantities t = thermo(p);
    kv("F", t.F);
    kv("W", t.W);
    kv("Q_h", t.Q_h);
    kv("Q_c", t.Q_c);
    kv("eta", t.eta);
}

void cmd_sweep(const Common& c, std::optional<std::uint64_t> seed, std::optional<int> v,
               std::optional<int> workers, bool variant_given)
{
    SweepConfig cfg = sweep_config_from(gather(c));
    if (seed) cfg.seed = *seed;
    if (v) cfg.values_per_param = *v;
    if (workers) cfg.workers = *workers;
    if (variant_given) cfg.variant = parse_variant(c.variant);
    if (!c.out.empty()) cfg.output_path = c.out;
    if (cfg.output_path.empty()) throw Error(ErrorKind::Domain, "sweep needs --out or 'out' in the config");
    validate_config(cfg);
    const Dataset d = sweep(cfg);
    write_dataset(d, cfg.output_path);
    std::size_t flagged = 0;
    for (const auto& r : d) flagged += r.flags != 0;
    kv("records", static_cast<double>(d.size()));
    kv("flagged", static_cast<double>(flagged));
    kv("out", cfg.output_path);
}

void cmd_filter(const Common& c, const std::string& in, bool keep_unstable, bool keep_free)
{
    if (c.out.empty()) throw Error(ErrorKind::Domain, "filter needs --out");
    FilterRules rules;
    rules.drop_invalid_cumulants = !keep_unstable;
    rules.drop_coherence_free = !keep_free;
    const Dataset d = read_dataset(in);
    const FilterResult f = filter(d, rules);
    write_dataset(f.kept, c.out);
    kv("read", static_cast<double>(d.size()));
    kv("kept", static_cast<double>(f.kept.size()));
    for (const auto& [reason, n] : f.dropped) kv("dropped." + reason, static_cast<double>(n));
}

void cmd_split(const Common& c, const std::string& in, double frac, std::optional<std::uint64_t> seed)
{
    if (c.out.empty()) throw Error(ErrorKind::Domain, "split needs --out <prefix>");
    const Dataset d = read_dataset(in);
    const Split s = group_split(d, frac, seed.value_or(SweepConfig{}.seed));
    write_dataset(s.dev, c.out + "_dev.csv");
    write_dataset(s.test, c.out + "_test.csv");
    kv("dev", static_cast<double>(s.dev.size()));
    kv("test", static_cast<double>(s.test.size()));
    kv("dev_out", c.out + "_dev.csv");
    kv("test_out", c.out + "_test.csv");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"qbat: quantum battery model, counting statistics and dataset generation"};
    app.require_subcommand(1);

    Common common;
    std::optional<std::uint64_t> seed;
    std::optional<int> values;
    std::optional<int> workers;
    std::string in;
    double t_end = 50.0;
    int n_out = 501;
    double frac = 0.70;
    bool keep_unstable = false;
    bool keep_free = false;

    const auto add_model_flags = [&](CLI::App* sub) {
        sub->add_option("--config", common.config, "key = value parameter file");
        sub->add_option("--set", common.sets, "override one parameter, key=value");
        sub->add_option("--variant", common.variant, "generator variant")
            ->check(CLI::IsMember({"verbatim", "trace-preserving", "trace_preserving"}));
    };

    auto* steady = app.add_subcommand("steady", "steady state and indicator energies");
    add_model_flags(steady);
    auto* evolve_cmd = app.add_subcommand("evolve", "trajectory from the empty battery, CSV");
    add_model_flags(evolve_cmd);
    evolve_cmd->add_option("--t-end", t_end, "final scaled time rt");
    evolve_cmd->add_option("--n-out", n_out, "number of output points");
    evolve_cmd->add_option("--out", common.out, "CSV path (default stdout)");
    auto* cum = app.add_subcommand("cumulants", "first four current cumulants and their ratios");
    add_model_flags(cum);
    auto* erg = app.add_subcommand("ergotropy", "ergotropy ratio and thermodynamic quantities");
    add_model_flags(erg);

    auto* sw = app.add_subcommand("sweep", "seeded parameter sweep to a dataset file");
    add_model_flags(sw);
    sw->add_option("--seed", seed);
    sw->add_option("--values-per-param", values);
    sw->add_option("--workers", workers);
    sw->add_option("--out", common.out, "dataset path");

    auto* flt = app.add_subcommand("filter", "drop physically inconsistent records");
    flt->add_option("--in", in)->required();
    flt->add_option("--out", common.out)->required();
    flt->add_flag("--keep-unstable", keep_unstable, "keep records with unstable cumulants");
    flt->add_flag("--keep-coherence-free", keep_free, "keep p_c = p_h = tau = 0 records");

    auto* spl = app.add_subcommand("split", "group-aware DEV/TEST split");
    spl->add_option("--in", in)->required();
    spl->add_option("--out", common.out, "output prefix: <prefix>_dev.csv, <prefix>_test.csv")->required();
    spl->add_option("--frac", frac, "DEV share of records");
    spl->add_option("--seed", seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: Usage: " << e.what() << '\n';
        return 2;
    }

    try {
        if (steady->parsed()) cmd_steady(common);
        else if (evolve_cmd->parsed()) cmd_evolve(common, t_end, n_out);
        else if (cum->parsed()) cmd_cumulants(common);
        else if (erg->parsed()) cmd_ergotropy(common);
        else if (sw->parsed()) cmd_sweep(common, seed, values, workers, sw->count("--variant") > 0);
        else if (flt->parsed()) cmd_filter(common, in, keep_unstable, keep_free);
        else if (spl->parsed()) cmd_split(common, in, frac, seed);
    } catch (const Error& e) {
        std::cerr << "error: " << to_string(e.kind()) << ": " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: Internal: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
