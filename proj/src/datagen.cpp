// datagen.cpp — Parameter sampling, parallel sweep, filter and group split

#include "qbat/datagen.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <thread>

#include "qbat/dynamics.hpp"
#include "qbat/energetics.hpp"
#include "qbat/errors.hpp"

namespace qbat {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Uniform on [0, 1) from the top 53 bits; fixed across standard libraries.
double unit_uniform(std::mt19937_64& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double draw(std::mt19937_64& rng, const Range& range)
{
    return range.low + (range.high - range.low) * unit_uniform(rng);
}

// Unbiased index in [0, n) by rejection.
std::uint64_t draw_index(std::mt19937_64& rng, std::uint64_t n)
{
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

bool same_value(double a, double b)
{
    return a == b || (std::isnan(a) && std::isnan(b));
}

} // namespace

void validate_config(const SweepConfig& c)
{
    if (c.values_per_param < 1) throw Error(ErrorKind::Domain, "values_per_param must be >= 1");
    if (c.workers < 1) throw Error(ErrorKind::Domain, "workers must be >= 1");
    const std::pair<const char*, Range> ranges[] = {
        {"T_c", c.T_c}, {"T_h", c.T_h}, {"T_ell", c.T_ell}, {"p_c", c.p_c},
        {"p_h", c.p_h}, {"tau", c.tau}, {"eps", c.eps}, {"gap", c.gap}};
    for (const auto& [name, r] : ranges) {
        if (!std::isfinite(r.low) || !std::isfinite(r.high) || r.low > r.high) {
            throw Error(ErrorKind::Domain, std::string("range ") + name + " must satisfy low <= high");
        }
    }
    if (c.T_c.low <= 0.0 || c.T_h.low <= 0.0 || c.T_ell.low <= 0.0) {
        throw Error(ErrorKind::Domain, "temperature ranges must be positive");
    }
    if (c.p_c.low < 0.0 || c.p_c.high > 1.0 || c.p_h.low < 0.0 || c.p_h.high > 1.0) {
        throw Error(ErrorKind::Domain, "coherence ranges must lie in [0,1]");
    }
    if (c.tau.low < 0.0) throw Error(ErrorKind::Domain, "tau range must be non-negative");
    if (c.eps.low <= 0.0) throw Error(ErrorKind::Domain, "eps range must be positive");
    if (c.gap.low <= 0.0) throw Error(ErrorKind::Domain, "gap range must be positive");
    if (!(c.r > 0.0) || !(c.g >= 0.0)) throw Error(ErrorKind::Domain, "rates must satisfy r > 0, g >= 0");
    const double total = std::pow(static_cast<double>(c.values_per_param), 7.0);
    if (total > 1e12) throw Error(ErrorKind::Domain, "values_per_param too large");
}

ParameterGrid::ParameterGrid(const SweepConfig& config)
    : n_(config.values_per_param), size_(0), r_(config.r), g_(config.g)
{
    validate_config(config);
    std::mt19937_64 rng(config.seed);
    const Range ranges[kAxes] = {config.p_c, config.p_h, config.T_c,
                                 config.T_h, config.T_ell, config.tau};
    for (int a = 0; a < kAxes; ++a) {
        auto& axis = axes_[static_cast<std::size_t>(a)];
        axis.reserve(static_cast<std::size_t>(n_));
        for (int k = 0; k < n_; ++k) axis.push_back(draw(rng, ranges[a]));
    }
    triplets_.reserve(static_cast<std::size_t>(n_));
    for (int k = 0; k < n_; ++k) {
        const double eps = draw(rng, config.eps);
        const double eps_b = eps + draw(rng, config.gap);
        const double eps_a = eps_b + draw(rng, config.gap);
        triplets_.push_back({eps, eps_b, eps_a});
    }
    size_ = 1;
    for (int a = 0; a < kAxes + 1; ++a) size_ *= static_cast<std::size_t>(n_);
}

BatteryParams ParameterGrid::at(std::size_t index) const
{
    if (index >= size_) throw Error(ErrorKind::Domain, "ParameterGrid::at: index out of range");
    const auto n = static_cast<std::size_t>(n_);
    std::size_t rest = index;
    const auto& triplet = triplets_[rest % n];
    rest /= n;
    std::array<double, kAxes> v{};
    for (int a = kAxes - 1; a >= 0; --a) {
        v[static_cast<std::size_t>(a)] = axes_[static_cast<std::size_t>(a)][rest % n];
        rest /= n;
    }
    BatteryParams p;
    p.p_c = v[0];
    p.p_h = v[1];
    p.T_c = v[2];
    p.T_h = v[3];
    p.T_ell = v[4];
    p.tau = v[5];
    p.eps = triplet[0];
    p.eps_b = triplet[1];
    p.eps_a = triplet[2];
    p.r = r_;
    p.g = g_;
    return p;
}

ParameterGrid sample_parameters(const SweepConfig& config)
{
    return ParameterGrid(config);
}

std::string flags_to_string(std::uint32_t flags)
{
    std::string out;
    const auto add = [&out](const std::string& name) {
        if (!out.empty()) out += ';';
        out += name;
    };
    if (flags & record_flag::thermo_failed) add("thermo_failed");
    if (flags & record_flag::ergotropy_failed) add("ergotropy_failed");
    if (flags & record_flag::cumulants_failed) add("cumulants_failed");
    if (flags & record_flag::baseline_ergotropy_degenerate) add("E0_degenerate");
    for (int i = 0; i < 4; ++i) {
        if (flags & (record_flag::cumulant_unstable_1 << i)) add("C" + std::to_string(i + 1) + "_unstable");
    }
    for (int i = 0; i < 4; ++i) {
        if (flags & (record_flag::baseline_cumulant_degenerate_1 << i)) {
            add("j0_" + std::to_string(i + 1) + "_degenerate");
        }
    }
    return out;
}

std::uint32_t flags_from_string(const std::string& text)
{
    std::uint32_t flags = 0;
    std::size_t start = 0;
    while (start < text.size()) {
        const std::size_t end = std::min(text.find(';', start), text.size());
        const std::string token = text.substr(start, end - start);
        start = end + 1;
        if (token.empty()) continue;
        if (token == "thermo_failed") flags |= record_flag::thermo_failed;
        else if (token == "ergotropy_failed") flags |= record_flag::ergotropy_failed;
        else if (token == "cumulants_failed") flags |= record_flag::cumulants_failed;
        else if (token == "E0_degenerate") flags |= record_flag::baseline_ergotropy_degenerate;
        else {
            bool matched = false;
            for (int i = 0; i < 4 && !matched; ++i) {
                if (token == "C" + std::to_string(i + 1) + "_unstable") {
                    flags |= record_flag::cumulant_unstable_1 << i;
                    matched = true;
                } else if (token == "j0_" + std::to_string(i + 1) + "_degenerate") {
                    flags |= record_flag::baseline_cumulant_degenerate_1 << i;
                    matched = true;
                }
            }
            if (!matched) throw Error(ErrorKind::Schema, "unknown record flag '" + token + "'");
        }
    }
    return flags;
}

std::array<double, 16> DatasetRecord::features() const
{
    return {T_c, T_h, T_ell, tau, p_c, p_h, eps, eps_b, eps_a, F, Q_c, eta, C[0], C[1], C[2], C[3]};
}

bool DatasetRecord::same_as(const DatasetRecord& o) const
{
    const auto a = features();
    const auto b = o.features();
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!same_value(a[i], b[i])) return false;
    }
    return same_value(Q_h, o.Q_h) && same_value(W, o.W) && same_value(ratio, o.ratio) &&
           group_id == o.group_id && flags == o.flags;
}

DatasetRecord compute_record(const BatteryParams& params, std::uint64_t group_id, Variant variant,
                             const CumulantOptions& options)
{
    DatasetRecord rec;
    rec.T_c = params.T_c;
    rec.T_h = params.T_h;
    rec.T_ell = params.T_ell;
    rec.tau = params.tau;
    rec.p_c = params.p_c;
    rec.p_h = params.p_h;
    rec.eps = params.eps;
    rec.eps_b = params.eps_b;
    rec.eps_a = params.eps_a;
    rec.group_id = group_id;

    try {
        const ThermoQuantities t = thermo(params);
        rec.F = t.F;
        rec.Q_c = t.Q_c;
        rec.Q_h = t.Q_h;
        rec.W = t.W;
        rec.eta = t.eta;
    } catch (const Error&) {
        rec.flags |= record_flag::thermo_failed;
        rec.F = rec.Q_c = rec.Q_h = rec.W = rec.eta = kNaN;
    }

    try {
        const LevelEnergies energies = level_energies(params);
        const double e = ergotropy(steady_state(params, variant), energies);
        const BatteryParams base = params.coherence_free();
        const double e0 = params == base ? e : ergotropy(steady_state(base, variant), energies);
        if (std::abs(e0) > 1e-12) {
            rec.ratio = e / e0;
        } else {
            rec.ratio = kNaN;
            rec.flags |= record_flag::baseline_ergotropy_degenerate;
        }
    } catch (const Error&) {
        rec.flags |= record_flag::ergotropy_failed;
        rec.ratio = kNaN;
    }

    try {
        const CumulantSet cs = cumulants(params, variant, options);
        for (std::size_t i = 0; i < 4; ++i) {
            rec.C[i] = cs.C[i];
            if (cs.unstable[i]) rec.flags |= record_flag::cumulant_unstable_1 << i;
            if (cs.baseline_degenerate[i]) rec.flags |= record_flag::baseline_cumulant_degenerate_1 << i;
        }
    } catch (const Error&) {
        rec.flags |= record_flag::cumulants_failed;
        rec.C.fill(kNaN);
    }
    return rec;
}

Dataset sweep(const SweepConfig& config)
{
    const ParameterGrid grid = sample_parameters(config);
    Dataset out(grid.size());

    std::atomic<std::size_t> next{0};
    constexpr std::size_t kChunk = 64;
    const auto work = [&] {
        for (;;) {
            const std::size_t begin = next.fetch_add(kChunk);
            if (begin >= grid.size()) return;
            const std::size_t end = std::min(begin + kChunk, grid.size());
            for (std::size_t i = begin; i < end; ++i) {
                out[i] = compute_record(grid.at(i), grid.group_of(i), config.variant,
                                        config.cumulant_options);
            }
        }
    };

    const int workers = std::max(1, config.workers);
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    return out;
}

FilterResult filter(const Dataset& data, const FilterRules& rules)
{
    FilterResult res;
    const auto reason_for = [&rules](const DatasetRecord& r) -> const char* {
        for (double v : r.features()) {
            if (!std::isfinite(v)) return "non-finite";
        }
        if (!std::isfinite(r.Q_h) || !std::isfinite(r.W) || !std::isfinite(r.ratio)) return "non-finite";
        if (r.flags & (record_flag::thermo_failed | record_flag::ergotropy_failed |
                       record_flag::cumulants_failed)) {
            return "non-finite";
        }
        constexpr std::uint32_t unstable_mask = 0xFu * record_flag::cumulant_unstable_1;
        constexpr std::uint32_t baseline_cumulant_mask = 0xFu * record_flag::baseline_cumulant_degenerate_1;
        if (rules.drop_invalid_cumulants && (r.flags & unstable_mask)) return "invalid-cumulant";
        if (r.flags & record_flag::baseline_ergotropy_degenerate) return "baseline-ergotropy";
        if (r.flags & baseline_cumulant_mask) return "baseline-cumulant";
        if (rules.drop_coherence_free && r.p_c == 0.0 && r.p_h == 0.0 && r.tau == 0.0) return "degenerate";
        return nullptr;
    };
    for (const auto& r : data) {
        if (const char* reason = reason_for(r)) {
            ++res.dropped[reason];
        } else {
            res.kept.push_back(r);
        }
    }
    return res;
}

Split group_split(const Dataset& data, double frac, std::uint64_t seed)
{
    if (data.empty()) throw Error(ErrorKind::Domain, "group_split: empty dataset");
    if (!(frac > 0.0 && frac < 1.0)) throw Error(ErrorKind::Domain, "group_split: frac must lie in (0,1)");

    std::map<DatasetRecord::GroupKey, std::size_t> counts;
    for (const auto& r : data) ++counts[r.group_key()];
    if (counts.size() < 2) throw Error(ErrorKind::SingleGroup, "group_split: only one group key present");

    std::vector<DatasetRecord::GroupKey> keys;
    keys.reserve(counts.size());
    for (const auto& [key, n] : counts) keys.push_back(key);
    std::mt19937_64 rng(seed);
    for (std::size_t i = keys.size() - 1; i > 0; --i) {
        std::swap(keys[i], keys[draw_index(rng, i + 1)]);
    }

    const double target = frac * static_cast<double>(data.size());
    std::set<DatasetRecord::GroupKey> dev_keys;
    std::size_t taken = 0;
    for (std::size_t i = 0; i + 1 < keys.size(); ++i) {
        const std::size_t n = counts[keys[i]];
        const double before = std::abs(static_cast<double>(taken) - target);
        const double after = std::abs(static_cast<double>(taken + n) - target);
        if (!dev_keys.empty() && after >= before) break;
        dev_keys.insert(keys[i]);
        taken += n;
        if (static_cast<double>(taken) >= target) break;
    }

    Split split;
    for (const auto& r : data) {
        (dev_keys.count(r.group_key()) ? split.dev : split.test).push_back(r);
    }
    return split;
}

} // namespace qbat
