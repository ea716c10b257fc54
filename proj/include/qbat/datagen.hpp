// datagen.hpp — Seeded parameter grids, feature sweep, filtering and splitting

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "qbat/fcs.hpp"
#include "qbat/model.hpp"

namespace qbat {

struct Range {
    double low{0.0};
    double high{0.0};
    bool operator==(const Range&) const = default;
};

struct SweepConfig {
    int values_per_param{4};
    std::uint64_t seed{20250101};
    Range T_c{0.1, 7.0};
    Range T_h{0.1, 7.0};
    Range T_ell{0.1, 7.0};
    Range p_c{0.1, 1.0};
    Range p_h{0.1, 1.0};
    Range tau{0.01, 2.0};
    Range eps{0.01, 2.0};
    Range gap{0.01, 2.0}; // delta_1, delta_2: eps_b = eps + delta_1, eps_a = eps_b + delta_2
    double r{1.0};
    double g{1.0};
    Variant variant{Variant::trace_preserving};
    std::string output_path;
    int workers{1};
    CumulantOptions cumulant_options{};
};

// Throws Error(Domain) on an unusable configuration.
void validate_config(const SweepConfig& config);

// values_per_param^7 tuples: nested loops over (p_c, p_h, T_c, T_h, T_ell, tau)
// with the sampled energy triplet innermost. Tuples are decoded on demand.
class ParameterGrid {
public:
    static constexpr int kAxes = 6;

    ParameterGrid(const SweepConfig& config);

    std::size_t size() const { return size_; }
    int values_per_param() const { return n_; }
    BatteryParams at(std::size_t index) const;
    // Index of the (p_c, p_h, T_c, T_h, T_ell, tau) combination.
    std::uint64_t group_of(std::size_t index) const { return index / static_cast<std::size_t>(n_); }

    const std::array<std::vector<double>, kAxes>& axes() const { return axes_; }
    const std::vector<std::array<double, 3>>& energy_triplets() const { return triplets_; }

private:
    int n_;
    std::size_t size_;
    double r_;
    double g_;
    std::array<std::vector<double>, kAxes> axes_; // p_c, p_h, T_c, T_h, T_ell, tau
    std::vector<std::array<double, 3>> triplets_; // eps, eps_b, eps_a
};

ParameterGrid sample_parameters(const SweepConfig& config);

namespace record_flag {
inline constexpr std::uint32_t thermo_failed = 1u << 0;
inline constexpr std::uint32_t ergotropy_failed = 1u << 1;
inline constexpr std::uint32_t cumulants_failed = 1u << 2;
inline constexpr std::uint32_t baseline_ergotropy_degenerate = 1u << 3;
inline constexpr std::uint32_t cumulant_unstable_1 = 1u << 4; // bits 4..7 by order
inline constexpr std::uint32_t baseline_cumulant_degenerate_1 = 1u << 8; // bits 8..11
} // namespace record_flag

std::string flags_to_string(std::uint32_t flags);
std::uint32_t flags_from_string(const std::string& text);

struct DatasetRecord {
    double T_c{0}, T_h{0}, T_ell{0}, tau{0}, p_c{0}, p_h{0};
    double eps{0}, eps_b{0}, eps_a{0};
    double F{0}, Q_c{0}, eta{0};
    std::array<double, 4> C{};
    double Q_h{0}, W{0};
    double ratio{0}; // NaN when the baseline ergotropy is degenerate
    std::uint64_t group_id{0};
    std::uint32_t flags{0};

    using GroupKey = std::tuple<double, double, double, double, double, double>;
    // (p_h, T_c, T_h, T_ell, tau, p_c); energies are deliberately excluded.
    GroupKey group_key() const { return {p_h, T_c, T_h, T_ell, tau, p_c}; }

    // The sixteen learning features in dataset order.
    std::array<double, 16> features() const;

    // Field-wise equality with NaN == NaN.
    bool same_as(const DatasetRecord& other) const;
};

using Dataset = std::vector<DatasetRecord>;

// Every quantity for one parameter tuple. Solver failures become flags.
DatasetRecord compute_record(const BatteryParams& params, std::uint64_t group_id,
                             Variant variant = Variant::trace_preserving,
                             const CumulantOptions& options = {});

// One record per tuple, in tuple order for any worker count.
Dataset sweep(const SweepConfig& config);

struct FilterRules {
    bool drop_invalid_cumulants{true};
    bool drop_coherence_free{true};
};

struct FilterResult {
    Dataset kept;
    std::map<std::string, std::size_t> dropped; // reason -> count
};

// Drop reasons, first match wins: "non-finite", "invalid-cumulant",
// "baseline-ergotropy", "baseline-cumulant", "degenerate".
FilterResult filter(const Dataset& data, const FilterRules& rules = {});

struct Split {
    Dataset dev;
    Dataset test;
};

// Group-aware partition: all records with the same group key land on one
// side. DEV receives whole groups in seeded shuffled order until its record
// share is as close as possible to frac. Throws SingleGroup for < 2 keys.
Split group_split(const Dataset& data, double frac = 0.70, std::uint64_t seed = 20250101);

// Comma-separated text with a fixed header; numbers carry 17 significant
// digits, missing values are empty fields.
extern const std::array<const char*, 21> kDatasetColumns;
void write_dataset(const Dataset& data, const std::string& path);
void write_dataset(const Dataset& data, std::ostream& out);
Dataset read_dataset(const std::string& path);
Dataset read_dataset(std::istream& in);

// "key = value" lines, '#' comments.
using KeyValues = std::map<std::string, std::string>;
KeyValues parse_key_values(std::istream& in);
KeyValues load_key_values(const std::string& path);

// Unknown keys throw Error(Schema). Ranges are given as "low,high".
BatteryParams params_from(const KeyValues& kv, BatteryParams base = {});
SweepConfig sweep_config_from(const KeyValues& kv, SweepConfig base = {});

} // namespace qbat
