#pragma once

#include "ldgm/decimator.hpp"
#include "ldgm/schedule.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ldgm {

inline constexpr int kConfigSchemaVersion = 1;

/// Configuration error; `line` is 0 when the problem is not tied to one line.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string source, std::size_t line, const std::string& what);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

enum class EnsembleKind { semi_regular, irregular };

struct EnsembleSpec {
    EnsembleKind kind = EnsembleKind::irregular;
    std::size_t gen_degree = 3;                 // semi_regular: K
    std::string preset = "optimized_rate_half"; // irregular: degree distribution preset

    /// "K=3" style label for semi-regular, the preset name otherwise.
    std::string label() const;
};

struct ScheduleArm {
    std::string label;
    Schedule schedule;
};

struct ExperimentConfig {
    static EncoderConfig default_encoder() {
        EncoderConfig c;
        c.inner_iters = 0;
        c.bits_per_round = 0;
        return c;
    }

    int schema_version = kConfigSchemaVersion;
    EnsembleSpec ensemble;
    std::vector<std::size_t> n_values;
    double rate = 0.5;
    /// Total sweep budget. Soft: total_iters. Soft-hard with inner_iters = 0
    /// ("auto"): EncoderConfig::sweep_budget. Otherwise max_rounds = budget / inner_iters.
    std::size_t iterations = 100;
    EncoderConfig encoder = default_encoder();  // schedule and seed are filled per run
    std::vector<ScheduleArm> schedules;
    std::size_t seeds = 50;
    std::optional<std::uint64_t> root_seed;
    bool shared_graph = false;
    std::size_t workers = 1;
    std::filesystem::path output_dir = "out";

    /// Throws ConfigError (line 0) on inconsistent settings.
    void validate() const;

    /// Encoder settings of one run, iteration budget applied.
    EncoderConfig encoder_for(const Schedule& schedule, std::uint64_t seed) const;
};

/// Key-value format: one `key = value` per line, `#` comments, and `[schedule]`
/// sections that each open a new schedule arm (keys: label, kind, xi_start,
/// xi_end, preset). The flat keys schedule.kind / schedule.xi_start /
/// schedule.xi_end describe a single arm. Unknown keys are errors.
ExperimentConfig parse_config(std::istream& in, std::string_view source_name = "<config>");
ExperimentConfig load_config(const std::filesystem::path& path);

DegreeDistribution degree_distribution_preset(std::string_view name);

}  // namespace ldgm
