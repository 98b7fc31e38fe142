#pragma once

#include "ldgm/config.hpp"
#include "ldgm/decimator.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace ldgm {

using EncodeFn = std::function<EncodeResult(const FactorGraph&, const BitVector&, const EncoderConfig&)>;

struct RunRecord {
    std::string ensemble;  // "K=3" or a preset name
    std::size_t n = 0;
    std::size_t m = 0;
    std::size_t edges = 0;
    double rate = 0.0;
    std::size_t arm = 0;  // index into cfg.schedules
    std::string schedule_label;
    std::size_t seed_index = 0;
    std::uint64_t graph_seed = 0;
    std::uint64_t source_seed = 0;
    bool shared_graph = false;
    EncoderConfig encoder;  // schedule, seed and budget as used
    double distortion = 0.0;
    std::size_t rounds_used = 0;
    std::size_t sweeps = 0;
    std::size_t hardened_tail = 0;
    bool non_converged = false;
    std::uint64_t edge_updates = 0;
    double wall_time = 0.0;  // seconds; not part of the deterministic CSV
};

struct SummaryRow {
    std::string ensemble;
    std::size_t n = 0;
    std::size_t arm = 0;
    std::string schedule_label;
    Schedule schedule;
    std::size_t runs = 0;
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation
    double min = 0.0;
    double max = 0.0;
    double non_convergence_rate = 0.0;
    double paired_delta = 0.0;     // mean(this arm - arm 0) over shared seeds
    double paired_delta_se = 0.0;  // standard error of that mean
    bool below_floor = false;      // mean <= rd_distortion(rate)
};

struct SweepResult {
    std::vector<RunRecord> records;  // ordered by (N, arm, seed_index)
    std::vector<SummaryRow> summary; // ordered by (N, arm)
};

/// Seeds of one job. The graph seed ignores the seed index in shared-graph mode.
std::uint64_t graph_seed(std::uint64_t root, std::size_t n, std::size_t seed_index, bool shared);
std::uint64_t source_seed(std::uint64_t root, std::size_t n, std::size_t seed_index);
std::uint64_t encoder_seed(std::uint64_t root, std::size_t n, std::size_t seed_index);

FactorGraph build_ensemble(const EnsembleSpec& ensemble, std::size_t n, double rate, std::uint64_t seed);

/// Runs every (N, seed) job over a pool of cfg.workers threads. All schedule
/// arms of a job share its graph, source and encoder seed. Requires cfg.root_seed.
SweepResult run_sweep(const ExperimentConfig& cfg, const EncodeFn& encode_fn = encode);

std::vector<SummaryRow> summarize(const ExperimentConfig& cfg, std::span<const RunRecord> records);

struct GridRow {
    std::size_t n = 0;
    double xi = 0.0;
    double mean = 0.0;
    double stddev = 0.0;
    std::size_t runs = 0;
};

struct GridBest {
    std::size_t n = 0;
    double xi = 0.0;
    double mean = 0.0;
};

struct GridResult {
    std::vector<GridRow> table;  // ordered by (N, xi as given)
    std::vector<GridBest> best;  // one per N; ties go to the smaller xi
};

/// Constant-schedule search: cfg.schedules is replaced by one constant arm per grid value.
GridResult grid_search_constant(const ExperimentConfig& cfg, std::span<const double> xi_grid,
                                const EncodeFn& encode_fn = encode);

}  // namespace ldgm
