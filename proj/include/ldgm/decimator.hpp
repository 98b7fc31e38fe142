#pragma once

#include "ldgm/bitvector.hpp"
#include "ldgm/bp_engine.hpp"
#include "ldgm/factor_graph.hpp"
#include "ldgm/rng.hpp"
#include "ldgm/schedule.hpp"

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace ldgm {

enum class EncoderMode { soft, soft_hard };

/// How many code bits a soft-hard round fixes.
enum class DecimationPolicy {
    /// bits_per_round bits every round (0 means ceil(M / max_rounds), which
    /// finishes decimation exactly at the round budget).
    per_round,
    /// Up to bits_per_round bits per round, but only among bits whose |B_i|
    /// has reached `saturation`; whatever is left at max_rounds is hardened.
    on_saturation,
};

std::string_view to_string(EncoderMode mode);
EncoderMode parse_encoder_mode(std::string_view name);
std::string_view to_string(DecimationPolicy policy);
DecimationPolicy parse_decimation_policy(std::string_view name);
std::string_view to_string(SweepOrder order);
SweepOrder parse_sweep_order(std::string_view name);

struct EncoderConfig {
    EncoderMode mode = EncoderMode::soft_hard;
    Schedule schedule;             // `rounds` is replaced by total_iters (soft) or max_rounds (soft-hard)
    std::size_t inner_iters = 1;   // sweeps per decimation round (soft-hard)
    std::size_t total_iters = 100; // sweep budget (soft)
    std::size_t max_rounds = 100;  // decimation cap (soft-hard)
    std::size_t bits_per_round = 1;
    /// Soft-hard only. When nonzero it replaces inner_iters, max_rounds and
    /// bits_per_round by round_plan(): the budget is spread evenly over
    /// min(budget, M) rounds.
    std::size_t sweep_budget = 0;
    DecimationPolicy policy = DecimationPolicy::per_round;
    double saturation = 0.99;
    double epsilon = kDefaultEpsilon;
    SweepOrder sweep_order = SweepOrder::flooding;
    bool reinit_each_round = false;
    bool record_trace = false;
    std::uint64_t seed = 0;

    /// Soft-hard run whose total sweep count is at most `sweep_budget` (see round_plan).
    static EncoderConfig soft_hard_budgeted(const Schedule& schedule, std::size_t sweep_budget, std::uint64_t seed);
    static EncoderConfig soft(const Schedule& schedule, std::size_t total_iters, std::uint64_t seed);

    void validate() const;
};

/// Round structure of a soft-hard run on M code bits.
struct RoundPlan {
    std::size_t rounds;          // schedule length nu and decimation round cap
    std::size_t inner_iters;     // sweeps per round
    std::size_t bits_per_round;  // 0 never occurs here
};

/// With a sweep budget B: rounds = min(B, M), inner = floor(B / rounds),
/// bits = ceil(M / rounds). Otherwise the explicit fields, with
/// bits_per_round = 0 resolved to ceil(M / max_rounds).
RoundPlan round_plan(const EncoderConfig& cfg, std::size_t n_codebits);

struct RoundTrace {
    std::size_t round;
    double xi;
    double beta;
    double mu;
    std::int64_t chosen;  // first bit fixed this round, -1 if none
    double chosen_abs_bias;
};

struct EncodeResult {
    BitVector codeword;        // w, length M
    BitVector reconstruction;  // G w on the original graph, length N
    double distortion = 0.0;
    std::size_t rounds_used = 0;
    std::size_t sweeps = 0;
    std::size_t hardened_tail = 0;  // bits set by final hardening
    bool non_converged = false;
    std::uint64_t edge_updates = 0;
    std::vector<RoundTrace> trace;
};

/// Bit decision for a bias: 0 if B > 0, 1 if B < 0, fair coin if B == 0.
bool harden(double bias, Rng& rng);

/// The k unfixed code bits of largest |B_i|, ties broken uniformly at random.
std::vector<std::uint32_t> select_targets(const MessageState& state, std::size_t k, Rng& rng);

/// Fixes code bit i: folds `value` into the residual source of every
/// generator in C(i) and kills the incident edges.
void fix_bit(const FactorGraph& graph, MessageState& state, std::size_t i, bool value);

EncodeResult encode_soft(const FactorGraph& graph, const BitVector& source, const EncoderConfig& cfg);
EncodeResult encode_soft_hard(const FactorGraph& graph, const BitVector& source, const EncoderConfig& cfg);
/// Dispatches on cfg.mode.
EncodeResult encode(const FactorGraph& graph, const BitVector& source, const EncoderConfig& cfg);

}  // namespace ldgm
