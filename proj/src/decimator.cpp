#include "ldgm/decimator.hpp"

#include "ldgm/codec.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

namespace ldgm {

std::string_view to_string(EncoderMode mode) { return mode == EncoderMode::soft ? "soft" : "soft_hard"; }

EncoderMode parse_encoder_mode(std::string_view name) {
    if (name == "soft") return EncoderMode::soft;
    if (name == "soft_hard" || name == "soft-hard") return EncoderMode::soft_hard;
    throw std::invalid_argument("unknown encoder mode '" + std::string(name) + "'");
}

std::string_view to_string(DecimationPolicy policy) {
    return policy == DecimationPolicy::per_round ? "per_round" : "on_saturation";
}

DecimationPolicy parse_decimation_policy(std::string_view name) {
    if (name == "per_round") return DecimationPolicy::per_round;
    if (name == "on_saturation") return DecimationPolicy::on_saturation;
    throw std::invalid_argument("unknown decimation policy '" + std::string(name) + "'");
}

std::string_view to_string(SweepOrder order) { return order == SweepOrder::flooding ? "flooding" : "sequential"; }

SweepOrder parse_sweep_order(std::string_view name) {
    if (name == "flooding") return SweepOrder::flooding;
    if (name == "sequential") return SweepOrder::sequential;
    throw std::invalid_argument("unknown sweep order '" + std::string(name) + "'");
}

EncoderConfig EncoderConfig::soft_hard_budgeted(const Schedule& schedule, std::size_t sweep_budget, std::uint64_t seed) {
    EncoderConfig c;
    c.mode = EncoderMode::soft_hard;
    c.schedule = schedule;
    c.sweep_budget = sweep_budget;
    c.bits_per_round = 0;
    c.seed = seed;
    return c;
}

EncoderConfig EncoderConfig::soft(const Schedule& schedule, std::size_t total_iters, std::uint64_t seed) {
    EncoderConfig c;
    c.mode = EncoderMode::soft;
    c.schedule = schedule;
    c.total_iters = total_iters;
    c.seed = seed;
    return c;
}

void EncoderConfig::validate() const {
    schedule.with_rounds(1).validate();
    if (!(epsilon > 0.0 && epsilon <= 0.1)) throw std::invalid_argument("encoder: epsilon must lie in (0, 0.1]");
    if (mode == EncoderMode::soft) {
        if (total_iters < 1) throw std::invalid_argument("encoder: total_iters must be >= 1");
        return;
    }
    if (sweep_budget == 0) {
        if (inner_iters < 1) throw std::invalid_argument("encoder: inner_iters must be >= 1");
        if (max_rounds < 1) throw std::invalid_argument("encoder: max_rounds must be >= 1");
    }
    if (bits_per_round == 0 && policy == DecimationPolicy::on_saturation)
        throw std::invalid_argument("encoder: on_saturation needs an explicit bits_per_round");
    if (!(saturation > 0.0 && saturation <= 1.0)) throw std::invalid_argument("encoder: saturation must lie in (0, 1]");
}

RoundPlan round_plan(const EncoderConfig& cfg, std::size_t m) {
    const auto ceil_div = [](std::size_t a, std::size_t b) { return (a + b - 1) / b; };
    if (cfg.sweep_budget > 0) {
        const std::size_t rounds = std::max<std::size_t>(1, std::min(cfg.sweep_budget, m));
        const std::size_t bits = cfg.bits_per_round != 0 ? cfg.bits_per_round : std::max<std::size_t>(1, ceil_div(m, rounds));
        return {rounds, cfg.sweep_budget / rounds, bits};
    }
    const std::size_t bits = cfg.bits_per_round != 0 ? cfg.bits_per_round : std::max<std::size_t>(1, ceil_div(m, cfg.max_rounds));
    return {cfg.max_rounds, cfg.inner_iters, bits};
}

bool harden(double bias, Rng& rng) {
    if (bias > 0.0) return false;
    if (bias < 0.0) return true;
    return coin_flip(rng);
}

std::vector<std::uint32_t> select_targets(const MessageState& state, std::size_t k, Rng& rng) {
    std::vector<std::uint32_t> candidates;
    candidates.reserve(state.fixed.size());
    for (std::uint32_t i = 0; i < state.fixed.size(); ++i)
        if (!state.is_fixed(i)) candidates.push_back(i);
    if (candidates.size() < k) throw std::invalid_argument("select_targets: fewer unfixed bits than requested");

    // A uniform shuffle followed by a stable sort on |B| leaves tied bits in
    // uniformly random relative order.
    shuffle(candidates.begin(), candidates.end(), rng);
    std::stable_sort(candidates.begin(), candidates.end(), [&](std::uint32_t x, std::uint32_t y) {
        return std::abs(state.bias_node[x]) > std::abs(state.bias_node[y]);
    });
    candidates.resize(k);
    return candidates;
}

void fix_bit(const FactorGraph& graph, MessageState& state, std::size_t i, bool value) {
    if (state.is_fixed(i)) throw std::logic_error("fix_bit: code bit " + std::to_string(i) + " is already fixed");
    state.fixed[i] = value ? 1 : 0;
    for (auto e : graph.codebit_edges(i)) {
        const auto a = graph.edge(e).generator;
        if (value) state.residual_source.flip(a);
        state.edge_live[e] = 0;
        --state.live_degree[a];
        state.r_code_to_gen[e] = 0.0;
        state.r_gen_to_code[e] = 0.0;
        state.bias_edge[e] = 0.0;
    }
}

namespace {

EncodeResult finish(const FactorGraph& graph, const BitVector& source, const MessageState& state, Rng& rng, EncodeResult r) {
    r.codeword = BitVector(graph.n_codebits());
    r.hardened_tail = 0;
    for (std::size_t i = 0; i < graph.n_codebits(); ++i) {
        bool bit;
        if (state.is_fixed(i)) {
            bit = state.fixed[i] == 1;
        } else {
            bit = harden(state.bias_node[i], rng);
            ++r.hardened_tail;
        }
        r.codeword.set(i, bit);
    }
    r.reconstruction = reconstruct(graph, r.codeword);
    r.distortion = distortion(source, r.reconstruction);
    r.edge_updates = state.edge_updates;
    return r;
}

}  // namespace

EncodeResult encode_soft(const FactorGraph& graph, const BitVector& source, const EncoderConfig& cfg) {
    if (cfg.mode != EncoderMode::soft) throw std::invalid_argument("encode_soft: config mode must be soft");
    cfg.validate();
    Rng rng(cfg.seed);
    auto state = init_messages(graph, source, rng);
    const Schedule sched = cfg.schedule.with_rounds(cfg.total_iters);
    const SweepOptions options{cfg.sweep_order};

    EncodeResult r;
    for (std::size_t t = 0; t < cfg.total_iters; ++t) {
        const double xi = xi_at(sched, t);
        const auto params = BpParams::from_xi(xi, cfg.epsilon);
        bp_sweep(state, graph, params, options);
        if (cfg.record_trace) r.trace.push_back({t, xi, params.beta, params.mu, -1, 0.0});
    }
    r.rounds_used = cfg.total_iters;
    r.sweeps = cfg.total_iters;
    // Soft runs harden every bit; a bit that never polarized counts as non-converged.
    r.non_converged = std::any_of(state.bias_node.begin(), state.bias_node.end(),
                                  [&](double b) { return std::abs(b) < cfg.saturation; });
    return finish(graph, source, state, rng, std::move(r));
}

EncodeResult encode_soft_hard(const FactorGraph& graph, const BitVector& source, const EncoderConfig& cfg) {
    if (cfg.mode != EncoderMode::soft_hard) throw std::invalid_argument("encode_soft_hard: config mode must be soft_hard");
    cfg.validate();
    Rng rng(cfg.seed);
    auto state = init_messages(graph, source, rng);
    const std::size_t m = graph.n_codebits();
    const RoundPlan plan = round_plan(cfg, m);
    const Schedule sched = cfg.schedule.with_rounds(plan.rounds);
    const SweepOptions options{cfg.sweep_order};

    EncodeResult r;
    std::size_t unfixed = m;
    for (std::size_t round = 0; round < plan.rounds && unfixed > 0; ++round) {
        const double xi = xi_at(sched, round);
        const auto params = BpParams::from_xi(xi, cfg.epsilon);
        if (cfg.reinit_each_round && round > 0) reinitialize_messages(state, rng);
        for (std::size_t k = 0; k < plan.inner_iters; ++k) bp_sweep(state, graph, params, options);
        r.sweeps += plan.inner_iters;

        std::size_t k = std::min(plan.bits_per_round, unfixed);
        if (cfg.policy == DecimationPolicy::on_saturation) {
            std::size_t saturated = 0;
            for (std::size_t i = 0; i < m; ++i)
                if (!state.is_fixed(i) && std::abs(state.bias_node[i]) >= cfg.saturation) ++saturated;
            k = std::min(k, saturated);
        }
        const auto targets = select_targets(state, k, rng);
        for (auto i : targets) fix_bit(graph, state, i, harden(state.bias_node[i], rng));
        unfixed -= targets.size();
        r.rounds_used = round + 1;
        if (cfg.record_trace) {
            const std::int64_t chosen = targets.empty() ? -1 : static_cast<std::int64_t>(targets.front());
            const double chosen_bias = targets.empty() ? 0.0 : std::abs(state.bias_node[targets.front()]);
            r.trace.push_back({round, xi, params.beta, params.mu, chosen, chosen_bias});
        }
    }
    r.non_converged = unfixed > 0;
    return finish(graph, source, state, rng, std::move(r));
}

EncodeResult encode(const FactorGraph& graph, const BitVector& source, const EncoderConfig& cfg) {
    return cfg.mode == EncoderMode::soft ? encode_soft(graph, source, cfg) : encode_soft_hard(graph, source, cfg);
}

}  // namespace ldgm
