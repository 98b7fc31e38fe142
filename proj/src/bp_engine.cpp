#include "ldgm/bp_engine.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>

namespace ldgm {

BpParams BpParams::from_xi(double xi, double epsilon) {
    if (!(xi > 0.0 && xi < 1.0)) throw std::invalid_argument("BpParams::from_xi: xi must lie in (0, 1)");
    return {(1.0 - xi) / (1.0 + xi), 1.0 / xi, std::nullopt, epsilon};
}

BpParams BpParams::from_gamma(double gamma, double mu, double epsilon) {
    return {std::tanh(gamma), mu, gamma, epsilon};
}

void BpParams::validate() const {
    if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("BpParams: beta must lie in (0, 1)");
    if (!(mu > 0.0)) throw std::invalid_argument("BpParams: mu must be positive");
    if (!(epsilon > 0.0 && epsilon <= 0.1)) throw std::invalid_argument("BpParams: epsilon must lie in (0, 0.1]");
    if (gamma && std::abs(beta - std::tanh(*gamma)) >= 1e-12) throw std::invalid_argument("BpParams: beta != tanh(gamma)");
}

std::size_t MessageState::unfixed_count() const noexcept {
    return static_cast<std::size_t>(std::count(fixed.begin(), fixed.end(), std::int8_t{-1}));
}

double llr_cap(double epsilon) { return 2.0 * std::atanh(1.0 - epsilon); }

MessageState init_messages(const FactorGraph& graph, const BitVector& source, Rng& rng) {
    if (source.size() != graph.n_generators()) throw std::invalid_argument("init_messages: source length must equal N");
    const auto n_e = graph.n_edges();
    MessageState s;
    s.r_code_to_gen.resize(n_e);
    s.r_gen_to_code.assign(n_e, 0.0);
    s.r_node.assign(graph.n_codebits(), 0.0);
    s.bias_node.assign(graph.n_codebits(), 0.0);
    s.bias_edge.resize(n_e);
    s.residual_source = source;
    s.fixed.assign(graph.n_codebits(), -1);
    s.edge_live.assign(n_e, 1);
    s.live_degree.resize(graph.n_generators());
    for (std::size_t a = 0; a < graph.n_generators(); ++a) s.live_degree[a] = static_cast<std::uint32_t>(graph.generator_degree(a));
    for (std::size_t e = 0; e < n_e; ++e) {
        s.r_code_to_gen[e] = coin_flip(rng) ? kInitialMessage : -kInitialMessage;
        s.bias_edge[e] = -std::tanh(0.5 * s.r_code_to_gen[e]);
    }
    return s;
}

MessageState init_messages(const FactorGraph& graph, const BitVector& source, std::uint64_t seed) {
    Rng rng(seed);
    return init_messages(graph, source, rng);
}

void reinitialize_messages(MessageState& state, Rng& rng) {
    for (std::size_t e = 0; e < state.r_code_to_gen.size(); ++e) {
        if (!state.edge_live[e]) continue;
        state.r_code_to_gen[e] = coin_flip(rng) ? kInitialMessage : -kInitialMessage;
        state.bias_edge[e] = -std::tanh(0.5 * state.r_code_to_gen[e]);
    }
}

namespace {

void update_generator(const MessageState& state, const FactorGraph& graph, const BpParams& params, std::size_t a,
                      std::span<double> out, std::vector<double>& prefix, std::vector<std::uint32_t>& live) {
    const auto begin = graph.generator_begin(a);
    const auto end = graph.generator_end(a);
    live.clear();
    for (auto e = begin; e < end; ++e) {
        if (state.edge_live[e]) live.push_back(e);
        else out[e] = 0.0;
    }
    const std::size_t d = live.size();
    if (d == 0) return;

    // Exclusive products via prefix/suffix sweeps; exact when a bias is zero.
    prefix.resize(d + 1);
    prefix[0] = 1.0;
    for (std::size_t k = 0; k < d; ++k) prefix[k + 1] = prefix[k] * state.bias_edge[live[k]];
    const double sign = state.residual_source.get(a) ? 1.0 : -1.0;
    double suffix = 1.0;
    for (std::size_t k = d; k-- > 0;) {
        const double u = params.beta * prefix[k] * suffix;
        assert(std::abs(u) < 1.0);
        out[live[k]] = 2.0 * sign * std::atanh(u);
        suffix *= state.bias_edge[live[k]];
    }
}

void update_code(MessageState& state, const FactorGraph& graph, std::size_t i,
                 std::span<const double> gen_messages, double cap, double bound, double reinforcement) {
    const auto edges = graph.codebit_edges(i);
    double total = 0.0;
    for (auto e : edges) total += gen_messages[e];
    const double previous = state.r_node[i];
    for (auto e : edges) {
        const double r = std::clamp((total - gen_messages[e]) + reinforcement * previous, -cap, cap);
        state.r_code_to_gen[e] = r;
        state.bias_edge[e] = std::clamp(-std::tanh(0.5 * r), -bound, bound);
    }
    state.r_node[i] = std::clamp(total, -cap, cap);
    state.bias_node[i] = std::clamp(-std::tanh(0.5 * state.r_node[i]), -bound, bound);
}

}  // namespace

void generator_update(const MessageState& state, const FactorGraph& graph, const BpParams& params, std::span<double> out) {
    if (out.size() != graph.n_edges()) throw std::invalid_argument("generator_update: output size must equal |E|");
    std::vector<double> prefix;
    std::vector<std::uint32_t> live;
    for (std::size_t a = 0; a < graph.n_generators(); ++a) update_generator(state, graph, params, a, out, prefix, live);
}

std::vector<double> generator_update(const MessageState& state, const FactorGraph& graph, const BpParams& params) {
    std::vector<double> out(graph.n_edges(), 0.0);
    generator_update(state, graph, params, out);
    return out;
}

void code_update(MessageState& state, const FactorGraph& graph, const BpParams& params, std::span<const double> gen_messages) {
    if (gen_messages.size() != graph.n_edges()) throw std::invalid_argument("code_update: message count must equal |E|");
    const double cap = llr_cap(params.epsilon);
    const double bound = 1.0 - params.epsilon;
    for (std::size_t i = 0; i < graph.n_codebits(); ++i)
        if (!state.is_fixed(i)) update_code(state, graph, i, gen_messages, cap, bound, 1.0 / params.mu);
}

void bp_sweep(MessageState& state, const FactorGraph& graph, const BpParams& params, const SweepOptions& options) {
    const auto n_e = graph.n_edges();
    std::vector<double> fresh(n_e, 0.0);
    {
        std::vector<double> prefix;
        std::vector<std::uint32_t> live;
        if (options.generator_order.empty()) {
            for (std::size_t a = 0; a < graph.n_generators(); ++a) update_generator(state, graph, params, a, fresh, prefix, live);
        } else {
            for (auto a : options.generator_order) update_generator(state, graph, params, a, fresh, prefix, live);
        }
    }

    const std::span<const double> consumed =
        options.order == SweepOrder::flooding ? std::span<const double>(state.r_gen_to_code) : std::span<const double>(fresh);
    const double cap = llr_cap(params.epsilon);
    const double bound = 1.0 - params.epsilon;
    const double reinforcement = 1.0 / params.mu;
    auto visit = [&](std::size_t i) {
        if (!state.is_fixed(i)) update_code(state, graph, i, consumed, cap, bound, reinforcement);
    };
    if (options.code_order.empty()) {
        for (std::size_t i = 0; i < graph.n_codebits(); ++i) visit(i);
    } else {
        for (auto i : options.code_order) visit(i);
    }

    state.r_gen_to_code.swap(fresh);
    const auto live_edges = static_cast<std::uint64_t>(std::count(state.edge_live.begin(), state.edge_live.end(), 1));
    state.edge_updates += 2 * live_edges;
    ++state.iteration;

    if (!state.reset_applied) {
        std::fill(state.r_code_to_gen.begin(), state.r_code_to_gen.end(), 0.0);
        std::fill(state.bias_edge.begin(), state.bias_edge.end(), 0.0);
        state.reset_applied = true;
    }
}

SweepTrace trace_record(const MessageState& state) {
    SweepTrace t{state.iteration, 0.0, 0.0, 0};
    std::size_t n = 0;
    for (std::size_t i = 0; i < state.bias_node.size(); ++i) {
        if (state.is_fixed(i)) continue;
        const double b = std::abs(state.bias_node[i]);
        t.mean_abs_bias += b;
        t.max_abs_bias = std::max(t.max_abs_bias, b);
        if (b > 0.99) ++t.saturated;
        ++n;
    }
    if (n > 0) t.mean_abs_bias /= static_cast<double>(n);
    return t;
}

void write_trace_header(std::ostream& out) { out << "iteration,mean_abs_bias,max_abs_bias,count_abs_bias_gt_0.99\n"; }

void write_trace_row(std::ostream& out, const SweepTrace& row) {
    out << fmt::format("{},{:.9f},{:.9f},{}\n", row.iteration, row.mean_abs_bias, row.max_abs_bias, row.saturated);
}

}  // namespace ldgm
