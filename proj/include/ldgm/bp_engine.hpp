#pragma once

#include "ldgm/bitvector.hpp"
#include "ldgm/factor_graph.hpp"
#include "ldgm/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace ldgm {

inline constexpr double kDefaultEpsilon = 1e-6;
inline constexpr double kInitialMessage = 0.1;

/// Softness parameters of one sweep plus the clip margin of the bias domain.
struct BpParams {
    double beta = 0.9;   // generator gain, tanh(gamma)
    double mu = 20.0;    // softness; reinforcement weight is 1/mu
    std::optional<double> gamma;
    double epsilon = kDefaultEpsilon;

    static BpParams from_xi(double xi, double epsilon = kDefaultEpsilon);
    static BpParams from_gamma(double gamma, double mu, double epsilon = kDefaultEpsilon);

    /// Throws std::invalid_argument on 0 < beta < 1, mu > 0, epsilon in (0, 0.1]
    /// violations, or a gamma inconsistent with beta.
    void validate() const;
};

/// Which generator messages the code update of a sweep consumes.
enum class SweepOrder {
    /// Every quantity at t+1 is computed from quantities at t only: the code
    /// update reads the generator messages produced by the previous sweep.
    flooding,
    /// The code update reads the generator messages computed earlier in the
    /// same sweep (generator half-step, then code half-step).
    sequential,
};

/// Edge-indexed BP state on a (possibly reduced) graph.
///
/// A code bit is fixed when fixed[i] is 0 or 1. Edges of fixed code bits are
/// dead: they carry no messages in either direction and their value has been
/// folded into residual_source.
struct MessageState {
    std::vector<double> r_code_to_gen;  // R_{i->a}
    std::vector<double> r_gen_to_code;  // Rhat_{a->i}, latest generator messages
    std::vector<double> r_node;         // R_i
    std::vector<double> bias_node;      // B_i = -tanh(R_i / 2)
    std::vector<double> bias_edge;      // B_{i->a} = -tanh(R_{i->a} / 2)
    BitVector residual_source;          // s_a with fixed code bits absorbed
    std::vector<std::int8_t> fixed;     // -1 while unfixed
    std::vector<std::uint8_t> edge_live;
    std::vector<std::uint32_t> live_degree;  // per generator
    std::size_t iteration = 0;
    bool reset_applied = false;
    std::uint64_t edge_updates = 0;  // live-edge message computations so far

    bool is_fixed(std::size_t i) const noexcept { return fixed[i] >= 0; }
    std::size_t unfixed_count() const noexcept;
};

/// Largest LLR magnitude kept by the code update: 2 atanh(1 - epsilon).
double llr_cap(double epsilon);

/// R_{i->a} drawn from {+0.1, -0.1} with equal probability; everything else zero.
MessageState init_messages(const FactorGraph& graph, const BitVector& source, Rng& rng);
MessageState init_messages(const FactorGraph& graph, const BitVector& source, std::uint64_t seed);

/// Re-draws R_{i->a} = +/-0.1 on every live edge and refreshes the edge biases.
void reinitialize_messages(MessageState& state, Rng& rng);

/// Rhat_{a->i} = 2 (-1)^{s_a + 1} atanh(beta prod_{j in V(a)\i} B_{j->a}) for
/// every live edge, from the current edge biases. Dead edges get 0.
void generator_update(const MessageState& state, const FactorGraph& graph, const BpParams& params, std::span<double> out);
std::vector<double> generator_update(const MessageState& state, const FactorGraph& graph, const BpParams& params);

/// Code-node half-step fed with `gen_messages` as Rhat^{(t)}:
///   R_i <- sum_{a in C(i)} Rhat_{a->i}
///   R_{i->a} <- sum_{b in C(i)\a} Rhat_{b->i} + R_i^{(t)} / mu   (previous R_i)
/// followed by the bias map and clipping into [-(1 - eps), 1 - eps].
void code_update(MessageState& state, const FactorGraph& graph, const BpParams& params, std::span<const double> gen_messages);

/// Optional node processing orders for a sweep. Results do not depend on them;
/// they exist so that property can be checked.
struct SweepOptions {
    SweepOrder order = SweepOrder::flooding;
    std::span<const std::uint32_t> generator_order = {};
    std::span<const std::uint32_t> code_order = {};
};

/// One BP sweep t -> t+1. The first sweep of a state ends by resetting every
/// code-to-generator message (and edge bias) to zero.
void bp_sweep(MessageState& state, const FactorGraph& graph, const BpParams& params, const SweepOptions& options = {});

/// Bias statistics over unfixed code bits, streamed as CSV by write_trace_row.
struct SweepTrace {
    std::size_t iteration;
    double mean_abs_bias;
    double max_abs_bias;
    std::size_t saturated;  // |B_i| > 0.99
};

SweepTrace trace_record(const MessageState& state);
void write_trace_header(std::ostream& out);
void write_trace_row(std::ostream& out, const SweepTrace& row);

}  // namespace ldgm
