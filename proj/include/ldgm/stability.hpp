#pragma once

#include "ldgm/bp_engine.hpp"
#include "ldgm/factor_graph.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ldgm {

/// Row-sum bound on the infinity norm of the BP Jacobian over the clipped domain:
///
///   L = d_v (d_c - 1) beta (1-eps)^(d_c-2) / (1 - beta^2 (1-eps)^(2(d_c-1)))
///
/// Degrees are real so mean-degree variants can be evaluated too.
/// Throws std::domain_error on invalid inputs or a non-positive denominator.
double row_sum_bound(double beta, double epsilon, double d_v, double d_c);

struct StabilityReport {
    double bound = 0.0;  // L
    double beta = 0.0;
    double epsilon = 0.0;
    double d_v = 0.0;
    double d_c = 0.0;
    std::optional<double> empirical_jacobian_norm;
    std::optional<double> spectral_radius_estimate;
    bool contractive = false;  // L < 1
    double margin = 0.0;       // 1 - L
};

StabilityReport stability_report(double beta, double epsilon, double d_v, double d_c);

/// |dRhat_{a->i} / dB_{k->a}| = 2|u| / (|1 - u^2| |B_k|). Throws when |u| >= 1 or b_in == 0.
double one_hop_gain(double u, double b_in);

/// |dB_i / dR_i| = sech^2(R_i / 2) / 2, never above 1/2.
double code_attenuation(double llr);

/// The composed sweep on live edge biases: generator update from `biases`,
/// then the code update with R_i of `context` held fixed. Coordinates follow
/// live_edges(state).
std::vector<double> bias_map(const FactorGraph& graph, const MessageState& context, const BpParams& params,
                             std::span<const double> biases);

std::vector<std::uint32_t> live_edges(const MessageState& state);

/// Biases of `state` restricted to its live edges.
std::vector<double> live_biases(const MessageState& state);

struct JacobianEstimate {
    std::size_t dim = 0;
    std::vector<double> matrix;  // row-major dim x dim
    double inf_norm = 0.0;
    double spectral_radius = 0.0;  // power iteration on |J|
    std::size_t power_iterations = 0;
};

inline constexpr std::size_t kMaxJacobianEdges = 200;

/// Central finite differences of bias_map around the biases of `state`.
/// Throws std::invalid_argument for more than 200 live edges and
/// std::runtime_error when the step is lost to cancellation.
JacobianEstimate empirical_jacobian(const FactorGraph& graph, const MessageState& state, const BpParams& params,
                                    double delta = 1e-5);

/// Dominant eigenvalue of the entrywise absolute matrix: at most 50 steps, stop at 1e-8.
double power_iteration_abs(std::span<const double> matrix, std::size_t dim, std::size_t* iterations = nullptr);

struct SafeBetaRange {
    double beta_max = 0.0;               // sup of {beta : L < 1}
    bool contractive_everywhere = false; // L < 1 on all of (0, 1)
};

/// Bisection on beta in (0, 1) for L(beta) = 1.
SafeBetaRange safe_beta_range(double epsilon, double d_v, double d_c);

/// Infinity-norm distance between two bias vectors iterated through bias_map;
/// entry t is the distance after t applications.
std::vector<double> contraction_distances(const FactorGraph& graph, const MessageState& context, const BpParams& params,
                                          std::vector<double> x, std::vector<double> y, std::size_t steps);

/// One row of the stability CSV table.
struct StabilityRow {
    std::string profile;
    std::string convention;  // "max" or "mean"
    double beta;
    double epsilon;
    double d_v;
    double d_c;
    std::optional<double> bound;  // empty when vacuous
};

void write_stability_csv(std::ostream& out, std::span<const StabilityRow> rows);

}  // namespace ldgm
