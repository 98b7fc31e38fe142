#include "ldgm/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>

namespace ldgm {

double row_sum_bound(double beta, double epsilon, double d_v, double d_c) {
    if (!(beta > 0.0 && beta < 1.0)) throw std::domain_error("row_sum_bound: beta must lie in (0, 1)");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::domain_error("row_sum_bound: epsilon must lie in (0, 1)");
    if (!(d_v >= 1.0) || !(d_c >= 2.0)) throw std::domain_error("row_sum_bound: need d_v >= 1 and d_c >= 2");
    const double keep = 1.0 - epsilon;
    const double denom = 1.0 - beta * beta * std::pow(keep, 2.0 * (d_c - 1.0));
    if (!(denom > 0.0)) throw std::domain_error("row_sum_bound: bound vacuous (non-positive denominator)");
    return d_v * (d_c - 1.0) * beta * std::pow(keep, d_c - 2.0) / denom;
}

StabilityReport stability_report(double beta, double epsilon, double d_v, double d_c) {
    StabilityReport r;
    r.beta = beta;
    r.epsilon = epsilon;
    r.d_v = d_v;
    r.d_c = d_c;
    r.bound = row_sum_bound(beta, epsilon, d_v, d_c);
    r.contractive = r.bound < 1.0;
    r.margin = 1.0 - r.bound;
    return r;
}

double one_hop_gain(double u, double b_in) {
    if (!(std::abs(u) < 1.0)) throw std::domain_error("one_hop_gain: |u| must be below 1");
    if (b_in == 0.0) throw std::domain_error("one_hop_gain: neighbor bias must be nonzero");
    return 2.0 * std::abs(u) / (std::abs(1.0 - u * u) * std::abs(b_in));
}

double code_attenuation(double llr) {
    const double c = std::cosh(0.5 * llr);
    return 0.5 / (c * c);
}

std::vector<std::uint32_t> live_edges(const MessageState& state) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t e = 0; e < state.edge_live.size(); ++e)
        if (state.edge_live[e]) out.push_back(e);
    return out;
}

std::vector<double> live_biases(const MessageState& state) {
    std::vector<double> out;
    for (std::size_t e = 0; e < state.edge_live.size(); ++e)
        if (state.edge_live[e]) out.push_back(state.bias_edge[e]);
    return out;
}

std::vector<double> bias_map(const FactorGraph& graph, const MessageState& context, const BpParams& params,
                             std::span<const double> biases) {
    const auto edges = live_edges(context);
    if (biases.size() != edges.size()) throw std::invalid_argument("bias_map: one bias per live edge expected");
    MessageState work = context;
    for (std::size_t k = 0; k < edges.size(); ++k) work.bias_edge[edges[k]] = biases[k];
    const auto fresh = generator_update(work, graph, params);
    code_update(work, graph, params, fresh);
    std::vector<double> out(edges.size());
    for (std::size_t k = 0; k < edges.size(); ++k) out[k] = work.bias_edge[edges[k]];
    return out;
}

double power_iteration_abs(std::span<const double> matrix, std::size_t dim, std::size_t* iterations) {
    if (matrix.size() != dim * dim) throw std::invalid_argument("power_iteration_abs: matrix size mismatch");
    if (dim == 0) return 0.0;
    std::vector<double> x(dim, 1.0), y(dim);
    double lambda = 0.0;
    std::size_t it = 0;
    for (; it < 50; ++it) {
        for (std::size_t r = 0; r < dim; ++r) {
            double acc = 0.0;
            for (std::size_t c = 0; c < dim; ++c) acc += std::abs(matrix[r * dim + c]) * x[c];
            y[r] = acc;
        }
        const double next = *std::max_element(y.begin(), y.end());  // max(x) == 1 after normalization
        if (next == 0.0) {
            lambda = 0.0;
            ++it;
            break;
        }
        for (std::size_t r = 0; r < dim; ++r) x[r] = y[r] / next;
        const bool converged = std::abs(next - lambda) < 1e-8;
        lambda = next;
        if (converged) {
            ++it;
            break;
        }
    }
    if (iterations) *iterations = it;
    return lambda;
}

JacobianEstimate empirical_jacobian(const FactorGraph& graph, const MessageState& state, const BpParams& params, double delta) {
    const auto base = live_biases(state);
    const std::size_t n = base.size();
    if (n > kMaxJacobianEdges) throw std::invalid_argument("empirical_jacobian: at most 200 live edges supported");
    if (!(delta > 0.0)) throw std::invalid_argument("empirical_jacobian: step must be positive");

    JacobianEstimate est;
    est.dim = n;
    est.matrix.assign(n * n, 0.0);
    std::vector<double> probe = base;
    for (std::size_t c = 0; c < n; ++c) {
        const double plus = base[c] + delta;
        const double minus = base[c] - delta;
        const double step = plus - minus;
        if (step == 0.0 || std::abs(step - 2.0 * delta) > 1e-3 * 2.0 * delta)
            throw std::runtime_error("empirical_jacobian: finite-difference step lost to cancellation");
        probe[c] = plus;
        const auto f_plus = bias_map(graph, state, params, probe);
        probe[c] = minus;
        const auto f_minus = bias_map(graph, state, params, probe);
        probe[c] = base[c];
        for (std::size_t r = 0; r < n; ++r) est.matrix[r * n + c] = (f_plus[r] - f_minus[r]) / step;
    }
    for (std::size_t r = 0; r < n; ++r) {
        double row = 0.0;
        for (std::size_t c = 0; c < n; ++c) row += std::abs(est.matrix[r * n + c]);
        est.inf_norm = std::max(est.inf_norm, row);
    }
    est.spectral_radius = power_iteration_abs(est.matrix, n, &est.power_iterations);
    return est;
}

SafeBetaRange safe_beta_range(double epsilon, double d_v, double d_c) {
    const double top = std::nextafter(1.0, 0.0);
    if (row_sum_bound(top, epsilon, d_v, d_c) < 1.0) return {1.0, true};
    double lo = 0.0, hi = top;  // L(lo) < 1 <= L(hi); L is increasing in beta
    while (hi - lo > 1e-13) {
        const double mid = 0.5 * (lo + hi);
        if (row_sum_bound(mid, epsilon, d_v, d_c) < 1.0) lo = mid;
        else hi = mid;
    }
    return {lo, false};
}

std::vector<double> contraction_distances(const FactorGraph& graph, const MessageState& context, const BpParams& params,
                                          std::vector<double> x, std::vector<double> y, std::size_t steps) {
    if (x.size() != y.size()) throw std::invalid_argument("contraction_distances: size mismatch");
    auto dist = [](const std::vector<double>& p, const std::vector<double>& q) {
        double d = 0.0;
        for (std::size_t k = 0; k < p.size(); ++k) d = std::max(d, std::abs(p[k] - q[k]));
        return d;
    };
    std::vector<double> out{dist(x, y)};
    for (std::size_t t = 0; t < steps; ++t) {
        x = bias_map(graph, context, params, x);
        y = bias_map(graph, context, params, y);
        out.push_back(dist(x, y));
    }
    return out;
}

void write_stability_csv(std::ostream& out, std::span<const StabilityRow> rows) {
    out << "profile,convention,beta,epsilon,d_v,d_c,bound,contractive,margin\n";
    for (const auto& r : rows) {
        if (r.bound) {
            out << fmt::format("{},{},{:.6f},{:.3g},{:.6g},{:.6g},{:.9g},{},{:.9g}\n", r.profile, r.convention, r.beta, r.epsilon,
                               r.d_v, r.d_c, *r.bound, *r.bound < 1.0 ? "true" : "false", 1.0 - *r.bound);
        } else {
            out << fmt::format("{},{},{:.6f},{:.3g},{:.6g},{:.6g},vacuous,false,\n", r.profile, r.convention, r.beta, r.epsilon,
                               r.d_v, r.d_c);
        }
    }
}

}  // namespace ldgm
