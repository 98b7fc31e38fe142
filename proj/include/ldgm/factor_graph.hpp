#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <vector>

namespace ldgm {

/// One edge of the bipartite LDGM graph: generator a (source bit) -- code bit i.
struct Edge {
    std::uint32_t generator;
    std::uint32_t codebit;
    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Bipartite LDGM factor graph with N generator nodes and M code-bit nodes.
///
/// Edges are stored in canonical (generator, codebit) order, so the edges of
/// generator a occupy the contiguous id range [generator_begin(a), generator_end(a)).
/// Edge ids index every per-edge message buffer. Immutable after construction.
class FactorGraph {
public:
    FactorGraph() = default;

    /// Validates index ranges and rejects parallel edges.
    FactorGraph(std::size_t n_generators, std::size_t n_codebits, std::vector<Edge> edges);

    std::size_t n_generators() const noexcept { return n_generators_; }
    std::size_t n_codebits() const noexcept { return n_codebits_; }
    std::size_t n_edges() const noexcept { return edges_.size(); }
    double rate() const noexcept { return static_cast<double>(n_codebits_) / static_cast<double>(n_generators_); }

    std::span<const Edge> edges() const noexcept { return edges_; }
    const Edge& edge(std::size_t e) const noexcept { return edges_[e]; }

    std::uint32_t generator_begin(std::size_t a) const noexcept { return gen_offset_[a]; }
    std::uint32_t generator_end(std::size_t a) const noexcept { return gen_offset_[a + 1]; }
    std::size_t generator_degree(std::size_t a) const noexcept { return gen_offset_[a + 1] - gen_offset_[a]; }

    /// V(a): code-bit neighbors of generator a, aligned with its edge id range.
    std::span<const std::uint32_t> codebits_of(std::size_t a) const noexcept {
        return {gen_nbr_.data() + gen_offset_[a], generator_degree(a)};
    }
    /// C(i): generator neighbors of code bit i.
    std::span<const std::uint32_t> generators_of(std::size_t i) const noexcept {
        return {code_nbr_.data() + code_offset_[i], codebit_degree(i)};
    }
    /// Edge ids incident to code bit i, aligned with generators_of(i).
    std::span<const std::uint32_t> codebit_edges(std::size_t i) const noexcept {
        return {code_edge_.data() + code_offset_[i], codebit_degree(i)};
    }
    std::size_t codebit_degree(std::size_t i) const noexcept { return code_offset_[i + 1] - code_offset_[i]; }

    friend bool operator==(const FactorGraph& a, const FactorGraph& b) {
        return a.n_generators_ == b.n_generators_ && a.n_codebits_ == b.n_codebits_ && a.edges_ == b.edges_;
    }

private:
    std::size_t n_generators_ = 0;
    std::size_t n_codebits_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::uint32_t> gen_offset_;
    std::vector<std::uint32_t> gen_nbr_;
    std::vector<std::uint32_t> code_offset_;
    std::vector<std::uint32_t> code_nbr_;
    std::vector<std::uint32_t> code_edge_;
};

/// Published coefficients are rounded to six digits (the rho below sums to 0.999996).
inline constexpr double kDistributionSumTolerance = 1e-4;

/// Edge-perspective degree distribution (lambda on code bits, rho on generators).
struct DegreeDistribution {
    std::map<int, double> code_edge;       // lambda: degree -> fraction of edges
    std::map<int, double> generator_edge;  // rho: degree -> fraction of edges

    /// Throws std::invalid_argument on negative coefficients, degrees < 1,
    /// or sides that do not sum to 1 within kDistributionSumTolerance.
    /// Coefficients are used after normalization.
    void validate() const;

    /// lambda(x) = x^6, rho(x) = 0.275698x + 0.25537x^2 + 0.076598x^3 + 0.39233x^8.
    /// Intended for rate 1/2.
    static DegreeDistribution optimized_rate_half();
};

/// Node-perspective fractions from edge-perspective coefficients: f_d ∝ c_d / d.
std::map<int, double> node_fractions(const std::map<int, double>& edge_coeffs);

/// Mean node degree implied by edge-perspective coefficients: Σ c_d / Σ (c_d / d).
double mean_node_degree(const std::map<int, double>& edge_coeffs);

struct DegreeProfile {
    std::size_t max_code_degree = 0;  // d_v (max)
    double mean_code_degree = 0.0;    // |E| / M
    std::size_t max_generator_degree = 0;  // d_c (max)
    double mean_generator_degree = 0.0;    // |E| / N
    std::vector<std::size_t> code_histogram;       // index = degree, sums to M
    std::vector<std::size_t> generator_histogram;  // index = degree, sums to N
};

/// M = round(R N) with ties to even.
std::size_t codebit_count(std::size_t n_source, double rate);

/// Semi-regular (Ising) ensemble: every generator has exactly `gen_degree`
/// distinct uniformly chosen code bits; a colliding draw is resampled.
FactorGraph build_semi_regular(std::size_t n_source, double rate, std::size_t gen_degree, std::uint64_t seed);

/// Configuration-model ensemble with the given degree distribution.
///
/// Node counts per class are floor(f_d * n); the nodes left over by the
/// floors go one at a time to the classes of highest degree first. If the two
/// sides then disagree on socket totals, generator nodes are moved between
/// degree classes of the support, each move chosen to bring the difference
/// closest to zero. Sockets are matched by a uniform permutation and parallel
/// edges are removed by random endpoint swaps that preserve every degree.
FactorGraph build_irregular(std::size_t n_source, double rate, const DegreeDistribution& dist, std::uint64_t seed);

DegreeProfile degree_stats(const FactorGraph& graph);

/// Line-oriented text format: header "N M E", then one "a i" pair per line.
void write_graph(std::ostream& out, const FactorGraph& graph);
/// Parses and validates the text format; throws std::runtime_error naming the offending line.
FactorGraph read_graph(std::istream& in);

}  // namespace ldgm
