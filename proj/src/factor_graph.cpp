#include "ldgm/factor_graph.hpp"

#include "ldgm/rng.hpp"

#include <algorithm>
#include <cfenv>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace ldgm {

namespace {

std::uint64_t edge_key(std::uint32_t a, std::uint32_t i) { return (std::uint64_t{a} << 32) | i; }

}  // namespace

FactorGraph::FactorGraph(std::size_t n_generators, std::size_t n_codebits, std::vector<Edge> edges)
    : n_generators_(n_generators), n_codebits_(n_codebits), edges_(std::move(edges)) {
    if (n_generators_ == 0 || n_codebits_ == 0) throw std::invalid_argument("FactorGraph: node counts must be positive");
    if (n_generators_ > std::numeric_limits<std::uint32_t>::max() || n_codebits_ > std::numeric_limits<std::uint32_t>::max() ||
        edges_.size() >= std::numeric_limits<std::uint32_t>::max())
        throw std::invalid_argument("FactorGraph: graph too large for 32-bit indices");

    for (const auto& e : edges_) {
        if (e.generator >= n_generators_ || e.codebit >= n_codebits_)
            throw std::invalid_argument("FactorGraph: edge endpoint out of range");
    }
    std::sort(edges_.begin(), edges_.end(), [](const Edge& x, const Edge& y) {
        return x.generator != y.generator ? x.generator < y.generator : x.codebit < y.codebit;
    });
    if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
        throw std::invalid_argument("FactorGraph: parallel edge");

    const auto n_e = edges_.size();
    gen_offset_.assign(n_generators_ + 1, 0);
    code_offset_.assign(n_codebits_ + 1, 0);
    for (const auto& e : edges_) {
        ++gen_offset_[e.generator + 1];
        ++code_offset_[e.codebit + 1];
    }
    std::partial_sum(gen_offset_.begin(), gen_offset_.end(), gen_offset_.begin());
    std::partial_sum(code_offset_.begin(), code_offset_.end(), code_offset_.begin());

    gen_nbr_.resize(n_e);
    code_nbr_.resize(n_e);
    code_edge_.resize(n_e);
    std::vector<std::uint32_t> cursor(code_offset_.begin(), code_offset_.end() - 1);
    for (std::uint32_t e = 0; e < n_e; ++e) {
        gen_nbr_[e] = edges_[e].codebit;
        const auto slot = cursor[edges_[e].codebit]++;
        code_nbr_[slot] = edges_[e].generator;
        code_edge_[slot] = e;
    }
}

void DegreeDistribution::validate() const {
    auto check_side = [](const std::map<int, double>& side, const char* name) {
        if (side.empty()) throw std::invalid_argument(std::string("DegreeDistribution: empty ") + name);
        double sum = 0.0;
        for (auto [d, c] : side) {
            if (d < 1) throw std::invalid_argument(std::string("DegreeDistribution: degree < 1 in ") + name);
            if (!(c >= 0.0)) throw std::invalid_argument(std::string("DegreeDistribution: negative coefficient in ") + name);
            sum += c;
        }
        if (std::abs(sum - 1.0) > kDistributionSumTolerance)
            throw std::invalid_argument(std::string("DegreeDistribution: coefficients of ") + name + " do not sum to 1");
    };
    check_side(code_edge, "lambda");
    check_side(generator_edge, "rho");
}

DegreeDistribution DegreeDistribution::optimized_rate_half() {
    return DegreeDistribution{
        {{7, 1.0}},
        {{2, 0.275698}, {3, 0.25537}, {4, 0.076598}, {9, 0.39233}},
    };
}

std::map<int, double> node_fractions(const std::map<int, double>& edge_coeffs) {
    double total = 0.0;
    for (auto [d, c] : edge_coeffs) total += c / d;
    std::map<int, double> out;
    for (auto [d, c] : edge_coeffs) out[d] = (c / d) / total;
    return out;
}

double mean_node_degree(const std::map<int, double>& edge_coeffs) {
    double mass = 0.0, total = 0.0;
    for (auto [d, c] : edge_coeffs) {
        mass += c;
        total += c / d;
    }
    return mass / total;
}

std::size_t codebit_count(std::size_t n_source, double rate) {
    // nearbyint honours the current rounding mode; force ties-to-even.
    const int saved = std::fegetround();
    std::fesetround(FE_TONEAREST);
    const double m = std::nearbyint(rate * static_cast<double>(n_source));
    std::fesetround(saved);
    return m <= 0.0 ? 0 : static_cast<std::size_t>(m);
}

FactorGraph build_semi_regular(std::size_t n_source, double rate, std::size_t gen_degree, std::uint64_t seed) {
    if (n_source == 0) throw std::invalid_argument("build_semi_regular: N must be positive");
    if (!(rate > 0.0 && rate <= 1.0)) throw std::invalid_argument("build_semi_regular: rate must lie in (0, 1]");
    if (gen_degree == 0) throw std::invalid_argument("build_semi_regular: generator degree must be positive");
    const std::size_t m = codebit_count(n_source, rate);
    if (m == 0) throw std::invalid_argument("build_semi_regular: round(R N) is zero");
    if (gen_degree > m) throw std::invalid_argument("build_semi_regular: generator degree exceeds the number of code bits");

    Rng rng(seed);
    std::vector<Edge> edges;
    edges.reserve(n_source * gen_degree);
    std::vector<std::uint32_t> picked;
    for (std::uint32_t a = 0; a < n_source; ++a) {
        picked.clear();
        while (picked.size() < gen_degree) {
            const auto i = static_cast<std::uint32_t>(uniform_index(rng, m));
            if (std::find(picked.begin(), picked.end(), i) == picked.end()) picked.push_back(i);
        }
        for (auto i : picked) edges.push_back({a, i});
    }
    return FactorGraph(n_source, m, std::move(edges));
}

namespace {

// Floor of f_d * n per class; leftover nodes go to the highest degrees first.
std::map<int, std::size_t> class_counts(const std::map<int, double>& fractions, std::size_t n) {
    std::map<int, std::size_t> counts;
    std::size_t assigned = 0;
    for (auto [d, f] : fractions) {
        counts[d] = static_cast<std::size_t>(std::floor(f * static_cast<double>(n)));
        assigned += counts[d];
    }
    std::vector<int> by_degree_desc;
    for (auto [d, f] : fractions)
        if (f > 0.0) by_degree_desc.push_back(d);
    std::sort(by_degree_desc.rbegin(), by_degree_desc.rend());
    for (std::size_t k = 0; assigned < n; ++k, ++assigned) ++counts[by_degree_desc[k % by_degree_desc.size()]];
    return counts;
}

long long socket_total(const std::map<int, std::size_t>& counts) {
    long long s = 0;
    for (auto [d, c] : counts) s += static_cast<long long>(d) * static_cast<long long>(c);
    return s;
}

}  // namespace

FactorGraph build_irregular(std::size_t n_source, double rate, const DegreeDistribution& dist, std::uint64_t seed) {
    if (n_source == 0) throw std::invalid_argument("build_irregular: N must be positive");
    if (!(rate > 0.0 && rate <= 1.0)) throw std::invalid_argument("build_irregular: rate must lie in (0, 1]");
    dist.validate();
    const std::size_t m = codebit_count(n_source, rate);
    if (m == 0) throw std::invalid_argument("build_irregular: round(R N) is zero");

    const double gen_sockets = static_cast<double>(n_source) * mean_node_degree(dist.generator_edge);
    const double code_sockets = static_cast<double>(m) * mean_node_degree(dist.code_edge);
    if (std::abs(gen_sockets - code_sockets) > 1.0 + std::max(gen_sockets, code_sockets) / 1000.0)
        throw std::invalid_argument("build_irregular: degree distribution inconsistent with the requested rate");

    auto gen_counts = class_counts(node_fractions(dist.generator_edge), n_source);
    const auto code_counts = class_counts(node_fractions(dist.code_edge), m);
    const long long target = socket_total(code_counts);

    // Move generator nodes between support classes until socket totals agree.
    std::vector<int> support;
    for (auto [d, c] : dist.generator_edge)
        if (c > 0.0) support.push_back(d);
    for (long long diff = target - socket_total(gen_counts); diff != 0; diff = target - socket_total(gen_counts)) {
        long long best_residual = std::llabs(diff);
        int best_from = 0, best_to = 0;
        for (int from : support) {
            if (gen_counts[from] == 0) continue;
            for (int to : support) {
                const long long residual = std::llabs(diff - (to - from));
                if (residual < best_residual) {
                    best_residual = residual;
                    best_from = from;
                    best_to = to;
                }
            }
        }
        if (best_from == 0) throw std::invalid_argument("build_irregular: cannot reconcile socket totals within the degree support");
        --gen_counts[best_from];
        ++gen_counts[best_to];
    }

    // Degrees are laid out in ascending class order; node ids are then
    // permuted so the class of a node carries no positional information.
    auto expand = [](const std::map<int, std::size_t>& counts) {
        std::vector<int> deg;
        for (auto [d, c] : counts) deg.insert(deg.end(), c, d);
        return deg;
    };
    Rng rng(seed);
    auto gen_deg = expand(gen_counts);
    auto code_deg = expand(code_counts);
    shuffle(gen_deg.begin(), gen_deg.end(), rng);
    shuffle(code_deg.begin(), code_deg.end(), rng);

    std::vector<std::uint32_t> gen_sockets_list, code_sockets_list;
    gen_sockets_list.reserve(static_cast<std::size_t>(target));
    code_sockets_list.reserve(static_cast<std::size_t>(target));
    for (std::uint32_t a = 0; a < gen_deg.size(); ++a) gen_sockets_list.insert(gen_sockets_list.end(), static_cast<std::size_t>(gen_deg[a]), a);
    for (std::uint32_t i = 0; i < code_deg.size(); ++i) code_sockets_list.insert(code_sockets_list.end(), static_cast<std::size_t>(code_deg[i]), i);
    shuffle(code_sockets_list.begin(), code_sockets_list.end(), rng);

    const std::size_t n_e = gen_sockets_list.size();
    std::vector<Edge> edges(n_e);
    std::unordered_multiset<std::uint64_t> present;
    present.reserve(n_e * 2);
    for (std::size_t e = 0; e < n_e; ++e) {
        edges[e] = {gen_sockets_list[e], code_sockets_list[e]};
        present.insert(edge_key(edges[e].generator, edges[e].codebit));
    }

    // Remove parallel edges with degree-preserving endpoint swaps.
    const std::size_t max_attempts = 1000 * (n_e + 1);
    std::size_t attempts = 0;
    for (std::size_t e = 0; e < n_e; ++e) {
        while (present.count(edge_key(edges[e].generator, edges[e].codebit)) > 1) {
            if (++attempts > max_attempts) throw std::runtime_error("build_irregular: could not remove parallel edges");
            const auto f = static_cast<std::size_t>(uniform_index(rng, n_e));
            if (f == e) continue;
            const Edge x{edges[e].generator, edges[f].codebit};
            const Edge y{edges[f].generator, edges[e].codebit};
            if (present.count(edge_key(x.generator, x.codebit)) || present.count(edge_key(y.generator, y.codebit))) continue;
            present.erase(present.find(edge_key(edges[e].generator, edges[e].codebit)));
            present.erase(present.find(edge_key(edges[f].generator, edges[f].codebit)));
            edges[e] = x;
            edges[f] = y;
            present.insert(edge_key(x.generator, x.codebit));
            present.insert(edge_key(y.generator, y.codebit));
        }
    }
    return FactorGraph(n_source, m, std::move(edges));
}

DegreeProfile degree_stats(const FactorGraph& graph) {
    DegreeProfile p;
    for (std::size_t i = 0; i < graph.n_codebits(); ++i) p.max_code_degree = std::max(p.max_code_degree, graph.codebit_degree(i));
    for (std::size_t a = 0; a < graph.n_generators(); ++a)
        p.max_generator_degree = std::max(p.max_generator_degree, graph.generator_degree(a));
    p.code_histogram.assign(p.max_code_degree + 1, 0);
    p.generator_histogram.assign(p.max_generator_degree + 1, 0);
    for (std::size_t i = 0; i < graph.n_codebits(); ++i) ++p.code_histogram[graph.codebit_degree(i)];
    for (std::size_t a = 0; a < graph.n_generators(); ++a) ++p.generator_histogram[graph.generator_degree(a)];
    const auto e = static_cast<double>(graph.n_edges());
    p.mean_code_degree = e / static_cast<double>(graph.n_codebits());
    p.mean_generator_degree = e / static_cast<double>(graph.n_generators());
    return p;
}

void write_graph(std::ostream& out, const FactorGraph& graph) {
    out << graph.n_generators() << ' ' << graph.n_codebits() << ' ' << graph.n_edges() << '\n';
    for (const auto& e : graph.edges()) out << e.generator << ' ' << e.codebit << '\n';
}

FactorGraph read_graph(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    auto fail = [&](const std::string& what) -> std::runtime_error {
        return std::runtime_error("graph file line " + std::to_string(line_no) + ": " + what);
    };
    auto next_line = [&]() -> bool {
        while (std::getline(in, line)) {
            ++line_no;
            if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
        }
        return false;
    };

    if (!next_line()) throw fail("missing header");
    std::istringstream header(line);
    long long n = -1, m = -1, e = -1;
    std::string extra;
    if (!(header >> n >> m >> e) || (header >> extra)) throw fail("header must be 'N M E'");
    if (n <= 0 || m <= 0 || e < 0) throw fail("header counts must be positive");

    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(e));
    std::unordered_set<std::uint64_t> seen;
    while (next_line()) {
        std::istringstream row(line);
        long long a = -1, i = -1;
        if (!(row >> a >> i) || (row >> extra)) throw fail("expected 'a i'");
        if (a < 0 || a >= n || i < 0 || i >= m) throw fail("edge endpoint out of range");
        if (!seen.insert(edge_key(static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(i))).second)
            throw fail("parallel edge");
        if (static_cast<long long>(edges.size()) == e) throw fail("more edges than declared in header");
        edges.push_back({static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(i)});
    }
    if (static_cast<long long>(edges.size()) != e)
        throw std::runtime_error("graph file: header declares " + std::to_string(e) + " edges, found " + std::to_string(edges.size()));
    return FactorGraph(static_cast<std::size_t>(n), static_cast<std::size_t>(m), std::move(edges));
}

}  // namespace ldgm
