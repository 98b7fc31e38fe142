#include "doctest.h"
#include "oracles.hpp"

#include "ldgm/factor_graph.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

using namespace ldgm;

namespace {

void check_adjacency_consistent(const FactorGraph& g) {
    std::size_t gen_total = 0, code_total = 0;
    for (std::size_t a = 0; a < g.n_generators(); ++a) {
        const auto nb = g.codebits_of(a);
        gen_total += nb.size();
        for (std::size_t k = 0; k < nb.size(); ++k) {
            const auto e = g.generator_begin(a) + k;
            REQUIRE(g.edge(e).generator == a);
            REQUIRE(g.edge(e).codebit == nb[k]);
        }
    }
    for (std::size_t i = 0; i < g.n_codebits(); ++i) {
        const auto gens = g.generators_of(i);
        const auto eids = g.codebit_edges(i);
        code_total += gens.size();
        for (std::size_t k = 0; k < gens.size(); ++k) {
            REQUIRE(g.edge(eids[k]).codebit == i);
            REQUIRE(g.edge(eids[k]).generator == gens[k]);
        }
    }
    CHECK(gen_total == g.n_edges());
    CHECK(code_total == g.n_edges());
    std::set<std::pair<std::uint32_t, std::uint32_t>> uniq;
    for (const auto& e : g.edges()) uniq.insert({e.generator, e.codebit});
    CHECK(uniq.size() == g.n_edges());
}

}  // namespace

TEST_CASE("codebit_count rounds half to even") {
    CHECK(codebit_count(10000, 0.5) == 5000);
    CHECK(codebit_count(1000, 0.5) == 500);
    CHECK(codebit_count(5, 0.5) == 2);  // 2.5 -> 2
    CHECK(codebit_count(7, 0.5) == 4);  // 3.5 -> 4
    CHECK(codebit_count(1, 1.0) == 1);
}

TEST_CASE("semi-regular: N=1, R=1, K=1 gives the single edge (0,0)") {
    const auto g = build_semi_regular(1, 1.0, 1, 7);
    REQUIRE(g.n_edges() == 1);
    CHECK(g.edge(0) == Edge{0, 0});
    const auto st = degree_stats(g);
    CHECK(st.max_code_degree == 1);
    CHECK(st.max_generator_degree == 1);
}

TEST_CASE("semi-regular: mean code degree 6 and generator point mass at K") {
    const auto g = build_semi_regular(10000, 0.5, 3, 11);
    CHECK(g.n_codebits() == 5000);
    CHECK(g.n_edges() == 30000);
    const auto st = degree_stats(g);
    CHECK(st.mean_code_degree == 6.0);
    CHECK(st.generator_histogram.size() == 4);
    CHECK(st.generator_histogram[3] == 10000);
    check_adjacency_consistent(g);
}

TEST_CASE("semi-regular rejects K > M and bad inputs") {
    CHECK_THROWS_AS(build_semi_regular(4, 0.5, 3, 1), std::invalid_argument);
    CHECK_THROWS_AS(build_semi_regular(0, 0.5, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(build_semi_regular(10, 0.5, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(build_semi_regular(10, 1.5, 1, 1), std::invalid_argument);
    CHECK_NOTHROW(build_semi_regular(6, 0.5, 3, 1));
}

TEST_CASE("semi-regular code-degree histogram matches Binomial(30000, 1/5000)") {
    // Pool 50 graphs; bins 0..13 with an open top bin, all expecting >= 5 counts.
    const std::size_t seeds = 50, top = 14;
    std::vector<double> observed(top + 1, 0.0);
    for (std::size_t s = 0; s < seeds; ++s) {
        const auto g = build_semi_regular(10000, 0.5, 3, 1000 + s);
        for (std::size_t i = 0; i < g.n_codebits(); ++i) observed[std::min(g.codebit_degree(i), top)] += 1.0;
    }
    const double total = static_cast<double>(seeds * 5000);
    std::vector<double> expected(top + 1, 0.0);
    double mass = 0.0;
    for (std::size_t k = 0; k < top; ++k) {
        expected[k] = total * oracle::binomial_pmf(30000, 1.0 / 5000.0, k);
        mass += expected[k];
    }
    expected[top] = total - mass;
    for (double e : expected) REQUIRE(e >= 5.0);
    const double x2 = oracle::pearson(observed, expected);
    const double p = oracle::chi_square_pvalue(x2, static_cast<double>(top));
    INFO("chi2 = " << x2 << ", p = " << p);
    CHECK(p > 1e-3);
}

TEST_CASE("optimized rate-1/2 distribution: node fractions sum to 2/7") {
    const auto d = DegreeDistribution::optimized_rate_half();
    CHECK_NOTHROW(d.validate());
    // Hand computation: sum rho_d / d over the four terms.
    const double s = 0.275698 / 2 + 0.25537 / 3 + 0.076598 / 4 + 0.39233 / 9;
    CHECK(s == doctest::Approx(2.0 / 7.0).epsilon(1e-5));
    CHECK(mean_node_degree(d.generator_edge) == doctest::Approx(3.5).epsilon(1e-5));
    CHECK(mean_node_degree(d.code_edge) == doctest::Approx(7.0));
    const auto f = node_fractions(d.generator_edge);
    double sum = 0.0;
    for (const auto& [deg, frac] : f) sum += frac;
    CHECK(sum == doctest::Approx(1.0));
    CHECK(f.at(2) == doctest::Approx(0.275698 / 2 / s));
}

TEST_CASE("irregular ensemble: code degrees all 7, generator degrees from {2,3,4,9}") {
    const auto d = DegreeDistribution::optimized_rate_half();
    const auto g = build_irregular(1000, 0.5, d, 5);
    CHECK(g.n_codebits() == 500);
    const auto st = degree_stats(g);
    CHECK(st.code_histogram.size() == 8);
    CHECK(st.code_histogram[7] == 500);
    CHECK(g.n_edges() == 3500);
    std::set<std::size_t> gen_degrees;
    for (std::size_t a = 0; a < g.n_generators(); ++a) gen_degrees.insert(g.generator_degree(a));
    for (auto deg : gen_degrees) CHECK((deg == 2 || deg == 3 || deg == 4 || deg == 9));
    check_adjacency_consistent(g);

    // Node fractions land near the target.
    const auto f = node_fractions(d.generator_edge);
    for (const auto& [deg, frac] : f)
        CHECK(static_cast<double>(st.generator_histogram.at(deg)) / 1000.0 == doctest::Approx(frac).epsilon(0.02));
}

TEST_CASE("irregular ensemble at other lengths") {
    const auto d = DegreeDistribution::optimized_rate_half();
    for (std::size_t n : {100, 200, 500, 2000, 10000}) {
        const auto g = build_irregular(n, 0.5, d, n);
        const auto st = degree_stats(g);
        CHECK(st.code_histogram.back() == g.n_codebits());
        CHECK(st.max_code_degree == 7);
        check_adjacency_consistent(g);
    }
}

TEST_CASE("irregular ensemble rejects inconsistent rates") {
    const auto d = DegreeDistribution::optimized_rate_half();
    CHECK_THROWS_AS(build_irregular(1000, 0.25, d, 1), std::invalid_argument);
    DegreeDistribution bad = d;
    bad.code_edge[7] = 0.5;
    CHECK_THROWS_AS(build_irregular(1000, 0.5, bad, 1), std::invalid_argument);
}

TEST_CASE("construction is deterministic in the seed") {
    const auto d = DegreeDistribution::optimized_rate_half();
    CHECK(build_irregular(1000, 0.5, d, 42) == build_irregular(1000, 0.5, d, 42));
    CHECK_FALSE(build_irregular(1000, 0.5, d, 42) == build_irregular(1000, 0.5, d, 43));
    CHECK(build_semi_regular(500, 0.5, 4, 9) == build_semi_regular(500, 0.5, 4, 9));
}

TEST_CASE("property: adjacency round-trip over random parameters") {
    Rng rng(2024);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 1 + uniform_index(rng, 300);
        const double rate = 0.2 + 0.8 * uniform_unit(rng);
        const std::size_t m = codebit_count(n, rate);
        if (m == 0) continue;
        const std::size_t k = 1 + uniform_index(rng, std::min<std::size_t>(m, 6));
        const auto g = build_semi_regular(n, rate, k, rng());
        check_adjacency_consistent(g);
        CHECK(degree_stats(g).generator_histogram[k] == n);
    }
}

TEST_CASE("degree_stats on a single edge graph") {
    const FactorGraph g(1, 1, {{0, 0}});
    const auto st = degree_stats(g);
    CHECK(st.max_code_degree == 1);
    CHECK(st.max_generator_degree == 1);
    CHECK(st.mean_code_degree == 1.0);
}

TEST_CASE("FactorGraph validation") {
    CHECK_THROWS_AS(FactorGraph(2, 2, {{0, 0}, {0, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(FactorGraph(2, 2, {{2, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(FactorGraph(2, 2, {{0, 5}}), std::invalid_argument);
    const FactorGraph g(2, 3, {{1, 2}, {0, 1}, {1, 0}});
    CHECK(g.edge(0) == Edge{0, 1});
    CHECK(g.edge(1) == Edge{1, 0});
    CHECK(g.edge(2) == Edge{1, 2});
    CHECK(g.codebit_degree(1) == 1);
}

TEST_CASE("graph text format round-trip and errors") {
    const auto g = build_semi_regular(50, 0.5, 3, 3);
    std::stringstream ss;
    write_graph(ss, g);
    CHECK(read_graph(ss) == g);

    std::stringstream bad1("2 2 2\n0 0\n0 0\n");
    CHECK_THROWS_AS(read_graph(bad1), std::runtime_error);
    std::stringstream bad2("2 2 2\n0 0\n");
    CHECK_THROWS_AS(read_graph(bad2), std::runtime_error);
    std::stringstream bad3("2 2 1\n0 7\n");
    try {
        read_graph(bad3);
        FAIL("expected an error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}
