#include "doctest.h"
#include "oracles.hpp"

#include "ldgm/codec.hpp"

#include <cmath>

using namespace ldgm;

TEST_CASE("reconstruct: identity-like graph selects code bits") {
    // Generator a sees only code bit perm[a].
    const std::vector<std::uint32_t> perm = {2, 0, 3, 1};
    std::vector<Edge> edges;
    for (std::uint32_t a = 0; a < 4; ++a) edges.push_back({a, perm[a]});
    const FactorGraph g(4, 4, edges);
    const auto w = BitVector::from_string("1101");
    const auto s = reconstruct(g, w);
    for (std::size_t a = 0; a < 4; ++a) CHECK(s.get(a) == w.get(perm[a]));
    CHECK(reconstruct(g, BitVector(4)) == BitVector(4));
}

TEST_CASE("reconstruct: isolated generators give 0 and length is checked") {
    const FactorGraph g(3, 2, {{0, 0}, {0, 1}});
    CHECK(reconstruct(g, BitVector::from_string("11")).to_string() == "000");
    CHECK(reconstruct(g, BitVector::from_string("10")).to_string() == "100");
    CHECK_THROWS_AS(reconstruct(g, BitVector(3)), std::invalid_argument);
}

TEST_CASE("reconstruct matches a dense GF(2) product") {
    Rng rng(5);
    for (int k = 0; k < 100; ++k) {
        const auto g = oracle::random_graph(6, 4, 0.5, rng);
        const auto w = oracle::random_bits(4, rng);
        CHECK(oracle::to_ints(reconstruct(g, w)) == oracle::dense_multiply(oracle::dense_matrix(g), oracle::to_ints(w)));
    }
}

TEST_CASE("reconstruct is linear") {
    Rng rng(6);
    for (int k = 0; k < 50; ++k) {
        const auto g = build_semi_regular(64, 0.5, 3, rng());
        const auto w1 = oracle::random_bits(32, rng), w2 = oracle::random_bits(32, rng);
        CHECK(reconstruct(g, w1 ^ w2) == (reconstruct(g, w1) ^ reconstruct(g, w2)));
    }
}

TEST_CASE("distortion examples and metric properties") {
    const auto s = BitVector::from_string("0110");
    CHECK(distortion(s, s) == 0.0);
    CHECK(distortion(s, BitVector::from_string("1001")) == 1.0);
    CHECK(distortion(s, BitVector::from_string("0011")) == 0.5);
    CHECK_THROWS_AS(distortion(s, BitVector(3)), std::invalid_argument);
    Rng rng(7);
    for (int k = 0; k < 100; ++k) {
        const auto x = oracle::random_bits(37, rng), y = oracle::random_bits(37, rng), z = oracle::random_bits(37, rng);
        CHECK(distortion(x, y) == distortion(y, x));
        CHECK(distortion(x, z) <= distortion(x, y) + distortion(y, z) + 1e-15);
    }
}

TEST_CASE("rate-distortion function") {
    CHECK(shannon_rate(0.0) == 1.0);
    CHECK(shannon_rate(0.5) == doctest::Approx(0.0));
    CHECK(binary_entropy(0.0) == 0.0);
    CHECK(binary_entropy(1.0) == 0.0);
    CHECK(rd_distortion(0.5) == doctest::Approx(0.1100).epsilon(1e-3));
    CHECK(binary_entropy(0.1100) == doctest::Approx(0.4999).epsilon(1e-3));
    // 1 - h2(D) = 1/2 at D = 0.11002786443835955 (independent high-precision root).
    CHECK(std::abs(rd_distortion(0.5) - 0.11002786443835955) < 1e-11);
    for (int k = 1; k <= 9; ++k) {
        const double r = k / 10.0;
        CHECK(std::abs(shannon_rate(rd_distortion(r)) - r) <= 1e-10);
    }
    CHECK(rd_distortion(1.0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK_THROWS(rd_distortion(0.0));
    CHECK_THROWS(shannon_rate(0.6));
}

TEST_CASE("brute force: M=1 column source is matched exactly") {
    const FactorGraph g(3, 1, {{0, 0}, {2, 0}});
    const auto best = brute_force_optimal(g, BitVector::from_string("101"));
    CHECK(best.distortion == 0.0);
    CHECK(best.codeword.to_string() == "1");
}

TEST_CASE("brute force agrees with an independent enumeration") {
    Rng rng(9);
    for (int k = 0; k < 60; ++k) {
        const bool wide = k % 2 == 0;
        const auto g = wide ? oracle::random_graph(4, 8, 0.4, rng) : oracle::random_graph(8, 4, 0.4, rng);
        const auto s = oracle::random_bits(g.n_generators(), rng);
        const auto best = brute_force_optimal(g, s);
        CHECK(best.mismatches == oracle::enumerate_min_mismatches(g, s));
        CHECK(distortion(s, reconstruct(g, best.codeword)) == best.distortion);
    }
}

TEST_CASE("brute force tie-break picks the lexicographically smallest codeword") {
    // Two identical columns: w=10 and w=01 both reproduce s; 01 < 10 reading from w_0.
    const FactorGraph g(2, 2, {{0, 0}, {0, 1}, {1, 0}, {1, 1}});
    const auto best = brute_force_optimal(g, BitVector::from_string("11"));
    CHECK(best.mismatches == 0);
    CHECK(best.codeword.to_string() == "01");
    CHECK_THROWS(brute_force_optimal(build_semi_regular(50, 0.5, 2, 1), BitVector(50)));
}

TEST_CASE("random_source is deterministic and balanced") {
    Rng a(1), b(1);
    const auto x = random_source(100000, a);
    CHECK(x == random_source(100000, b));
    CHECK(std::abs(static_cast<double>(x.count()) - 50000.0) < 3.0 * std::sqrt(25000.0));
}
