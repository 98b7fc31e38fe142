#pragma once

#include "ldgm/bitvector.hpp"
#include "ldgm/factor_graph.hpp"
#include "ldgm/rng.hpp"

#include <cstddef>

namespace ldgm {

/// Bernoulli(1/2) source of length n, one coin flip per bit.
BitVector random_source(std::size_t n, Rng& rng);

/// s_hat = G w over GF(2): s_hat_a is the XOR of w over V(a); an isolated generator gives 0.
BitVector reconstruct(const FactorGraph& graph, const BitVector& codeword);

/// Relative Hamming distance (1/N) sum |s_a - s_hat_a|.
double distortion(const BitVector& source, const BitVector& reconstruction);

/// h2(p) in bits, with h2(0) = h2(1) = 0.
double binary_entropy(double p);

/// R(D) = 1 - h2(D) for D in [0, 1/2].
double shannon_rate(double distortion);

/// Inverse of shannon_rate on [0, 1/2] by bisection to 1e-12.
double rd_distortion(double rate);

struct OptimalCode {
    BitVector codeword;
    std::size_t mismatches = 0;
    double distortion = 0.0;
};

inline constexpr std::size_t kMaxBruteForceCodebits = 20;

/// Exhaustive minimum of d(s, G w) over all 2^M codewords (M <= 20). Among
/// minimizers the lexicographically smallest w (compared from w_0) wins.
OptimalCode brute_force_optimal(const FactorGraph& graph, const BitVector& source);

}  // namespace ldgm
