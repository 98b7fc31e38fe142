#include "ldgm/codec.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace ldgm {

BitVector random_source(std::size_t n, Rng& rng) {
    BitVector s(n);
    for (std::size_t a = 0; a < n; ++a) s.set(a, coin_flip(rng));
    return s;
}

BitVector reconstruct(const FactorGraph& graph, const BitVector& codeword) {
    if (codeword.size() != graph.n_codebits()) throw std::invalid_argument("reconstruct: codeword length must equal M");
    BitVector out(graph.n_generators());
    for (std::size_t a = 0; a < graph.n_generators(); ++a) {
        bool parity = false;
        for (auto i : graph.codebits_of(a)) parity ^= codeword.get(i);
        out.set(a, parity);
    }
    return out;
}

double distortion(const BitVector& source, const BitVector& reconstruction) {
    if (source.size() != reconstruction.size()) throw std::invalid_argument("distortion: length mismatch");
    if (source.empty()) throw std::invalid_argument("distortion: empty vectors");
    return static_cast<double>(source.hamming(reconstruction)) / static_cast<double>(source.size());
}

double binary_entropy(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("binary_entropy: p must lie in [0, 1]");
    if (p == 0.0 || p == 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double shannon_rate(double distortion) {
    if (!(distortion >= 0.0 && distortion <= 0.5)) throw std::domain_error("shannon_rate: D must lie in [0, 1/2]");
    return 1.0 - binary_entropy(distortion);
}

double rd_distortion(double rate) {
    if (!(rate > 0.0 && rate <= 1.0)) throw std::domain_error("rd_distortion: R must lie in (0, 1]");
    // shannon_rate is decreasing on [0, 1/2].
    double lo = 0.0, hi = 0.5;
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if (shannon_rate(mid) > rate) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

namespace {

bool lex_less(const BitVector& x, const BitVector& y) {
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x.get(i) != y.get(i)) return !x.get(i);
    return false;
}

}  // namespace

OptimalCode brute_force_optimal(const FactorGraph& graph, const BitVector& source) {
    const std::size_t m = graph.n_codebits();
    if (m > kMaxBruteForceCodebits) throw std::invalid_argument("brute_force_optimal: M too large for exhaustive search");
    if (source.size() != graph.n_generators()) throw std::invalid_argument("brute_force_optimal: source length must equal N");

    std::vector<BitVector> columns(m, BitVector(graph.n_generators()));
    for (const auto& e : graph.edges()) columns[e.codebit].set(e.generator, true);

    // Gray-code walk: consecutive codewords differ in one bit, so G w changes by one column.
    BitVector w(m);
    BitVector s_hat(graph.n_generators());
    OptimalCode best{w, source.hamming(s_hat), 0.0};
    const std::uint64_t total = std::uint64_t{1} << m;
    for (std::uint64_t k = 1; k < total; ++k) {
        const auto bit = static_cast<std::size_t>(std::countr_zero(k));
        w.flip(bit);
        s_hat ^= columns[bit];
        const std::size_t mismatches = source.hamming(s_hat);
        if (mismatches < best.mismatches || (mismatches == best.mismatches && lex_less(w, best.codeword))) {
            best.mismatches = mismatches;
            best.codeword = w;
        }
    }
    best.distortion = static_cast<double>(best.mismatches) / static_cast<double>(graph.n_generators());
    return best;
}

}  // namespace ldgm
