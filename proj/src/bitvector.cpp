#include "ldgm/bitvector.hpp"

#include <bit>
#include <stdexcept>

namespace ldgm {

BitVector::BitVector(std::size_t n, bool value) : size_(n), words_((n + 63) / 64, value ? ~std::uint64_t{0} : 0) {
    if (value && (n & 63) != 0) words_.back() &= (std::uint64_t{1} << (n & 63)) - 1;
}

BitVector BitVector::from_string(std::string_view bits) {
    BitVector v(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] == '1') v.set(i, true);
        else if (bits[i] != '0') throw std::invalid_argument("BitVector::from_string: expected only '0' and '1'");
    }
    return v;
}

BitVector BitVector::from_bits(std::span<const std::uint8_t> bits) {
    BitVector v(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] > 1) throw std::invalid_argument("BitVector::from_bits: values must be 0 or 1");
        v.set(i, bits[i] != 0);
    }
    return v;
}

std::size_t BitVector::count() const noexcept {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
}

BitVector& BitVector::operator^=(const BitVector& other) {
    if (other.size_ != size_) throw std::invalid_argument("BitVector: length mismatch");
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] ^= other.words_[k];
    return *this;
}

std::size_t BitVector::hamming(const BitVector& other) const {
    if (other.size_ != size_) throw std::invalid_argument("BitVector: length mismatch");
    std::size_t c = 0;
    for (std::size_t k = 0; k < words_.size(); ++k) c += static_cast<std::size_t>(std::popcount(words_[k] ^ other.words_[k]));
    return c;
}

std::string BitVector::to_string() const {
    std::string s(size_, '0');
    for (std::size_t i = 0; i < size_; ++i)
        if (get(i)) s[i] = '1';
    return s;
}

}  // namespace ldgm
