#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ldgm {

/// Packed binary sequence. Bits past size() in the last word are kept zero.
class BitVector {
public:
    BitVector() = default;
    explicit BitVector(std::size_t n, bool value = false);

    static BitVector from_string(std::string_view bits);  // "0110" -> {0,1,1,0}
    static BitVector from_bits(std::span<const std::uint8_t> bits);

    std::size_t size() const noexcept { return size_; }
    bool empty() const noexcept { return size_ == 0; }

    bool get(std::size_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1U; }
    void set(std::size_t i, bool v) noexcept {
        const std::uint64_t mask = std::uint64_t{1} << (i & 63);
        if (v) words_[i >> 6] |= mask;
        else words_[i >> 6] &= ~mask;
    }
    void flip(std::size_t i) noexcept { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }
    bool operator[](std::size_t i) const noexcept { return get(i); }

    std::size_t count() const noexcept;
    BitVector& operator^=(const BitVector& other);
    friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }
    friend bool operator==(const BitVector&, const BitVector&) = default;

    /// Number of positions where the two vectors differ.
    std::size_t hamming(const BitVector& other) const;

    std::span<const std::uint64_t> words() const noexcept { return words_; }
    std::string to_string() const;

private:
    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

}  // namespace ldgm
