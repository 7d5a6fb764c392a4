#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace plaqsym::gf2 {

inline constexpr std::size_t kWordBits = 64;

inline std::size_t words_for(std::size_t bits) { return (bits + kWordBits - 1) / kWordBits; }

// Packed bit vector over GF(2). Bit i lives in word i/64, bit position i%64.
class BitVector {
public:
    BitVector() = default;
    explicit BitVector(std::size_t n) : size_(n), words_(words_for(n), 0) {}

    static BitVector unit(std::size_t n, std::size_t i) {
        BitVector v(n);
        v.set(i);
        return v;
    }

    std::size_t size() const { return size_; }
    bool empty() const { return size_ == 0; }

    bool get(std::size_t i) const { return (words_[i / kWordBits] >> (i % kWordBits)) & 1u; }
    void set(std::size_t i, bool v = true) {
        const std::uint64_t m = std::uint64_t{1} << (i % kWordBits);
        if (v)
            words_[i / kWordBits] |= m;
        else
            words_[i / kWordBits] &= ~m;
    }

    void xor_with(const BitVector& o) {
        for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= o.words_[w];
    }
    void and_with(const BitVector& o) {
        for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= o.words_[w];
    }

    bool any() const {
        for (auto w : words_)
            if (w) return true;
        return false;
    }
    std::size_t popcount() const {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    // v[i] = this[(i+1) mod n] : pulls the right neighbour onto each site.
    BitVector rotated_up() const;
    // v[i] = this[(i-1) mod n]
    BitVector rotated_down() const;

    std::span<const std::uint64_t> words() const { return words_; }
    std::span<std::uint64_t> words() { return words_; }

    std::string to_string() const;
    static BitVector parse(const std::string& s);

    bool operator==(const BitVector&) const = default;

private:
    void mask_tail() {
        if (size_ % kWordBits != 0 && !words_.empty())
            words_.back() &= (std::uint64_t{1} << (size_ % kWordBits)) - 1;
    }

    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

// Dense row-major bit matrix over GF(2). All bits beyond `cols` in the last
// word of each row stay zero.
class BinMatrix {
public:
    BinMatrix() = default;
    BinMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), wpr_(words_for(cols)), bits_(rows * wpr_, 0) {}

    static BinMatrix identity(std::size_t n) {
        BinMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
        return m;
    }
    static BinMatrix from_rows(const std::vector<BitVector>& rows, std::size_t cols);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    bool get(std::size_t r, std::size_t c) const {
        return (bits_[r * wpr_ + c / kWordBits] >> (c % kWordBits)) & 1u;
    }
    void set(std::size_t r, std::size_t c, bool v) {
        const std::uint64_t m = std::uint64_t{1} << (c % kWordBits);
        if (v)
            bits_[r * wpr_ + c / kWordBits] |= m;
        else
            bits_[r * wpr_ + c / kWordBits] &= ~m;
    }
    void flip(std::size_t r, std::size_t c) { bits_[r * wpr_ + c / kWordBits] ^= std::uint64_t{1} << (c % kWordBits); }

    std::span<const std::uint64_t> row_words(std::size_t r) const { return {bits_.data() + r * wpr_, wpr_}; }
    std::span<std::uint64_t> row_words(std::size_t r) { return {bits_.data() + r * wpr_, wpr_}; }

    void xor_rows(std::size_t dst, std::size_t src) {
        auto* d = bits_.data() + dst * wpr_;
        const auto* s = bits_.data() + src * wpr_;
        for (std::size_t w = 0; w < wpr_; ++w) d[w] ^= s[w];
    }
    // XOR starting at a word offset; valid when src is zero left of it.
    void xor_rows_from(std::size_t dst, std::size_t src, std::size_t word0) {
        auto* d = bits_.data() + dst * wpr_;
        const auto* s = bits_.data() + src * wpr_;
        for (std::size_t w = word0; w < wpr_; ++w) d[w] ^= s[w];
    }
    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        auto* pa = bits_.data() + a * wpr_;
        auto* pb = bits_.data() + b * wpr_;
        for (std::size_t w = 0; w < wpr_; ++w) std::swap(pa[w], pb[w]);
    }

    bool row_empty(std::size_t r) const {
        const auto* p = bits_.data() + r * wpr_;
        for (std::size_t w = 0; w < wpr_; ++w)
            if (p[w]) return false;
        return true;
    }
    std::size_t row_popcount(std::size_t r) const {
        const auto* p = bits_.data() + r * wpr_;
        std::size_t c = 0;
        for (std::size_t w = 0; w < wpr_; ++w) c += static_cast<std::size_t>(std::popcount(p[w]));
        return c;
    }

    BitVector row(std::size_t r) const {
        BitVector v(cols_);
        auto dst = v.words();
        const auto* src = bits_.data() + r * wpr_;
        for (std::size_t w = 0; w < wpr_; ++w) dst[w] = src[w];
        return v;
    }
    void set_row(std::size_t r, const BitVector& v) {
        auto* dst = bits_.data() + r * wpr_;
        auto src = v.words();
        for (std::size_t w = 0; w < wpr_; ++w) dst[w] = src[w];
    }

    // Debug serialization: one ASCII '0'/'1' line per row.
    std::vector<std::string> to_lines() const;
    static BinMatrix from_lines(const std::vector<std::string>& lines);

    bool operator==(const BinMatrix&) const = default;

private:
    std::size_t rows_ = 0, cols_ = 0, wpr_ = 0;
    std::vector<std::uint64_t> bits_;
};

BinMatrix hstack(const BinMatrix& a, const BinMatrix& b);
BinMatrix vstack(const BinMatrix& a, const BinMatrix& b);
BinMatrix transpose(const BinMatrix& m);

} // namespace plaqsym::gf2
