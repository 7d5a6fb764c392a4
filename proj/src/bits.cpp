#include "plaqsym/bits.hpp"

#include <stdexcept>

namespace plaqsym::gf2 {

BitVector BitVector::rotated_up() const {
    BitVector out(size_);
    if (size_ == 0) return out;
    auto dst = out.words();
    const std::size_t nw = words_.size();
    for (std::size_t w = 0; w < nw; ++w) {
        std::uint64_t v = words_[w] >> 1;
        if (w + 1 < nw) v |= words_[w + 1] << 63;
        dst[w] = v;
    }
    out.set(size_ - 1, get(0));
    out.mask_tail();
    return out;
}

BitVector BitVector::rotated_down() const {
    BitVector out(size_);
    if (size_ == 0) return out;
    auto dst = out.words();
    const std::size_t nw = words_.size();
    for (std::size_t w = nw; w-- > 0;) {
        std::uint64_t v = words_[w] << 1;
        if (w > 0) v |= words_[w - 1] >> 63;
        dst[w] = v;
    }
    out.set(0, get(size_ - 1));
    out.mask_tail();
    return out;
}

std::string BitVector::to_string() const {
    std::string s(size_, '0');
    for (std::size_t i = 0; i < size_; ++i)
        if (get(i)) s[i] = '1';
    return s;
}

BitVector BitVector::parse(const std::string& s) {
    BitVector v(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '1')
            v.set(i);
        else if (s[i] != '0')
            throw std::invalid_argument("BitVector::parse: expected '0'/'1'");
    }
    return v;
}

BinMatrix BinMatrix::from_rows(const std::vector<BitVector>& rows, std::size_t cols) {
    BinMatrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols) throw std::invalid_argument("from_rows: column mismatch");
        m.set_row(r, rows[r]);
    }
    return m;
}

std::vector<std::string> BinMatrix::to_lines() const {
    std::vector<std::string> out;
    out.reserve(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        std::string s(cols_, '0');
        for (std::size_t c = 0; c < cols_; ++c)
            if (get(r, c)) s[c] = '1';
        out.push_back(std::move(s));
    }
    return out;
}

BinMatrix BinMatrix::from_lines(const std::vector<std::string>& lines) {
    const std::size_t rows = lines.size();
    const std::size_t cols = rows ? lines[0].size() : 0;
    BinMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        if (lines[r].size() != cols) throw std::invalid_argument("from_lines: ragged input");
        for (std::size_t c = 0; c < cols; ++c) {
            if (lines[r][c] == '1')
                m.set(r, c, true);
            else if (lines[r][c] != '0')
                throw std::invalid_argument("from_lines: expected '0'/'1'");
        }
    }
    return m;
}

BinMatrix hstack(const BinMatrix& a, const BinMatrix& b) {
    if (a.rows() != b.rows()) throw std::invalid_argument("hstack: row mismatch");
    BinMatrix m(a.rows(), a.cols() + b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < a.cols(); ++c)
            if (a.get(r, c)) m.set(r, c, true);
        for (std::size_t c = 0; c < b.cols(); ++c)
            if (b.get(r, c)) m.set(r, a.cols() + c, true);
    }
    return m;
}

BinMatrix vstack(const BinMatrix& a, const BinMatrix& b) {
    if (a.cols() != b.cols()) throw std::invalid_argument("vstack: column mismatch");
    BinMatrix m(a.rows() + b.rows(), a.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        auto dst = m.row_words(r);
        auto src = a.row_words(r);
        for (std::size_t w = 0; w < src.size(); ++w) dst[w] = src[w];
    }
    for (std::size_t r = 0; r < b.rows(); ++r) {
        auto dst = m.row_words(a.rows() + r);
        auto src = b.row_words(r);
        for (std::size_t w = 0; w < src.size(); ++w) dst[w] = src[w];
    }
    return m;
}

BinMatrix transpose(const BinMatrix& m) {
    BinMatrix t(m.cols(), m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            if (m.get(r, c)) t.set(c, r, true);
    return t;
}

} // namespace plaqsym::gf2
