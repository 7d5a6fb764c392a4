#include "plaqsym/gf2.hpp"

#include <algorithm>
#include <stdexcept>

namespace plaqsym::gf2 {

RrefResult rref(const BinMatrix& m) {
    RrefResult res;
    res.matrix = m;
    BinMatrix& a = res.matrix;
    const std::size_t rows = a.rows(), cols = a.cols();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t pivot = rows;
        for (std::size_t i = r; i < rows; ++i) {
            if (a.get(i, c)) {
                pivot = i;
                break;
            }
        }
        if (pivot == rows) continue;
        a.swap_rows(r, pivot);
        const std::size_t w0 = c / kWordBits;
        for (std::size_t i = 0; i < rows; ++i)
            if (i != r && a.get(i, c)) a.xor_rows_from(i, r, w0);
        res.pivot_columns.push_back(c);
        ++r;
    }
    res.rank = r;
    return res;
}

std::size_t rank(const BinMatrix& m) {
    BinMatrix a = m;
    const std::size_t rows = a.rows(), cols = a.cols();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t pivot = rows;
        for (std::size_t i = r; i < rows; ++i) {
            if (a.get(i, c)) {
                pivot = i;
                break;
            }
        }
        if (pivot == rows) continue;
        a.swap_rows(r, pivot);
        const std::size_t w0 = c / kWordBits;
        for (std::size_t i = r + 1; i < rows; ++i)
            if (a.get(i, c)) a.xor_rows_from(i, r, w0);
        ++r;
    }
    return r;
}

BinMatrix nullspace(const BinMatrix& m) {
    const RrefResult rr = rref(m);
    const std::size_t n = m.cols();
    std::vector<char> is_pivot(n, 0);
    for (auto c : rr.pivot_columns) is_pivot[c] = 1;

    std::vector<std::size_t> free_cols;
    for (std::size_t c = 0; c < n; ++c)
        if (!is_pivot[c]) free_cols.push_back(c);

    BinMatrix t(n, free_cols.size());
    for (std::size_t k = 0; k < free_cols.size(); ++k) {
        const std::size_t f = free_cols[k];
        t.set(f, k, true);
        for (std::size_t j = 0; j < rr.pivot_columns.size(); ++j)
            if (rr.matrix.get(j, f)) t.set(rr.pivot_columns[j], k, true);
    }
    return t;
}

BinMatrix restrict_columns(const BinMatrix& m, std::span<const std::size_t> cols) {
    BinMatrix out(m.rows(), cols.size());
    for (std::size_t k = 0; k < cols.size(); ++k)
        if (cols[k] >= m.cols()) throw std::out_of_range("restrict_columns: column index out of range");
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t k = 0; k < cols.size(); ++k)
            if (m.get(r, cols[k])) out.set(r, k, true);
    return out;
}

BinMatrix restrict_rows(const BinMatrix& m, std::span<const std::size_t> rows) {
    BinMatrix out(rows.size(), m.cols());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        if (rows[k] >= m.rows()) throw std::out_of_range("restrict_rows: row index out of range");
        auto dst = out.row_words(k);
        auto src = m.row_words(rows[k]);
        for (std::size_t w = 0; w < src.size(); ++w) dst[w] = src[w];
    }
    return out;
}

ZeroBlockResult zero_block_reduce(const BinMatrix& m, std::span<const std::size_t> target_cols) {
    for (auto c : target_cols)
        if (c >= m.cols()) throw std::out_of_range("zero_block_reduce: target column out of range");

    BinMatrix a = m;
    const std::size_t rows = a.rows();
    std::vector<char> used(rows, 0);
    std::size_t eliminated = 0;
    for (auto c : target_cols) {
        std::size_t pivot = rows;
        for (std::size_t i = 0; i < rows; ++i) {
            if (!used[i] && a.get(i, c)) {
                pivot = i;
                break;
            }
        }
        if (pivot == rows) continue;
        used[pivot] = 1;
        ++eliminated;
        for (std::size_t i = 0; i < rows; ++i)
            if (i != pivot && a.get(i, c)) a.xor_rows(i, pivot);
    }

    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < rows; ++i)
        if (!used[i] && !a.row_empty(i)) keep.push_back(i);
    BinMatrix raw = restrict_rows(a, keep);

    // Reduce to an independent basis; the kept rows can still be dependent.
    RrefResult rr = rref(raw);
    std::vector<std::size_t> nonzero;
    for (std::size_t i = 0; i < rr.rank; ++i) nonzero.push_back(i);
    return {restrict_rows(rr.matrix, nonzero), eliminated};
}

BitVector random_combination(const BinMatrix& t, std::mt19937_64& rng, bool include_identity) {
    const std::size_t n = t.rows(), m = t.cols();
    // generators as rows so a sample is a handful of word-level XORs
    std::vector<BitVector> gens(m, BitVector(n));
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t k = 0; k < m; ++k)
            if (t.get(r, k)) gens[k].set(r);
    for (int attempt = 0; attempt < 4096; ++attempt) {
        BitVector v(n);
        for (std::size_t k = 0; k < m; ++k)
            if (rng() & 1u) v.xor_with(gens[k]);
        if (include_identity || v.any()) return v;
        if (m == 0) break;
    }
    throw std::runtime_error("trivial group");
}

bool RowBasis::insert(BitVector row) {
    if (row.size() != cols_) throw std::invalid_argument("RowBasis::insert: size mismatch");
    for (std::size_t k = 0; k < basis_.size(); ++k)
        if (row.get(pivots_[k])) row.xor_with(basis_[k]);
    if (!row.any()) return false;
    std::size_t lead = 0;
    while (!row.get(lead)) ++lead;
    // keep echelon: reduce existing rows against the new pivot
    for (std::size_t k = 0; k < basis_.size(); ++k)
        if (basis_[k].get(lead)) basis_[k].xor_with(row);
    basis_.push_back(std::move(row));
    pivots_.push_back(lead);
    return true;
}

} // namespace plaqsym::gf2
