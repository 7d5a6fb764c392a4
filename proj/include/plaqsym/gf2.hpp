#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include "plaqsym/bits.hpp"

namespace plaqsym::gf2 {

struct RrefResult {
    BinMatrix matrix;                       // reduced row echelon form
    std::vector<std::size_t> pivot_columns; // ascending
    std::size_t rank = 0;
};

// Reduced row echelon form. Pivot selection: first nonzero row in column
// order (lowest row index), so the output is a deterministic function of the
// input.
RrefResult rref(const BinMatrix& m);

// Binary rank; plain echelon pass, agrees exactly with rref().rank.
std::size_t rank(const BinMatrix& m);

// Nullspace basis T with cols(T) = cols(m) - rank(m), m*T = 0 mod 2.
// Column k corresponds to the k-th free column of rref(m) in ascending
// original column index.
BinMatrix nullspace(const BinMatrix& m);

// Column-subselected copy, order preserved. Out-of-range index throws.
BinMatrix restrict_columns(const BinMatrix& m, std::span<const std::size_t> cols);

// Row-subselected copy, order preserved.
BinMatrix restrict_rows(const BinMatrix& m, std::span<const std::size_t> rows);

struct ZeroBlockResult {
    BinMatrix kept;                  // independent basis of the vanishing subspace
    std::size_t eliminated_count = 0; // = rank of m restricted to target columns
};

// Row-reduce so the rows whose restriction to `target_cols` vanishes appear as
// an independent basis. Row space of `kept` equals the subspace of
// row-space(m) that is zero on every target column.
ZeroBlockResult zero_block_reduce(const BinMatrix& m, std::span<const std::size_t> target_cols);

// Uniformly random element of the column span of t. By default the all-zero
// element is excluded; throws std::runtime_error("trivial group") if the span
// has no nonzero element.
BitVector random_combination(const BinMatrix& t, std::mt19937_64& rng, bool include_identity = false);

// Incremental row-space basis: insert rows one at a time, rank grows when the
// row is independent of everything seen so far. Agrees exactly with batch
// rank.
class RowBasis {
public:
    explicit RowBasis(std::size_t cols) : cols_(cols) {}

    // Returns true if the row was independent (rank grew).
    bool insert(BitVector row);
    std::size_t rank() const { return basis_.size(); }
    std::size_t cols() const { return cols_; }

private:
    std::size_t cols_;
    std::vector<BitVector> basis_;      // echelon rows
    std::vector<std::size_t> pivots_;   // leading bit of each basis row
};

} // namespace plaqsym::gf2
