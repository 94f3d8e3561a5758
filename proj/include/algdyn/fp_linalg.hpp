#pragma once

// Linear algebra over F_p. Rows are reduced by their lowest nonzero column; for p = 2
// rows are bit-packed into 64-bit words.

#include <cstddef>
#include <cstdint>
#include <vector>

namespace algdyn {

/// Incremental row echelon form. A stored row with pivot c is zero in every column < c
/// and has a 1 in column c.
class FpEchelon {
public:
    FpEchelon(std::size_t cols, std::uint64_t p);

    std::size_t cols() const { return cols_; }
    std::uint64_t prime() const { return p_; }
    std::size_t rank() const { return rank_; }
    bool has_pivot(std::size_t col) const { return pivot_of_[col] >= 0; }

    /// Inserts a sparse row (column, value) with values already reduced mod p.
    /// Returns the pivot column of the new row, or -1 if it was dependent.
    long insert(const std::vector<std::pair<std::size_t, std::uint32_t>>& entries);

private:
    long insert_binary(std::vector<std::uint64_t> row);
    long insert_general(std::vector<std::uint32_t> row);

    std::size_t cols_;
    std::uint64_t p_;
    std::size_t words_;
    std::size_t rank_ = 0;
    std::vector<long> pivot_of_;                       // column -> stored row or -1
    std::vector<std::vector<std::uint64_t>> bits_;     // p == 2
    std::vector<std::vector<std::uint32_t>> values_;   // p > 2
};

using FpDense = std::vector<std::vector<std::uint32_t>>;

/// Basis of {x : M x = 0} for an r x c matrix over F_p (rows of the result have length c).
FpDense nullspace(FpDense m, std::size_t cols, std::uint64_t p);

std::uint32_t inverse_mod(std::uint32_t a, std::uint64_t p);

} // namespace algdyn
