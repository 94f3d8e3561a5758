#pragma once

// Small dense exact matrices over Z and Q.

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "algdyn/error.hpp"

namespace algdyn {

template <class T>
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}

    static DenseMatrix identity(std::size_t n)
    {
        DenseMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b)
    {
        if (a.cols_ != b.rows_) throw InputError("matrix product shape mismatch");
        DenseMatrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                if (a(i, k) == 0) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += a(i, k) * b(k, j);
            }
        return c;
    }

    friend DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b)
    {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw InputError("matrix difference shape mismatch");
        for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] -= b.data_[i];
        return a;
    }

    friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<T> data_;
};

using IntMatrix = DenseMatrix<mpz_class>;
using RationalMatrix = DenseMatrix<mpq_class>;

/// Fraction-free (Bareiss) determinant with row pivoting.
mpz_class bareiss_determinant(IntMatrix m);

IntMatrix matrix_power(const IntMatrix& a, std::uint64_t n);

/// Gauss-Jordan inverse over Q; throws InputError when singular.
RationalMatrix inverse(const RationalMatrix& a);

/// Parses "0,-1;1,6/5" (rows split by ';' or newlines, entries by ',' or whitespace).
RationalMatrix parse_rational_matrix(std::string_view text);

/// Accepts [[0,-1],[1,"6/5"]]: numbers or rational strings.
RationalMatrix rational_matrix_from_json(const nlohmann::json& j);

/// Throws InputError if an entry is not an integer.
IntMatrix to_integer_matrix(const RationalMatrix& a);
RationalMatrix to_rational_matrix(const IntMatrix& a);

std::string to_string(const mpq_class& q);

} // namespace algdyn
