#include "algdyn/fp_linalg.hpp"

#include <bit>

#include "algdyn/error.hpp"

namespace algdyn {

std::uint32_t inverse_mod(std::uint32_t a, std::uint64_t p)
{
    if (a % p == 0) throw InputError("zero has no inverse mod p");
    std::uint64_t r = 1, base = a % p, e = p - 2;
    while (e) {
        if (e & 1) r = r * base % p;
        base = base * base % p;
        e >>= 1;
    }
    return static_cast<std::uint32_t>(r);
}

FpEchelon::FpEchelon(std::size_t cols, std::uint64_t p)
    : cols_(cols), p_(p), words_((cols + 63) / 64), pivot_of_(cols, -1)
{
    if (p < 2 || p >= (std::uint64_t{1} << 31)) throw InputError("F_p linear algebra needs 2 <= p < 2^31");
}

long FpEchelon::insert(const std::vector<std::pair<std::size_t, std::uint32_t>>& entries)
{
    if (p_ == 2) {
        std::vector<std::uint64_t> row(words_, 0);
        for (const auto& [c, v] : entries) {
            if (c >= cols_) throw InputError("column out of range");
            if (v & 1) row[c / 64] ^= std::uint64_t{1} << (c % 64);
        }
        return insert_binary(std::move(row));
    }
    std::vector<std::uint32_t> row(cols_, 0);
    for (const auto& [c, v] : entries) {
        if (c >= cols_) throw InputError("column out of range");
        row[c] = static_cast<std::uint32_t>((row[c] + v) % p_);
    }
    return insert_general(std::move(row));
}

long FpEchelon::insert_binary(std::vector<std::uint64_t> row)
{
    for (std::size_t w = 0; w < words_;) {
        if (row[w] == 0) {
            ++w;
            continue;
        }
        const std::size_t col = w * 64 + static_cast<std::size_t>(std::countr_zero(row[w]));
        const long r = pivot_of_[col];
        if (r < 0) {
            pivot_of_[col] = static_cast<long>(bits_.size());
            bits_.push_back(std::move(row));
            ++rank_;
            return static_cast<long>(col);
        }
        const auto& pr = bits_[static_cast<std::size_t>(r)];
        for (std::size_t k = w; k < words_; ++k) row[k] ^= pr[k];
    }
    return -1;
}

long FpEchelon::insert_general(std::vector<std::uint32_t> row)
{
    for (std::size_t col = 0; col < cols_; ++col) {
        if (row[col] == 0) continue;
        const long r = pivot_of_[col];
        if (r < 0) {
            const std::uint64_t inv = inverse_mod(row[col], p_);
            for (std::size_t k = col; k < cols_; ++k) row[k] = static_cast<std::uint32_t>(row[k] * inv % p_);
            pivot_of_[col] = static_cast<long>(values_.size());
            values_.push_back(std::move(row));
            ++rank_;
            return static_cast<long>(col);
        }
        const auto& pr = values_[static_cast<std::size_t>(r)];
        const std::uint64_t factor = row[col];
        for (std::size_t k = col; k < cols_; ++k)
            if (pr[k]) row[k] = static_cast<std::uint32_t>((row[k] + (p_ - factor) * pr[k]) % p_);
    }
    return -1;
}

FpDense nullspace(FpDense m, std::size_t cols, std::uint64_t p)
{
    // Reduced row echelon form.
    std::vector<std::size_t> pivot_cols;
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols && row < m.size(); ++col) {
        std::size_t piv = row;
        while (piv < m.size() && m[piv][col] == 0) ++piv;
        if (piv == m.size()) continue;
        std::swap(m[piv], m[row]);
        const std::uint64_t inv = inverse_mod(m[row][col], p);
        for (auto& x : m[row]) x = static_cast<std::uint32_t>(x * inv % p);
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (i == row || m[i][col] == 0) continue;
            const std::uint64_t factor = m[i][col];
            for (std::size_t k = 0; k < cols; ++k)
                if (m[row][k]) m[i][k] = static_cast<std::uint32_t>((m[i][k] + (p - factor) * m[row][k]) % p);
        }
        pivot_cols.push_back(col);
        ++row;
    }
    std::vector<long> pivot_row(cols, -1);
    for (std::size_t i = 0; i < pivot_cols.size(); ++i) pivot_row[pivot_cols[i]] = static_cast<long>(i);

    FpDense basis;
    for (std::size_t free = 0; free < cols; ++free) {
        if (pivot_row[free] >= 0) continue;
        std::vector<std::uint32_t> v(cols, 0);
        v[free] = 1;
        for (std::size_t i = 0; i < pivot_cols.size(); ++i)
            v[pivot_cols[i]] = static_cast<std::uint32_t>((p - m[i][free]) % p);
        basis.push_back(std::move(v));
    }
    return basis;
}

} // namespace algdyn
