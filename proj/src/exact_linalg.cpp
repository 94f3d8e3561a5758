#include "algdyn/exact_linalg.hpp"

#include <cctype>
#include <sstream>

namespace algdyn {

mpz_class bareiss_determinant(IntMatrix m)
{
    if (!m.square()) throw InputError("determinant of a non-square matrix");
    const std::size_t n = m.rows();
    if (n == 0) return 1;
    mpz_class prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m(k, k) == 0) {
            std::size_t swap_row = k + 1;
            while (swap_row < n && m(swap_row, k) == 0) ++swap_row;
            if (swap_row == n) return 0;
            for (std::size_t j = k; j < n; ++j) std::swap(m(k, j), m(swap_row, j));
            sign = -sign;
        }
        const mpz_class& pivot = m(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const mpz_class lead = m(i, k);
            for (std::size_t j = k + 1; j < n; ++j) {
                mpz_class t = m(i, j) * pivot - lead * m(k, j);
                mpz_divexact(m(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
            m(i, k) = 0;
        }
        prev = pivot;
    }
    return sign * m(n - 1, n - 1);
}

IntMatrix matrix_power(const IntMatrix& a, std::uint64_t n)
{
    if (!a.square()) throw InputError("power of a non-square matrix");
    IntMatrix result = IntMatrix::identity(a.rows());
    IntMatrix base = a;
    while (n > 0) {
        if (n & 1) result = result * base;
        n >>= 1;
        if (n > 0) base = base * base;
    }
    return result;
}

RationalMatrix inverse(const RationalMatrix& a)
{
    if (!a.square()) throw InputError("inverse of a non-square matrix");
    const std::size_t n = a.rows();
    RationalMatrix m = a;
    RationalMatrix inv = RationalMatrix::identity(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && m(piv, col) == 0) ++piv;
        if (piv == n) throw InputError("matrix is singular");
        if (piv != col)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(m(piv, j), m(col, j));
                std::swap(inv(piv, j), inv(col, j));
            }
        const mpq_class scale = 1 / m(col, col);
        for (std::size_t j = 0; j < n; ++j) {
            m(col, j) *= scale;
            inv(col, j) *= scale;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == col || m(i, col) == 0) continue;
            const mpq_class f = m(i, col);
            for (std::size_t j = 0; j < n; ++j) {
                m(i, j) -= f * m(col, j);
                inv(i, j) -= f * inv(col, j);
            }
        }
    }
    return inv;
}

namespace {

mpq_class parse_rational(const std::string& token)
{
    mpq_class q;
    if (token.empty() || q.set_str(token, 10) != 0) throw InputError("bad rational entry '" + token + "'");
    if (q.get_den() == 0) throw InputError("zero denominator in '" + token + "'");
    q.canonicalize();
    return q;
}

RationalMatrix from_rows(const std::vector<std::vector<mpq_class>>& rows)
{
    if (rows.empty()) throw InputError("empty matrix");
    RationalMatrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.cols()) throw InputError("ragged matrix rows");
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
    }
    return m;
}

} // namespace

RationalMatrix parse_rational_matrix(std::string_view text)
{
    std::vector<std::vector<mpq_class>> rows;
    std::vector<mpq_class> row;
    std::string token;
    auto flush_token = [&] {
        if (!token.empty()) row.push_back(parse_rational(token));
        token.clear();
    };
    auto flush_row = [&] {
        flush_token();
        if (!row.empty()) rows.push_back(std::move(row));
        row.clear();
    };
    for (char c : text) {
        if (c == ';' || c == '\n')
            flush_row();
        else if (c == ',' || std::isspace(static_cast<unsigned char>(c)))
            flush_token();
        else if (c == '[' || c == ']')
            continue;
        else
            token.push_back(c);
    }
    flush_row();
    return from_rows(rows);
}

RationalMatrix rational_matrix_from_json(const nlohmann::json& j)
{
    if (!j.is_array()) throw InputError("matrix JSON must be an array of rows");
    std::vector<std::vector<mpq_class>> rows;
    for (const auto& r : j) {
        if (!r.is_array()) throw InputError("matrix JSON rows must be arrays");
        std::vector<mpq_class> row;
        for (const auto& e : r) {
            if (e.is_string())
                row.push_back(parse_rational(e.get<std::string>()));
            else if (e.is_number_integer())
                row.push_back(parse_rational(std::to_string(e.get<long long>())));
            else
                throw InputError("matrix entries must be integers or rational strings");
        }
        rows.push_back(std::move(row));
    }
    return from_rows(rows);
}

IntMatrix to_integer_matrix(const RationalMatrix& a)
{
    IntMatrix m(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (a(i, j).get_den() != 1) throw InputError("matrix entry " + to_string(a(i, j)) + " is not an integer");
            m(i, j) = a(i, j).get_num();
        }
    return m;
}

RationalMatrix to_rational_matrix(const IntMatrix& a)
{
    RationalMatrix m(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
    return m;
}

std::string to_string(const mpq_class& q)
{
    return q.get_str();
}

} // namespace algdyn
