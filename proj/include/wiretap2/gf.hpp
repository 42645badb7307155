#ifndef WIRETAP2_GF_HPP
#define WIRETAP2_GF_HPP

#include "wiretap2/model.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace wiretap2::gf {

/// Field elements are encoded as integers in [0, q): the polynomial
/// c_0 + c_1 x + ... + c_{m-1} x^{m-1} maps to c_0 + c_1 p + ... + c_{m-1} p^{m-1}.
using Element = std::uint32_t;
using Vector = std::vector<Element>;

/// Largest field make_field will build.
inline constexpr std::uint64_t max_field_size = std::uint64_t{1} << 16;

class FieldError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

namespace detail {

using Poly = std::vector<std::uint32_t>;  // constant term first

inline void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline std::uint32_t inv_mod_prime(std::uint32_t a, std::uint32_t p) {
    std::uint64_t result = 1;
    std::uint64_t base = a % p;
    std::uint32_t e = p - 2;
    while (e) {
        if (e & 1) result = result * base % p;
        base = base * base % p;
        e >>= 1;
    }
    return static_cast<std::uint32_t>(result);
}

/// Remainder of a modulo b over GF(p); b must be nonzero after trimming.
inline Poly poly_mod(Poly a, const Poly& b, std::uint32_t p) {
    trim(a);
    const std::size_t db = b.size() - 1;
    const std::uint32_t lead_inv = inv_mod_prime(b.back(), p);
    while (a.size() >= b.size()) {
        const std::uint64_t f = std::uint64_t{a.back()} * lead_inv % p;
        const std::size_t shift = a.size() - 1 - db;
        for (std::size_t i = 0; i < b.size(); ++i) {
            a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + p - f * b[i] % p) % p);
        }
        trim(a);
    }
    return a;
}

inline bool is_irreducible(const Poly& f, std::uint32_t p) {
    const std::size_t deg = f.size() - 1;
    // Every monic divisor candidate of degree 1..deg/2.
    for (std::size_t d = 1; d <= deg / 2; ++d) {
        std::uint64_t count = 1;
        for (std::size_t i = 0; i < d; ++i) count *= p;
        for (std::uint64_t code = 0; code < count; ++code) {
            Poly g(d + 1, 0);
            std::uint64_t t = code;
            for (std::size_t i = 0; i < d; ++i) {
                g[i] = static_cast<std::uint32_t>(t % p);
                t /= p;
            }
            g[d] = 1;
            if (poly_mod(f, g, p).empty()) return false;
        }
    }
    return true;
}

}  // namespace detail

/// GF(p^m) in polynomial basis with a fixed monic irreducible modulus.
class Field {
public:
    Field(std::uint32_t p, unsigned m, std::vector<std::uint32_t> modulus)
        : p_(p), m_(m), modulus_(std::move(modulus)) {
        if (modulus_.size() != m_ + 1 || modulus_.back() != 1) {
            throw FieldError("modulus must be monic of degree " + std::to_string(m_));
        }
        std::uint64_t q = 1;
        for (unsigned i = 0; i < m_; ++i) q *= p_;
        if (q > max_field_size) throw FieldError("field size " + std::to_string(q) + " out of supported range");
        q_ = static_cast<std::uint32_t>(q);
        if (m_ > 1 && !detail::is_irreducible(modulus_, p_)) {
            throw FieldError("modulus is reducible over GF(" + std::to_string(p_) + ")");
        }
        if (q_ <= table_limit) build_tables();
    }

    [[nodiscard]] std::uint32_t characteristic() const { return p_; }
    [[nodiscard]] unsigned degree() const { return m_; }
    [[nodiscard]] std::uint32_t size() const { return q_; }
    [[nodiscard]] const std::vector<std::uint32_t>& modulus() const { return modulus_; }

    [[nodiscard]] Element add(Element a, Element b) const {
        if (!add_.empty()) return add_[a * q_ + b];
        return combine(a, b, false);
    }
    [[nodiscard]] Element sub(Element a, Element b) const {
        if (!add_.empty()) return add_[a * q_ + neg_[b]];
        return combine(a, b, true);
    }
    [[nodiscard]] Element neg(Element a) const {
        if (!neg_.empty()) return neg_[a];
        return combine(0, a, true);
    }
    [[nodiscard]] Element mul(Element a, Element b) const {
        if (!mul_.empty()) return mul_[a * q_ + b];
        return mul_slow(a, b);
    }
    /// Row-major q x q product table, or nullptr for fields too large to tabulate.
    [[nodiscard]] const Element* mul_table() const { return mul_.empty() ? nullptr : mul_.data(); }
    [[nodiscard]] Element inv(Element a) const {
        if (a == 0) throw std::domain_error("inverse of zero field element");
        if (!inv_.empty()) return inv_[a];
        return pow(a, q_ - 2);
    }
    [[nodiscard]] Element div(Element a, Element b) const { return mul(a, inv(b)); }

    [[nodiscard]] Element pow(Element a, std::uint64_t e) const {
        Element result = 1;
        while (e) {
            if (e & 1) result = mul(result, a);
            a = mul(a, a);
            e >>= 1;
        }
        return result;
    }

    [[nodiscard]] bool contains(std::uint64_t v) const { return v < q_; }

    friend bool operator==(const Field& a, const Field& b) {
        return a.p_ == b.p_ && a.m_ == b.m_ && a.modulus_ == b.modulus_;
    }

private:
    static constexpr std::uint32_t table_limit = 256;

    [[nodiscard]] Element combine(Element a, Element b, bool subtract) const {
        Element out = 0;
        Element scale = 1;
        for (unsigned i = 0; i < m_; ++i) {
            const std::uint32_t da = a % p_;
            const std::uint32_t db = b % p_;
            a /= p_;
            b /= p_;
            const std::uint32_t d = subtract ? (da + p_ - db) % p_ : (da + db) % p_;
            out += d * scale;
            scale *= p_;
        }
        return out;
    }

    [[nodiscard]] detail::Poly to_poly(Element a) const {
        detail::Poly out(m_);
        for (unsigned i = 0; i < m_; ++i) {
            out[i] = a % p_;
            a /= p_;
        }
        return out;
    }

    [[nodiscard]] Element from_poly(const detail::Poly& a) const {
        Element out = 0;
        Element scale = 1;
        for (std::size_t i = 0; i < a.size() && i < m_; ++i) {
            out += a[i] * scale;
            scale *= p_;
        }
        return out;
    }

    [[nodiscard]] Element mul_slow(Element a, Element b) const {
        if (m_ == 1) return static_cast<Element>(std::uint64_t{a} * b % p_);
        const auto pa = to_poly(a);
        const auto pb = to_poly(b);
        detail::Poly prod(2 * m_ - 1, 0);
        for (unsigned i = 0; i < m_; ++i) {
            for (unsigned j = 0; j < m_; ++j) {
                prod[i + j] = static_cast<std::uint32_t>((prod[i + j] + std::uint64_t{pa[i]} * pb[j]) % p_);
            }
        }
        return from_poly(detail::poly_mod(prod, modulus_, p_));
    }

    void build_tables() {
        const std::size_t q = q_;
        add_.resize(q * q);
        mul_.resize(q * q);
        neg_.resize(q);
        inv_.assign(q, 0);
        for (Element a = 0; a < q_; ++a) {
            neg_[a] = combine(0, a, true);
            for (Element b = 0; b < q_; ++b) {
                add_[a * q + b] = combine(a, b, false);
                mul_[a * q + b] = mul_slow(a, b);
            }
        }
        for (Element a = 1; a < q_; ++a) {
            for (Element b = 1; b < q_; ++b) {
                if (mul_[a * q + b] == 1) {
                    inv_[a] = b;
                    break;
                }
            }
        }
    }

    std::uint32_t p_;
    unsigned m_;
    std::uint32_t q_ = 0;
    std::vector<std::uint32_t> modulus_;
    std::vector<Element> add_;
    std::vector<Element> mul_;
    std::vector<Element> neg_;
    std::vector<Element> inv_;
};

/// GF(q) presented with the lexicographically smallest monic irreducible
/// modulus (coefficients compared constant term first).
inline Field make_field(std::uint64_t q) {
    const auto pp = as_prime_power(q);
    if (!pp) throw FieldError("q=" + std::to_string(q) + " not a prime power");
    if (q > max_field_size) throw FieldError("q=" + std::to_string(q) + " out of supported range");
    const auto p = static_cast<std::uint32_t>(pp->prime);
    const unsigned m = pp->exponent;
    if (m == 1) return Field(p, 1, {0, 1});

    std::uint64_t count = 1;
    for (unsigned i = 0; i < m; ++i) count *= p;
    for (std::uint64_t k = 0; k < count; ++k) {
        // Enumerate so that c_0 varies slowest.
        std::vector<std::uint32_t> f(m + 1, 0);
        std::uint64_t t = k;
        for (unsigned i = m; i-- > 0;) {
            f[i] = static_cast<std::uint32_t>(t % p);
            t /= p;
        }
        f[m] = 1;
        if (f[0] != 0 && detail::is_irreducible(f, p)) return Field(p, m, std::move(f));
    }
    throw std::logic_error("no irreducible polynomial found");
}

/// Dense row-major matrix of field elements.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Element> entries;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), entries(r * c, 0) {}

    static Matrix from_rows(const std::vector<Vector>& rs, std::size_t width) {
        Matrix out(rs.size(), width);
        for (std::size_t i = 0; i < rs.size(); ++i) {
            if (rs[i].size() != width) throw std::invalid_argument("ragged matrix rows");
            for (std::size_t j = 0; j < width; ++j) out(i, j) = rs[i][j];
        }
        return out;
    }

    static Matrix identity(std::size_t n) {
        Matrix out(n, n);
        for (std::size_t i = 0; i < n; ++i) out(i, i) = 1;
        return out;
    }

    Element& operator()(std::size_t r, std::size_t c) { return entries[r * cols + c]; }
    Element operator()(std::size_t r, std::size_t c) const { return entries[r * cols + c]; }

    [[nodiscard]] std::span<const Element> row(std::size_t r) const { return {entries.data() + r * cols, cols}; }

    [[nodiscard]] Matrix select_rows(std::span<const std::size_t> which) const {
        Matrix out(which.size(), cols);
        for (std::size_t i = 0; i < which.size(); ++i) {
            for (std::size_t j = 0; j < cols; ++j) out(i, j) = (*this)(which[i], j);
        }
        return out;
    }

    [[nodiscard]] Matrix columns(std::size_t first, std::size_t count) const {
        Matrix out(rows, count);
        for (std::size_t i = 0; i < rows; ++i) {
            for (std::size_t j = 0; j < count; ++j) out(i, j) = (*this)(i, first + j);
        }
        return out;
    }

    [[nodiscard]] Matrix transpose() const {
        Matrix out(cols, rows);
        for (std::size_t i = 0; i < rows; ++i) {
            for (std::size_t j = 0; j < cols; ++j) out(j, i) = (*this)(i, j);
        }
        return out;
    }

    friend bool operator==(const Matrix&, const Matrix&) = default;
};

/// Incrementally maintained row space in echelon form.
class RowSpace {
public:
    RowSpace(const Field& field, std::size_t width) : field_(&field), width_(width) {}

    [[nodiscard]] std::size_t dimension() const { return rows_.size(); }
    [[nodiscard]] std::size_t width() const { return width_; }

    [[nodiscard]] bool contains(std::span<const Element> v) const {
        Vector w(v.begin(), v.end());
        reduce(w);
        for (auto e : w) {
            if (e) return false;
        }
        return true;
    }

    /// Adds v; returns true when v was independent of the current rows.
    bool insert(std::span<const Element> v) {
        if (v.size() != width_) throw std::invalid_argument("row space width mismatch");
        Vector w(v.begin(), v.end());
        reduce(w);
        std::size_t lead = width_;
        for (std::size_t j = 0; j < width_; ++j) {
            if (w[j]) {
                lead = j;
                break;
            }
        }
        if (lead == width_) return false;
        const Element inv = field_->inv(w[lead]);
        for (auto& e : w) e = field_->mul(e, inv);
        rows_.push_back(std::move(w));
        pivots_.push_back(lead);
        return true;
    }

private:
    void reduce(Vector& w) const {
        if (w.size() != width_) throw std::invalid_argument("row space width mismatch");
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            const Element f = w[pivots_[r]];
            if (!f) continue;
            for (std::size_t j = 0; j < width_; ++j) {
                if (rows_[r][j]) w[j] = field_->sub(w[j], field_->mul(f, rows_[r][j]));
            }
        }
    }

    const Field* field_;
    std::size_t width_;
    std::vector<Vector> rows_;
    std::vector<std::size_t> pivots_;
};

/// Row rank by Gaussian elimination, pivoting on the first nonzero entry.
inline std::size_t rank(const Field& field, const Matrix& m) {
    Matrix a = m;
    std::size_t r = 0;
    for (std::size_t c = 0; c < a.cols && r < a.rows; ++c) {
        std::size_t pivot = a.rows;
        for (std::size_t i = r; i < a.rows; ++i) {
            if (a(i, c)) {
                pivot = i;
                break;
            }
        }
        if (pivot == a.rows) continue;
        if (pivot != r) {
            for (std::size_t j = 0; j < a.cols; ++j) std::swap(a(r, j), a(pivot, j));
        }
        const Element inv = field.inv(a(r, c));
        for (std::size_t i = r + 1; i < a.rows; ++i) {
            const Element f = field.mul(a(i, c), inv);
            if (!f) continue;
            for (std::size_t j = c; j < a.cols; ++j) a(i, j) = field.sub(a(i, j), field.mul(f, a(r, j)));
        }
        ++r;
    }
    return r;
}

inline bool in_span(const Field& field, std::span<const Element> v, const Matrix& basis_rows) {
    if (v.size() != basis_rows.cols) {
        throw std::invalid_argument("vector length " + std::to_string(v.size()) + " does not match basis width " +
                                    std::to_string(basis_rows.cols));
    }
    RowSpace space(field, basis_rows.cols);
    for (std::size_t i = 0; i < basis_rows.rows; ++i) space.insert(basis_rows.row(i));
    return space.contains(v);
}

inline Vector multiply(const Field& field, const Matrix& a, std::span<const Element> x) {
    if (x.size() != a.cols) throw std::invalid_argument("matrix-vector dimension mismatch");
    Vector y(a.rows, 0);
    for (std::size_t i = 0; i < a.rows; ++i) {
        Element acc = 0;
        for (std::size_t j = 0; j < a.cols; ++j) {
            if (a(i, j) && x[j]) acc = field.add(acc, field.mul(a(i, j), x[j]));
        }
        y[i] = acc;
    }
    return y;
}

/// Some x with A x = y, or nullopt when the system is inconsistent. Free
/// variables are set to zero.
inline std::optional<Vector> solve(const Field& field, const Matrix& a, std::span<const Element> y) {
    if (y.size() != a.rows) throw std::invalid_argument("right-hand side length does not match row count");
    const std::size_t n = a.cols;
    Matrix aug(a.rows, n + 1);
    for (std::size_t i = 0; i < a.rows; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
        aug(i, n) = y[i];
    }
    std::vector<std::size_t> pivot_cols;
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < aug.rows; ++c) {
        std::size_t pivot = aug.rows;
        for (std::size_t i = r; i < aug.rows; ++i) {
            if (aug(i, c)) {
                pivot = i;
                break;
            }
        }
        if (pivot == aug.rows) continue;
        if (pivot != r) {
            for (std::size_t j = 0; j <= n; ++j) std::swap(aug(r, j), aug(pivot, j));
        }
        const Element inv = field.inv(aug(r, c));
        for (std::size_t j = 0; j <= n; ++j) aug(r, j) = field.mul(aug(r, j), inv);
        for (std::size_t i = 0; i < aug.rows; ++i) {
            if (i == r || !aug(i, c)) continue;
            const Element f = aug(i, c);
            for (std::size_t j = 0; j <= n; ++j) aug(i, j) = field.sub(aug(i, j), field.mul(f, aug(r, j)));
        }
        pivot_cols.push_back(c);
        ++r;
    }
    for (std::size_t i = r; i < aug.rows; ++i) {
        if (aug(i, n)) return std::nullopt;
    }
    Vector x(n, 0);
    for (std::size_t k = 0; k < pivot_cols.size(); ++k) x[pivot_cols[k]] = aug(k, n);
    return x;
}

}  // namespace wiretap2::gf

#endif  // WIRETAP2_GF_HPP
