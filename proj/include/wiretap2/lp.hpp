#ifndef WIRETAP2_LP_HPP
#define WIRETAP2_LP_HPP

#include "wiretap2/rational.hpp"

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

/// Dense two-phase simplex over exact rationals with Bland's rule.
///
/// Problems have the form
///
///     minimize  c . x
///     subject to  a_k . x  (<=|>=|=)  b_k   for every row k,
///                 x >= 0.
///
/// An empty objective turns the solve into a pure feasibility check. When the
/// rows are inconsistent the solver returns Farkas multipliers taken from the
/// final phase-1 dual, expressed against each row written as a_k . x <= b_k
/// (">=" rows are negated first): multipliers of inequality rows are
/// nonnegative, those of equality rows are free, sum_k y_k a_k >= 0
/// componentwise and sum_k y_k b_k < 0.
namespace wiretap2::lp {

enum class Sense { less_equal, greater_equal, equal };

struct Row {
    std::vector<Rational> coeffs;
    Sense sense = Sense::less_equal;
    Rational rhs;
};

struct Problem {
    std::size_t variables = 0;
    std::vector<Row> rows;
    std::vector<Rational> objective;  // empty: feasibility only
};

enum class Status { optimal, infeasible, unbounded };

struct Result {
    Status status = Status::infeasible;
    std::vector<Rational> x;        // set when optimal
    Rational objective;             // set when optimal
    std::vector<Rational> farkas;   // set when infeasible, one per row
};

/// Row k as (g_k, g0_k) with g_k . x <= g0_k.
inline std::pair<std::vector<Rational>, Rational> as_less_equal(const Row& row) {
    if (row.sense == Sense::greater_equal) {
        std::vector<Rational> g;
        g.reserve(row.coeffs.size());
        for (const auto& a : row.coeffs) {
            g.push_back(-a);
        }
        return {std::move(g), -row.rhs};
    }
    return {row.coeffs, row.rhs};
}

/// Checks the Farkas conditions stated above, exactly.
inline bool is_farkas_certificate(const Problem& problem, std::span<const Rational> y) {
    if (y.size() != problem.rows.size()) {
        return false;
    }
    std::vector<Rational> combined(problem.variables);
    Rational bound;
    for (std::size_t k = 0; k < problem.rows.size(); ++k) {
        const auto& row = problem.rows[k];
        if (row.sense != Sense::equal && y[k].sign() < 0) {
            return false;
        }
        if (y[k].sign() == 0) {
            continue;
        }
        const auto [g, g0] = as_less_equal(row);
        for (std::size_t j = 0; j < problem.variables; ++j) {
            combined[j] += y[k] * g[j];
        }
        bound += y[k] * g0;
    }
    for (const auto& c : combined) {
        if (c.sign() < 0) {
            return false;
        }
    }
    return bound.sign() < 0;
}

namespace detail {

struct Overflow {};

inline std::int64_t checked(__int128 v) {
    if (v > INT64_MAX || v <= INT64_MIN) throw Overflow{};
    return static_cast<std::int64_t>(v);
}

inline std::int64_t gcd64(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }

/// Fraction in lowest terms over int64 with a positive denominator. Any
/// result that does not fit throws Overflow.
struct Small {
    std::int64_t n = 0;
    std::int64_t d = 1;

    Small() = default;
    Small(std::int64_t v) : n(v) {}  // NOLINT(google-explicit-constructor)
    Small(std::int64_t num, std::int64_t den) : n(num), d(den) {
        if (d < 0) {
            n = checked(-static_cast<__int128>(n));
            d = checked(-static_cast<__int128>(d));
        }
        const std::int64_t g = gcd64(n, d);
        if (g > 1) {
            n /= g;
            d /= g;
        }
    }

    static Small from(const Rational& r) {
        const mpq_class& q = r.raw();
        if (!q.get_num().fits_slong_p() || !q.get_den().fits_slong_p()) throw Overflow{};
        return Small(checked(q.get_num().get_si()), checked(q.get_den().get_si()));
    }
    [[nodiscard]] Rational to_rational() const { return Rational(n, d); }

    friend int sgn(const Small& a) { return (a.n > 0) - (a.n < 0); }
    friend Small operator-(const Small& a) { return Small(checked(-static_cast<__int128>(a.n)), a.d); }
    friend Small operator*(const Small& a, const Small& b) {
        if (a.n == 0 || b.n == 0) return Small();
        const std::int64_t g1 = gcd64(a.n, b.d);
        const std::int64_t g2 = gcd64(b.n, a.d);
        Small out;
        out.n = checked(static_cast<__int128>(a.n / g1) * (b.n / g2));
        out.d = checked(static_cast<__int128>(a.d / g2) * (b.d / g1));
        return out;
    }
    friend Small operator/(const Small& a, const Small& b) {
        if (b.n == 0) throw std::domain_error("division by zero");
        return a * Small(b.d, b.n);
    }
    friend Small operator-(const Small& a, const Small& b) {
        if (b.n == 0) return a;
        const std::int64_t g = gcd64(a.d, b.d);
        const __int128 num = static_cast<__int128>(a.n) * (b.d / g) - static_cast<__int128>(b.n) * (a.d / g);
        const __int128 den = static_cast<__int128>(a.d) * (b.d / g);
        if (num == 0) return Small();
        __int128 x = num < 0 ? -num : num;
        __int128 y = den;
        while (y) {
            const __int128 t = x % y;
            x = y;
            y = t;
        }
        Small out;
        out.n = checked(num / x);
        out.d = checked(den / x);
        return out;
    }
    Small& operator*=(const Small& b) { return *this = *this * b; }
    Small& operator-=(const Small& b) { return *this = *this - b; }
    friend bool operator==(const Small& a, const Small& b) { return a.n == b.n && a.d == b.d; }
    friend bool operator<(const Small& a, const Small& b) {
        return static_cast<__int128>(a.n) * b.d < static_cast<__int128>(b.n) * a.d;
    }
};

inline mpq_class from_rational(const Rational& r, const mpq_class*) { return r.raw(); }
inline Small from_rational(const Rational& r, const Small*) { return Small::from(r); }
inline Rational to_rational(const mpq_class& v) { return Rational(v); }
inline Rational to_rational(const Small& v) { return v.to_rational(); }

/// a -= f * b
inline void sub_product(mpq_class& a, const mpq_class& f, const mpq_class& b, mpq_class& tmp) {
    mpq_mul(tmp.get_mpq_t(), f.get_mpq_t(), b.get_mpq_t());
    mpq_sub(a.get_mpq_t(), a.get_mpq_t(), tmp.get_mpq_t());
}
inline void sub_product(Small& a, const Small& f, const Small& b, Small&) { a -= f * b; }

template <typename T>
class Tableau {
public:
    explicit Tableau(const Problem& problem) : n_(problem.variables) {
        const std::size_t m = problem.rows.size();
        flip_.assign(m, false);
        std::size_t aux = 0;
        std::size_t art = 0;
        for (const auto& row : problem.rows) {
            if (row.coeffs.size() != n_) {
                throw std::invalid_argument("lp row width does not match variable count");
            }
            const bool flip = row.rhs.sign() < 0;
            const Sense s = normalized(row.sense, flip);
            if (s != Sense::equal) ++aux;
            if (s != Sense::less_equal) ++art;
        }
        first_aux_ = n_;
        first_art_ = n_ + aux;
        cols_ = n_ + aux + art;
        width_ = cols_ + 1;
        data_.assign((m + 1) * width_, T(0));
        basis_.assign(m, 0);
        unit_col_.assign(m, 0);
        active_.assign(m, true);
        rows_ = m;

        std::size_t next_aux = first_aux_;
        std::size_t next_art = first_art_;
        for (std::size_t k = 0; k < m; ++k) {
            const auto& row = problem.rows[k];
            const bool flip = row.rhs.sign() < 0;
            flip_[k] = flip;
            const Sense s = normalized(row.sense, flip);
            for (std::size_t j = 0; j < n_; ++j) {
                at(k, j) = flip ? T(-from(row.coeffs[j])) : from(row.coeffs[j]);
            }
            at(k, cols_) = flip ? T(-from(row.rhs)) : from(row.rhs);
            if (s == Sense::less_equal) {
                at(k, next_aux) = 1;
                basis_[k] = next_aux;
                unit_col_[k] = next_aux;
                ++next_aux;
            } else {
                if (s == Sense::greater_equal) {
                    at(k, next_aux) = -1;
                    ++next_aux;
                }
                at(k, next_art) = 1;
                basis_[k] = next_art;
                unit_col_[k] = next_art;
                ++next_art;
            }
        }
    }

    Result solve(const Problem& problem) {
        // Phase 1: minimize the sum of artificials.
        auto obj = objective_row();
        for (std::size_t j = 0; j < width_; ++j) obj[j] = 0;
        for (std::size_t j = first_art_; j < cols_; ++j) obj[j] = 1;
        for (std::size_t k = 0; k < rows_; ++k) {
            if (is_artificial(basis_[k])) {
                for (std::size_t j = 0; j < width_; ++j) obj[j] -= at(k, j);
            }
        }
        run([](std::size_t) { return true; });

        Result result;
        if (sgn(obj[cols_]) < 0) {
            result.status = Status::infeasible;
            result.farkas = extract_farkas(problem);
            if (!is_farkas_certificate(problem, result.farkas)) {
                throw std::logic_error("simplex produced an invalid Farkas certificate");
            }
            return result;
        }

        drive_out_artificials();

        // Phase 2.
        for (std::size_t j = 0; j < width_; ++j) obj[j] = 0;
        if (!problem.objective.empty()) {
            if (problem.objective.size() != n_) {
                throw std::invalid_argument("objective width does not match variable count");
            }
            for (std::size_t j = 0; j < n_; ++j) obj[j] = from(problem.objective[j]);
            T tmp;
            for (std::size_t k = 0; k < rows_; ++k) {
                if (!active_[k] || basis_[k] >= n_) continue;
                const T c = from(problem.objective[basis_[k]]);
                if (sgn(c) == 0) continue;
                for (std::size_t j = 0; j < width_; ++j) sub_product(obj[j], c, at(k, j), tmp);
            }
            if (!run([this](std::size_t j) { return !is_artificial(j); })) {
                result.status = Status::unbounded;
                return result;
            }
        }

        result.status = Status::optimal;
        result.x.assign(n_, Rational());
        for (std::size_t k = 0; k < rows_; ++k) {
            if (active_[k] && basis_[k] < n_) {
                result.x[basis_[k]] = to_rational(at(k, cols_));
            }
        }
        if (!problem.objective.empty()) {
            for (std::size_t j = 0; j < n_; ++j) {
                result.objective += problem.objective[j] * result.x[j];
            }
        }
        return result;
    }

private:
    static Sense normalized(Sense s, bool flip) {
        if (!flip || s == Sense::equal) return s;
        return s == Sense::less_equal ? Sense::greater_equal : Sense::less_equal;
    }

    [[nodiscard]] bool is_artificial(std::size_t col) const { return col >= first_art_ && col < cols_; }

    static T from(const Rational& r) { return from_rational(r, static_cast<const T*>(nullptr)); }
    T& at(std::size_t r, std::size_t c) { return data_[r * width_ + c]; }
    T* objective_row() { return &data_[rows_ * width_]; }

    void pivot(std::size_t r, std::size_t c) {
        const T inv = T(1) / at(r, c);
        for (std::size_t j = 0; j < width_; ++j) {
            if (sgn(at(r, j)) != 0) at(r, j) *= inv;
        }
        T tmp;
        for (std::size_t i = 0; i <= rows_; ++i) {
            if (i == r || (i < rows_ && !active_[i])) continue;
            const T f = at(i, c);
            if (sgn(f) == 0) continue;
            for (std::size_t j = 0; j < width_; ++j) {
                if (sgn(at(r, j)) != 0) sub_product(at(i, j), f, at(r, j), tmp);
            }
        }
        basis_[r] = c;
    }

    /// Bland's rule. Returns false on unboundedness.
    template <typename Allowed>
    bool run(Allowed allowed) {
        T* obj = objective_row();
        for (;;) {
            std::optional<std::size_t> entering;
            for (std::size_t j = 0; j < cols_; ++j) {
                if (sgn(obj[j]) < 0 && allowed(j)) {
                    entering = j;
                    break;
                }
            }
            if (!entering) return true;
            const std::size_t c = *entering;
            std::optional<std::size_t> leaving;
            T best;
            for (std::size_t i = 0; i < rows_; ++i) {
                if (!active_[i] || sgn(at(i, c)) <= 0) continue;
                const T ratio = at(i, cols_) / at(i, c);
                if (!leaving || ratio < best || (ratio == best && basis_[i] < basis_[*leaving])) {
                    leaving = i;
                    best = ratio;
                }
            }
            if (!leaving) return false;
            pivot(*leaving, c);
        }
    }

    void drive_out_artificials() {
        for (std::size_t k = 0; k < rows_; ++k) {
            if (!active_[k] || !is_artificial(basis_[k])) continue;
            std::optional<std::size_t> col;
            for (std::size_t j = 0; j < first_art_; ++j) {
                if (sgn(at(k, j)) != 0) {
                    col = j;
                    break;
                }
            }
            if (col) {
                pivot(k, *col);
            } else {
                active_[k] = false;  // redundant row
            }
        }
    }

    std::vector<Rational> extract_farkas(const Problem& problem) {
        T* obj = objective_row();
        std::vector<Rational> y(rows_);
        for (std::size_t k = 0; k < rows_; ++k) {
            const std::size_t col = unit_col_[k];
            const T cost = is_artificial(col) ? 1 : 0;
            // Dual value of the sign-normalized row k.
            T dual = cost - obj[col];
            if (flip_[k]) dual = -dual;
            // Multiplier against the row written as "<=".
            const bool ge = problem.rows[k].sense == Sense::greater_equal;
            y[k] = to_rational(ge ? dual : T(-dual));
        }
        return y;
    }

    std::size_t n_;
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::size_t width_ = 0;
    std::size_t first_aux_ = 0;
    std::size_t first_art_ = 0;
    std::vector<T> data_;
    std::vector<std::size_t> basis_;
    std::vector<std::size_t> unit_col_;
    std::vector<bool> flip_;
    std::vector<bool> active_;
};

}  // namespace detail

/// Tries int64 fractions first and repeats in GMP arithmetic on overflow.
/// Both runs pivot identically, so the answer does not depend on which one
/// finished.
inline Result solve(const Problem& problem) {
    try {
        detail::Tableau<detail::Small> tableau(problem);
        return tableau.solve(problem);
    } catch (const detail::Overflow&) {
    }
    detail::Tableau<mpq_class> tableau(problem);
    return tableau.solve(problem);
}

}  // namespace wiretap2::lp

#endif  // WIRETAP2_LP_HPP
