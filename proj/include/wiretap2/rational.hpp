#ifndef WIRETAP2_RATIONAL_HPP
#define WIRETAP2_RATIONAL_HPP

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace wiretap2 {

/// Exact rational number, always stored in lowest terms with a positive
/// denominator. Backed by GMP so pivoting never overflows.
class Rational {
public:
    Rational() = default;
    Rational(std::int64_t value) : value_(static_cast<long>(value)) {}  // NOLINT(google-explicit-constructor)
    Rational(std::int64_t numerator, std::int64_t denominator) {
        if (denominator == 0) {
            throw std::domain_error("rational with zero denominator");
        }
        value_ = mpq_class(mpz_class(static_cast<long>(numerator)), mpz_class(static_cast<long>(denominator)));
        value_.canonicalize();
    }
    explicit Rational(mpq_class value) : value_(std::move(value)) { value_.canonicalize(); }

    /// Accepts "p", "-p" or "p/q" (q != 0). Whitespace is not allowed.
    static Rational parse(std::string_view text) {
        if (text.empty()) {
            throw std::invalid_argument("empty rational literal");
        }
        const auto slash = text.find('/');
        const auto check_integer = [&](std::string_view part) {
            std::size_t start = (!part.empty() && (part[0] == '-' || part[0] == '+')) ? 1 : 0;
            if (part.size() == start) {
                throw std::invalid_argument("malformed rational literal '" + std::string(text) + "'");
            }
            for (std::size_t i = start; i < part.size(); ++i) {
                if (part[i] < '0' || part[i] > '9') {
                    throw std::invalid_argument("malformed rational literal '" + std::string(text) + "'");
                }
            }
        };
        const auto to_mpz = [](std::string_view part) {
            if (!part.empty() && part[0] == '+') {
                part.remove_prefix(1);
            }
            return mpz_class(std::string(part), 10);
        };
        if (slash == std::string_view::npos) {
            check_integer(text);
            return Rational(mpq_class(to_mpz(text)));
        }
        const auto num = text.substr(0, slash);
        const auto den = text.substr(slash + 1);
        check_integer(num);
        check_integer(den);
        mpz_class d = to_mpz(den);
        if (d == 0) {
            throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
        }
        return Rational(mpq_class(to_mpz(num), d));
    }

    [[nodiscard]] mpz_class numerator() const { return value_.get_num(); }
    [[nodiscard]] mpz_class denominator() const { return value_.get_den(); }
    [[nodiscard]] const mpq_class& raw() const { return value_; }

    [[nodiscard]] bool is_integer() const { return value_.get_den() == 1; }
    [[nodiscard]] int sign() const { return sgn(value_); }

    /// Integer value; throws if not integral or out of int64 range.
    [[nodiscard]] std::int64_t to_int64() const {
        if (!is_integer() || !value_.get_num().fits_slong_p()) {
            throw std::range_error("rational " + to_string() + " is not a representable integer");
        }
        return value_.get_num().get_si();
    }

    [[nodiscard]] std::string to_string() const {
        if (is_integer()) {
            return value_.get_num().get_str();
        }
        return value_.get_num().get_str() + "/" + value_.get_den().get_str();
    }

    Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
    Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
    Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.value_ == 0) {
            throw std::domain_error("division by zero rational");
        }
        value_ /= o.value_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.value_)); }

    friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        const int c = cmp(a.value_, b.value_);
        if (c < 0) return std::strong_ordering::less;
        if (c > 0) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

private:
    mpq_class value_{0};
};

inline mpz_class lcm(const mpz_class& a, const mpz_class& b) {
    mpz_class out;
    mpz_lcm(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return out;
}

}  // namespace wiretap2

#endif  // WIRETAP2_RATIONAL_HPP
