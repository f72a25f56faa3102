#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdlib>
#include <ostream>
#include <string>
#include <string_view>

#include "clearing/errors.hpp"

namespace clearing {

// Exact rational number, stored in lowest terms with a positive denominator.
// Thin wrapper over GMP's mpq_class that
//   * guarantees canonical form after every construction,
//   * refuses floating-point construction (all arithmetic in this library is exact),
//   * parses decimal ("5.9") and fraction ("59/10") strings.
class Rational {
  public:
    Rational() : q_(0) {}
    Rational(int n) : q_(n) {}
    Rational(long n) : q_(n) {}
    Rational(long long n) : q_(static_cast<long>(n)) {}
    Rational(long long num, long long den) {
        if (den == 0) throw ParseError("rational with zero denominator");
        q_ = mpq_class(static_cast<long>(num), static_cast<long>(den));
        q_.canonicalize();
    }
    explicit Rational(const mpz_class& n) : q_(n) {}
    explicit Rational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }

    // No silent float contamination: exactness is a system-wide invariant.
    Rational(double) = delete;
    Rational(float) = delete;

    // Accepts optional sign, then either "a", "a/b" (b > 0 after sign fold),
    // or a decimal "a.b...". Whitespace at either end is ignored.
    static Rational parse(std::string_view text);

    const mpz_class numerator() const { return q_.get_num(); }
    const mpz_class denominator() const { return q_.get_den(); }
    bool is_integer() const { return q_.get_den() == 1; }
    int sign() const { return sgn(q_); }

    // "p/q", or just "p" when integral. Round-trips through parse().
    std::string str() const;
    // Fixed-point decimal approximation (display only), round-half-away.
    std::string decimal(int digits = 6) const;
    // Lossy conversion for statistics/reporting only.
    double approx() const { return q_.get_d(); }

    const mpq_class& raw() const { return q_; }

    Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
    Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
    Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.q_ == 0) throw std::domain_error("rational division by zero");
        q_ /= o.q_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { a += b; return a; }
    friend Rational operator-(Rational a, const Rational& b) { a -= b; return a; }
    friend Rational operator*(Rational a, const Rational& b) { a *= b; return a; }
    friend Rational operator/(Rational a, const Rational& b) { a /= b; return a; }
    friend Rational operator-(const Rational& a) { Rational r; r.q_ = -a.q_; return r; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        const int c = cmp(a.q_, b.q_);
        return c < 0   ? std::strong_ordering::less
               : c > 0 ? std::strong_ordering::greater
                       : std::strong_ordering::equal;
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

  private:
    mpq_class q_;
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

namespace detail {

inline bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    return true;
}

} // namespace detail

inline Rational Rational::parse(std::string_view text) {
    const auto fail = [&] { throw ParseError("cannot parse rational from '" + std::string(text) + "'"); };

    std::string_view s = text;
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    if (s.empty()) fail();

    bool negative = false;
    if (s.front() == '+' || s.front() == '-') {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    if (s.empty()) fail();

    mpz_class num, den(1);
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        const std::string_view ns = s.substr(0, slash), ds = s.substr(slash + 1);
        if (!detail::all_digits(ns) || !detail::all_digits(ds)) fail();
        num = mpz_class(std::string(ns), 10);
        den = mpz_class(std::string(ds), 10);
        if (den == 0) fail();
    } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
        const std::string_view is = s.substr(0, dot), fs = s.substr(dot + 1);
        if (is.empty() && fs.empty()) fail();
        if (!is.empty() && !detail::all_digits(is)) fail();
        if (!fs.empty() && !detail::all_digits(fs)) fail();
        num = is.empty() ? mpz_class(0) : mpz_class(std::string(is), 10);
        for (size_t i = 0; i < fs.size(); ++i) {
            num *= 10;
            num += fs[i] - '0';
            den *= 10;
        }
    } else {
        if (!detail::all_digits(s)) fail();
        num = mpz_class(std::string(s), 10);
    }
    if (negative) num = -num;

    mpq_class q(num, den);
    q.canonicalize();
    return Rational(std::move(q));
}

inline std::string Rational::str() const {
    if (is_integer()) return q_.get_num().get_str();
    return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

inline std::string Rational::decimal(int digits) const {
    mpz_class scale(1);
    for (int i = 0; i < digits; ++i) scale *= 10;
    // round half away from zero: floor((|n|*scale*2/d + 1) / 2)
    mpz_class n = numerator(), d = denominator();
    const bool neg = n < 0;
    if (neg) n = -n;
    mpz_class scaled = (n * scale * 2 / d + 1) / 2;
    mpz_class whole = scaled / scale, frac = scaled % scale;
    std::string out = whole.get_str();
    if (digits > 0) {
        std::string fs = frac.get_str();
        if (fs.size() < static_cast<size_t>(digits)) fs.insert(fs.begin(), static_cast<size_t>(digits) - fs.size(), '0');
        out += "." + fs;
    }
    if (neg && scaled != 0) out.insert(out.begin(), '-');
    return out;
}

} // namespace clearing
