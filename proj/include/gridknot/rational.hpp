#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace gridknot {

// Exact rational arithmetic on 64-bit numerator/denominator. Every value in
// this library is tiny (coordinates, areas, projection offsets), but all
// intermediate products are taken in __int128 and narrowed with a range
// check, so an overflow can never pass silently.
class Rational {
public:
    Rational() = default;
    Rational(std::int64_t value) : num_(value), den_(1) {}  // NOLINT: implicit by design
    Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) { normalize(); }

    std::int64_t numerator() const { return num_; }
    std::int64_t denominator() const { return den_; }
    bool is_integer() const { return den_ == 1; }
    bool is_zero() const { return num_ == 0; }

    std::int64_t as_integer() const {
        if (den_ != 1) throw std::logic_error("Rational::as_integer on non-integer " + str());
        return num_;
    }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return make(i128(a.num_) * b.den_ + i128(b.num_) * a.den_, i128(a.den_) * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return make(i128(a.num_) * b.den_ - i128(b.num_) * a.den_, i128(a.den_) * b.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return make(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw std::domain_error("Rational division by zero");
        return make(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
    }
    Rational operator-() const { return Rational(-num_, den_); }
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    std::string str() const {
        return den_ == 1 ? std::to_string(num_)
                         : std::to_string(num_) + "/" + std::to_string(den_);
    }

    // Fixed-point decimal rendering with round-half-even, used by the mesh
    // exporters so output bytes do not depend on the platform's printf.
    std::string decimal(int places) const {
        i128 scale = 1;
        for (int i = 0; i < places; ++i) scale *= 10;
        i128 n = i128(num_ < 0 ? -num_ : num_) * scale;
        i128 q = n / den_, r = n % den_;
        if (2 * r > den_ || (2 * r == den_ && (q & 1))) ++q;
        std::string digits;
        for (i128 v = q; v > 0; v /= 10) digits.insert(digits.begin(), char('0' + int(v % 10)));
        while (int(digits.size()) <= places) digits.insert(digits.begin(), '0');
        digits.insert(digits.size() - places, ".");
        if (num_ < 0 && q != 0) digits.insert(digits.begin(), '-');
        return digits;
    }

private:
    using i128 = __int128;

    static Rational make(i128 num, i128 den) {
        if (den < 0) { num = -num; den = -den; }
        i128 g = gcd128(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
        Rational r;
        r.num_ = narrow(num);
        r.den_ = narrow(den);
        return r;
    }
    static i128 gcd128(i128 a, i128 b) {
        while (b != 0) { i128 t = a % b; a = b; b = t; }
        return a == 0 ? 1 : a;
    }
    static std::int64_t narrow(i128 v) {
        if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error("Rational overflow");
        return std::int64_t(v);
    }
    void normalize() {
        if (den_ == 0) throw std::domain_error("Rational with zero denominator");
        *this = make(num_, den_);
    }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

}  // namespace gridknot
