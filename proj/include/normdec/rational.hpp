#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace normdec {

/// Exact rational on int64 with __int128 intermediates; enough headroom for
/// the counterexample expectations, overflow checked.
class Rational {
public:
    Rational() = default;
    Rational(std::int64_t num) : num_(num), den_(1) {}
    Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
        if (den_ == 0) throw std::invalid_argument("Rational: zero denominator");
        normalize();
    }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    Rational operator+(const Rational& r) const {
        return from128(i128(num_) * r.den_ + i128(r.num_) * den_, i128(den_) * r.den_);
    }
    Rational operator-(const Rational& r) const {
        return from128(i128(num_) * r.den_ - i128(r.num_) * den_, i128(den_) * r.den_);
    }
    Rational operator*(const Rational& r) const {
        return from128(i128(num_) * r.num_, i128(den_) * r.den_);
    }
    Rational operator/(const Rational& r) const {
        if (r.num_ == 0) throw std::invalid_argument("Rational: division by zero");
        return from128(i128(num_) * r.den_, i128(den_) * r.num_);
    }
    Rational operator-() const { return Rational(-num_, den_); }

    bool operator==(const Rational& r) const { return num_ == r.num_ && den_ == r.den_; }
    bool operator!=(const Rational& r) const { return !(*this == r); }
    bool operator<(const Rational& r) const {
        return i128(num_) * r.den_ < i128(r.num_) * den_;
    }
    bool operator<=(const Rational& r) const { return *this < r || *this == r; }
    bool operator>(const Rational& r) const { return r < *this; }
    bool operator>=(const Rational& r) const { return r <= *this; }

    Rational abs() const { return num_ < 0 ? -*this : *this; }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    /// "p/q", or just "p" when q == 1
    std::string str() const {
        return den_ == 1 ? std::to_string(num_)
                         : std::to_string(num_) + "/" + std::to_string(den_);
    }

private:
    using i128 = __int128;
    std::int64_t num_{0};
    std::int64_t den_{1};

    void normalize() {
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
        if (num_ == 0) den_ = 1;
    }

    static Rational from128(i128 n, i128 d) {
        if (d == 0) throw std::invalid_argument("Rational: zero denominator");
        if (d < 0) {
            n = -n;
            d = -d;
        }
        i128 a = n < 0 ? -n : n, b = d;
        while (b) {
            i128 t = a % b;
            a = b;
            b = t;
        }
        if (a > 1) {
            n /= a;
            d /= a;
        }
        constexpr i128 lim = 0x7fffffffffffffff;
        if (n > lim || n < -lim || d > lim)
            throw std::overflow_error("Rational: overflow");
        Rational r;
        r.num_ = static_cast<std::int64_t>(n);
        r.den_ = static_cast<std::int64_t>(d);
        if (r.num_ == 0) r.den_ = 1;
        return r;
    }
};

}  // namespace normdec
