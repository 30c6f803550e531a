#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace tcer {

// Exact rational number. Always normalized: den > 0 and gcd(|num|, den) = 1.
// Intermediate products use 128-bit integers; a result that does not fit in
// 64 bits throws std::overflow_error instead of silently wrapping.
class Rational {
public:
    constexpr Rational() = default;
    Rational(std::int64_t n) : num_(n), den_(1) {}  // NOLINT(google-explicit-constructor)
    Rational(std::int64_t n, std::int64_t d);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    Rational operator+(const Rational& o) const;
    Rational operator-(const Rational& o) const;
    Rational operator*(const Rational& o) const;
    Rational operator/(const Rational& o) const;
    Rational operator-() const { return Rational::raw(-num_, den_); }
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }

    bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
    std::strong_ordering operator<=>(const Rational& o) const;

    std::int64_t floor() const;
    Rational fract() const { return *this - Rational(floor()); }
    bool is_integer() const { return den_ == 1; }
    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    // "7/3", "-2", "1.33"
    std::string str() const;
    // Shortest exact decimal if the denominator is of the form 2^a 5^b, else "n/d".
    std::string decimal() const;

    // Accepts "12", "-1.25", "3/4". Returns nullopt on malformed input.
    static std::optional<Rational> parse(std::string_view text);

private:
    static Rational raw(std::int64_t n, std::int64_t d) {
        Rational r;
        r.num_ = n;
        r.den_ = d;
        return r;
    }
    static Rational from_wide(__int128 n, __int128 d);

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

std::int64_t lcm_checked(std::int64_t a, std::int64_t b);

struct RationalHash {
    std::size_t operator()(const Rational& r) const {
        return std::hash<std::int64_t>()(r.num()) * 1000003u ^ std::hash<std::int64_t>()(r.den());
    }
};

}  // namespace tcer
