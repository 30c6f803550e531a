#include "tcer/rational.hpp"

#include <cstdlib>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace tcer {

namespace {

__int128 abs128(__int128 v) { return v < 0 ? -v : v; }

__int128 gcd128(__int128 a, __int128 b) {
    a = abs128(a);
    b = abs128(b);
    while (b != 0) {
        __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

bool fits64(__int128 v) {
    return v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max();
}

}  // namespace

Rational::Rational(std::int64_t n, std::int64_t d) {
    if (d == 0) throw std::domain_error("rational with zero denominator");
    *this = from_wide(n, d);
}

Rational Rational::from_wide(__int128 n, __int128 d) {
    if (d == 0) throw std::domain_error("division by zero");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    __int128 g = gcd128(n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    if (n == 0) d = 1;
    if (!fits64(n) || !fits64(d)) throw std::overflow_error("rational overflow");
    return raw(static_cast<std::int64_t>(n), static_cast<std::int64_t>(d));
}

Rational Rational::operator+(const Rational& o) const {
    if (den_ == o.den_) return from_wide(static_cast<__int128>(num_) + o.num_, den_);
    return from_wide(static_cast<__int128>(num_) * o.den_ + static_cast<__int128>(o.num_) * den_,
                     static_cast<__int128>(den_) * o.den_);
}

Rational Rational::operator-(const Rational& o) const {
    if (den_ == o.den_) return from_wide(static_cast<__int128>(num_) - o.num_, den_);
    return from_wide(static_cast<__int128>(num_) * o.den_ - static_cast<__int128>(o.num_) * den_,
                     static_cast<__int128>(den_) * o.den_);
}

Rational Rational::operator*(const Rational& o) const {
    return from_wide(static_cast<__int128>(num_) * o.num_, static_cast<__int128>(den_) * o.den_);
}

Rational Rational::operator/(const Rational& o) const {
    if (o.num_ == 0) throw std::domain_error("division by zero");
    return from_wide(static_cast<__int128>(num_) * o.den_, static_cast<__int128>(den_) * o.num_);
}

std::strong_ordering Rational::operator<=>(const Rational& o) const {
    if (den_ == o.den_) return num_ <=> o.num_;
    __int128 l = static_cast<__int128>(num_) * o.den_;
    __int128 r = static_cast<__int128>(o.num_) * den_;
    if (l < r) return std::strong_ordering::less;
    if (l > r) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::int64_t Rational::floor() const {
    std::int64_t q = num_ / den_;
    if (num_ % den_ != 0 && num_ < 0) --q;
    return q;
}

std::string Rational::str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

std::string Rational::decimal() const {
    if (den_ == 1) return std::to_string(num_);
    std::int64_t d = den_;
    int twos = 0, fives = 0;
    while (d % 2 == 0) {
        d /= 2;
        ++twos;
    }
    while (d % 5 == 0) {
        d /= 5;
        ++fives;
    }
    if (d != 1) return str();
    int digits = std::max(twos, fives);
    __int128 scale = 1;
    for (int i = 0; i < digits; ++i) scale *= 10;
    __int128 scaled = static_cast<__int128>(num_) * (scale / den_);
    bool neg = scaled < 0;
    if (neg) scaled = -scaled;
    std::string s;
    while (scaled > 0 || static_cast<int>(s.size()) <= digits) {
        s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(scaled % 10)));
        scaled /= 10;
    }
    s.insert(s.end() - digits, '.');
    if (neg) s.insert(s.begin(), '-');
    return s;
}

std::optional<Rational> Rational::parse(std::string_view text) {
    if (text.empty()) return std::nullopt;
    auto slash = text.find('/');
    auto parse_int = [](std::string_view s) -> std::optional<__int128> {
        if (s.empty()) return std::nullopt;
        bool neg = false;
        std::size_t i = 0;
        if (s[0] == '-' || s[0] == '+') {
            neg = s[0] == '-';
            i = 1;
        }
        if (i == s.size()) return std::nullopt;
        __int128 v = 0;
        for (; i < s.size(); ++i) {
            if (s[i] < '0' || s[i] > '9') return std::nullopt;
            v = v * 10 + (s[i] - '0');
            if (v > std::numeric_limits<std::int64_t>::max()) return std::nullopt;
        }
        return neg ? -v : v;
    };
    try {
        if (slash != std::string_view::npos) {
            auto n = parse_int(text.substr(0, slash));
            auto d = parse_int(text.substr(slash + 1));
            if (!n || !d || *d == 0) return std::nullopt;
            return from_wide(*n, *d);
        }
        auto dot = text.find('.');
        if (dot == std::string_view::npos) {
            auto n = parse_int(text);
            if (!n) return std::nullopt;
            return from_wide(*n, 1);
        }
        std::string_view whole = text.substr(0, dot);
        std::string_view frac = text.substr(dot + 1);
        if (frac.empty() || frac.size() > 18) return std::nullopt;
        for (char c : frac)
            if (c < '0' || c > '9') return std::nullopt;
        bool neg = !whole.empty() && whole[0] == '-';
        if (!whole.empty() && (whole[0] == '-' || whole[0] == '+')) whole = whole.substr(1);
        __int128 w = 0;
        if (!whole.empty()) {
            auto wv = parse_int(whole);
            if (!wv || *wv < 0) return std::nullopt;
            w = *wv;
        } else if (text[0] != '.' && text.substr(0, 2) != "-." && text.substr(0, 2) != "+.") {
            return std::nullopt;
        }
        __int128 scale = 1;
        __int128 f = 0;
        for (char c : frac) {
            scale *= 10;
            f = f * 10 + (c - '0');
        }
        __int128 n = w * scale + f;
        return from_wide(neg ? -n : n, scale);
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

std::int64_t lcm_checked(std::int64_t a, std::int64_t b) {
    __int128 g = std::gcd(a, b);
    __int128 l = static_cast<__int128>(a) / g * b;
    if (!fits64(l)) throw std::overflow_error("lcm overflow");
    return static_cast<std::int64_t>(l);
}

}  // namespace tcer
