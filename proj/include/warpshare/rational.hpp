#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace warpshare {

// Exact rational threshold arithmetic. Occupancy tables are sensitive to
// rounding, so t is never stored as a float.
struct Rational {
    std::int64_t num = 1;
    std::int64_t den = 1;

    constexpr Rational() = default;
    constexpr Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {}

    static Rational from_sharing_pct(int pct) {
        if (pct < 0 || pct >= 100)
            throw std::invalid_argument("sharing percentage must be in [0, 100)");
        Rational r{100 - pct, 100};
        r.reduce();
        return r;
    }

    void reduce() {
        const std::int64_t g = std::gcd(num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }

    // floor(t * x) for x >= 0
    std::int64_t floor_mul(std::int64_t x) const { return num * x / den; }

    // ceil(t * x) for x >= 0
    std::int64_t ceil_mul(std::int64_t x) const { return (num * x + den - 1) / den; }

    // floor(x / t) for x >= 0
    std::int64_t floor_div(std::int64_t x) const { return x * den / num; }

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    bool is_one() const { return num == den; }
    bool valid() const { return den > 0 && num > 0 && num <= den; }

    friend bool operator==(const Rational&, const Rational&) = default;
};

}  // namespace warpshare
