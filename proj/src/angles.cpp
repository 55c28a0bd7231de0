#include "qreduce/angles.hpp"

#include <cmath>
#include <numeric>

#include "qreduce/errors.hpp"

namespace qreduce {

PiFraction::PiFraction(std::int64_t n, std::int64_t d) : num(n), den(d) {
    if (den == 0) {
        throw ConfigError("angle denominator must be nonzero");
    }
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
}

PiFraction PiFraction::operator+(const PiFraction& other) const {
    return PiFraction(num * other.den + other.num * den, den * other.den);
}

bool PiFraction::operator<=(const PiFraction& other) const {
    return num * other.den <= other.num * den;
}

double PiFraction::radians() const {
    return M_PI * static_cast<double>(num) / static_cast<double>(den);
}

void AngleSchedule::validate() const {
    if (kind == Kind::exact_match) {
        return;
    }
    if (per_bit.empty()) {
        throw ConfigError("schedule has no per-bit angles");
    }
    PiFraction sum = PiFraction::zero();
    for (const auto& a : per_bit) {
        if (a.negative()) {
            throw ConfigError("schedule angles must be non-negative");
        }
        sum = sum + a;
    }
    if (!(sum <= PiFraction::pi())) {
        throw ConfigError("schedule angles sum to more than pi");
    }
}

PiFraction AngleSchedule::total_angle_fraction(std::uint32_t value, std::uint32_t target) const {
    if (kind == Kind::exact_match) {
        return value == target ? PiFraction::zero() : PiFraction::pi();
    }
    const int n = bits();
    PiFraction sum = PiFraction::zero();
    const std::uint32_t diff = value ^ target;
    for (int j = 0; j < n; ++j) {
        const int bit = n - 1 - j;
        if ((diff >> bit) & 1u) {
            sum = sum + per_bit[static_cast<std::size_t>(j)];
        }
    }
    return sum;
}

AngleSchedule AngleSchedule::default_halving(int n_bits) {
    if (n_bits < 1 || n_bits > 30) {
        throw ConfigError("schedule bit count out of range");
    }
    AngleSchedule s;
    s.name = "default";
    s.per_bit.reserve(static_cast<std::size_t>(n_bits));
    for (int j = 0; j < n_bits; ++j) {
        s.per_bit.emplace_back(1, std::int64_t{1} << (j + 1));
    }
    s.validate();
    return s;
}

AngleSchedule AngleSchedule::highest_bit_pi(int n_bits) {
    if (n_bits < 1 || n_bits > 30) {
        throw ConfigError("schedule bit count out of range");
    }
    AngleSchedule s;
    s.name = "highest-bit-pi";
    s.per_bit.assign(static_cast<std::size_t>(n_bits), PiFraction::zero());
    s.per_bit[0] = PiFraction::pi();
    s.validate();
    return s;
}

AngleSchedule AngleSchedule::exact_match() {
    AngleSchedule s;
    s.kind = Kind::exact_match;
    s.name = "exact-match";
    return s;
}

AngleSchedule AngleSchedule::preset(const std::string& name, int n_bits) {
    if (name == "default") {
        return default_halving(n_bits);
    }
    if (name == "highest-bit-pi") {
        return highest_bit_pi(n_bits);
    }
    if (name == "exact-match") {
        return exact_match();
    }
    throw ConfigError("unknown schedule preset: " + name);
}

AngleSchedule AngleSchedule::from_pi_multiples(const std::vector<PiFraction>& multiples) {
    AngleSchedule s;
    s.per_bit = multiples;
    s.name = "custom";
    s.validate();
    return s;
}

double total_angle(std::uint32_t value, std::uint32_t target, const AngleSchedule& schedule) {
    return schedule.total_angle_fraction(value, target).radians();
}

} // namespace qreduce
