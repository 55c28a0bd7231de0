#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qreduce {

// Exact rational multiple of pi. Schedules are sums of pi/2^k terms, so
// keeping the rational form until operator construction avoids drift when
// checking the "angles sum to at most pi" bound.
struct PiFraction {
    std::int64_t num = 0;
    std::int64_t den = 1;

    PiFraction() = default;
    PiFraction(std::int64_t n, std::int64_t d);

    PiFraction operator+(const PiFraction& other) const;
    bool operator==(const PiFraction& other) const { return num == other.num && den == other.den; }
    bool operator<=(const PiFraction& other) const;
    bool negative() const { return num < 0; }
    bool is_zero() const { return num == 0; }
    double radians() const;

    static PiFraction zero() { return {0, 1}; }
    static PiFraction pi() { return {1, 1}; }
};

// Per-bit rotation angles, indexed from the most significant data bit
// downward, plus the whole-value exact-match variant (a single pi rotation
// on any mismatch, which no per-bit sum can express).
struct AngleSchedule {
    enum class Kind { per_bit, exact_match };

    Kind kind = Kind::per_bit;
    std::vector<PiFraction> per_bit;
    std::string name;

    int bits() const { return static_cast<int>(per_bit.size()); }

    // Throws ConfigError unless every angle is >= 0 and the per-bit angles
    // sum to at most pi.
    void validate() const;

    PiFraction total_angle_fraction(std::uint32_t value, std::uint32_t target) const;

    // Named presets:
    //   "default"        pi/2, pi/4, ..., pi/2^n from the most significant bit
    //   "highest-bit-pi" pi on the most significant bit, 0 elsewhere
    //   "exact-match"    whole-value comparison, pi on any mismatch
    static AngleSchedule preset(const std::string& name, int n_bits);
    static AngleSchedule default_halving(int n_bits);
    static AngleSchedule highest_bit_pi(int n_bits);
    static AngleSchedule exact_match();
    static AngleSchedule from_pi_multiples(const std::vector<PiFraction>& multiples);
};

// Sum of schedule angles over bit positions where value and target differ
// (pi for any mismatch under the exact-match kind), in radians.
double total_angle(std::uint32_t value, std::uint32_t target, const AngleSchedule& schedule);

} // namespace qreduce
