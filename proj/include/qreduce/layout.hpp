#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace qreduce {

// Register geometry of the simulated pure state. Basis index bit layout,
// least significant first: [ancilla][counter D][data C]. Bit 0 is the least
// significant bit within each register; schedules index data bits from the
// most significant downward.
struct RegisterLayout {
    int n_data_bits = 0;
    int m_counter_bits = 0;
    int n_ancilla = 0;

    static constexpr int kMaxTotalBits = 26; // desk-scale cap

    int total_bits() const { return n_data_bits + m_counter_bits + n_ancilla; }
    std::size_t total_dim() const { return std::size_t{1} << total_bits(); }
    std::size_t data_dim() const { return std::size_t{1} << n_data_bits; }
    std::size_t counter_dim() const { return std::size_t{1} << m_counter_bits; }
    std::size_t ancilla_dim() const { return std::size_t{1} << n_ancilla; }

    int counter_shift() const { return n_ancilla; }
    int data_shift() const { return n_ancilla + m_counter_bits; }

    std::uint32_t data_of(std::size_t index) const {
        return static_cast<std::uint32_t>(index >> data_shift());
    }
    std::uint32_t counter_of(std::size_t index) const {
        return static_cast<std::uint32_t>((index >> counter_shift()) & (counter_dim() - 1));
    }
    std::uint32_t ancilla_of(std::size_t index) const {
        return static_cast<std::uint32_t>(index & (ancilla_dim() - 1));
    }

    // Throws ConfigError when a register width is out of range or the total
    // exceeds the desk-scale cap.
    void validate() const;
};

// Classical input: 2^m unsigned n-bit values plus the search target B.
struct ArraySpec {
    std::vector<std::uint32_t> elements;
    std::uint32_t target_b = 0;

    std::size_t size() const { return elements.size(); }

    // Throws ConfigError unless there is one element per counter state and
    // every value (and the target) fits in n bits.
    void validate(const RegisterLayout& layout) const;

    bool all_distinct() const;
    int count_equal(std::uint32_t value) const;
};

} // namespace qreduce
