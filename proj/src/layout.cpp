#include "qreduce/layout.hpp"

#include <string>
#include <unordered_set>

#include "qreduce/errors.hpp"

namespace qreduce {

void RegisterLayout::validate() const {
    if (n_data_bits < 1) {
        throw ConfigError("layout needs at least one data bit");
    }
    if (m_counter_bits < 1) {
        throw ConfigError("layout needs at least one counter bit");
    }
    if (n_ancilla < 0) {
        throw ConfigError("ancilla count cannot be negative");
    }
    if (total_bits() > kMaxTotalBits) {
        throw ConfigError("layout exceeds the " + std::to_string(kMaxTotalBits) +
                          "-bit desk-scale cap (" + std::to_string(total_bits()) + " bits)");
    }
}

void ArraySpec::validate(const RegisterLayout& layout) const {
    if (elements.size() != layout.counter_dim()) {
        throw ConfigError("array must hold exactly 2^m elements, got " +
                          std::to_string(elements.size()) + " for m=" +
                          std::to_string(layout.m_counter_bits));
    }
    const std::uint32_t limit = static_cast<std::uint32_t>(layout.data_dim());
    for (const std::uint32_t v : elements) {
        if (v >= limit) {
            throw ConfigError("array element " + std::to_string(v) + " does not fit in " +
                              std::to_string(layout.n_data_bits) + " bits");
        }
    }
    if (target_b >= limit) {
        throw ConfigError("target value does not fit in the data register");
    }
}

bool ArraySpec::all_distinct() const {
    std::unordered_set<std::uint32_t> seen(elements.begin(), elements.end());
    return seen.size() == elements.size();
}

int ArraySpec::count_equal(std::uint32_t value) const {
    int count = 0;
    for (const std::uint32_t v : elements) {
        if (v == value) {
            ++count;
        }
    }
    return count;
}

} // namespace qreduce
