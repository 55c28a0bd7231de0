#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace qreduce {

// Measurement counts per counter outcome, with the exact Born probabilities
// alongside when they are available in closed form.
struct Histogram {
    std::vector<std::uint64_t> counts;
    std::uint64_t shots = 0;
    std::optional<std::vector<double>> exact_probs;
    std::uint64_t seed = 0;

    std::vector<double> frequencies() const;

    // Throws InvariantError when counts do not sum to shots or exact_probs
    // fails to sum to 1 within 1e-12.
    void validate() const;
};

} // namespace qreduce
