#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qreduce/angles.hpp"
#include "qreduce/histogram.hpp"
#include "qreduce/layout.hpp"
#include "qreduce/sign_matrix.hpp"
#include "qreduce/state.hpp"

namespace qreduce {

enum class Mode { nearest, exact_match, filter };

std::string to_string(Mode mode);

struct SearchConfig {
    ArraySpec array;
    int n_data_bits = 0;
    int m_counter_bits = 0;
    AngleSchedule schedule;
    SignVariant signs = SignVariant::doubling;
    Mode mode = Mode::nearest;
    std::optional<std::uint32_t> exclude;
    int cycles = 0;

    RegisterLayout base_layout() const;
    void validate() const;
};

struct SearchResult {
    PureState state;
    std::vector<double> counter_probs;
};

// One load plus one pass of per-bit conditioned rotations; O(1) calls in
// the Grover sense. Requires nearest mode.
SearchResult single_call_search(const SearchConfig& config);

// Per shot: load once, rotate, projectively measure the counter, re-apply
// the same rotation pass without reloading, measure again; `cycles`
// re-measure rounds (>= 1). Returns the first- and final-measurement
// histograms, with exact distributions attached whenever the outcome tree
// is small enough to enumerate.
struct DecoherenceResult {
    Histogram first;
    Histogram second;
};

DecoherenceResult decoherence_protocol(const SearchConfig& config, std::uint64_t shots,
                                       std::uint64_t seed);

// Exact-match procedure around the unique element equal to the target:
// load, rotate the counter by pi in every mismatching branch, then per
// cycle mark the erroneously accumulated zero-state amplitude through a
// fresh ancilla, spread it with marked Hadamards, re-entangle a fresh data
// register and rotate again. Deterministic; requires exactly one match.
// Each cycle consumes n_data_bits + 1 ancilla bits of the layout cap.
SearchResult null_element_procedure(const SearchConfig& config);

// Counts how many redistribution cycles fit under the register cap for a
// given geometry.
int max_null_element_cycles(int n_data_bits, int m_counter_bits);

// Anti-search: rotate by pi exactly where the data register equals
// `exclude`, driving that counter index to probability zero.
struct FilterResult {
    PureState state;
    std::vector<double> counter_probs;
    int match_count = 0;       // branches rotated
    bool duplicate_flag = false;
    bool absent_warning = false;
};

FilterResult filter_exclude(const SearchConfig& config);

// Nearest-mode decoherence protocol used as a soft filter; returns the
// final-measurement histogram. The outlier is the element with the largest
// rotation angle against the target.
Histogram nearest_with_remeasure_filter(const SearchConfig& config, std::uint64_t shots,
                                        std::uint64_t seed);

int outlier_index(const SearchConfig& config);

} // namespace qreduce
