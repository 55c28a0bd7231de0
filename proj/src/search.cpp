#include "qreduce/search.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "qreduce/errors.hpp"
#include "qreduce/rotation.hpp"

namespace qreduce {

std::string to_string(Mode mode) {
    switch (mode) {
    case Mode::nearest: return "nearest";
    case Mode::exact_match: return "exact-match";
    case Mode::filter: return "filter";
    }
    return "?";
}

RegisterLayout SearchConfig::base_layout() const {
    RegisterLayout layout;
    layout.n_data_bits = n_data_bits;
    layout.m_counter_bits = m_counter_bits;
    return layout;
}

void SearchConfig::validate() const {
    const RegisterLayout layout = base_layout();
    layout.validate();
    array.validate(layout);
    schedule.validate();
    if (schedule.kind == AngleSchedule::Kind::per_bit && schedule.bits() != n_data_bits) {
        throw ConfigError("schedule length does not match the data register width");
    }
    if (mode == Mode::filter && !exclude.has_value()) {
        throw ConfigError("filter mode requires an exclude value");
    }
    if (mode == Mode::exact_match && array.count_equal(array.target_b) < 1) {
        throw ConfigError("exact-match mode assumes at least one element equal to the target");
    }
    if (cycles < 0) {
        throw ConfigError("cycle count cannot be negative");
    }
}

namespace {

SignMatrix sign_for(const SearchConfig& config) {
    return build_sign_matrix(config.m_counter_bits, config.signs);
}

// One full pass of per-bit conditioned rotations against the target.
void rotation_pass(PureState& state, const SearchConfig& config, const SignMatrix& sign) {
    const int n = config.n_data_bits;
    for (int j = 0; j < n; ++j) {
        const PiFraction angle = config.schedule.per_bit[static_cast<std::size_t>(j)];
        if (angle.is_zero()) {
            continue;
        }
        const RotationOperator rot = build_rotation(sign, angle);
        const int data_bit = n - 1 - j;
        const int b_bit = static_cast<int>((config.array.target_b >> data_bit) & 1u);
        apply_conditioned_rotation(state, data_bit, b_bit, rot);
    }
}

} // namespace

SearchResult single_call_search(const SearchConfig& config) {
    config.validate();
    if (config.mode != Mode::nearest) {
        throw ConfigError("single-call search runs in nearest mode");
    }
    const SignMatrix sign = sign_for(config);
    PureState state = init_entangled_load(config.array, config.base_layout());
    rotation_pass(state, config, sign);
    std::vector<double> probs = marginal_distribution(state, Register::counter);
    return SearchResult{std::move(state), std::move(probs)};
}

namespace {

// Collapse of the counter register onto a fixed outcome, renormalized.
PureState collapse_counter(const PureState& state, std::uint32_t outcome, double weight) {
    PureState out = state;
    const RegisterLayout& layout = out.layout();
    const std::size_t mask = layout.counter_dim() - 1;
    const double scale = 1.0 / std::sqrt(weight);
    for (std::size_t i = 0; i < out.dim(); ++i) {
        if (((i >> layout.counter_shift()) & mask) == outcome) {
            out.amp(i) *= scale;
        } else {
            out.amp(i) = {0.0, 0.0};
        }
    }
    return out;
}

struct OutcomeNode {
    PureState state;
    std::vector<double> probs;
};

} // namespace

DecoherenceResult decoherence_protocol(const SearchConfig& config, std::uint64_t shots,
                                       std::uint64_t seed) {
    config.validate();
    if (config.mode != Mode::nearest) {
        throw ConfigError("the decoherence protocol runs in nearest mode");
    }
    if (config.cycles < 1) {
        throw ConfigError("the decoherence protocol needs at least one re-measure cycle");
    }
    const int rounds = config.cycles;
    if (shots == 0) {
        throw ConfigError("shots must be at least 1");
    }

    const SignMatrix sign = sign_for(config);
    PureState loaded = init_entangled_load(config.array, config.base_layout());
    rotation_pass(loaded, config, sign);
    const std::vector<double> first_probs = marginal_distribution(loaded, Register::counter);
    const std::size_t m_dim = loaded.layout().counter_dim();

    // The collapsed-then-rerotated state depends only on the outcome prefix,
    // so realized prefixes are cached instead of resimulated per shot.
    std::map<std::vector<std::uint32_t>, OutcomeNode> cache;
    const std::function<const OutcomeNode&(const std::vector<std::uint32_t>&)> node_for =
        [&](const std::vector<std::uint32_t>& prefix) -> const OutcomeNode& {
        auto it = cache.find(prefix);
        if (it != cache.end()) {
            return it->second;
        }
        const std::uint32_t outcome = prefix.back();
        PureState collapsed = [&] {
            if (prefix.size() > 1) {
                const std::vector<std::uint32_t> up(prefix.begin(), prefix.end() - 1);
                const OutcomeNode& parent = node_for(up);
                return collapse_counter(parent.state, outcome, parent.probs[outcome]);
            }
            return collapse_counter(loaded, outcome, first_probs[outcome]);
        }();
        rotation_pass(collapsed, config, sign);
        if (cache.size() > 8192) {
            cache.clear(); // bounded memory; recomputation is deterministic
        }
        OutcomeNode node{std::move(collapsed), {}};
        node.probs = marginal_distribution(node.state, Register::counter);
        return cache.emplace(prefix, std::move(node)).first->second;
    };

    // Exact final distribution by outcome-tree enumeration when the tree is
    // small; otherwise only the sampled histogram is reported.
    std::optional<std::vector<double>> exact_final;
    double tree_size = 1.0;
    for (int r = 0; r < rounds; ++r) {
        tree_size *= static_cast<double>(m_dim);
    }
    if (tree_size <= 4096.0) {
        std::vector<double> total(m_dim, 0.0);
        std::vector<std::uint32_t> prefix;
        const std::function<void(double, int)> walk = [&](double weight, int depth) {
            const std::vector<double> probs =
                prefix.empty() ? first_probs : node_for(prefix).probs;
            if (depth == rounds) {
                for (std::size_t j = 0; j < m_dim; ++j) {
                    total[j] += weight * probs[j];
                }
                return;
            }
            for (std::uint32_t i = 0; i < m_dim; ++i) {
                if (probs[i] <= 1e-15) {
                    continue;
                }
                prefix.push_back(i);
                walk(weight * probs[i], depth + 1);
                prefix.pop_back();
            }
        };
        walk(1.0, 0);
        exact_final = std::move(total);
    }

    DecoherenceResult result;
    result.first.shots = shots;
    result.first.seed = seed;
    result.first.counts.assign(m_dim, 0);
    result.first.exact_probs = first_probs;
    result.second.shots = shots;
    result.second.seed = seed;
    result.second.counts.assign(m_dim, 0);
    result.second.exact_probs = exact_final;

    Rng rng = Rng::stream(seed, 0);
    std::vector<std::uint32_t> prefix;
    for (std::uint64_t s = 0; s < shots; ++s) {
        prefix.clear();
        std::uint32_t outcome = draw_from(first_probs, rng);
        ++result.first.counts[outcome];
        for (int r = 0; r < rounds; ++r) {
            prefix.push_back(outcome);
            outcome = draw_from(node_for(prefix).probs, rng);
        }
        ++result.second.counts[outcome];
    }
    result.first.validate();
    result.second.validate();
    return result;
}

int max_null_element_cycles(int n_data_bits, int m_counter_bits) {
    const int spare = RegisterLayout::kMaxTotalBits - n_data_bits - m_counter_bits;
    return std::max(0, spare / (n_data_bits + 1));
}

SearchResult null_element_procedure(const SearchConfig& config) {
    config.validate();
    if (config.mode != Mode::exact_match) {
        throw ConfigError("the null-element procedure runs in exact-match mode");
    }
    if (config.schedule.kind != AngleSchedule::Kind::exact_match) {
        throw ConfigError("the null-element procedure uses the exact-match schedule");
    }
    const int matches = config.array.count_equal(config.array.target_b);
    if (matches != 1) {
        throw ConfigError("the null-element procedure needs exactly one element equal to the "
                          "target, found " + std::to_string(matches));
    }
    const int cycles = config.cycles;
    const int n = config.n_data_bits;
    const int m = config.m_counter_bits;
    if (cycles > max_null_element_cycles(n, m)) {
        throw ConfigError("cycle count needs " + std::to_string(cycles * (n + 1)) +
                          " ancilla bits and exceeds the register cap");
    }

    // Ancilla block, low to high: one mark qubit per cycle, then the fresh
    // data register of each cycle (later cycles sit lower).
    RegisterLayout layout;
    layout.n_data_bits = n;
    layout.m_counter_bits = m;
    layout.n_ancilla = cycles * (n + 1);
    layout.validate();

    const SignMatrix sign = sign_for(config);
    const RotationOperator pi_rot = build_rotation(sign, PiFraction::pi());
    Eigen::MatrixXd hadamard(1, 1);
    hadamard(0, 0) = 1.0;
    {
        Eigen::MatrixXd h1(2, 2);
        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        h1 << inv_sqrt2, inv_sqrt2, inv_sqrt2, -inv_sqrt2;
        for (int i = 0; i < m; ++i) {
            Eigen::MatrixXd next(hadamard.rows() * 2, hadamard.cols() * 2);
            next.topLeftCorner(hadamard.rows(), hadamard.cols()) = inv_sqrt2 * hadamard;
            next.topRightCorner(hadamard.rows(), hadamard.cols()) = inv_sqrt2 * hadamard;
            next.bottomLeftCorner(hadamard.rows(), hadamard.cols()) = inv_sqrt2 * hadamard;
            next.bottomRightCorner(hadamard.rows(), hadamard.cols()) = -inv_sqrt2 * hadamard;
            hadamard = std::move(next);
        }
    }

    PureState state = init_entangled_load(config.array, layout);
    const std::uint32_t value_mask = static_cast<std::uint32_t>(layout.data_dim()) - 1;
    const std::uint32_t target = config.array.target_b;
    const std::size_t counter_mask = layout.counter_dim() - 1;

    const auto register_shift = [&](int cycle) {
        // cycle 0 is the original data register
        if (cycle == 0) {
            return layout.data_shift();
        }
        return cycles + (cycles - cycle) * n;
    };

    const auto rotate_on = [&](int cycle) {
        const int shift = register_shift(cycle);
        apply_counter_operator_if(state, pi_rot.matrix, [&, shift](std::size_t base) {
            return (static_cast<std::uint32_t>(base >> shift) & value_mask) != target;
        });
    };

    rotate_on(0);
    for (int c = 1; c <= cycles; ++c) {
        const int mark_bit = c - 1;
        const int prev_shift = register_shift(c - 1);
        // mark the erroneous zero-state component of the mismatching branches
        apply_index_permutation(state, [&](std::size_t index) {
            const bool mismatch =
                (static_cast<std::uint32_t>(index >> prev_shift) & value_mask) != target;
            const bool zero_state = ((index >> layout.counter_shift()) & counter_mask) == 0;
            return (mismatch && zero_state) ? (index ^ (std::size_t{1} << mark_bit)) : index;
        });
        // spread it over the counter with mark-controlled Hadamards
        apply_counter_operator_if(state, hadamard, [mark_bit](std::size_t base) {
            return ((base >> mark_bit) & 1u) != 0;
        });
        // reload: entangle a fresh data register with the counter
        const int fresh_shift = register_shift(c);
        apply_index_permutation(state, [&](std::size_t index) {
            const std::uint32_t k =
                static_cast<std::uint32_t>((index >> layout.counter_shift()) & counter_mask);
            return index ^ (static_cast<std::size_t>(config.array.elements[k]) << fresh_shift);
        });
        rotate_on(c);
    }

    std::vector<double> probs = marginal_distribution(state, Register::counter);
    return SearchResult{std::move(state), std::move(probs)};
}

FilterResult filter_exclude(const SearchConfig& config) {
    config.validate();
    if (config.mode != Mode::filter) {
        throw ConfigError("filter_exclude runs in filter mode");
    }
    const std::uint32_t excluded = *config.exclude;
    if (excluded >= config.base_layout().data_dim()) {
        throw ConfigError("exclude value does not fit in the data register");
    }

    FilterResult result{
        PureState(config.base_layout()), {}, config.array.count_equal(excluded), false, false};
    result.duplicate_flag = result.match_count > 1;
    result.absent_warning = result.match_count == 0;

    const SignMatrix sign = sign_for(config);
    const RotationOperator pi_rot = build_rotation(sign, PiFraction::pi());
    PureState state = init_entangled_load(config.array, config.base_layout());
    if (!result.absent_warning) {
        const int shift = state.layout().data_shift();
        const std::uint32_t mask = static_cast<std::uint32_t>(state.layout().data_dim()) - 1;
        apply_counter_operator_if(state, pi_rot.matrix, [&, shift](std::size_t base) {
            return (static_cast<std::uint32_t>(base >> shift) & mask) == excluded;
        });
    }
    result.counter_probs = marginal_distribution(state, Register::counter);
    result.state = std::move(state);
    return result;
}

int outlier_index(const SearchConfig& config) {
    int best = 0;
    double best_angle = -1.0;
    for (std::size_t k = 0; k < config.array.size(); ++k) {
        const double phi = total_angle(config.array.elements[k], config.array.target_b,
                                       config.schedule);
        if (phi > best_angle) {
            best_angle = phi;
            best = static_cast<int>(k);
        }
    }
    return best;
}

Histogram nearest_with_remeasure_filter(const SearchConfig& config, std::uint64_t shots,
                                        std::uint64_t seed) {
    SearchConfig protocol = config;
    protocol.mode = Mode::nearest;
    if (protocol.cycles < 1) {
        protocol.cycles = 1;
    }
    return decoherence_protocol(protocol, shots, seed).second;
}

} // namespace qreduce
