#include "qreduce/state.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "qreduce/errors.hpp"

namespace qreduce {

PureState::PureState(RegisterLayout layout) : layout_(layout) {
    layout_.validate();
    amps_.assign(layout_.total_dim(), {0.0, 0.0});
    amps_[0] = {1.0, 0.0};
}

double PureState::norm() const {
    double sum = 0.0;
    for (const auto& a : amps_) {
        sum += std::norm(a);
    }
    return std::sqrt(sum);
}

void PureState::check_norm(double tol) const {
    const double n = norm();
    if (std::abs(n - 1.0) > tol) {
        throw InvariantError("state norm drifted to " + std::to_string(n));
    }
}

PureState init_entangled_load(const ArraySpec& array, const RegisterLayout& layout) {
    array.validate(layout);
    PureState state(layout);
    state.amp(0) = {0.0, 0.0};
    const double amp = 1.0 / std::sqrt(static_cast<double>(layout.counter_dim()));
    for (std::size_t k = 0; k < array.elements.size(); ++k) {
        const std::size_t index =
            (static_cast<std::size_t>(array.elements[k]) << layout.data_shift()) |
            (k << layout.counter_shift());
        state.amp(index) = {amp, 0.0};
    }
    return state;
}

void apply_counter_operator_if(PureState& state, const Eigen::MatrixXd& op,
                               const std::function<bool(std::size_t)>& branch_predicate) {
    const RegisterLayout& layout = state.layout();
    const std::size_t m_dim = layout.counter_dim();
    if (static_cast<std::size_t>(op.rows()) != m_dim ||
        static_cast<std::size_t>(op.cols()) != m_dim) {
        throw ConfigError("operator dimension does not match the counter register");
    }
    const int shift = layout.counter_shift();
    const std::size_t low_mask = (std::size_t{1} << shift) - 1;
    const std::size_t branch_count = layout.total_dim() >> layout.m_counter_bits;

    Eigen::VectorXcd vec(static_cast<Eigen::Index>(m_dim));
    for (std::size_t b = 0; b < branch_count; ++b) {
        // base = basis index with counter bits zeroed
        const std::size_t base = ((b & ~low_mask) << layout.m_counter_bits) | (b & low_mask);
        if (!branch_predicate(base)) {
            continue;
        }
        for (std::size_t d = 0; d < m_dim; ++d) {
            vec[static_cast<Eigen::Index>(d)] = state.amp(base | (d << shift));
        }
        const Eigen::VectorXcd out = op * vec;
        for (std::size_t d = 0; d < m_dim; ++d) {
            state.amp(base | (d << shift)) = out[static_cast<Eigen::Index>(d)];
        }
    }
    state.check_norm();
}

void apply_conditioned_rotation(PureState& state, int data_bit, int b_bit,
                                const RotationOperator& op) {
    const RegisterLayout& layout = state.layout();
    if (data_bit < 0 || data_bit >= layout.n_data_bits) {
        throw ConfigError("data bit index out of range");
    }
    if (b_bit != 0 && b_bit != 1) {
        throw ConfigError("target bit value must be 0 or 1");
    }
    if (static_cast<std::size_t>(op.dim) != layout.counter_dim()) {
        throw ConfigError("rotation dimension does not match the counter register");
    }
    const int bit_pos = layout.data_shift() + data_bit;
    apply_counter_operator_if(state, op.matrix, [bit_pos, b_bit](std::size_t base) {
        return static_cast<int>((base >> bit_pos) & 1u) != b_bit;
    });
}

void apply_index_permutation(PureState& state,
                             const std::function<std::size_t(std::size_t)>& permutation) {
    const std::size_t dim = state.dim();
    std::vector<std::complex<double>> out(dim, {0.0, 0.0});
    std::vector<bool> hit(dim, false);
    for (std::size_t i = 0; i < dim; ++i) {
        const std::complex<double> a = state.amp(i);
        const std::size_t j = permutation(i);
        if (j >= dim || hit[j]) {
            throw InvariantError("index map is not a permutation");
        }
        hit[j] = true;
        out[j] = a;
    }
    for (std::size_t i = 0; i < dim; ++i) {
        state.amp(i) = out[i];
    }
}

namespace {

struct RegisterView {
    int shift;
    std::size_t dim;
};

RegisterView view_of(const RegisterLayout& layout, Register reg) {
    switch (reg) {
    case Register::data:
        return {layout.data_shift(), layout.data_dim()};
    case Register::counter:
        return {layout.counter_shift(), layout.counter_dim()};
    case Register::ancilla:
        if (layout.n_ancilla == 0) {
            throw ConfigError("layout has no ancilla register");
        }
        return {0, layout.ancilla_dim()};
    }
    throw ConfigError("invalid register id");
}

} // namespace

std::vector<double> marginal_distribution(const PureState& state, Register reg) {
    const RegisterView view = view_of(state.layout(), reg);
    std::vector<double> probs(view.dim, 0.0);
    const std::size_t mask = view.dim - 1;
    const auto& amps = state.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        const double p = std::norm(amps[i]);
        if (p != 0.0) {
            probs[(i >> view.shift) & mask] += p;
        }
    }
    return probs;
}

std::uint32_t draw_from(const std::vector<double>& probs, Rng& rng) {
    const double u = rng.uniform01();
    double cdf = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        cdf += probs[i];
        if (u < cdf) {
            return static_cast<std::uint32_t>(i);
        }
    }
    // u landed in the rounding gap past the last positive bin
    for (std::size_t i = probs.size(); i-- > 0;) {
        if (probs[i] > 0.0) {
            return static_cast<std::uint32_t>(i);
        }
    }
    throw InvariantError("cannot sample from an all-zero distribution");
}

std::uint32_t measure_and_collapse(PureState& state, Register reg, Rng& rng) {
    const std::vector<double> probs = marginal_distribution(state, reg);
    const std::uint32_t outcome = draw_from(probs, rng);

    const RegisterView view = view_of(state.layout(), reg);
    const std::size_t mask = view.dim - 1;
    const double weight = probs[outcome];
    if (weight <= 0.0) {
        throw InvariantError("projective measurement collapsed onto a zero branch");
    }
    const double scale = 1.0 / std::sqrt(weight);
    for (std::size_t i = 0; i < state.dim(); ++i) {
        if (((i >> view.shift) & mask) == outcome) {
            state.amp(i) *= scale;
        } else {
            state.amp(i) = {0.0, 0.0};
        }
    }
    return outcome;
}

Histogram sample_histogram(const PureState& state, Register reg, std::uint64_t shots,
                           std::uint64_t seed) {
    if (shots == 0) {
        throw ConfigError("shots must be at least 1");
    }
    const std::vector<double> probs = marginal_distribution(state, reg);
    Histogram hist;
    hist.shots = shots;
    hist.seed = seed;
    hist.counts.assign(probs.size(), 0);
    hist.exact_probs = probs;
    Rng rng = Rng::stream(seed, 0);
    for (std::uint64_t s = 0; s < shots; ++s) {
        ++hist.counts[draw_from(probs, rng)];
    }
    hist.validate();
    return hist;
}

std::vector<double> Histogram::frequencies() const {
    std::vector<double> freq(counts.size(), 0.0);
    if (shots == 0) {
        return freq;
    }
    for (std::size_t i = 0; i < counts.size(); ++i) {
        freq[i] = static_cast<double>(counts[i]) / static_cast<double>(shots);
    }
    return freq;
}

void Histogram::validate() const {
    std::uint64_t total = 0;
    for (const std::uint64_t c : counts) {
        total += c;
    }
    if (total != shots) {
        throw InvariantError("histogram counts do not sum to the shot count");
    }
    if (exact_probs) {
        const double sum = std::accumulate(exact_probs->begin(), exact_probs->end(), 0.0);
        if (std::abs(sum - 1.0) > 1e-12) {
            throw InvariantError("exact probabilities do not sum to 1");
        }
    }
}

} // namespace qreduce
