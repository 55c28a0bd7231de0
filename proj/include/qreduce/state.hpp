#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "qreduce/histogram.hpp"
#include "qreduce/layout.hpp"
#include "qreduce/rng.hpp"
#include "qreduce/rotation.hpp"

namespace qreduce {

enum class Register { data, counter, ancilla };

// Dense normalized amplitude vector over the full register layout.
// Amplitudes stay complex even though every operator here is real
// orthogonal; this keeps the engine honest for controlled-Hadamard and
// ancilla extensions and guards against sign-handling bugs.
class PureState {
public:
    explicit PureState(RegisterLayout layout);

    const RegisterLayout& layout() const { return layout_; }
    std::size_t dim() const { return amps_.size(); }

    const std::vector<std::complex<double>>& amplitudes() const { return amps_; }
    std::complex<double>& amp(std::size_t index) { return amps_[index]; }
    const std::complex<double>& amp(std::size_t index) const { return amps_[index]; }

    double norm() const;

    // Throws InvariantError on norm drift beyond tol.
    void check_norm(double tol = 1e-10) const;

private:
    RegisterLayout layout_;
    std::vector<std::complex<double>> amps_;
};

// Prepares (1/sqrt(M)) * sum_k |A_k>_C |k>_D |0...0>_anc by direct
// construction; the entangling circuit is treated as preparation semantics,
// not as gates to decompose.
PureState init_entangled_load(const ArraySpec& array, const RegisterLayout& layout);

// Applies op to the counter subspace of every branch where the data
// register's bit `data_bit` differs from `b_bit`; all other branches are
// left exactly untouched.
void apply_conditioned_rotation(PureState& state, int data_bit, int b_bit,
                                const RotationOperator& op);

// Applies a counter-space operator in every branch selected by the
// predicate. The predicate sees the basis index with the counter bits
// cleared, so it can condition on data and ancilla fields.
void apply_counter_operator_if(PureState& state, const Eigen::MatrixXd& op,
                               const std::function<bool(std::size_t)>& branch_predicate);

// Relabels basis states through a bijective index map (used to entangle
// fresh registers and set ancilla marks). The caller must supply a
// permutation; a non-injective map raises InvariantError.
void apply_index_permutation(PureState& state,
                             const std::function<std::size_t(std::size_t)>& permutation);

// Born-rule marginal over one register; sums to 1 within 1e-12.
std::vector<double> marginal_distribution(const PureState& state, Register reg);

// Projective measurement with collapse; the outcome is drawn from the
// register marginal and the state is renormalized onto it.
std::uint32_t measure_and_collapse(PureState& state, Register reg, Rng& rng);

// `shots` independent non-collapsing draws from the register marginal,
// deterministic per seed (sampling stream 0).
Histogram sample_histogram(const PureState& state, Register reg, std::uint64_t shots,
                           std::uint64_t seed);

// Single draw from an explicit distribution via inverse CDF; shared by the
// samplers so every code path consumes randomness identically.
std::uint32_t draw_from(const std::vector<double>& probs, Rng& rng);

} // namespace qreduce
