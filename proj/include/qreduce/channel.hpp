#pragma once

#include <vector>

#include <Eigen/Dense>

#include "qreduce/angles.hpp"
#include "qreduce/layout.hpp"
#include "qreduce/sign_matrix.hpp"

namespace qreduce {

// Counter-register density matrix. The iterative reload acts on this M x M
// state exactly, where a pure-state treatment would need a fresh data
// register per iteration.
struct DensityState {
    Eigen::MatrixXcd rho;

    static DensityState maximally_mixed(int m_elements);

    int dim() const { return static_cast<int>(rho.rows()); }
    Eigen::VectorXd diagonal() const { return rho.diagonal().real(); }

    // Trace 1 and Hermitian within 1e-12, eigenvalues >= -1e-10; throws
    // InvariantError otherwise.
    void validate() const;
};

// Load-rotate-discard composite as Kraus operators on the counter: one
// K_c = A(phi(c)) * Pi_c per distinct array value c, where Pi_c projects
// onto the counter indices holding c and phi(c) is the value's total
// rotation angle against the target.
struct ReloadChannel {
    std::vector<Eigen::MatrixXd> kraus;
    std::vector<std::uint32_t> values; // distinct value behind each Kraus op

    double completeness_defect() const; // ||sum K^T K - I||_max
};

ReloadChannel build_reload_channel(const ArraySpec& array, int n_bits,
                                   const AngleSchedule& schedule, const SignMatrix& sign);

// rho' = sum_c K_c rho K_c^T; trace-preserving and positive.
DensityState apply_channel(const DensityState& rho, const ReloadChannel& channel);

// Column-stochastic transition matrix for distinct-element arrays:
//   T[j][k] = cos^2(phi_k/2)          when j == k
//             sin^2(phi_k/2)/(M-1)    otherwise.
// Duplicate elements are refused: the oracle is invalid under interference.
Eigen::MatrixXd markov_transition(const ArraySpec& array, int n_bits,
                                  const AngleSchedule& schedule);

// Applies the per-iteration reload channel to rho0 = I/M and returns the
// counter diagonal after each iteration. Pass one schedule to reuse it for
// every iteration, or exactly `iterations` schedules for an equalizer-style
// sweep.
std::vector<Eigen::VectorXd> iterate(const ArraySpec& array, int n_bits,
                                     const std::vector<AngleSchedule>& schedules,
                                     const SignMatrix& sign, int iterations);

// Pure-state cross-check of the channel with explicitly appended data
// registers, exact for iterations <= 2 (register growth caps it there).
// Returns the counter marginal after `iterations` reload-rotate rounds.
Eigen::VectorXd iterate_pure_state_crosscheck(const ArraySpec& array, int n_bits,
                                              const AngleSchedule& schedule,
                                              const SignMatrix& sign, int iterations);

} // namespace qreduce
