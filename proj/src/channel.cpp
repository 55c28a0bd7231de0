#include "qreduce/channel.hpp"

#include <cmath>
#include <map>

#include <Eigen/Eigenvalues>

#include "qreduce/errors.hpp"
#include "qreduce/rotation.hpp"
#include "qreduce/state.hpp"

namespace qreduce {

DensityState DensityState::maximally_mixed(int m_elements) {
    DensityState state;
    state.rho = Eigen::MatrixXcd::Identity(m_elements, m_elements) /
                static_cast<double>(m_elements);
    return state;
}

void DensityState::validate() const {
    const double trace = rho.trace().real();
    if (std::abs(trace - 1.0) > 1e-12) {
        throw InvariantError("density matrix trace drifted to " + std::to_string(trace));
    }
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
        throw InvariantError("density matrix is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho);
    if (solver.eigenvalues().minCoeff() < -1e-10) {
        throw InvariantError("density matrix has a negative eigenvalue");
    }
}

double ReloadChannel::completeness_defect() const {
    if (kraus.empty()) {
        return 1.0;
    }
    const Eigen::Index d = kraus.front().rows();
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(d, d);
    for (const auto& k : kraus) {
        sum += k.transpose() * k;
    }
    return (sum - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff();
}

ReloadChannel build_reload_channel(const ArraySpec& array, int n_bits,
                                   const AngleSchedule& schedule, const SignMatrix& sign) {
    const int m_elements = static_cast<int>(array.size());
    if (sign.dim() != m_elements) {
        throw ConfigError("sign matrix dimension does not match the array size");
    }
    RegisterLayout layout;
    layout.n_data_bits = n_bits;
    layout.m_counter_bits = sign.m;
    layout.validate();
    array.validate(layout);
    schedule.validate();
    if (schedule.kind == AngleSchedule::Kind::per_bit && schedule.bits() != n_bits) {
        throw ConfigError("schedule length does not match the data register width");
    }

    // group counter indices by array value
    std::map<std::uint32_t, std::vector<int>> by_value;
    for (int k = 0; k < m_elements; ++k) {
        by_value[array.elements[static_cast<std::size_t>(k)]].push_back(k);
    }

    ReloadChannel channel;
    for (const auto& [value, indices] : by_value) {
        Eigen::MatrixXd projector = Eigen::MatrixXd::Zero(m_elements, m_elements);
        for (const int k : indices) {
            projector(k, k) = 1.0;
        }
        const double phi = total_angle(value, array.target_b, schedule);
        const RotationOperator rot = build_rotation(sign, phi);
        channel.kraus.push_back(rot.matrix * projector);
        channel.values.push_back(value);
    }
    if (channel.completeness_defect() > 1e-12) {
        throw InvariantError("reload channel is not trace preserving");
    }
    return channel;
}

DensityState apply_channel(const DensityState& rho, const ReloadChannel& channel) {
    DensityState out;
    out.rho = Eigen::MatrixXcd::Zero(rho.rho.rows(), rho.rho.cols());
    for (const auto& k : channel.kraus) {
        out.rho += k * rho.rho * k.transpose();
    }
    out.validate();
    return out;
}

Eigen::MatrixXd markov_transition(const ArraySpec& array, int n_bits,
                                  const AngleSchedule& schedule) {
    if (!array.all_distinct()) {
        throw ConfigError("Markov oracle requires distinct elements");
    }
    schedule.validate();
    if (schedule.kind == AngleSchedule::Kind::per_bit && schedule.bits() != n_bits) {
        throw ConfigError("schedule length does not match the data register width");
    }
    const int m_elements = static_cast<int>(array.size());
    Eigen::MatrixXd t(m_elements, m_elements);
    for (int k = 0; k < m_elements; ++k) {
        const double phi = total_angle(array.elements[static_cast<std::size_t>(k)],
                                       array.target_b, schedule);
        const double c2 = std::cos(phi / 2.0) * std::cos(phi / 2.0);
        const double spread = (1.0 - c2) / static_cast<double>(m_elements - 1);
        for (int j = 0; j < m_elements; ++j) {
            t(j, k) = (j == k) ? c2 : spread;
        }
    }
    return t;
}

std::vector<Eigen::VectorXd> iterate(const ArraySpec& array, int n_bits,
                                     const std::vector<AngleSchedule>& schedules,
                                     const SignMatrix& sign, int iterations) {
    if (iterations < 1) {
        throw ConfigError("iteration count must be at least 1");
    }
    if (schedules.empty() ||
        (schedules.size() != 1 && schedules.size() != static_cast<std::size_t>(iterations))) {
        throw ConfigError("pass one schedule or one schedule per iteration");
    }
    DensityState rho = DensityState::maximally_mixed(static_cast<int>(array.size()));
    std::vector<Eigen::VectorXd> diagonals;
    diagonals.reserve(static_cast<std::size_t>(iterations));
    for (int t = 0; t < iterations; ++t) {
        const AngleSchedule& schedule =
            schedules.size() == 1 ? schedules.front() : schedules[static_cast<std::size_t>(t)];
        const ReloadChannel channel = build_reload_channel(array, n_bits, schedule, sign);
        rho = apply_channel(rho, channel);
        diagonals.push_back(rho.diagonal());
    }
    return diagonals;
}

Eigen::VectorXd iterate_pure_state_crosscheck(const ArraySpec& array, int n_bits,
                                              const AngleSchedule& schedule,
                                              const SignMatrix& sign, int iterations) {
    if (iterations < 1 || iterations > 2) {
        throw ConfigError("pure-state cross-check covers 1 or 2 iterations only");
    }
    RegisterLayout layout;
    layout.n_data_bits = n_bits;
    layout.m_counter_bits = sign.m;
    layout.n_ancilla = (iterations - 1) * n_bits; // one fresh data register per extra reload
    layout.validate();

    PureState state = init_entangled_load(array, layout);

    auto rotate_pass = [&](int value_shift) {
        if (schedule.kind == AngleSchedule::Kind::exact_match) {
            const RotationOperator pi_rot = build_rotation(sign, PiFraction::pi());
            const std::uint32_t mask = static_cast<std::uint32_t>(layout.data_dim()) - 1;
            apply_counter_operator_if(state, pi_rot.matrix, [&](std::size_t base) {
                return (static_cast<std::uint32_t>(base >> value_shift) & mask) != array.target_b;
            });
            return;
        }
        for (int j = 0; j < n_bits; ++j) {
            const PiFraction angle = schedule.per_bit[static_cast<std::size_t>(j)];
            if (angle.is_zero()) {
                continue;
            }
            const RotationOperator rot = build_rotation(sign, angle);
            const int bit_pos = value_shift + (n_bits - 1 - j);
            const int b_bit = static_cast<int>((array.target_b >> (n_bits - 1 - j)) & 1u);
            apply_counter_operator_if(state, rot.matrix, [&, bit_pos, b_bit](std::size_t base) {
                return static_cast<int>((base >> bit_pos) & 1u) != b_bit;
            });
        }
    };

    rotate_pass(layout.data_shift());
    if (iterations == 2) {
        // entangle the fresh register with the counter, then rotate on it
        const int fresh_shift = 0; // ancilla block bottom
        apply_index_permutation(state, [&](std::size_t index) {
            const std::uint32_t k = layout.counter_of(index);
            return index ^ (static_cast<std::size_t>(array.elements[k]) << fresh_shift);
        });
        rotate_pass(fresh_shift);
    }

    const std::vector<double> marginal = marginal_distribution(state, Register::counter);
    Eigen::VectorXd out(static_cast<Eigen::Index>(marginal.size()));
    for (std::size_t i = 0; i < marginal.size(); ++i) {
        out[static_cast<Eigen::Index>(i)] = marginal[i];
    }
    return out;
}

} // namespace qreduce
