#include "qreduce/rotation.hpp"

#include <cmath>

#include "qreduce/errors.hpp"
#include "qreduce/rng.hpp"

namespace qreduce {

namespace {

Eigen::MatrixXd assemble(const SignMatrix& sign, double phi) {
    const int d = sign.dim();
    const double diag = std::cos(phi / 2.0);
    const double off = std::sin(phi / 2.0) / std::sqrt(static_cast<double>(d - 1));
    return diag * Eigen::MatrixXd::Identity(d, d) + off * sign.entries.cast<double>();
}

} // namespace

RotationOperator build_rotation(const SignMatrix& sign, double phi) {
    if (!(phi >= 0.0) || phi > M_PI + 1e-15) {
        throw ConfigError("rotation angle must lie in [0, pi]");
    }
    RotationOperator op;
    op.dim = sign.dim();
    op.angle = phi;
    op.matrix = assemble(sign, phi);
    return op;
}

RotationOperator build_rotation(const SignMatrix& sign, const PiFraction& phi) {
    if (phi.negative() || !(phi <= PiFraction::pi())) {
        throw ConfigError("rotation angle must lie in [0, pi]");
    }
    RotationOperator op;
    op.dim = sign.dim();
    op.angle = phi.radians();
    if (phi == PiFraction::pi()) {
        // cos(pi/2) through floating point is ~6e-17, but a pi rotation has
        // an exactly zero diagonal; the filter's excluded bin relies on it
        const int d = sign.dim();
        op.matrix = (1.0 / std::sqrt(static_cast<double>(d - 1))) *
                    sign.entries.cast<double>();
    } else {
        op.matrix = assemble(sign, op.angle);
    }
    return op;
}

OperatorDiagnostics validate_operator(const RotationOperator& op, const SignMatrix& sign,
                                      int sampled_pairs, std::uint64_t seed) {
    OperatorDiagnostics diag;
    const int d = op.dim;
    const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(d, d);

    diag.orthogonality_defect =
        (op.matrix.transpose() * op.matrix - identity).cwiseAbs().maxCoeff();

    const Eigen::MatrixXd s = sign.entries.cast<double>();
    diag.skew_square_defect =
        (s * s / static_cast<double>(d - 1) + identity).cwiseAbs().maxCoeff();
    diag.sign_gram_defect = check_sign_entries(sign.entries).gram_defect;

    Rng rng(seed);
    for (int i = 0; i < sampled_pairs; ++i) {
        const double p1 = rng.uniform01() * M_PI;
        const double p2 = rng.uniform01() * (M_PI - p1);
        const Eigen::MatrixXd lhs = assemble(sign, p1) * assemble(sign, p2);
        const Eigen::MatrixXd rhs = assemble(sign, p1 + p2);
        diag.group_defect = std::max(diag.group_defect, (lhs - rhs).cwiseAbs().maxCoeff());
    }
    return diag;
}

} // namespace qreduce
