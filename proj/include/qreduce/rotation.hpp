#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "qreduce/angles.hpp"
#include "qreduce/sign_matrix.hpp"

namespace qreduce {

// d-dimensional rotation A(phi) = cos(phi/2)*I + sin(phi/2)/sqrt(d-1) * S.
// Orthogonal for every valid sign matrix, and a one-parameter group:
// A(p1)*A(p2) = A(p1+p2).
struct RotationOperator {
    int dim = 0;
    double angle = 0.0; // phi, radians in [0, pi]
    Eigen::MatrixXd matrix;
};

// Throws ConfigError when phi is outside [0, pi]; angles above pi are
// rejected rather than wrapped so that overshooting is never silent.
RotationOperator build_rotation(const SignMatrix& sign, double phi);
RotationOperator build_rotation(const SignMatrix& sign, const PiFraction& phi);

struct OperatorDiagnostics {
    double orthogonality_defect = 0.0; // ||A^T A - I||_max
    double group_defect = 0.0;         // max ||A(p1)A(p2) - A(p1+p2)||_max over sampled pairs
    double skew_square_defect = 0.0;   // ||S^2/(d-1) + I||_max
    long sign_gram_defect = 0;         // max |W W^T - (d-1) I| (integer)
};

// Structural verification of an operator against its sign matrix. The group
// property is probed over seeded random angle pairs with p1 + p2 <= pi.
OperatorDiagnostics validate_operator(const RotationOperator& op, const SignMatrix& sign,
                                      int sampled_pairs = 32, std::uint64_t seed = 7);

} // namespace qreduce
