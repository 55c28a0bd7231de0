#pragma once

#include <string>

#include <Eigen/Dense>

namespace qreduce {

enum class SignVariant { doubling, paper_d4, paper_d8 };

std::string to_string(SignVariant v);

// Antisymmetric {0,+1,-1} matrix with zero diagonal and W*W^T = (d-1)*I.
// Its normalization S/sqrt(d-1) squares to -I, which is what makes
// A(phi) = cos(phi/2)*I + sin(phi/2)/sqrt(d-1)*S a one-parameter rotation
// family.
struct SignMatrix {
    int m = 0; // counter qubits, d = 2^m
    SignVariant variant = SignVariant::doubling;
    Eigen::MatrixXi entries;

    int dim() const { return 1 << m; }
};

// Builds the sign matrix for d = 2^m counter states.
//   doubling  - skew doubling recursion from the 2x2 seed [[0,1],[-1,0]],
//               available for 1 <= m <= 6
//   paper_d4  - the published 4x4 pattern (requires m = 2)
//   paper_d8  - the published 8x8 pattern (requires m = 3)
// Throws ConfigError for unsupported (m, variant) pairs.
SignMatrix build_sign_matrix(int m, SignVariant variant);

// Max absolute defect of W*W^T - (d-1)*I in integer arithmetic, plus the
// structural predicates; used to vet hand-edited matrices.
struct SignChecks {
    bool zero_diagonal = false;
    bool antisymmetric = false;
    long gram_defect = 0;

    bool ok() const { return zero_diagonal && antisymmetric && gram_defect == 0; }
};

SignChecks check_sign_entries(const Eigen::MatrixXi& entries);

// Text form used by the checked-in fixtures: one row per line, entries
// space-separated in {0,+1,-1}.
std::string sign_to_text(const Eigen::MatrixXi& entries);
Eigen::MatrixXi sign_from_text(const std::string& text);

} // namespace qreduce
