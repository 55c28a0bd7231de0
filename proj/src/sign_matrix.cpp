#include "qreduce/sign_matrix.hpp"

#include <sstream>
#include <vector>

#include "qreduce/errors.hpp"

namespace qreduce {

std::string to_string(SignVariant v) {
    switch (v) {
    case SignVariant::doubling: return "doubling";
    case SignVariant::paper_d4: return "paper-d4";
    case SignVariant::paper_d8: return "paper-d8";
    }
    return "?";
}

namespace {

Eigen::MatrixXi doubling_entries(int m) {
    // H = I + W starts at the order-2 skew base and doubles as
    // [[H, H], [-H^T, H^T]]; subtracting the identity recovers W at each
    // order. Every doubling preserves H + H^T = 2I and H*H^T = d*I.
    Eigen::MatrixXi h(2, 2);
    h << 1, 1,
        -1, 1;
    for (int level = 1; level < m; ++level) {
        const int d = static_cast<int>(h.rows());
        Eigen::MatrixXi next(2 * d, 2 * d);
        next.topLeftCorner(d, d) = h;
        next.topRightCorner(d, d) = h;
        next.bottomLeftCorner(d, d) = -h.transpose();
        next.bottomRightCorner(d, d) = h.transpose();
        h = std::move(next);
    }
    return h - Eigen::MatrixXi::Identity(h.rows(), h.cols());
}

Eigen::MatrixXi paper_d4_entries() {
    Eigen::MatrixXi s(4, 4);
    s << 0, -1, -1, -1,
         1,  0, -1,  1,
         1,  1,  0, -1,
         1, -1,  1,  0;
    return s;
}

Eigen::MatrixXi paper_d8_entries() {
    Eigen::MatrixXi s(8, 8);
    s << 0, -1, -1, -1, -1, -1, -1, -1,
         1,  0, -1,  1, -1,  1, -1,  1,
         1,  1,  0, -1, -1, -1,  1,  1,
         1, -1,  1,  0, -1,  1,  1, -1,
         1,  1,  1,  1,  0, -1, -1, -1,
         1, -1,  1, -1,  1,  0, -1,  1,
         1,  1, -1, -1,  1,  1,  0, -1,
         1, -1, -1,  1,  1, -1,  1,  0;
    return s;
}

} // namespace

SignMatrix build_sign_matrix(int m, SignVariant variant) {
    if (m < 1 || m > 6) {
        throw ConfigError("sign matrix supports 1 <= m <= 6, got m=" + std::to_string(m));
    }
    SignMatrix sign;
    sign.m = m;
    sign.variant = variant;
    switch (variant) {
    case SignVariant::doubling:
        sign.entries = doubling_entries(m);
        break;
    case SignVariant::paper_d4:
        if (m != 2) {
            throw ConfigError("paper-d4 sign matrix requires m=2");
        }
        sign.entries = paper_d4_entries();
        break;
    case SignVariant::paper_d8:
        if (m != 3) {
            throw ConfigError("paper-d8 sign matrix requires m=3");
        }
        sign.entries = paper_d8_entries();
        break;
    }
    const SignChecks checks = check_sign_entries(sign.entries);
    if (!checks.ok()) {
        throw InvariantError("constructed sign matrix violates its invariants");
    }
    return sign;
}

SignChecks check_sign_entries(const Eigen::MatrixXi& entries) {
    SignChecks checks;
    const int d = static_cast<int>(entries.rows());
    checks.zero_diagonal = entries.diagonal().isZero();
    checks.antisymmetric = (entries == -entries.transpose());
    const Eigen::MatrixXi gram =
        entries * entries.transpose() - (d - 1) * Eigen::MatrixXi::Identity(d, d);
    checks.gram_defect = gram.cwiseAbs().maxCoeff();
    return checks;
}

std::string sign_to_text(const Eigen::MatrixXi& entries) {
    std::ostringstream out;
    for (Eigen::Index i = 0; i < entries.rows(); ++i) {
        for (Eigen::Index j = 0; j < entries.cols(); ++j) {
            if (j > 0) {
                out << ' ';
            }
            const int v = entries(i, j);
            if (v > 0) {
                out << "+1";
            } else if (v < 0) {
                out << "-1";
            } else {
                out << '0';
            }
        }
        out << '\n';
    }
    return out.str();
}

Eigen::MatrixXi sign_from_text(const std::string& text) {
    std::vector<std::vector<int>> rows;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        std::istringstream fields(line);
        std::vector<int> row;
        std::string tok;
        while (fields >> tok) {
            if (tok == "0") {
                row.push_back(0);
            } else if (tok == "+1" || tok == "1") {
                row.push_back(1);
            } else if (tok == "-1") {
                row.push_back(-1);
            } else {
                throw ConfigError("sign matrix text entries must be 0, +1 or -1");
            }
        }
        if (!row.empty()) {
            rows.push_back(std::move(row));
        }
    }
    const auto d = rows.size();
    Eigen::MatrixXi entries(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        if (rows[i].size() != d) {
            throw ConfigError("sign matrix text is not square");
        }
        for (std::size_t j = 0; j < d; ++j) {
            entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
    }
    return entries;
}

} // namespace qreduce
