#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qreduce/angles.hpp"
#include "qreduce/histogram.hpp"
#include "qreduce/layout.hpp"

namespace qreduce {

// Closed-form single-call distribution for distinct-element arrays:
//   P(j) = (1/M) * [cos^2(phi_j/2) + sum_{k != j} sin^2(phi_k/2)/(M-1)]
// with phi_k the total rotation angle of element k against the target.
// Independent of the sign pattern, because distinct branches cannot
// interfere. Throws ConfigError on duplicate elements.
std::vector<double> closed_form_single_call(const ArraySpec& array, int n_bits,
                                            const AngleSchedule& schedule);

// Classical baseline: sampling distinct elements uniformly without
// replacement succeeds with probability t/M after t calls. t > M clamps to
// 1 with a warning on stderr.
double brute_force_curve(int m_elements, int t);

struct ComparisonReport {
    double tv_distance = 0.0;
    std::vector<double> per_bin_z;
    int worst_bin = -1;
    bool pass = false;
    std::string tolerance_policy;

    nlohmann::json to_json() const;
};

// Bin-wise z-scores of a sampled histogram against an expected
// distribution under multinomial variance. A zero-probability bin with
// nonzero counts fails regardless of sigma.
ComparisonReport compare_histogram(const Histogram& hist, const std::vector<double>& expected,
                                   double sigma);

} // namespace qreduce
