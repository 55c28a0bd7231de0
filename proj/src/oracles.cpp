#include "qreduce/oracles.hpp"

#include <cmath>
#include <iostream>
#include <limits>

#include "qreduce/errors.hpp"

namespace qreduce {

std::vector<double> closed_form_single_call(const ArraySpec& array, int n_bits,
                                            const AngleSchedule& schedule) {
    RegisterLayout layout;
    layout.n_data_bits = n_bits;
    layout.m_counter_bits = 1;
    while (layout.counter_dim() < array.size()) {
        ++layout.m_counter_bits;
    }
    array.validate(layout);
    if (!array.all_distinct()) {
        // duplicates only interfere when they are rotated; zero-angle
        // duplicates (elements equal to the target) keep the formula exact
        for (const std::uint32_t v : array.elements) {
            if (array.count_equal(v) > 1 && total_angle(v, array.target_b, schedule) != 0.0) {
                throw ConfigError("closed-form oracle requires distinct elements");
            }
        }
    }

    const std::size_t m_elements = array.size();
    std::vector<double> cos2(m_elements), sin2(m_elements);
    double sin2_total = 0.0;
    for (std::size_t k = 0; k < m_elements; ++k) {
        const double phi = total_angle(array.elements[k], array.target_b, schedule);
        const double c = std::cos(phi / 2.0);
        cos2[k] = c * c;
        sin2[k] = 1.0 - cos2[k];
        sin2_total += sin2[k];
    }
    std::vector<double> probs(m_elements);
    const double m = static_cast<double>(m_elements);
    for (std::size_t j = 0; j < m_elements; ++j) {
        probs[j] = (cos2[j] + (sin2_total - sin2[j]) / (m - 1.0)) / m;
    }
    return probs;
}

double brute_force_curve(int m_elements, int t) {
    if (m_elements < 1 || t < 1) {
        throw ConfigError("brute-force curve needs M >= 1 and t >= 1");
    }
    if (t > m_elements) {
        std::cerr << "warning: brute-force call count " << t << " exceeds M=" << m_elements
                  << ", clamping to probability 1\n";
        return 1.0;
    }
    return static_cast<double>(t) / static_cast<double>(m_elements);
}

ComparisonReport compare_histogram(const Histogram& hist, const std::vector<double>& expected,
                                   double sigma) {
    if (hist.counts.size() != expected.size()) {
        throw ConfigError("histogram and expected distribution sizes differ");
    }
    if (hist.shots < 100) {
        throw ConfigError("histogram comparison needs at least 100 shots");
    }
    ComparisonReport report;
    report.tolerance_policy = "bin-wise |z| <= " + std::to_string(sigma) + " under multinomial variance";
    report.per_bin_z.resize(expected.size(), 0.0);

    const double shots = static_cast<double>(hist.shots);
    double worst = -1.0;
    bool all_ok = true;
    for (std::size_t j = 0; j < expected.size(); ++j) {
        const double p = expected[j];
        const double count = static_cast<double>(hist.counts[j]);
        double z = 0.0;
        if (p <= 0.0 || p >= 1.0) {
            // impossible or certain events admit no variance; any deviation fails
            const bool consistent = (p <= 0.0) ? (hist.counts[j] == 0) : (hist.counts[j] == hist.shots);
            z = consistent ? 0.0 : std::numeric_limits<double>::infinity();
        } else {
            z = (count - shots * p) / std::sqrt(shots * p * (1.0 - p));
        }
        report.per_bin_z[j] = z;
        const double magnitude = std::abs(z);
        if (magnitude > worst) {
            worst = magnitude;
            report.worst_bin = static_cast<int>(j);
        }
        if (!(magnitude <= sigma)) {
            all_ok = false;
        }
        report.tv_distance += 0.5 * std::abs(count / shots - p);
    }
    report.pass = all_ok;
    return report;
}

nlohmann::json ComparisonReport::to_json() const {
    return nlohmann::json{
        {"tv_distance", tv_distance},
        {"per_bin_z", per_bin_z},
        {"worst_bin", worst_bin},
        {"pass", pass},
        {"tolerance_policy", tolerance_policy},
    };
}

} // namespace qreduce
