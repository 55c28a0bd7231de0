// Acceptance suite: runs every release criterion at its pinned tolerance and
// prints one pass/fail line per criterion. Exits nonzero if any fail.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qreduce/channel.hpp"
#include "qreduce/errors.hpp"
#include "qreduce/oracles.hpp"
#include "qreduce/rng.hpp"
#include "qreduce/search.hpp"

using namespace qreduce;

namespace {

int failures = 0;

void criterion(int number, const std::string& description,
               const std::function<bool(std::string&)>& check) {
    std::string detail;
    bool ok = false;
    try {
        ok = check(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] criterion %2d: %s%s%s\n", ok ? "PASS" : "FAIL", number,
                description.c_str(), detail.empty() ? "" : " -- ", detail.c_str());
    if (!ok) {
        ++failures;
    }
}

SearchConfig make_config(std::vector<std::uint32_t> elements, int n, int m,
                         std::uint32_t target, SignVariant signs, Mode mode) {
    SearchConfig config;
    config.array.elements = std::move(elements);
    config.array.target_b = target;
    config.n_data_bits = n;
    config.m_counter_bits = m;
    config.schedule = mode == Mode::exact_match ? AngleSchedule::exact_match()
                                                : AngleSchedule::default_halving(n);
    config.signs = signs;
    config.mode = mode;
    return config;
}

SearchConfig random_distinct_config(Rng& rng) {
    const int m = 1 + static_cast<int>(rng.next() % 5);       // m <= 5
    const int n = m + static_cast<int>(rng.next() % (8 - m)); // n <= 7, n >= m
    const std::uint32_t limit = 1u << n;
    std::set<std::uint32_t> values;
    while (values.size() < (std::size_t{1} << m)) {
        values.insert(static_cast<std::uint32_t>(rng.next() % limit));
    }
    SearchConfig config;
    config.array.elements.assign(values.begin(), values.end());
    for (std::size_t i = config.array.elements.size(); i > 1; --i) {
        std::swap(config.array.elements[i - 1],
                  config.array.elements[static_cast<std::size_t>(rng.next() % i)]);
    }
    config.array.target_b = static_cast<std::uint32_t>(rng.next() % limit);
    config.n_data_bits = n;
    config.m_counter_bits = m;
    config.schedule = AngleSchedule::default_halving(n);
    config.signs = SignVariant::doubling;
    config.mode = Mode::nearest;
    return config;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

int main() {
    criterion(1, "operator structure: ortho/group/skew defects < 1e-12, m=1..6, 100 angles",
              [](std::string& detail) {
        double worst = 0.0;
        Rng rng(1);
        std::vector<std::pair<int, SignVariant>> variants;
        for (int m = 1; m <= 6; ++m) {
            variants.emplace_back(m, SignVariant::doubling);
        }
        variants.emplace_back(2, SignVariant::paper_d4);
        variants.emplace_back(3, SignVariant::paper_d8);
        for (const auto& [m, variant] : variants) {
            const SignMatrix sign = build_sign_matrix(m, variant);
            for (int trial = 0; trial < 100; ++trial) {
                const RotationOperator op = build_rotation(sign, rng.uniform01() * M_PI);
                const OperatorDiagnostics diag = validate_operator(op, sign, 4, rng.next());
                worst = std::max({worst, diag.orthogonality_defect, diag.group_defect,
                                  diag.skew_square_defect,
                                  static_cast<double>(diag.sign_gram_defect)});
            }
        }
        bool rejects = false;
        try {
            build_rotation(build_sign_matrix(2, SignVariant::doubling), 3.2);
        } catch (const ConfigError&) {
            rejects = true;
        }
        detail = "worst defect " + std::to_string(worst);
        return worst < 1e-12 && rejects;
    });

    criterion(2, "fixture fidelity: pi rotation hits 0 and +-sqrt(7)/7 to 1e-15; 4x4 pattern exact",
              [](std::string& detail) {
        const SignMatrix d8 = build_sign_matrix(3, SignVariant::paper_d8);
        const RotationOperator op = build_rotation(d8, M_PI);
        const double root7_over_7 = std::sqrt(7.0) / 7.0;
        double worst = 0.0;
        for (int i = 0; i < 8; ++i) {
            for (int j = 0; j < 8; ++j) {
                worst = std::max(worst,
                                 std::abs(op.matrix(i, j) - d8.entries(i, j) * root7_over_7));
            }
        }
        const SignMatrix d4 = build_sign_matrix(2, SignVariant::paper_d4);
        const int expected[4][4] = {
            {0, -1, -1, -1}, {1, 0, -1, 1}, {1, 1, 0, -1}, {1, -1, 1, 0}};
        bool pattern = true;
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                pattern = pattern && d4.entries(i, j) == expected[i][j];
            }
        }
        // symbolic form: diagonal cos(phi/2), off-diagonals signed sin(phi/2)/sqrt(3)
        const double phi = 1.1;
        const RotationOperator a4 = build_rotation(d4, phi);
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                const double expected_entry =
                    i == j ? std::cos(phi / 2)
                           : d4.entries(i, j) * std::sin(phi / 2) / std::sqrt(3.0);
                pattern = pattern && std::abs(a4.matrix(i, j) - expected_entry) < 1e-15;
            }
        }
        detail = "worst sqrt(7)/7 defect " + std::to_string(worst);
        return worst < 1e-15 && pattern;
    });

    criterion(3, "single-call oracle equivalence on 500 random arrays + worked 4-element case",
              [](std::string& detail) {
        Rng rng(3);
        double worst_tv = 0.0;
        for (int trial = 0; trial < 500; ++trial) {
            const SearchConfig config = random_distinct_config(rng);
            const std::vector<double> engine = single_call_search(config).counter_probs;
            const std::vector<double> oracle = closed_form_single_call(
                config.array, config.n_data_bits, config.schedule);
            double tv = 0.0;
            for (std::size_t j = 0; j < engine.size(); ++j) {
                tv += 0.5 * std::abs(engine[j] - oracle[j]);
            }
            worst_tv = std::max(worst_tv, tv);
        }

        const SearchConfig fig4 =
            make_config({15, 14, 6, 0}, 4, 2, 0, SignVariant::paper_d4, Mode::nearest);
        const SearchResult result = single_call_search(fig4);
        const double expected[4] = {0.108285, 0.117769, 0.335530, 0.438416};
        bool values_ok = true;
        for (int j = 0; j < 4; ++j) {
            values_ok = values_ok &&
                        std::abs(result.counter_probs[static_cast<std::size_t>(j)] -
                                 expected[j]) < 1e-6;
        }
        const Histogram hist =
            sample_histogram(result.state, Register::counter, 10000, 2027);
        const ComparisonReport report = compare_histogram(hist, result.counter_probs, 4.0);
        detail = "worst tv " + std::to_string(worst_tv) + ", histogram z_max at bin " +
                 std::to_string(report.worst_bin);
        return worst_tv < 1e-12 && values_ok && report.pass;
    });

    criterion(4, "2x cap over 500 arrays; near-cap M=4 constructions reach it",
              [](std::string& detail) {
        Rng rng(4);
        double worst_excess = -1.0;
        for (int trial = 0; trial < 500; ++trial) {
            const SearchConfig config = random_distinct_config(rng);
            const std::vector<double> probs = single_call_search(config).counter_probs;
            const double cap = 2.0 / static_cast<double>(probs.size());
            worst_excess = std::max(
                worst_excess, *std::max_element(probs.begin(), probs.end()) - cap);
        }
        // [0,15,14,13] under the default schedule lands at 0.489006; pushing
        // the mismatched angles closer to pi ([0,31,30,29] over 5 bits)
        // crosses 0.49 while staying at or below the cap
        const std::vector<double> near4 =
            single_call_search(
                make_config({0, 15, 14, 13}, 4, 2, 0, SignVariant::paper_d4, Mode::nearest))
                .counter_probs;
        const std::vector<double> near5 =
            single_call_search(
                make_config({0, 31, 30, 29}, 5, 2, 0, SignVariant::doubling, Mode::nearest))
                .counter_probs;
        detail = "max excess over 2/M " + std::to_string(worst_excess) + "; P(match) " +
                 std::to_string(near4[0]) + " and " + std::to_string(near5[0]);
        return worst_excess <= 1e-12 && std::abs(near4[0] - 0.489006) < 1e-6 &&
               near5[0] >= 0.49 && near5[0] <= 0.5 + 1e-12;
    });

    criterion(5, "duplicate anomaly: [15,15,15,0] single pass = [.2762,.0024,.3888,.3325] +-1e-4",
              [](std::string& detail) {
        const SearchResult result = single_call_search(
            make_config({15, 15, 15, 0}, 4, 2, 0, SignVariant::paper_d4, Mode::nearest));
        const double expected[4] = {0.2762, 0.0024, 0.3888, 0.3325};
        double worst = 0.0;
        for (int j = 0; j < 4; ++j) {
            worst = std::max(worst, std::abs(result.counter_probs[static_cast<std::size_t>(j)] -
                                             expected[j]));
        }
        const bool mode_not_zero_element =
            std::max_element(result.counter_probs.begin(), result.counter_probs.end()) -
                result.counter_probs.begin() == 2;
        detail = "worst bin error " + std::to_string(worst);
        return worst < 1e-4 && mode_not_zero_element;
    });

    criterion(6, "decoherence recovery: second P(zero) = 2/M +-0.05 at 100k shots, above first",
              [](std::string& detail) {
        std::ostringstream notes;
        bool ok = true;
        for (const auto& [m, filler, n] :
             {std::tuple{4, 127u, 7}, std::tuple{5, 15u, 4}}) {
            const std::size_t count = std::size_t{1} << m;
            std::vector<std::uint32_t> elements(count, filler);
            elements[7] = 0;
            SearchConfig config =
                make_config(elements, n, m, 0, SignVariant::doubling, Mode::nearest);
            config.cycles = 1;
            const DecoherenceResult result = decoherence_protocol(config, 100000, 66);
            const double second = result.second.frequencies()[7];
            const double first = result.first.frequencies()[7];
            const double target = 2.0 / static_cast<double>(count);
            notes << "M=" << count << ": " << first << " -> " << second << " (2/M=" << target
                  << ") ";
            ok = ok && std::abs(second - target) <= 0.05 && second > first;
        }
        detail = notes.str();
        return ok;
    });

    criterion(7, "null-element 3x: P(match) within 20% of 3/M and > 2.2/M after 1 cycle",
              [](std::string& detail) {
        std::ostringstream notes;
        bool ok = true;
        for (const auto& [m, signs] : {std::pair{3, SignVariant::paper_d8},
                                       std::pair{4, SignVariant::doubling}}) {
            const std::size_t count = std::size_t{1} << m;
            std::vector<std::uint32_t> elements(count, 15);
            elements[3] = 0;
            SearchConfig config = make_config(elements, 4, m, 0, signs, Mode::exact_match);
            config.cycles = 1;
            const SearchResult result = null_element_procedure(config);
            const double p = result.counter_probs[3];
            const double target = 3.0 / static_cast<double>(count);
            notes << "M=" << count << ": P(match)=" << p << " (3/M=" << target << ") ";
            ok = ok && std::abs(p - target) <= 0.2 * target &&
                 p > 2.2 / static_cast<double>(count);
        }
        detail = notes.str();
        return ok;
    });

    criterion(8, "filter exactness: P(7)=0 analytically, 0 counts in 100k shots, others 1/7",
              [](std::string& detail) {
        SearchConfig config =
            make_config({6, 0, 7, 9, 11, 2, 13, 15}, 4, 3, 0, SignVariant::paper_d8,
                        Mode::filter);
        config.exclude = 15;
        const FilterResult result = filter_exclude(config);
        bool ok = std::abs(result.counter_probs[7]) < 1e-12;
        for (int j = 0; j < 7; ++j) {
            ok = ok && std::abs(result.counter_probs[static_cast<std::size_t>(j)] -
                                1.0 / 7.0) < 1e-12;
        }
        const Histogram hist =
            sample_histogram(result.state, Register::counter, 100000, 15);
        detail = "P(7) = " + std::to_string(result.counter_probs[7]) + ", counts[7] = " +
                 std::to_string(hist.counts[7]);
        return ok && hist.counts[7] == 0;
    });

    criterion(9, "channel engine: completeness, markov agreement, closed-form hits, crossover",
              [](std::string& detail) {
        Rng rng(9);
        double worst_completeness = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            const int m = 1 + static_cast<int>(rng.next() % 5);
            const int n = m + static_cast<int>(rng.next() % 3);
            ArraySpec array;
            const std::uint32_t limit = 1u << n;
            for (std::size_t i = 0; i < (std::size_t{1} << m); ++i) {
                array.elements.push_back(static_cast<std::uint32_t>(rng.next() % limit));
            }
            array.target_b = static_cast<std::uint32_t>(rng.next() % limit);
            const ReloadChannel channel =
                build_reload_channel(array, n, AngleSchedule::default_halving(n),
                                     build_sign_matrix(m, SignVariant::doubling));
            worst_completeness = std::max(worst_completeness, channel.completeness_defect());
        }

        // channel vs markov for distinct arrays, t <= 16, and the t=1 single call
        double worst_markov = 0.0;
        for (int trial = 0; trial < 20; ++trial) {
            const SearchConfig config = random_distinct_config(rng);
            const SignMatrix sign =
                build_sign_matrix(config.m_counter_bits, SignVariant::doubling);
            const Eigen::MatrixXd t =
                markov_transition(config.array, config.n_data_bits, config.schedule);
            Eigen::VectorXd p = Eigen::VectorXd::Constant(
                static_cast<Eigen::Index>(config.array.size()),
                1.0 / static_cast<double>(config.array.size()));
            const std::vector<Eigen::VectorXd> diagonals =
                iterate(config.array, config.n_data_bits, {config.schedule}, sign, 16);
            for (int step = 0; step < 16; ++step) {
                p = t * p;
                worst_markov = std::max(
                    worst_markov,
                    (p - diagonals[static_cast<std::size_t>(step)]).cwiseAbs().maxCoeff());
            }
            const std::vector<double> single = single_call_search(config).counter_probs;
            for (std::size_t j = 0; j < single.size(); ++j) {
                worst_markov = std::max(worst_markov,
                                        std::abs(single[j] - diagonals[0][static_cast<Eigen::Index>(j)]));
            }
        }

        // exact-match iteration on M=8 (distinct fillers, one zero at index
        // 3): pinned closed-form values, monotone, and the crossover shape
        // against the brute-force line t/M: the quantum curve starts at 2/M
        // (above 1/M), is overtaken by t/M from t=5 (M=8) / t=7 (M=16), and
        // never reaches brute force's certainty
        ArraySpec units8;
        units8.target_b = 0;
        units8.elements = {8, 1, 2, 0, 4, 5, 6, 7};
        const std::vector<Eigen::VectorXd> curve8 =
            iterate(units8, 4, {AngleSchedule::exact_match()},
                    build_sign_matrix(3, SignVariant::doubling), 16);
        const double p8_closed_form =
            1.0 - (7.0 / 8.0) * std::pow(6.0 / 7.0, 8); // p' = p + (1-p)/(M-1)
        const bool hits = std::abs(curve8[0][3] - 0.25) < 1e-9 &&
                          std::abs(curve8[1][3] - 5.0 / 14.0) < 1e-9 &&
                          std::abs(curve8[1][3] - 0.357143) < 1e-6 &&
                          std::abs(curve8[7][3] - p8_closed_form) < 1e-9 &&
                          std::abs(curve8[7][3] - 0.745062) < 1e-6;
        bool monotone = true;
        double previous = 0.0;
        for (const auto& diag : curve8) {
            monotone = monotone && diag[3] >= previous - 1e-12;
            previous = diag[3];
        }
        bool crossover = curve8[7][3] < brute_force_curve(8, 8);
        for (int t = 5; t <= 8; ++t) {
            crossover = crossover &&
                        curve8[static_cast<std::size_t>(t - 1)][3] < brute_force_curve(8, t);
        }
        ArraySpec units16;
        units16.target_b = 0;
        for (std::uint32_t k = 0; k < 16; ++k) {
            units16.elements.push_back(k == 3 ? 0 : (k == 0 ? 16 : k));
        }
        const std::vector<Eigen::VectorXd> curve16 =
            iterate(units16, 5, {AngleSchedule::exact_match()},
                    build_sign_matrix(4, SignVariant::doubling), 16);
        for (int t = 7; t <= 16; ++t) {
            crossover = crossover &&
                        curve16[static_cast<std::size_t>(t - 1)][3] < brute_force_curve(16, t);
        }

        detail = "completeness " + std::to_string(worst_completeness) + ", markov " +
                 std::to_string(worst_markov) + ", p(1,2,8) = " +
                 std::to_string(curve8[0][3]) + "/" + std::to_string(curve8[1][3]) + "/" +
                 std::to_string(curve8[7][3]);
        return worst_completeness < 1e-12 && worst_markov < 1e-12 && hits && monotone &&
               crossover;
    });

    criterion(10, "equalizer: highest-bit-pi splits 11/56 vs 3/56; 3-step sweep sharpens it",
              [](std::string& detail) {
        ArraySpec array{{63, 44, 37, 32, 21, 13, 9, 2}, 0};
        const SignMatrix sign = build_sign_matrix(3, SignVariant::doubling);
        const AngleSchedule highest = AngleSchedule::highest_bit_pi(6);
        const std::vector<Eigen::VectorXd> left = iterate(array, 6, {highest}, sign, 1);
        double worst = 0.0;
        for (int j = 0; j < 8; ++j) {
            const double expected =
                array.elements[static_cast<std::size_t>(j)] >= 32 ? 3.0 / 56.0 : 11.0 / 56.0;
            worst = std::max(worst, std::abs(left[0][j] - expected));
        }
        const std::vector<Eigen::VectorXd> right = iterate(
            array, 6, {AngleSchedule::default_halving(6), highest, highest}, sign, 3);
        const auto ratio = [&](const Eigen::VectorXd& p) {
            double low = 0.0;
            double high = 0.0;
            for (int j = 0; j < 8; ++j) {
                (array.elements[static_cast<std::size_t>(j)] >= 32 ? high : low) += p[j];
            }
            return low / high;
        };
        detail = "split error " + std::to_string(worst) + ", ratio " +
                 std::to_string(ratio(left[0])) + " -> " + std::to_string(ratio(right[2]));
        return worst < 1e-12 && ratio(right[2]) > ratio(left[0]);
    });

    criterion(11, "determinism: repeated figure runs with one seed are byte-identical",
              [](std::string& detail) {
        namespace fs = std::filesystem;
        const fs::path dir = fs::temp_directory_path() / "qreduce_acceptance";
        fs::create_directories(dir);
        const std::string cli = QREDUCE_CLI_PATH;
        bool ok = true;
        for (const std::string id : {"fig4", "fig12", "fig15"}) {
            const fs::path a = dir / (id + "_a.csv");
            const fs::path b = dir / (id + "_b.csv");
            const std::string base = cli + " figure " + id + " --seed 11 --out ";
            if (std::system((base + a.string() + " 2>/dev/null").c_str()) != 0 ||
                std::system((base + b.string() + " 2>/dev/null").c_str()) != 0) {
                detail = id + " run failed";
                return false;
            }
            const std::string bytes_a = read_file(a);
            ok = ok && !bytes_a.empty() && bytes_a == read_file(b);
        }
        detail = "fig4, fig12, fig15 compared";
        return ok;
    });

    std::printf("%d of 11 criteria passed\n", 11 - failures);
    return failures == 0 ? 0 : 1;
}
