// qreduce: experiment runner for the amplitude-reduction search/filter
// simulator. Subcommands mirror the library procedures; every output file
// embeds the resolved configuration so runs are self-describing and
// byte-reproducible per (config, seed, version).

#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qreduce/channel.hpp"
#include "qreduce/errors.hpp"
#include "qreduce/oracles.hpp"
#include "qreduce/search.hpp"
#include "qreduce/version.hpp"

using nlohmann::json;
using namespace qreduce;

namespace {

struct ExperimentConfig {
    std::string mode;
    std::vector<std::uint32_t> array;
    int bits = 0;               // data bits n; 0 = infer from values
    int counter_bits = 0;       // m; 0 = infer from array size
    std::uint32_t target = 0;
    std::optional<std::uint32_t> exclude;
    std::string schedule = "default"; // preset name or comma list of pi-multiples
    std::string signs = "auto";       // auto | paper | doubling
    int iterations = 1;
    int cycles = 0;
    std::uint64_t shots = 0;          // 0 = exact output only
    std::optional<std::uint64_t> seed;
    std::string out = "-";
    std::string format = "csv";

    json to_json() const {
        json j{{"mode", mode},          {"array", array},
               {"bits", bits},          {"m", counter_bits},
               {"target", target},      {"schedule", schedule},
               {"signs", signs},        {"iterations", iterations},
               {"cycles", cycles},      {"shots", shots},
               {"format", format},      {"version", QREDUCE_VERSION}};
        j["exclude"] = exclude ? json(*exclude) : json(nullptr);
        j["seed"] = seed ? json(*seed) : json(nullptr);
        return j;
    }
};

void merge_config_file(ExperimentConfig& config, const std::string& path) {
    std::ifstream in(path);
    if (!in.good()) {
        throw ConfigError("cannot read config file " + path);
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config file is not valid JSON: ") + e.what());
    }
    if (j.contains("mode") && !config.mode.empty() && j["mode"] != config.mode) {
        throw ConfigError("config file mode '" + j["mode"].get<std::string>() +
                          "' does not match the subcommand");
    }
    if (j.contains("array")) config.array = j["array"].get<std::vector<std::uint32_t>>();
    if (j.contains("bits")) config.bits = j["bits"].get<int>();
    if (j.contains("m")) config.counter_bits = j["m"].get<int>();
    if (j.contains("target")) config.target = j["target"].get<std::uint32_t>();
    if (j.contains("exclude") && !j["exclude"].is_null())
        config.exclude = j["exclude"].get<std::uint32_t>();
    if (j.contains("schedule")) config.schedule = j["schedule"].get<std::string>();
    if (j.contains("signs")) config.signs = j["signs"].get<std::string>();
    if (j.contains("iterations")) config.iterations = j["iterations"].get<int>();
    if (j.contains("cycles")) config.cycles = j["cycles"].get<int>();
    if (j.contains("shots")) config.shots = j["shots"].get<std::uint64_t>();
    if (j.contains("seed") && !j["seed"].is_null())
        config.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("out")) config.out = j["out"].get<std::string>();
    if (j.contains("format")) config.format = j["format"].get<std::string>();
}

int infer_bits(const std::vector<std::uint32_t>& values, std::uint32_t target) {
    std::uint32_t top = target;
    for (const std::uint32_t v : values) {
        top = std::max(top, v);
    }
    int bits = 1;
    while ((std::uint32_t{1} << bits) <= top) {
        ++bits;
    }
    return bits;
}

int infer_counter_bits(std::size_t count) {
    int m = 1;
    while ((std::size_t{1} << m) < count) {
        ++m;
    }
    if ((std::size_t{1} << m) != count) {
        throw ConfigError("array length must be a power of two, got " + std::to_string(count));
    }
    return m;
}

SignVariant resolve_signs(const std::string& name, int m) {
    if (name == "doubling") {
        return SignVariant::doubling;
    }
    if (name == "paper") {
        if (m == 2) return SignVariant::paper_d4;
        if (m == 3) return SignVariant::paper_d8;
        throw ConfigError("the published sign patterns cover m=2 and m=3 only");
    }
    if (name == "auto") {
        if (m == 2) return SignVariant::paper_d4;
        if (m == 3) return SignVariant::paper_d8;
        return SignVariant::doubling;
    }
    throw ConfigError("signs must be auto, paper or doubling");
}

AngleSchedule resolve_schedule(const std::string& text, int n_bits) {
    if (text.find(',') == std::string::npos && !text.empty() &&
        (std::isalpha(static_cast<unsigned char>(text[0])) != 0)) {
        return AngleSchedule::preset(text, n_bits);
    }
    // comma list of pi-multiples, fractions allowed: "1/2,1/4,0,0"
    std::vector<PiFraction> multiples;
    std::istringstream in(text);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        const auto slash = tok.find('/');
        try {
            if (slash == std::string::npos) {
                const double v = std::stod(tok);
                // accept small decimals exactly representable over 2^20
                const std::int64_t scaled = static_cast<std::int64_t>(v * (1 << 20));
                multiples.emplace_back(scaled, std::int64_t{1} << 20);
            } else {
                multiples.emplace_back(std::stoll(tok.substr(0, slash)),
                                       std::stoll(tok.substr(slash + 1)));
            }
        } catch (const std::exception&) {
            throw ConfigError("cannot parse schedule entry '" + tok + "'");
        }
    }
    if (static_cast<int>(multiples.size()) != n_bits) {
        throw ConfigError("schedule needs one pi-multiple per data bit");
    }
    return AngleSchedule::from_pi_multiples(multiples);
}

SearchConfig to_search_config(const ExperimentConfig& experiment, Mode mode) {
    if (experiment.array.empty()) {
        throw ConfigError("an array is required (--array or config file)");
    }
    SearchConfig config;
    config.array.elements = experiment.array;
    config.array.target_b = experiment.target;
    config.m_counter_bits = experiment.counter_bits > 0
                                ? experiment.counter_bits
                                : infer_counter_bits(experiment.array.size());
    config.n_data_bits = experiment.bits > 0
                             ? experiment.bits
                             : infer_bits(experiment.array, experiment.target);
    config.schedule = resolve_schedule(experiment.schedule, config.n_data_bits);
    config.signs = resolve_signs(experiment.signs, config.m_counter_bits);
    config.mode = mode;
    config.exclude = experiment.exclude;
    config.cycles = experiment.cycles;
    config.validate();
    return config;
}

std::string counter_bits_string(std::uint32_t index, int m) {
    std::string bits(static_cast<std::size_t>(m), '0');
    for (int b = 0; b < m; ++b) {
        if ((index >> b) & 1u) {
            bits[static_cast<std::size_t>(m - 1 - b)] = '1'; // MSB first
        }
    }
    return bits;
}

std::string format_double(double v) {
    std::ostringstream out;
    out.precision(12);
    out << v;
    return out.str();
}

class OutputFile {
public:
    explicit OutputFile(const std::string& path) : path_(path) {
        if (path_ != "-") {
            file_.open(path_, std::ios::binary | std::ios::trunc);
            if (!file_.good()) {
                throw ConfigError("cannot open output file " + path_);
            }
        }
    }
    std::ostream& stream() { return path_ == "-" ? std::cout : file_; }

private:
    std::string path_;
    std::ofstream file_;
};

void require_seed(const ExperimentConfig& experiment) {
    if (experiment.shots > 0 && !experiment.seed) {
        throw ConfigError("sampled runs require --seed");
    }
}

// Histogram table: one row per counter index. Optional comparison against
// an expected distribution rides along in JSON.
void write_histogram(const ExperimentConfig& experiment, const std::string& label, int m,
                     const std::vector<double>& exact, const Histogram* hist,
                     const ComparisonReport* comparison, std::ostream& out) {
    if (experiment.format == "json") {
        json rows = json::array();
        for (std::size_t j = 0; j < exact.size(); ++j) {
            json row{{"counter_index", j},
                     {"counter_bits", counter_bits_string(static_cast<std::uint32_t>(j), m)},
                     {"exact_probability", exact[j]}};
            if (hist != nullptr) {
                row["count"] = hist->counts[j];
                row["frequency"] = static_cast<double>(hist->counts[j]) /
                                   static_cast<double>(hist->shots);
            }
            rows.push_back(std::move(row));
        }
        json doc{{"version", QREDUCE_VERSION},
                 {"config", experiment.to_json()},
                 {"label", label},
                 {"rows", rows}};
        if (comparison != nullptr) {
            doc["comparison"] = comparison->to_json();
        }
        out << doc.dump(2) << '\n';
        return;
    }
    out << "# version = " << QREDUCE_VERSION << '\n';
    out << "# config = " << experiment.to_json().dump() << '\n';
    if (!label.empty()) {
        out << "# dataset = " << label << '\n';
    }
    out << "counter_index,counter_bits,count,frequency,exact_probability\n";
    for (std::size_t j = 0; j < exact.size(); ++j) {
        out << j << ',' << counter_bits_string(static_cast<std::uint32_t>(j), m) << ',';
        if (hist != nullptr) {
            out << hist->counts[j] << ','
                << format_double(static_cast<double>(hist->counts[j]) /
                                 static_cast<double>(hist->shots));
        } else {
            out << ','; // exact-only run
        }
        out << ',' << format_double(exact[j]) << '\n';
    }
    if (comparison != nullptr) {
        out << "# comparison = " << comparison->to_json().dump() << '\n';
    }
}

int run_search(const ExperimentConfig& experiment) {
    require_seed(experiment);
    const SearchConfig config = to_search_config(experiment, Mode::nearest);
    const SearchResult result = single_call_search(config);

    std::optional<Histogram> hist;
    std::optional<ComparisonReport> comparison;
    if (experiment.shots > 0) {
        hist = sample_histogram(result.state, Register::counter, experiment.shots,
                                *experiment.seed);
        if (config.array.all_distinct()) {
            comparison = compare_histogram(*hist, result.counter_probs, 4.0);
        }
    }
    OutputFile output(experiment.out);
    write_histogram(experiment, "", config.m_counter_bits, result.counter_probs,
                    hist ? &*hist : nullptr, comparison ? &*comparison : nullptr,
                    output.stream());
    return 0;
}

int run_filter(const ExperimentConfig& experiment) {
    require_seed(experiment);
    const SearchConfig config = to_search_config(experiment, Mode::filter);
    const FilterResult result = filter_exclude(config);
    if (result.absent_warning) {
        std::cerr << "warning: exclude value is absent from the array; distribution unchanged\n";
    }
    if (result.duplicate_flag) {
        std::cerr << "warning: " << result.match_count
                  << " elements match the exclude value; their bins may interfere\n";
    }
    std::optional<Histogram> hist;
    if (experiment.shots > 0) {
        hist = sample_histogram(result.state, Register::counter, experiment.shots,
                                *experiment.seed);
    }
    OutputFile output(experiment.out);
    write_histogram(experiment, "", config.m_counter_bits, result.counter_probs,
                    hist ? &*hist : nullptr, nullptr, output.stream());
    return 0;
}

int run_null_element(const ExperimentConfig& experiment) {
    require_seed(experiment);
    ExperimentConfig exp = experiment;
    if (exp.schedule == "default") {
        exp.schedule = "exact-match";
    }
    const SearchConfig config = to_search_config(exp, Mode::exact_match);
    const SearchResult result = null_element_procedure(config);
    std::optional<Histogram> hist;
    if (exp.shots > 0) {
        hist = sample_histogram(result.state, Register::counter, exp.shots, *exp.seed);
    }
    OutputFile output(exp.out);
    write_histogram(exp, "", config.m_counter_bits, result.counter_probs,
                    hist ? &*hist : nullptr, nullptr, output.stream());
    return 0;
}

void write_decoherence(const ExperimentConfig& experiment, const std::string& label, int m,
                       const DecoherenceResult& result, std::ostream& out, bool header) {
    if (experiment.format == "json") {
        return; // assembled by the caller
    }
    if (header) {
        out << "# version = " << QREDUCE_VERSION << '\n';
        out << "# config = " << experiment.to_json().dump() << '\n';
        out << "dataset,counter_index,counter_bits,first_count,first_frequency,first_exact,"
               "second_count,second_frequency,second_exact\n";
    }
    const std::size_t bins = result.first.counts.size();
    for (std::size_t j = 0; j < bins; ++j) {
        out << label << ',' << j << ','
            << counter_bits_string(static_cast<std::uint32_t>(j), m) << ','
            << result.first.counts[j] << ','
            << format_double(result.first.frequencies()[j]) << ','
            << format_double((*result.first.exact_probs)[j]) << ','
            << result.second.counts[j] << ','
            << format_double(result.second.frequencies()[j]) << ',';
        if (result.second.exact_probs) {
            out << format_double((*result.second.exact_probs)[j]);
        }
        out << '\n';
    }
}

json decoherence_json(const std::string& label, int m, const DecoherenceResult& result) {
    json rows = json::array();
    const std::size_t bins = result.first.counts.size();
    for (std::size_t j = 0; j < bins; ++j) {
        json row{{"counter_index", j},
                 {"counter_bits", counter_bits_string(static_cast<std::uint32_t>(j), m)},
                 {"first_count", result.first.counts[j]},
                 {"first_exact", (*result.first.exact_probs)[j]},
                 {"second_count", result.second.counts[j]}};
        if (result.second.exact_probs) {
            row["second_exact"] = (*result.second.exact_probs)[j];
        }
        rows.push_back(std::move(row));
    }
    return json{{"label", label}, {"rows", rows}};
}

int run_decoherence(const ExperimentConfig& experiment) {
    if (experiment.shots == 0) {
        throw ConfigError("the decoherence protocol is sampled; pass --shots");
    }
    require_seed(experiment);
    ExperimentConfig exp = experiment;
    if (exp.cycles == 0) {
        exp.cycles = 1;
    }
    const SearchConfig config = to_search_config(exp, Mode::nearest);
    const DecoherenceResult result = decoherence_protocol(config, exp.shots, *exp.seed);
    OutputFile output(exp.out);
    if (exp.format == "json") {
        json doc{{"version", QREDUCE_VERSION},
                 {"config", exp.to_json()},
                 {"datasets", json::array({decoherence_json("run", config.m_counter_bits,
                                                            result)})}};
        output.stream() << doc.dump(2) << '\n';
    } else {
        write_decoherence(exp, "run", config.m_counter_bits, result, output.stream(), true);
    }
    return 0;
}

int run_iterate(const ExperimentConfig& experiment) {
    ExperimentConfig exp = experiment;
    if (exp.array.empty()) {
        // canonical single-zero array with distinct fillers and the zero at
        // index 3 (identical fillers would stall the reload chain)
        const int m = exp.counter_bits > 0 ? exp.counter_bits : 3;
        const std::size_t count = std::size_t{1} << m;
        for (std::uint32_t k = 0; k < count; ++k) {
            exp.array.push_back(k == 3 ? 0
                                       : (k == 0 ? static_cast<std::uint32_t>(count) : k));
        }
        if (count < 4) {
            exp.array.back() = 0;
        }
        exp.counter_bits = m;
    }
    const SearchConfig base = to_search_config(exp, Mode::nearest);
    const SignMatrix sign = build_sign_matrix(base.m_counter_bits, base.signs);
    const std::vector<Eigen::VectorXd> diagonals =
        iterate(base.array, base.n_data_bits, {base.schedule}, sign, exp.iterations);

    // target bin: the element equal to B when present, else the nearest one
    int target_index = 0;
    double best_angle = 1e9;
    for (std::size_t k = 0; k < base.array.size(); ++k) {
        const double phi = total_angle(base.array.elements[k], base.array.target_b,
                                       base.schedule);
        if (phi < best_angle) {
            best_angle = phi;
            target_index = static_cast<int>(k);
        }
    }

    OutputFile output(exp.out);
    std::ostream& out = output.stream();
    if (exp.format == "json") {
        json iterations = json::array();
        for (std::size_t t = 0; t < diagonals.size(); ++t) {
            const auto& diag = diagonals[t];
            json probs = json::array();
            for (Eigen::Index j = 0; j < diag.size(); ++j) {
                probs.push_back(diag[j]);
            }
            iterations.push_back(
                json{{"iteration", t + 1},
                     {"probabilities", probs},
                     {"p_target", diag[target_index]},
                     {"brute_force",
                      brute_force_curve(static_cast<int>(base.array.size()),
                                        static_cast<int>(t) + 1)}});
        }
        out << json{{"version", QREDUCE_VERSION},
                    {"config", exp.to_json()},
                    {"target_index", target_index},
                    {"iterations", iterations}}
                   .dump(2)
            << '\n';
        return 0;
    }
    out << "# version = " << QREDUCE_VERSION << '\n';
    out << "# config = " << exp.to_json().dump() << '\n';
    out << "# target_index = " << target_index << '\n';
    out << "iteration,counter_index,counter_bits,probability,p_target,brute_force\n";
    for (std::size_t t = 0; t < diagonals.size(); ++t) {
        const auto& diag = diagonals[t];
        const double brute = brute_force_curve(static_cast<int>(base.array.size()),
                                               static_cast<int>(t) + 1);
        for (Eigen::Index j = 0; j < diag.size(); ++j) {
            out << (t + 1) << ',' << j << ','
                << counter_bits_string(static_cast<std::uint32_t>(j), base.m_counter_bits)
                << ',' << format_double(diag[j]) << ',' << format_double(diag[target_index])
                << ',' << format_double(brute) << '\n';
        }
    }
    return 0;
}

// ---------------------------------------------------------------------------
// figure: canned experiment bundles

ExperimentConfig figure_defaults(const ExperimentConfig& base, std::uint64_t default_shots) {
    ExperimentConfig exp = base;
    if (exp.shots == 0) {
        exp.shots = default_shots;
    }
    if (!exp.seed) {
        throw ConfigError("figure runs are sampled; pass --seed");
    }
    return exp;
}

int run_figure(const std::string& id, const ExperimentConfig& cli_flags) {
    ExperimentConfig cli = cli_flags;
    cli.mode = "figure:" + id;
    OutputFile output(cli.out);
    std::ostream& out = output.stream();

    if (id == "fig4") {
        ExperimentConfig exp = figure_defaults(cli, 10000);
        exp.array = {15, 14, 6, 0};
        exp.bits = 4;
        exp.counter_bits = 2;
        exp.target = 0;
        const SearchConfig config = to_search_config(exp, Mode::nearest);
        const SearchResult result = single_call_search(config);
        const Histogram hist =
            sample_histogram(result.state, Register::counter, exp.shots, *exp.seed);
        const ComparisonReport report = compare_histogram(hist, result.counter_probs, 4.0);
        write_histogram(exp, "", 2, result.counter_probs, &hist, &report, out);
        return 0;
    }
    if (id == "fig5") {
        ExperimentConfig exp = figure_defaults(cli, 100000);
        exp.bits = 6;
        exp.counter_bits = 6;
        exp.target = 0;
        std::vector<std::uint32_t> ascending(64);
        std::iota(ascending.begin(), ascending.end(), 0u);
        std::vector<std::uint32_t> folded;
        for (int v = 63; v >= 1; v -= 2) folded.push_back(static_cast<std::uint32_t>(v));
        folded.push_back(0);
        for (int v = 2; v <= 62; v += 2) folded.push_back(static_cast<std::uint32_t>(v));

        bool first = true;
        json datasets = json::array();
        for (const auto& [label, values] :
             {std::pair{std::string("ascending"), ascending},
              std::pair{std::string("folded"), folded}}) {
            exp.array = values;
            const SearchConfig config = to_search_config(exp, Mode::nearest);
            const SearchResult result = single_call_search(config);
            const Histogram hist =
                sample_histogram(result.state, Register::counter, exp.shots, *exp.seed);
            const ComparisonReport report =
                compare_histogram(hist, result.counter_probs, 4.0);
            if (exp.format == "json") {
                json rows = json::array();
                for (std::size_t j = 0; j < result.counter_probs.size(); ++j) {
                    rows.push_back(json{{"counter_index", j},
                                        {"count", hist.counts[j]},
                                        {"exact_probability", result.counter_probs[j]}});
                }
                datasets.push_back(json{{"label", label},
                                        {"rows", rows},
                                        {"comparison", report.to_json()}});
            } else {
                if (first) {
                    out << "# version = " << QREDUCE_VERSION << '\n';
                    out << "# config = " << exp.to_json().dump() << '\n';
                    out << "dataset,counter_index,counter_bits,count,frequency,"
                           "exact_probability\n";
                }
                for (std::size_t j = 0; j < result.counter_probs.size(); ++j) {
                    out << label << ',' << j << ','
                        << counter_bits_string(static_cast<std::uint32_t>(j), 6) << ','
                        << hist.counts[j] << ','
                        << format_double(hist.frequencies()[j]) << ','
                        << format_double(result.counter_probs[j]) << '\n';
                }
                out << "# comparison " << label << " = " << report.to_json().dump() << '\n';
            }
            first = false;
        }
        if (exp.format == "json") {
            out << json{{"version", QREDUCE_VERSION},
                        {"config", exp.to_json()},
                        {"datasets", datasets}}
                       .dump(2)
                << '\n';
        }
        return 0;
    }
    if (id == "fig6") {
        ExperimentConfig exp = figure_defaults(cli, 10000);
        exp.array = {15, 15, 15, 0};
        exp.bits = 4;
        exp.counter_bits = 2;
        exp.target = 0;
        exp.signs = "paper";
        const SearchConfig config = to_search_config(exp, Mode::nearest);
        const SearchResult result = single_call_search(config);
        const Histogram hist =
            sample_histogram(result.state, Register::counter, exp.shots, *exp.seed);
        write_histogram(exp, "", 2, result.counter_probs, &hist, nullptr, out);
        return 0;
    }
    if (id == "fig8") {
        ExperimentConfig exp = figure_defaults(cli, 100000);
        exp.cycles = 1;
        json datasets = json::array();
        bool header = true;
        for (const auto& [label, filler, n, m] :
             {std::tuple{std::string("m16"), 127u, 7, 4},
              std::tuple{std::string("m32"), 15u, 4, 5}}) {
            exp.array.assign(std::size_t{1} << m, filler);
            exp.array[7] = 0;
            exp.bits = n;
            exp.counter_bits = m;
            exp.target = 0;
            const SearchConfig config = to_search_config(exp, Mode::nearest);
            const DecoherenceResult result =
                decoherence_protocol(config, exp.shots, *exp.seed);
            if (exp.format == "json") {
                datasets.push_back(decoherence_json(label, m, result));
            } else {
                write_decoherence(exp, label, m, result, out, header);
            }
            header = false;
        }
        if (exp.format == "json") {
            out << json{{"version", QREDUCE_VERSION},
                        {"config", exp.to_json()},
                        {"datasets", datasets}}
                       .dump(2)
                << '\n';
        }
        return 0;
    }
    if (id == "fig10") {
        ExperimentConfig exp = figure_defaults(cli, 10000);
        exp.schedule = "exact-match";
        exp.cycles = cli.cycles > 0 ? cli.cycles : 1;
        json datasets = json::array();
        bool first = true;
        for (const auto& [label, m] :
             {std::pair{std::string("m8"), 3}, std::pair{std::string("m16"), 4}}) {
            exp.array.assign(std::size_t{1} << m, 15);
            exp.array[3] = 0;
            exp.bits = 4;
            exp.counter_bits = m;
            exp.target = 0;
            exp.signs = (m == 3) ? "paper" : "doubling";
            const SearchConfig config = to_search_config(exp, Mode::exact_match);
            const SearchResult result = null_element_procedure(config);
            const Histogram hist =
                sample_histogram(result.state, Register::counter, exp.shots, *exp.seed);
            if (exp.format == "json") {
                json rows = json::array();
                for (std::size_t j = 0; j < result.counter_probs.size(); ++j) {
                    rows.push_back(json{{"counter_index", j},
                                        {"count", hist.counts[j]},
                                        {"exact_probability", result.counter_probs[j]}});
                }
                datasets.push_back(json{{"label", label}, {"rows", rows}});
            } else {
                if (first) {
                    out << "# version = " << QREDUCE_VERSION << '\n';
                    out << "# config = " << exp.to_json().dump() << '\n';
                    out << "dataset,counter_index,counter_bits,count,frequency,"
                           "exact_probability\n";
                }
                for (std::size_t j = 0; j < result.counter_probs.size(); ++j) {
                    out << label << ',' << j << ','
                        << counter_bits_string(static_cast<std::uint32_t>(j), m) << ','
                        << hist.counts[j] << ','
                        << format_double(hist.frequencies()[j]) << ','
                        << format_double(result.counter_probs[j]) << '\n';
                }
            }
            first = false;
        }
        if (exp.format == "json") {
            out << json{{"version", QREDUCE_VERSION},
                        {"config", exp.to_json()},
                        {"datasets", datasets}}
                       .dump(2)
                << '\n';
        }
        return 0;
    }
    if (id == "fig11" || id == "fig12") {
        // iteration curves for the M=8 and M=16 single-zero arrays
        ExperimentConfig exp = cli;
        exp.schedule = "exact-match";
        exp.iterations = exp.iterations > 1 ? exp.iterations : 8;
        const int iterations = exp.iterations;
        std::map<int, std::vector<double>> p_target;
        for (const int m : {3, 4}) {
            const std::uint32_t count = 1u << m;
            ArraySpec array;
            array.target_b = 0;
            for (std::uint32_t k = 0; k < count; ++k) {
                array.elements.push_back(k == 3 ? 0 : (k == 0 ? count : k));
            }
            const SignMatrix sign = build_sign_matrix(m, SignVariant::doubling);
            const std::vector<Eigen::VectorXd> diagonals =
                iterate(array, m + 1, {AngleSchedule::exact_match()}, sign, iterations);
            for (const auto& diag : diagonals) {
                p_target[m].push_back(diag[3]);
            }
        }
        if (exp.format == "json") {
            json iterations_json = json::array();
            for (int t = 0; t < iterations; ++t) {
                iterations_json.push_back(
                    json{{"iteration", t + 1},
                         {"p_target_m8", p_target[3][static_cast<std::size_t>(t)]},
                         {"brute_force_m8", brute_force_curve(8, std::min(t + 1, 8))},
                         {"p_target_m16", p_target[4][static_cast<std::size_t>(t)]},
                         {"brute_force_m16", brute_force_curve(16, std::min(t + 1, 16))}});
            }
            out << json{{"version", QREDUCE_VERSION},
                        {"config", exp.to_json()},
                        {"iterations", iterations_json}}
                       .dump(2)
                << '\n';
            return 0;
        }
        out << "# version = " << QREDUCE_VERSION << '\n';
        out << "# config = " << exp.to_json().dump() << '\n';
        out << "iteration,p_target_m8,brute_force_m8,p_target_m16,brute_force_m16\n";
        for (int t = 0; t < iterations; ++t) {
            out << (t + 1) << ','
                << format_double(p_target[3][static_cast<std::size_t>(t)]) << ','
                << format_double(brute_force_curve(8, std::min(t + 1, 8))) << ','
                << format_double(p_target[4][static_cast<std::size_t>(t)]) << ','
                << format_double(brute_force_curve(16, std::min(t + 1, 16))) << '\n';
        }
        return 0;
    }
    if (id == "fig14") {
        ExperimentConfig exp = cli;
        exp.array = {63, 44, 37, 32, 21, 13, 9, 2};
        exp.bits = 6;
        exp.counter_bits = 3;
        ArraySpec array{{63, 44, 37, 32, 21, 13, 9, 2}, 0};
        const SignMatrix sign = build_sign_matrix(3, SignVariant::doubling);
        const AngleSchedule highest = AngleSchedule::highest_bit_pi(6);
        const std::vector<Eigen::VectorXd> left = iterate(array, 6, {highest}, sign, 1);
        const std::vector<Eigen::VectorXd> right = iterate(
            array, 6, {AngleSchedule::default_halving(6), highest, highest}, sign, 3);
        if (exp.format == "json") {
            json rows = json::array();
            for (int j = 0; j < 8; ++j) {
                rows.push_back(json{{"counter_index", j},
                                    {"element", array.elements[static_cast<std::size_t>(j)]},
                                    {"left_probability", left[0][j]},
                                    {"right_probability", right[2][j]}});
            }
            out << json{{"version", QREDUCE_VERSION},
                        {"config", exp.to_json()},
                        {"rows", rows}}
                       .dump(2)
                << '\n';
            return 0;
        }
        out << "# version = " << QREDUCE_VERSION << '\n';
        out << "# config = " << exp.to_json().dump() << '\n';
        out << "counter_index,element,left_probability,right_probability\n";
        for (int j = 0; j < 8; ++j) {
            out << j << ',' << array.elements[static_cast<std::size_t>(j)] << ','
                << format_double(left[0][j]) << ',' << format_double(right[2][j]) << '\n';
        }
        return 0;
    }
    if (id == "fig15") {
        ExperimentConfig exp = figure_defaults(cli, 100000);
        // left: re-measured nearest search around a lone far outlier
        ExperimentConfig left = exp;
        left.array = {0, 1, 2, 3, 4, 5, 6, 48};
        left.bits = 6;
        left.counter_bits = 3;
        left.target = 0;
        left.cycles = 1;
        const SearchConfig left_config = to_search_config(left, Mode::nearest);
        const DecoherenceResult left_result =
            decoherence_protocol(left_config, exp.shots, *exp.seed);

        // right: exact-match exclusion of the value 15
        ExperimentConfig right = exp;
        right.array = {6, 0, 7, 9, 11, 2, 13, 15};
        right.bits = 4;
        right.counter_bits = 3;
        right.target = 0;
        right.exclude = 15;
        const SearchConfig right_config = to_search_config(right, Mode::filter);
        const FilterResult right_result = filter_exclude(right_config);
        const Histogram right_hist = sample_histogram(right_result.state, Register::counter,
                                                      exp.shots, *exp.seed);
        if (exp.format == "json") {
            json rows = json::array();
            for (std::size_t j = 0; j < 8; ++j) {
                rows.push_back(json{{"counter_index", j},
                                    {"count", right_hist.counts[j]},
                                    {"exact_probability", right_result.counter_probs[j]}});
            }
            out << json{{"version", QREDUCE_VERSION},
                        {"config", exp.to_json()},
                        {"datasets",
                         json::array({decoherence_json("outlier", 3, left_result),
                                      json{{"label", "exclude15"}, {"rows", rows}}})}}
                       .dump(2)
                << '\n';
            return 0;
        }
        write_decoherence(left, "outlier", 3, left_result, out, true);
        for (std::size_t j = 0; j < 8; ++j) {
            out << "exclude15," << j << ','
                << counter_bits_string(static_cast<std::uint32_t>(j), 3) << ','
                << right_hist.counts[j] << ',' << format_double(right_hist.frequencies()[j])
                << ',' << format_double(right_result.counter_probs[j]) << ",,,\n";
        }
        return 0;
    }
    throw ConfigError("unknown figure id: " + id);
}

void attach_common_flags(CLI::App* cmd, ExperimentConfig& experiment, std::string& config_path) {
    cmd->add_option("--config", config_path, "JSON config file; flags override its fields");
    cmd->add_option("--array", experiment.array, "comma-separated unsigned elements")
        ->delimiter(',');
    cmd->add_option("--bits", experiment.bits, "data register width n");
    cmd->add_option("--m", experiment.counter_bits, "counter register width m");
    cmd->add_option("--target", experiment.target, "search target B");
    cmd->add_option("--exclude", [&experiment](const std::vector<std::string>& v) {
            experiment.exclude = static_cast<std::uint32_t>(std::stoul(v.front()));
            return true;
        }, "value whose counter bin is filtered to zero");
    cmd->add_option("--schedule", experiment.schedule,
                    "preset (default|highest-bit-pi|exact-match) or comma pi-multiples");
    cmd->add_option("--preset", experiment.schedule, "alias for --schedule presets");
    cmd->add_option("--signs", experiment.signs, "sign pattern: auto|paper|doubling");
    cmd->add_option("--iterations", experiment.iterations, "reload-channel iterations");
    cmd->add_option("--cycles", experiment.cycles, "extra protocol cycles");
    cmd->add_option("--shots", experiment.shots, "measurement samples (0 = exact only)");
    cmd->add_option("--seed", [&experiment](const std::vector<std::string>& v) {
            experiment.seed = std::stoull(v.front());
            return true;
        }, "rng seed; required for sampled runs");
    cmd->add_option("--out", experiment.out, "output path ('-' = stdout)");
    cmd->add_option("--format", experiment.format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"amplitude-reduction search/filter simulator"};
    app.require_subcommand(1);

    struct SubcommandState {
        ExperimentConfig experiment;
        std::string config_path;
    };
    std::map<std::string, SubcommandState> state;
    const std::vector<std::string> names{"search", "filter",       "iterate",
                                         "null-element", "decoherence", "figure"};
    std::string figure_id;
    for (const std::string& name : names) {
        CLI::App* cmd = app.add_subcommand(name);
        auto& sub_state = state[name];
        sub_state.experiment.mode = name;
        attach_common_flags(cmd, sub_state.experiment, sub_state.config_path);
        if (name == "figure") {
            cmd->add_option("id", figure_id, "figure id (fig4..fig15)")->required();
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const std::string name = app.get_subcommands().front()->get_name();
        SubcommandState& sub_state = state[name];
        if (!sub_state.config_path.empty()) {
            // file first, then re-apply flags as overrides
            ExperimentConfig merged;
            merged.mode = name;
            merge_config_file(merged, sub_state.config_path);
            ExperimentConfig& flags = sub_state.experiment;
            if (!flags.array.empty()) merged.array = flags.array;
            if (flags.bits > 0) merged.bits = flags.bits;
            if (flags.counter_bits > 0) merged.counter_bits = flags.counter_bits;
            if (flags.target != 0) merged.target = flags.target;
            if (flags.exclude) merged.exclude = flags.exclude;
            if (flags.schedule != "default") merged.schedule = flags.schedule;
            if (flags.signs != "auto") merged.signs = flags.signs;
            if (flags.iterations != 1) merged.iterations = flags.iterations;
            if (flags.cycles != 0) merged.cycles = flags.cycles;
            if (flags.shots != 0) merged.shots = flags.shots;
            if (flags.seed) merged.seed = flags.seed;
            if (flags.out != "-") merged.out = flags.out;
            if (flags.format != "csv") merged.format = flags.format;
            sub_state.experiment = merged;
        }
        const ExperimentConfig& experiment = sub_state.experiment;
        if (name == "search") return run_search(experiment);
        if (name == "filter") return run_filter(experiment);
        if (name == "iterate") return run_iterate(experiment);
        if (name == "null-element") return run_null_element(experiment);
        if (name == "decoherence") return run_decoherence(experiment);
        if (name == "figure") return run_figure(figure_id, experiment);
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const InvariantError& e) {
        std::cerr << "internal invariant violation: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
