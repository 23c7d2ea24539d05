// Copyright 2026 The qpost Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qpost/experiment.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <tuple>

#include "parallel.h"
#include "qpost/altpp.h"
#include "qpost/errors.h"
#include "qpost/mqc.h"
#include "qpost/random.h"

namespace qpost {

namespace {

constexpr std::array<std::pair<Method, std::string_view>, 8> kMethodNames{{
    {Method::best_run, "best_run"},
    {Method::mqc_sequential, "mqc_sequential"},
    {Method::mqc_rank, "mqc_rank"},
    {Method::mqc_maxdiff, "mqc_maxdiff"},
    {Method::builtin_pp, "builtin_pp"},
    {Method::sample_persistence, "sample_persistence"},
    {Method::hpe, "hpe"},
    {Method::exact, "exact"},
}};

bool is_mqc(Method m) {
    return m == Method::mqc_sequential || m == Method::mqc_rank || m == Method::mqc_maxdiff;
}

PairingStrategy strategy_of(Method m) {
    switch (m) {
        case Method::mqc_rank:
            return PairingStrategy::rank_order;
        case Method::mqc_maxdiff:
            return PairingStrategy::max_difference;
        default:
            return PairingStrategy::sequential;
    }
}

SamplerKind sampler_of(Mode mode) { return mode == Mode::raw ? SamplerKind::anneal : SamplerKind::gibbs; }

const SamplerParams &params_of(const ExperimentConfig &config, Mode mode) {
    return mode == Mode::raw ? config.raw_sampler : config.sampling_sampler;
}

std::uint64_t problem_seed(const ExperimentConfig &config, std::size_t p) { return derive_seed(config.gen_seed, p); }

std::uint64_t run_seed(const ExperimentConfig &config, std::size_t p, std::size_t rc_index, std::size_t mode_index) {
    Mode mode = config.modes[mode_index];
    std::uint64_t s = derive_seed(params_of(config, mode).seed, p);
    s = derive_seed(s, rc_index);
    return derive_seed(s, static_cast<std::uint64_t>(mode));
}

template <typename T>
bool contains(const std::vector<T> &xs, const T &x) {
    return std::find(xs.begin(), xs.end(), x) != xs.end();
}

const io::Json &json_field(const io::Json &doc, const char *name) { return doc.at(name); }

std::size_t as_size(const io::Json &v, const std::string &where) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
        throw ConfigError("config field '" + where + "': expected a non-negative integer");
    }
    return v.get<std::size_t>();
}

double as_real(const io::Json &v, const std::string &where) {
    if (!v.is_number()) {
        throw ConfigError("config field '" + where + "': expected a number");
    }
    return v.get<double>();
}

std::string as_text(const io::Json &v, const std::string &where) {
    if (!v.is_string()) {
        throw ConfigError("config field '" + where + "': expected a string");
    }
    return v.get<std::string>();
}

const io::Json &as_list(const io::Json &v, const std::string &where) {
    if (!v.is_array()) {
        throw ConfigError("config field '" + where + "': expected an array");
    }
    return v;
}

Interval as_interval(const io::Json &v, const std::string &where) {
    if (!v.is_array() || v.size() != 2) {
        throw ConfigError("config field '" + where + "': expected [lo, hi]");
    }
    return {as_real(v[0], where + "[0]"), as_real(v[1], where + "[1]")};
}

io::Json interval_json(const Interval &iv) { return io::Json::array({iv.lo, iv.hi}); }

}  // namespace

std::string_view to_string(Mode mode) { return mode == Mode::raw ? "raw" : "sampling"; }

Mode parse_mode(std::string_view name) {
    if (name == "raw") {
        return Mode::raw;
    }
    if (name == "sampling") {
        return Mode::sampling;
    }
    throw ConfigError("unknown mode '" + std::string(name) + "'");
}

std::string_view to_string(Method method) {
    for (const auto &[m, name] : kMethodNames) {
        if (m == method) {
            return name;
        }
    }
    return "unknown";
}

Method parse_method(std::string_view name) {
    for (const auto &[m, n] : kMethodNames) {
        if (n == name) {
            return m;
        }
    }
    throw ConfigError("unknown method '" + std::string(name) + "'");
}

Graph build_topology(const TopologySpec &spec) {
    if (spec.kind == "chimera") {
        return chimera_graph(spec.chimera);
    }
    if (spec.kind == "complete") {
        return complete_graph(spec.size);
    }
    if (spec.kind == "path") {
        return path_graph(spec.size);
    }
    if (spec.kind == "grid") {
        return grid_graph(spec.rows, spec.cols);
    }
    throw ConfigError("unknown topology '" + spec.kind + "'");
}

SamplerParams ExperimentConfig::default_raw_sampler() {
    SamplerParams p;
    p.sweeps = 20;
    p.beta_schedule = {0.1, 5.0, Interpolation::geometric};
    p.seed = 1;
    return p;
}

SamplerParams ExperimentConfig::default_sampling_sampler() {
    SamplerParams p;
    p.fixed_beta = 1.0;
    p.burn_in = 1000;
    p.thinning = 10;
    p.seed = 2;
    return p;
}

void validate(const ExperimentConfig &config) {
    if (config.problem_count == 0) {
        throw ConfigError("problem_count must be positive");
    }
    if (config.run_counts.empty() || contains(config.run_counts, std::size_t{0})) {
        throw ConfigError("run_counts must be a non-empty list of positive counts");
    }
    if (config.modes.empty()) {
        throw ConfigError("at least one mode is required");
    }
    if (config.methods.empty()) {
        throw ConfigError("at least one method is required");
    }
    for (std::size_t i = 0; i < config.modes.size(); ++i) {
        for (std::size_t j = i + 1; j < config.modes.size(); ++j) {
            if (config.modes[i] == config.modes[j]) {
                throw ConfigError("modes must be distinct");
            }
        }
    }
    auto available = [&](Method m) { return m == Method::best_run || contains(config.methods, m); };
    for (const MethodPair &pair : config.comparisons) {
        if (!available(pair.a) || !available(pair.b)) {
            throw ConfigError(
                "comparison " + std::string(to_string(pair.a)) + " vs " + std::string(to_string(pair.b)) +
                " uses a method that is not configured");
        }
    }
    for (Method m : config.cross_mode) {
        if (!available(m)) {
            throw ConfigError("cross-mode method " + std::string(to_string(m)) + " is not configured");
        }
    }
    Graph graph;
    try {
        graph = build_topology(config.topology);
    } catch (const ParameterError &e) {
        throw ConfigError(std::string("topology: ") + e.what());
    }
    if (contains(config.methods, Method::exact) && graph.vertex_count() > kMaxExactVertices) {
        throw ConfigError(
            "exact oracle requested for " + std::to_string(graph.vertex_count()) + " vertices (limit " +
            std::to_string(kMaxExactVertices) + ")");
    }
    if (contains(config.methods, Method::sample_persistence)) {
        if (!(config.persistence_threshold > 0.5 && config.persistence_threshold <= 1.0)) {
            throw ConfigError("persistence_threshold must lie in (0.5, 1]");
        }
        if (config.persistence_rounds == 0) {
            throw ConfigError("persistence_rounds must be positive");
        }
        if (config.persistence_rounds > 1 && contains(config.run_counts, std::size_t{1})) {
            throw ConfigError("sample persistence needs at least two runs per sample");
        }
    }
    if (config.width_cap == 0) {
        throw ConfigError("width_cap must be positive");
    }
    if (contains(config.modes, Mode::sampling) && !config.sampling_sampler.fixed_beta) {
        throw ConfigError("sampling mode requires sampling_sampler.fixed_beta");
    }
}

ExperimentConfig config_from_json(const io::Json &doc) {
    if (!doc.is_object()) {
        throw ConfigError("config: expected an object");
    }
    ExperimentConfig c;
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        const std::string &key = it.key();
        const io::Json &v = it.value();
        if (key == "topology") {
            if (!v.is_object()) {
                throw ConfigError("config field 'topology': expected an object");
            }
            for (auto t = v.begin(); t != v.end(); ++t) {
                std::string where = "topology." + t.key();
                if (t.key() == "kind") {
                    c.topology.kind = as_text(t.value(), where);
                } else if (t.key() == "rows") {
                    c.topology.rows = c.topology.chimera.rows = as_size(t.value(), where);
                } else if (t.key() == "cols") {
                    c.topology.cols = c.topology.chimera.cols = as_size(t.value(), where);
                } else if (t.key() == "shore") {
                    c.topology.chimera.shore = as_size(t.value(), where);
                } else if (t.key() == "size") {
                    c.topology.size = as_size(t.value(), where);
                } else {
                    throw ConfigError("config: unknown field '" + where + "'");
                }
            }
        } else if (key == "problem_count") {
            c.problem_count = as_size(v, key);
        } else if (key == "gen_seed") {
            c.gen_seed = as_size(v, key);
        } else if (key == "h_range") {
            c.h_range = as_interval(v, key);
        } else if (key == "j_range") {
            c.j_range = as_interval(v, key);
        } else if (key == "run_counts") {
            c.run_counts.clear();
            for (std::size_t i = 0; i < as_list(v, key).size(); ++i) {
                c.run_counts.push_back(as_size(v[i], key + "[" + std::to_string(i) + "]"));
            }
        } else if (key == "modes") {
            c.modes.clear();
            for (std::size_t i = 0; i < as_list(v, key).size(); ++i) {
                c.modes.push_back(parse_mode(as_text(v[i], key + "[" + std::to_string(i) + "]")));
            }
        } else if (key == "methods") {
            c.methods.clear();
            for (std::size_t i = 0; i < as_list(v, key).size(); ++i) {
                c.methods.push_back(parse_method(as_text(v[i], key + "[" + std::to_string(i) + "]")));
            }
        } else if (key == "comparisons") {
            c.comparisons.clear();
            for (std::size_t i = 0; i < as_list(v, key).size(); ++i) {
                std::string where = key + "[" + std::to_string(i) + "]";
                if (!v[i].is_array() || v[i].size() != 2) {
                    throw ConfigError("config field '" + where + "': expected [method_a, method_b]");
                }
                c.comparisons.push_back(
                    {parse_method(as_text(v[i][0], where)), parse_method(as_text(v[i][1], where))});
            }
        } else if (key == "cross_mode") {
            c.cross_mode.clear();
            for (std::size_t i = 0; i < as_list(v, key).size(); ++i) {
                c.cross_mode.push_back(parse_method(as_text(v[i], key + "[" + std::to_string(i) + "]")));
            }
        } else if (key == "raw_sampler" || key == "sampling_sampler") {
            SamplerParams &target = key == "raw_sampler" ? c.raw_sampler : c.sampling_sampler;
            try {
                target = io::sampler_params_from_json(v, target);
            } catch (const ParseError &e) {
                throw ConfigError("config field '" + key + "': " + e.what());
            }
        } else if (key == "width_cap") {
            c.width_cap = as_size(v, key);
        } else if (key == "persistence_threshold") {
            c.persistence_threshold = as_real(v, key);
        } else if (key == "persistence_rounds") {
            c.persistence_rounds = as_size(v, key);
        } else if (key == "hpe_scales") {
            c.hpe_scales.scales.clear();
            for (std::size_t i = 0; i < as_list(v, key).size(); ++i) {
                c.hpe_scales.scales.push_back(as_real(v[i], key + "[" + std::to_string(i) + "]"));
            }
        } else if (key == "precision") {
            if (!v.is_object()) {
                throw ConfigError("config field 'precision': expected an object");
            }
            for (auto t = v.begin(); t != v.end(); ++t) {
                std::string where = "precision." + t.key();
                if (t.key() == "h_clip") {
                    c.precision.h_clip = as_interval(t.value(), where);
                } else if (t.key() == "j_clip") {
                    c.precision.j_clip = as_interval(t.value(), where);
                } else if (t.key() == "levels") {
                    c.precision.levels = as_size(t.value(), where);
                } else {
                    throw ConfigError("config: unknown field '" + where + "'");
                }
            }
        } else if (key == "output_dir") {
            c.output_dir = as_text(v, key);
        } else {
            throw ConfigError("config: unknown field '" + key + "'");
        }
    }
    return c;
}

io::Json config_to_json(const ExperimentConfig &c) {
    io::Json doc;
    io::Json topo;
    topo["kind"] = c.topology.kind;
    if (c.topology.kind == "chimera") {
        topo["rows"] = c.topology.chimera.rows;
        topo["cols"] = c.topology.chimera.cols;
        topo["shore"] = c.topology.chimera.shore;
    } else if (c.topology.kind == "grid") {
        topo["rows"] = c.topology.rows;
        topo["cols"] = c.topology.cols;
    } else {
        topo["size"] = c.topology.size;
    }
    doc["topology"] = std::move(topo);
    doc["problem_count"] = c.problem_count;
    doc["gen_seed"] = c.gen_seed;
    doc["h_range"] = interval_json(c.h_range);
    doc["j_range"] = interval_json(c.j_range);
    doc["run_counts"] = c.run_counts;
    io::Json modes = io::Json::array();
    for (Mode m : c.modes) {
        modes.push_back(to_string(m));
    }
    doc["modes"] = std::move(modes);
    io::Json methods = io::Json::array();
    for (Method m : c.methods) {
        methods.push_back(to_string(m));
    }
    doc["methods"] = std::move(methods);
    io::Json comparisons = io::Json::array();
    for (const MethodPair &p : c.comparisons) {
        comparisons.push_back(io::Json::array({to_string(p.a), to_string(p.b)}));
    }
    doc["comparisons"] = std::move(comparisons);
    io::Json cross = io::Json::array();
    for (Method m : c.cross_mode) {
        cross.push_back(to_string(m));
    }
    doc["cross_mode"] = std::move(cross);
    doc["raw_sampler"] = io::sampler_params_to_json(c.raw_sampler);
    doc["sampling_sampler"] = io::sampler_params_to_json(c.sampling_sampler);
    doc["width_cap"] = c.width_cap;
    doc["persistence_threshold"] = c.persistence_threshold;
    doc["persistence_rounds"] = c.persistence_rounds;
    doc["hpe_scales"] = c.hpe_scales.scales;
    io::Json precision;
    precision["h_clip"] = interval_json(c.precision.h_clip);
    precision["j_clip"] = interval_json(c.precision.j_clip);
    precision["levels"] = c.precision.levels;
    doc["precision"] = std::move(precision);
    doc["output_dir"] = c.output_dir;
    return doc;
}

ExperimentConfig read_config(const std::filesystem::path &path) {
    io::Json doc = io::read_json_file(path);
    try {
        return config_from_json(doc);
    } catch (const ConfigError &e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

io::Json record_to_json(const ResultRecord &r) {
    io::Json doc;
    doc["problem"] = r.problem;
    doc["run_count"] = r.run_count;
    doc["mode"] = to_string(r.mode);
    doc["method"] = to_string(r.method);
    doc["energy"] = r.energy;
    doc["sampler_seed"] = r.sampler_seed;
    return doc;
}

ResultRecord record_from_json(const io::Json &doc) {
    if (!doc.is_object()) {
        throw ParseError("result record: expected an object");
    }
    try {
        ResultRecord r;
        r.problem = as_size(json_field(doc, "problem"), "problem");
        r.run_count = as_size(json_field(doc, "run_count"), "run_count");
        r.mode = parse_mode(as_text(json_field(doc, "mode"), "mode"));
        r.method = parse_method(as_text(json_field(doc, "method"), "method"));
        r.energy = as_real(json_field(doc, "energy"), "energy");
        r.sampler_seed = as_size(json_field(doc, "sampler_seed"), "sampler_seed");
        return r;
    } catch (const ConfigError &e) {
        throw ParseError(std::string("result record: ") + e.what());
    } catch (const nlohmann::json::out_of_range &) {
        throw ParseError("result record: missing field");
    }
}

std::vector<ResultRecord> read_results(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::vector<ResultRecord> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        std::string where = path.string() + ":" + std::to_string(line_no);
        io::Json doc = io::parse_json(line, where);
        try {
            out.push_back(record_from_json(doc));
        } catch (const ParseError &e) {
            throw ParseError(where + ": " + e.what());
        }
    }
    return out;
}

ComparisonReport build_report(const ExperimentConfig &config, std::span<const ResultRecord> records) {
    if (records.empty()) {
        throw InputError("no result records to compare");
    }
    using Key = std::tuple<std::size_t, std::size_t, int, int>;  // problem, run count, mode, method
    std::map<Key, double> energy;
    std::vector<std::size_t> problems;
    for (const ResultRecord &r : records) {
        energy[{r.problem, r.run_count, static_cast<int>(r.mode), static_cast<int>(r.method)}] = r.energy;
        problems.push_back(r.problem);
    }
    std::sort(problems.begin(), problems.end());
    problems.erase(std::unique(problems.begin(), problems.end()), problems.end());

    auto lookup = [&](std::size_t p, std::size_t rc, Mode mode, Method method) {
        auto it = energy.find({p, rc, static_cast<int>(mode), static_cast<int>(method)});
        if (it == energy.end()) {
            throw ConfigError(
                "results lack " + std::string(to_string(method)) + " for problem " + std::to_string(p) + ", " +
                std::to_string(rc) + " runs, " + std::string(to_string(mode)) + " mode");
        }
        return it->second;
    };
    auto bucket = [](ComparisonRow &row, double a, double b) {
        if (std::abs(a - b) <= kEnergyTolerance) {
            ++row.equal;
        } else if (a < b) {
            ++row.less;
        } else {
            ++row.greater;
        }
    };

    ComparisonReport report;
    report.instance_count = problems.size();
    for (Method m : config.cross_mode) {
        if (!contains(config.modes, Mode::raw) || !contains(config.modes, Mode::sampling)) {
            break;
        }
        for (std::size_t rc : config.run_counts) {
            ComparisonRow row{"cross_mode", rc, "raw vs sampling", std::string(to_string(m)),
                              std::string(to_string(m))};
            for (std::size_t p : problems) {
                bucket(row, lookup(p, rc, Mode::raw, m), lookup(p, rc, Mode::sampling, m));
            }
            report.rows.push_back(std::move(row));
        }
    }
    for (const MethodPair &pair : config.comparisons) {
        for (std::size_t rc : config.run_counts) {
            for (Mode mode : config.modes) {
                ComparisonRow row{std::string(to_string(pair.a)) + " vs " + std::string(to_string(pair.b)), rc,
                                  std::string(to_string(mode)), std::string(to_string(pair.a)),
                                  std::string(to_string(pair.b))};
                for (std::size_t p : problems) {
                    bucket(row, lookup(p, rc, mode, pair.a), lookup(p, rc, mode, pair.b));
                }
                report.rows.push_back(std::move(row));
            }
        }
    }
    for (const auto &[key, e] : energy) {
        const auto &[p, rc, mode, method] = key;
        if (!is_mqc(static_cast<Method>(method))) {
            continue;
        }
        auto best = energy.find({p, rc, mode, static_cast<int>(Method::best_run)});
        if (best == energy.end()) {
            continue;
        }
        ++report.dominance_checks;
        if (e > best->second + kEnergyTolerance) {
            ++report.dominance_violations;
        }
    }
    return report;
}

std::string format_report(const ComparisonReport &report) {
    std::ostringstream out;
    out << "instances: " << report.instance_count << "\n";
    std::string current;
    for (const ComparisonRow &row : report.rows) {
        if (row.table != current) {
            current = row.table;
            const std::string a = row.table == "cross_mode" ? "raw" : row.method_a;
            const std::string b = row.table == "cross_mode" ? "sampling" : row.method_b;
            out << "\n"
                << (row.table == "cross_mode" ? row.method_a + ": raw vs sampling" : row.table) << "\n"
                << std::setw(6) << "runs" << " | " << std::left << std::setw(15) << "mode" << std::right << " | "
                << std::setw(6) << "a = b" << " | " << std::setw(6) << "a < b" << " | " << std::setw(6) << "a > b"
                << "   (a = " << a << ", b = " << b << ")\n";
        }
        out << std::setw(6) << row.run_count << " | " << std::left << std::setw(15) << row.mode << std::right
            << " | " << std::setw(6) << row.equal << " | " << std::setw(6) << row.less << " | " << std::setw(6)
            << row.greater << "\n";
    }
    out << "\nmqc <= best input run: " << (report.dominance_checks - report.dominance_violations) << " of "
        << report.dominance_checks << " checks\n";
    return out.str();
}

std::string report_to_jsonl(const ComparisonReport &report) {
    std::string out;
    for (const ComparisonRow &row : report.rows) {
        io::Json doc;
        doc["table"] = row.table;
        doc["run_count"] = row.run_count;
        doc["mode"] = row.mode;
        doc["method_a"] = row.method_a;
        doc["method_b"] = row.method_b;
        doc["equal"] = row.equal;
        doc["less"] = row.less;
        doc["greater"] = row.greater;
        out += doc.dump() + "\n";
    }
    return out;
}

std::array<double, 3> strategy_energies(const IsingProblem &problem, std::span<const SpinConfiguration> runs) {
    return {mqc_reduce(problem, runs, PairingStrategy::sequential).result.energy(),
            mqc_reduce(problem, runs, PairingStrategy::rank_order).result.energy(),
            mqc_reduce(problem, runs, PairingStrategy::max_difference).result.energy()};
}

namespace {

struct ProblemOutput {
    std::vector<ResultRecord> records;
    std::vector<std::string> traces;
};

io::Json trace_summary(const ReductionTrace &trace) {
    io::Json levels = io::Json::array();
    for (const LevelRecord &level : trace.levels) {
        std::size_t tunnels = 0;
        std::size_t second = 0;
        for (const PairRecord &pair : level.pairs) {
            tunnels += pair.tunnels.size();
            for (const TunnelDecision &t : pair.tunnels) {
                second += t.chosen == Side::second;
            }
        }
        levels.push_back(io::Json::array({level.input_size, level.pairs.size(), tunnels, second,
                                          level.carried ? io::Json(*level.carried) : io::Json(nullptr)}));
    }
    return levels;
}

ProblemOutput run_problem(const ExperimentConfig &config, const Graph &graph, std::size_t p) {
    ProblemGenSpec gen{config.h_range, config.j_range, problem_seed(config, p)};
    IsingProblem problem = random_problem(graph, gen);
    std::vector<Subgraph> subgraphs;
    if (contains(config.methods, Method::builtin_pp)) {
        subgraphs = decompose_low_treewidth(problem, config.width_cap);
    }
    std::optional<double> exact;
    if (contains(config.methods, Method::exact)) {
        exact = exact_ground_state(problem).energy;
    }

    ProblemOutput out;
    for (std::size_t rc_index = 0; rc_index < config.run_counts.size(); ++rc_index) {
        const std::size_t rc = config.run_counts[rc_index];
        for (std::size_t mode_index = 0; mode_index < config.modes.size(); ++mode_index) {
            const Mode mode = config.modes[mode_index];
            SamplerParams params = params_of(config, mode);
            params.num_runs = rc;
            params.seed = run_seed(config, p, rc_index, mode_index);
            RunSet runs = sample(problem, sampler_of(mode), params);

            auto emit = [&](Method method, double e) {
                out.records.push_back({p, rc, mode, method, e, params.seed});
            };
            emit(Method::best_run, runs.best().energy());
            for (Method method : config.methods) {
                switch (method) {
                    case Method::best_run:
                        break;
                    case Method::mqc_sequential:
                    case Method::mqc_rank:
                    case Method::mqc_maxdiff: {
                        Reduction red = mqc_reduce(problem, runs, strategy_of(method));
                        emit(method, red.result.energy());
                        io::Json t;
                        t["problem"] = p;
                        t["run_count"] = rc;
                        t["mode"] = to_string(mode);
                        t["method"] = to_string(method);
                        t["levels"] = trace_summary(red.trace);
                        out.traces.push_back(t.dump());
                        break;
                    }
                    case Method::builtin_pp:
                        emit(method, builtin_opt_pp(problem, runs, subgraphs, config.width_cap).best().energy());
                        break;
                    case Method::sample_persistence:
                        emit(method, sample_persistence(problem, sampler_of(mode), params,
                                                        config.persistence_threshold, config.persistence_rounds)
                                         .best.energy());
                        break;
                    case Method::hpe: {
                        ScaleSet scales = config.hpe_scales;
                        scales.runs_per_scale = std::max<std::size_t>(1, rc / scales.scales.size());
                        emit(method, hpe(problem, scales, config.precision, sampler_of(mode), params).result.energy());
                        break;
                    }
                    case Method::exact:
                        emit(method, *exact);
                        break;
                }
            }
        }
    }
    return out;
}

std::vector<ProblemOutput> run_all(const ExperimentConfig &config) {
    validate(config);
    Graph graph = build_topology(config.topology);
    std::vector<ProblemOutput> outputs(config.problem_count);
    detail::parallel_for(config.problem_count, [&](std::size_t p) { outputs[p] = run_problem(config, graph, p); });
    return outputs;
}

std::filesystem::path prepare_output_dir(const ExperimentConfig &config) {
    std::filesystem::path dir(config.output_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
        throw IoError("cannot create output directory " + dir.string());
    }
    return dir;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig &config) {
    std::vector<ProblemOutput> outputs = run_all(config);
    ExperimentResult result;
    std::string results_text;
    std::string traces_text;
    for (const ProblemOutput &po : outputs) {
        for (const ResultRecord &r : po.records) {
            result.records.push_back(r);
            results_text += record_to_json(r).dump() + "\n";
        }
        for (const std::string &t : po.traces) {
            traces_text += t + "\n";
        }
    }
    result.report = build_report(config, result.records);
    if (!config.output_dir.empty()) {
        auto dir = prepare_output_dir(config);
        // The snapshot lives in the output directory, so leave the path out.
        ExperimentConfig snapshot = config;
        snapshot.output_dir.clear();
        io::write_json_file(dir / "config.json", config_to_json(snapshot));
        io::write_text_file(dir / "results.jsonl", results_text);
        io::write_text_file(dir / "traces.jsonl", traces_text);
        io::write_text_file(dir / "report.txt", format_report(result.report));
        io::write_text_file(dir / "report.jsonl", report_to_jsonl(result.report));
    }
    return result;
}

SensitivityReport sensitivity_report(const ExperimentConfig &base) {
    ExperimentConfig config = base;
    config.methods = {Method::mqc_sequential, Method::mqc_rank, Method::mqc_maxdiff};
    config.comparisons = {
        {Method::mqc_sequential, Method::mqc_rank},
        {Method::mqc_sequential, Method::mqc_maxdiff},
        {Method::mqc_rank, Method::mqc_maxdiff},
    };
    config.cross_mode.clear();
    std::vector<ProblemOutput> outputs = run_all(config);

    std::vector<ResultRecord> records;
    for (const ProblemOutput &po : outputs) {
        records.insert(records.end(), po.records.begin(), po.records.end());
    }
    SensitivityReport report;
    report.table = build_report(config, records);

    using Key = std::tuple<std::size_t, std::size_t, int>;
    std::map<Key, std::array<double, 3>> by_instance;
    for (const ResultRecord &r : records) {
        if (!is_mqc(r.method)) {
            continue;
        }
        std::size_t slot = r.method == Method::mqc_sequential ? 0 : r.method == Method::mqc_rank ? 1 : 2;
        by_instance[{r.problem, r.run_count, static_cast<int>(r.mode)}][slot] = r.energy;
    }
    for (const auto &[key, e] : by_instance) {
        bool same = std::abs(e[0] - e[1]) <= kEnergyTolerance && std::abs(e[0] - e[2]) <= kEnergyTolerance &&
                    std::abs(e[1] - e[2]) <= kEnergyTolerance;
        if (!same) {
            const auto &[p, rc, mode] = key;
            report.flagged.push_back({p, rc, static_cast<Mode>(mode), e});
        }
    }

    if (!config.output_dir.empty()) {
        auto dir = prepare_output_dir(config);
        std::ostringstream text;
        text << format_report(report.table) << "\ninstances where strategies differ: " << report.flagged.size()
             << "\n";
        std::string jsonl = report_to_jsonl(report.table);
        for (const SensitivityFlag &f : report.flagged) {
            text << "  problem " << f.problem << ", " << f.run_count << " runs, " << to_string(f.mode)
                 << ": sequential " << std::setprecision(12) << f.energies[0] << ", rank_order " << f.energies[1]
                 << ", max_difference " << f.energies[2] << "\n";
            io::Json doc;
            doc["flag"] = true;
            doc["problem"] = f.problem;
            doc["run_count"] = f.run_count;
            doc["mode"] = to_string(f.mode);
            doc["energies"] = f.energies;
            jsonl += doc.dump() + "\n";
        }
        io::write_text_file(dir / "sensitivity.txt", text.str());
        io::write_text_file(dir / "sensitivity.jsonl", jsonl);
    }
    return report;
}

std::vector<BenchPoint> bench_mqc(
    const Graph &graph, std::span<const std::size_t> run_counts, std::uint64_t seed, std::size_t repeats) {
    if (repeats == 0) {
        throw ParameterError("bench needs at least one repetition");
    }
    IsingProblem problem = random_problem(graph, {Interval{-2.0, 2.0}, Interval{-1.0, 1.0}, seed});
    std::vector<BenchPoint> points;
    for (std::size_t i = 0; i < run_counts.size(); ++i) {
        RunSet runs = random_runs(problem, run_counts[i], derive_seed(seed, i + 1));
        std::vector<double> times;
        for (std::size_t r = 0; r < repeats; ++r) {
            auto start = std::chrono::steady_clock::now();
            Reduction red = mqc_reduce(problem, runs, PairingStrategy::sequential);
            auto stop = std::chrono::steady_clock::now();
            if (red.result.size() != problem.vertex_count()) {
                throw Error("bench: malformed reduction");
            }
            times.push_back(std::chrono::duration<double>(stop - start).count());
        }
        std::sort(times.begin(), times.end());
        BenchPoint point{run_counts[i], times[times.size() / 2], 0.0};
        if (!points.empty() && points.back().seconds > 0.0) {
            point.ratio = point.seconds / points.back().seconds;
        }
        points.push_back(point);
    }
    return points;
}

}  // namespace qpost
