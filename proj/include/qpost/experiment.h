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

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qpost/hpe.h"
#include "qpost/io.h"
#include "qpost/samplers.h"
#include "qpost/topology.h"

namespace qpost {

/// raw: annealer runs as returned. sampling: Boltzmann samples from a Gibbs chain.
enum class Mode { raw, sampling };

enum class Method {
    best_run,  // lowest-energy input run, always recorded
    mqc_sequential,
    mqc_rank,
    mqc_maxdiff,
    builtin_pp,  // best run after local-optimization post-processing
    sample_persistence,
    hpe,
    exact,  // brute-force ground state; small problems only
};

std::string_view to_string(Mode mode);
Mode parse_mode(std::string_view name);
std::string_view to_string(Method method);
Method parse_method(std::string_view name);

struct TopologySpec {
    std::string kind = "chimera";  // chimera | complete | path | grid
    ChimeraSpec chimera;
    std::size_t size = 0;  // complete / path vertex count
    std::size_t rows = 0;  // grid
    std::size_t cols = 0;  // grid
};

Graph build_topology(const TopologySpec &spec);

struct MethodPair {
    Method a;
    Method b;
};

struct ExperimentConfig {
    TopologySpec topology;
    std::size_t problem_count = 50;
    std::uint64_t gen_seed = 316;
    Interval h_range{-2.0, 2.0};
    Interval j_range{-1.0, 1.0};
    std::vector<std::size_t> run_counts{200, 400};
    std::vector<Mode> modes{Mode::raw, Mode::sampling};
    std::vector<Method> methods{Method::mqc_sequential, Method::mqc_rank, Method::mqc_maxdiff, Method::builtin_pp};
    /// Per-mode rows "a vs b".
    std::vector<MethodPair> comparisons{
        {Method::mqc_sequential, Method::builtin_pp},
        {Method::mqc_sequential, Method::mqc_rank},
        {Method::mqc_sequential, Method::mqc_maxdiff},
    };
    /// Methods compared across modes (raw vs sampling), one row per run count.
    std::vector<Method> cross_mode{Method::mqc_sequential};
    SamplerParams raw_sampler = default_raw_sampler();
    SamplerParams sampling_sampler = default_sampling_sampler();
    std::size_t width_cap = 4;
    double persistence_threshold = 0.9;
    std::size_t persistence_rounds = 3;
    ScaleSet hpe_scales;
    PrecisionModel precision;
    std::string output_dir = "results";

    static SamplerParams default_raw_sampler();
    static SamplerParams default_sampling_sampler();
};

/// Throws ConfigError on inconsistent or infeasible settings.
void validate(const ExperimentConfig &config);
/// Every field is optional; unknown fields are rejected with ConfigError.
ExperimentConfig config_from_json(const io::Json &doc);
io::Json config_to_json(const ExperimentConfig &config);
ExperimentConfig read_config(const std::filesystem::path &path);

struct ResultRecord {
    std::size_t problem = 0;
    std::size_t run_count = 0;
    Mode mode = Mode::raw;
    Method method = Method::best_run;
    double energy = 0.0;
    std::uint64_t sampler_seed = 0;
};

io::Json record_to_json(const ResultRecord &record);
ResultRecord record_from_json(const io::Json &doc);
/// One JSON record per line; blank lines are skipped.
std::vector<ResultRecord> read_results(const std::filesystem::path &path);

struct ComparisonRow {
    std::string table;
    std::size_t run_count = 0;
    std::string mode;
    std::string method_a;
    std::string method_b;
    std::size_t equal = 0;
    std::size_t less = 0;
    std::size_t greater = 0;
};

struct ComparisonReport {
    std::size_t instance_count = 0;
    std::vector<ComparisonRow> rows;
    /// MQC-vs-best-input checks performed and how many found MQC worse.
    std::size_t dominance_checks = 0;
    std::size_t dominance_violations = 0;
};

/// Bucket per-instance energies into =, <, > counts (equality within
/// kEnergyTolerance) for every configured comparison. Throws InputError when
/// `records` is empty and ConfigError when a compared method is missing.
ComparisonReport build_report(const ExperimentConfig &config, std::span<const ResultRecord> records);
std::string format_report(const ComparisonReport &report);
/// One JSON object per row, newline-terminated.
std::string report_to_jsonl(const ComparisonReport &report);

struct ExperimentResult {
    std::vector<ResultRecord> records;
    ComparisonReport report;
};

/// Generate problem_count problems on the topology, sample each run count in
/// each mode, apply every configured method and tabulate. When output_dir is
/// non-empty, writes results.jsonl, traces.jsonl, report.txt, report.jsonl and
/// config.json there. Output is a pure function of the config.
ExperimentResult run_experiment(const ExperimentConfig &config);

/// Final energies of mqc_reduce under sequential, rank_order, max_difference.
std::array<double, 3> strategy_energies(const IsingProblem &problem, std::span<const SpinConfiguration> runs);

struct SensitivityFlag {
    std::size_t problem = 0;
    std::size_t run_count = 0;
    Mode mode = Mode::raw;
    std::array<double, 3> energies{};
};

struct SensitivityReport {
    ComparisonReport table;
    std::vector<SensitivityFlag> flagged;
};

/// Runs the three pairing strategies on identical run sets and tabulates
/// every strategy pair; flags instances whose final energies differ. Writes
/// sensitivity.txt and sensitivity.jsonl when output_dir is non-empty.
SensitivityReport sensitivity_report(const ExperimentConfig &config);

struct BenchPoint {
    std::size_t run_count = 0;
    /// Median wall time of one sequential mqc_reduce call.
    double seconds = 0.0;
    /// seconds / previous point's seconds; 0 for the first point.
    double ratio = 0.0;
};

/// Times sequential mqc_reduce on one random problem over the topology, with
/// uniformly random input runs, for every entry of `run_counts`.
std::vector<BenchPoint> bench_mqc(
    const Graph &graph, std::span<const std::size_t> run_counts, std::uint64_t seed, std::size_t repeats = 5);

}  // namespace qpost
