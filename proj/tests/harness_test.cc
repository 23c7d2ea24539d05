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

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracles.h"
#include "qpost/errors.h"
#include "qpost/experiment.h"

namespace qpost {
namespace {

namespace fs = std::filesystem;

fs::path scratch_dir(const std::string &name) {
    fs::path dir = fs::temp_directory_path() / ("qpost_harness_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

ExperimentConfig small_config() {
    ExperimentConfig c;
    c.topology.chimera = {2, 2, 4};
    c.problem_count = 3;
    c.run_counts = {16, 32};
    c.raw_sampler.sweeps = 10;
    c.sampling_sampler.burn_in = 50;
    c.sampling_sampler.thinning = 2;
    c.output_dir = "";
    return c;
}

int run_cli(const std::string &args, const fs::path &log) {
    std::string cmd = std::string(QPOST_CLI) + " " + args + " > " + log.string() + " 2>&1";
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Names, RoundTrip) {
    for (Method m : {Method::best_run, Method::mqc_sequential, Method::mqc_rank, Method::mqc_maxdiff,
                     Method::builtin_pp, Method::sample_persistence, Method::hpe, Method::exact}) {
        EXPECT_EQ(parse_method(to_string(m)), m);
    }
    EXPECT_EQ(parse_mode("sampling"), Mode::sampling);
    EXPECT_THROW(parse_method("qaoa"), ConfigError);
    EXPECT_THROW(parse_mode("reverse"), ConfigError);
}

TEST(Config, DefaultsMatchDeskScale) {
    ExperimentConfig c;
    EXPECT_EQ(c.problem_count, 50u);
    EXPECT_EQ(c.gen_seed, 316u);
    EXPECT_EQ(build_topology(c.topology).vertex_count(), 128u);
    EXPECT_EQ(c.run_counts, (std::vector<std::size_t>{200, 400}));
    EXPECT_NO_THROW(validate(c));
}

TEST(Config, JsonRoundTrip) {
    ExperimentConfig c = small_config();
    c.methods.push_back(Method::hpe);
    c.hpe_scales.scales = {1, 3};
    c.output_dir = "out";
    ExperimentConfig back = config_from_json(config_to_json(c));
    EXPECT_EQ(config_to_json(back).dump(), config_to_json(c).dump());
}

TEST(Config, RejectsUnknownFieldsAndInfeasibleSettings) {
    EXPECT_THROW(config_from_json(io::parse_json(R"({"problems": 3})", "t")), ConfigError);
    EXPECT_THROW(config_from_json(io::parse_json(R"({"run_counts": [10, "x"]})", "t")), ConfigError);
    ExperimentConfig c = small_config();
    c.methods.push_back(Method::exact);
    EXPECT_THROW(validate(c), ConfigError);  // 32 vertices
    c.topology = {"path", {}, 12, 0, 0};
    EXPECT_NO_THROW(validate(c));
    c = small_config();
    c.comparisons.push_back({Method::hpe, Method::mqc_rank});
    EXPECT_THROW(validate(c), ConfigError);
    c = small_config();
    c.run_counts = {};
    EXPECT_THROW(validate(c), ConfigError);
}

TEST(Experiment, OneProblemRowsSumToOne) {
    ExperimentConfig c = small_config();
    c.problem_count = 1;
    c.methods = {Method::mqc_sequential, Method::builtin_pp};
    c.comparisons = {{Method::mqc_sequential, Method::builtin_pp}};
    ExperimentResult r = run_experiment(c);
    ASSERT_FALSE(r.report.rows.empty());
    for (const ComparisonRow &row : r.report.rows) {
        EXPECT_EQ(row.equal + row.less + row.greater, 1u);
    }
}

TEST(Experiment, RowsSumAndMqcDominates) {
    ExperimentConfig c = small_config();
    c.methods = {Method::mqc_sequential, Method::mqc_rank, Method::mqc_maxdiff, Method::builtin_pp,
                 Method::sample_persistence, Method::hpe};
    c.hpe_scales.scales = {1, 2};
    ExperimentResult r = run_experiment(c);
    EXPECT_EQ(r.report.instance_count, 3u);
    EXPECT_EQ(r.report.rows.size(), c.run_counts.size() * (c.comparisons.size() * c.modes.size() + 1));
    for (const ComparisonRow &row : r.report.rows) {
        EXPECT_EQ(row.equal + row.less + row.greater, 3u);
    }
    EXPECT_EQ(r.report.dominance_checks, 3u * 2 * 2 * 3);
    EXPECT_EQ(r.report.dominance_violations, 0u);
    EXPECT_EQ(r.records.size(), 3u * 2 * 2 * 7);
}

TEST(Experiment, ExactOracleBoundsEverything) {
    ExperimentConfig c = small_config();
    c.topology = {"chimera", {2, 1, 4}, 0, 0, 0};
    c.methods = {Method::mqc_sequential, Method::builtin_pp, Method::exact};
    c.comparisons = {{Method::exact, Method::mqc_sequential}};
    ExperimentResult r = run_experiment(c);
    for (const ComparisonRow &row : r.report.rows) {
        if (row.method_a == "exact") {
            EXPECT_EQ(row.greater, 0u);
        }
    }
}

TEST(Experiment, ArtifactsAreByteIdentical) {
    ExperimentConfig c = small_config();
    fs::path first = scratch_dir("det_a");
    fs::path second = scratch_dir("det_b");
    c.output_dir = first.string();
    run_experiment(c);
    c.output_dir = second.string();
    run_experiment(c);
    for (const char *name : {"results.jsonl", "traces.jsonl", "report.txt", "report.jsonl"}) {
        std::string a = slurp(first / name);
        std::string b = slurp(second / name);
        EXPECT_FALSE(a.empty()) << name;
        EXPECT_EQ(a, b) << name;
    }
}

TEST(Report, ResultsRoundTripAndEmptyInput) {
    ExperimentConfig c = small_config();
    c.output_dir = scratch_dir("records").string();
    ExperimentResult r = run_experiment(c);
    auto records = read_results(fs::path(c.output_dir) / "results.jsonl");
    ASSERT_EQ(records.size(), r.records.size());
    ComparisonReport again = build_report(c, records);
    EXPECT_EQ(report_to_jsonl(again), report_to_jsonl(r.report));
    EXPECT_THROW(build_report(c, std::vector<ResultRecord>{}), InputError);
}

TEST(Report, EqualityUsesTolerance) {
    ExperimentConfig c = small_config();
    c.modes = {Mode::raw};
    c.run_counts = {4};
    c.comparisons = {{Method::mqc_sequential, Method::mqc_rank}};
    c.cross_mode.clear();
    std::vector<ResultRecord> recs{
        {0, 4, Mode::raw, Method::mqc_sequential, -1.0, 0},
        {0, 4, Mode::raw, Method::mqc_rank, -1.0 + 5e-10, 0},
        {1, 4, Mode::raw, Method::mqc_sequential, -1.0, 0},
        {1, 4, Mode::raw, Method::mqc_rank, -1.0 + 5e-9, 0},
        {2, 4, Mode::raw, Method::mqc_sequential, -1.0, 0},
        {2, 4, Mode::raw, Method::mqc_rank, -1.1, 0},
    };
    ComparisonReport r = build_report(c, recs);
    ASSERT_EQ(r.rows.size(), 1u);
    EXPECT_EQ(r.rows[0].equal, 1u);
    EXPECT_EQ(r.rows[0].less, 1u);
    EXPECT_EQ(r.rows[0].greater, 1u);
}

TEST(Sensitivity, IdenticalRunsAgree) {
    IsingProblem p = random_problem(chimera_graph({2, 2, 4}), {});
    SpinConfiguration r = random_runs(p, 1, 3).runs[0];
    std::vector<SpinConfiguration> same(16, r);
    auto e = strategy_energies(p, same);
    EXPECT_EQ(e[0], e[1]);
    EXPECT_EQ(e[1], e[2]);
}

TEST(Sensitivity, RowCountIsPairsTimesCountsTimesModes) {
    ExperimentConfig c = small_config();
    SensitivityReport r = sensitivity_report(c);
    EXPECT_EQ(r.table.rows.size(), 3u * c.run_counts.size() * c.modes.size());
    for (const SensitivityFlag &f : r.flagged) {
        EXPECT_FALSE(f.energies[0] == f.energies[1] && f.energies[1] == f.energies[2]);
    }
}

TEST(Bench, ReportsEachSize) {
    std::vector<std::size_t> sizes{8, 16};
    auto points = bench_mqc(chimera_graph({2, 2, 4}), sizes, 1, 3);
    ASSERT_EQ(points.size(), 2u);
    EXPECT_EQ(points[1].run_count, 16u);
    EXPECT_GT(points[1].ratio, 0.0);
}

TEST(Cli, PipelineAndDiagnostics) {
    fs::path dir = scratch_dir("cli");
    fs::path log = dir / "log.txt";
    std::string out = " --out " + dir.string();
    ASSERT_EQ(run_cli("gen --count 1 --seed 5" + out, log), 0) << slurp(log);
    std::string problem = (dir / "problem_000.json").string();
    ASSERT_EQ(run_cli("sample --problem " + problem + " --runs 1 --sweeps 5 --seed 3" + out, log), 0) << slurp(log);
    ASSERT_EQ(run_cli("pp --method mqc_sequential --problem " + problem + " --runs " + (dir / "runs.json").string() +
                          out,
                      log),
              0)
        << slurp(log);
    IsingProblem p = io::read_problem(problem);
    RunSet in = io::read_runs(dir / "runs.json", p);
    RunSet pp = io::read_runs(dir / "pp_mqc_sequential.json", p);
    ASSERT_EQ(pp.size(), 1u);
    EXPECT_EQ(pp.runs[0].spin_vector(), in.runs[0].spin_vector());

    std::ofstream(dir / "empty.jsonl").close();
    EXPECT_NE(run_cli("compare " + (dir / "empty.jsonl").string() + out, log), 0);
    std::string diag = slurp(log);
    EXPECT_EQ(diag.rfind("error: ", 0), 0u) << diag;
    EXPECT_EQ(std::count(diag.begin(), diag.end(), '\n'), 1);

    std::ofstream(dir / "broken.json") << "{\n\"vertex_count\": 2,\n\"h\": [[0, ]]\n}";
    EXPECT_NE(run_cli("sample --problem " + (dir / "broken.json").string() + out, log), 0);
    EXPECT_NE(slurp(log).find("broken.json:3:"), std::string::npos) << slurp(log);
}

TEST(Cli, OutputDirectoryOverrides) {
    fs::path dir = scratch_dir("env");
    fs::path log = dir / "log.txt";
    std::string cmd = "QPOST_OUT_DIR=" + (dir / "from_env").string() + " " + QPOST_CLI + " gen --count 1 > " +
                      log.string() + " 2>&1";
    ASSERT_EQ(std::system(cmd.c_str()), 0) << slurp(log);
    EXPECT_TRUE(fs::exists(dir / "from_env" / "problem_000.json"));
    cmd = "QPOST_OUT_DIR=" + (dir / "from_env2").string() + " " + QPOST_CLI + " gen --count 1 --out " +
          (dir / "from_flag").string() + " > " + log.string() + " 2>&1";
    ASSERT_EQ(std::system(cmd.c_str()), 0) << slurp(log);
    EXPECT_TRUE(fs::exists(dir / "from_flag" / "problem_000.json"));
    EXPECT_FALSE(fs::exists(dir / "from_env2"));
}

}  // namespace
}  // namespace qpost
