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

// qpost command-line driver.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qpost/altpp.h"
#include "qpost/errors.h"
#include "qpost/experiment.h"
#include "qpost/io.h"
#include "qpost/mqc.h"
#include "qpost/random.h"

namespace fs = std::filesystem;
using namespace qpost;

namespace {

struct Common {
    std::optional<std::uint64_t> seed;
    std::string config_path;
    std::string out;
};

void add_common(CLI::App *cmd, Common &common) {
    cmd->add_option("--seed", common.seed, "Master seed for this stage");
    cmd->add_option("--config", common.config_path, "Experiment config (JSON)")->check(CLI::ExistingFile);
    cmd->add_option("--out", common.out, "Output directory");
}

ExperimentConfig load_config(const Common &common) {
    ExperimentConfig config = common.config_path.empty() ? ExperimentConfig{} : read_config(common.config_path);
    if (const char *env = std::getenv("QPOST_OUT_DIR"); env != nullptr && *env != '\0') {
        config.output_dir = env;
    }
    if (!common.out.empty()) {
        config.output_dir = common.out;
    }
    return config;
}

fs::path output_dir(const ExperimentConfig &config) {
    fs::path dir = config.output_dir.empty() ? fs::path(".") : fs::path(config.output_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw IoError("cannot create output directory " + dir.string());
    }
    return dir;
}

std::string problem_name(std::size_t i) {
    std::ostringstream name;
    name << "problem_" << std::setw(3) << std::setfill('0') << i << ".json";
    return name.str();
}

void cmd_gen(const Common &common, std::size_t count) {
    ExperimentConfig config = load_config(common);
    if (common.seed) {
        config.gen_seed = *common.seed;
    }
    Graph graph = build_topology(config.topology);
    fs::path dir = output_dir(config);
    for (std::size_t p = 0; p < count; ++p) {
        ProblemGenSpec spec{config.h_range, config.j_range, derive_seed(config.gen_seed, p)};
        fs::path path = dir / problem_name(p);
        io::write_problem(path, random_problem(graph, spec));
        std::cout << path.string() << "\n";
    }
}

struct SampleArgs {
    std::string problem;
    std::string sampler = "anneal";
    std::optional<std::size_t> runs;
    std::optional<std::size_t> sweeps;
    std::optional<double> beta;
};

void cmd_sample(const Common &common, const SampleArgs &args) {
    ExperimentConfig config = load_config(common);
    SamplerKind kind = parse_sampler_kind(args.sampler);
    SamplerParams params = kind == SamplerKind::gibbs ? config.sampling_sampler : config.raw_sampler;
    if (common.seed) {
        params.seed = *common.seed;
    }
    if (args.runs) {
        params.num_runs = *args.runs;
    }
    if (args.sweeps) {
        params.sweeps = *args.sweeps;
    }
    if (args.beta) {
        params.fixed_beta = *args.beta;
    }
    IsingProblem problem = io::read_problem(args.problem);
    RunSet runs = sample(problem, kind, params);
    runs.problem_id = fs::path(args.problem).stem().string();
    fs::path path = output_dir(config) / "runs.json";
    io::write_runs(path, runs);
    std::cout << path.string() << ": " << runs.size() << " runs, best energy " << std::setprecision(12)
              << runs.best().energy() << "\n";
}

struct PpArgs {
    std::string problem;
    std::string runs;
    std::string method = "mqc_sequential";
    bool repeat = false;
};

void cmd_pp(const Common &common, const PpArgs &args) {
    ExperimentConfig config = load_config(common);
    IsingProblem problem = io::read_problem(args.problem);
    RunSet input = io::read_runs(args.runs, problem);
    if (input.empty()) {
        throw InputError(args.runs + ": no runs to post-process");
    }
    Method method = parse_method(args.method);
    fs::path dir = output_dir(config);
    RunSet output;
    output.problem_id = input.problem_id;
    output.provenance = input.provenance;
    switch (method) {
        case Method::best_run:
            output.runs = {input.best()};
            break;
        case Method::mqc_sequential:
        case Method::mqc_rank:
        case Method::mqc_maxdiff: {
            PairingStrategy strategy = method == Method::mqc_sequential ? PairingStrategy::sequential
                                       : method == Method::mqc_rank     ? PairingStrategy::rank_order
                                                                        : PairingStrategy::max_difference;
            Reduction red = mqc_reduce(problem, input, strategy);
            output.runs = {red.result};
            io::write_json_file(dir / ("pp_" + args.method + "_trace.json"), io::trace_to_json(red.trace));
            break;
        }
        case Method::builtin_pp: {
            std::vector<Subgraph> subs = decompose_low_treewidth(problem, config.width_cap);
            io::write_json_file(dir / "decomposition.json", io::decomposition_to_json(subs));
            output = builtin_opt_pp(problem, input, subs, config.width_cap, args.repeat);
            break;
        }
        default:
            throw ConfigError(
                "method " + args.method + " draws its own samples; run it through 'experiment' instead");
    }
    fs::path path = dir / ("pp_" + args.method + ".json");
    io::write_runs(path, output);
    std::cout << path.string() << ": best energy " << std::setprecision(12) << output.best().energy()
              << " (input best " << input.best().energy() << ")\n";
}

void cmd_compare(const Common &common, std::vector<std::string> results) {
    ExperimentConfig config = load_config(common);
    if (results.empty()) {
        results.push_back((fs::path(config.output_dir) / "results.jsonl").string());
    }
    std::vector<ResultRecord> records;
    for (const std::string &path : results) {
        auto part = read_results(path);
        records.insert(records.end(), part.begin(), part.end());
    }
    if (records.empty()) {
        throw InputError("no result records in the given files");
    }
    // Tabulate what the records actually hold.
    config.run_counts.clear();
    config.modes.clear();
    for (const ResultRecord &r : records) {
        if (std::find(config.run_counts.begin(), config.run_counts.end(), r.run_count) == config.run_counts.end()) {
            config.run_counts.push_back(r.run_count);
        }
        if (std::find(config.modes.begin(), config.modes.end(), r.mode) == config.modes.end()) {
            config.modes.push_back(r.mode);
        }
    }
    std::sort(config.run_counts.begin(), config.run_counts.end());
    std::sort(config.modes.begin(), config.modes.end());
    ComparisonReport report = build_report(config, records);
    fs::path dir = output_dir(config);
    std::string text = format_report(report);
    io::write_text_file(dir / "report.txt", text);
    io::write_text_file(dir / "report.jsonl", report_to_jsonl(report));
    std::cout << text;
}

void cmd_experiment(const Common &common) {
    ExperimentConfig config = load_config(common);
    if (common.seed) {
        config.gen_seed = *common.seed;
    }
    if (config.output_dir.empty()) {
        config.output_dir = ".";
    }
    ExperimentResult result = run_experiment(config);
    std::cout << format_report(result.report);
}

void cmd_sensitivity(const Common &common) {
    ExperimentConfig config = load_config(common);
    if (common.seed) {
        config.gen_seed = *common.seed;
    }
    if (config.output_dir.empty()) {
        config.output_dir = ".";
    }
    SensitivityReport report = sensitivity_report(config);
    std::cout << format_report(report.table) << "\ninstances where strategies differ: " << report.flagged.size()
              << "\n";
}

void cmd_bench(const Common &common, std::vector<std::size_t> sizes, std::size_t repeats) {
    ExperimentConfig config = load_config(common);
    if (common.config_path.empty()) {
        config.topology = TopologySpec{};  // Chimera (4,4,4)
    }
    Graph graph = build_topology(config.topology);
    std::uint64_t seed = common.seed.value_or(config.gen_seed);
    std::vector<BenchPoint> points = bench_mqc(graph, sizes, seed, repeats);
    io::Json doc = io::Json::array();
    std::cout << std::setw(8) << "runs" << std::setw(14) << "seconds" << std::setw(10) << "ratio" << "\n";
    for (const BenchPoint &p : points) {
        std::cout << std::setw(8) << p.run_count << std::setw(14) << std::fixed << std::setprecision(6)
                  << p.seconds << std::setw(10) << std::setprecision(3) << p.ratio << "\n";
        doc.push_back({{"run_count", p.run_count}, {"seconds", p.seconds}, {"ratio", p.ratio}});
    }
    io::write_json_file(output_dir(config) / "bench.json", doc);
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"qpost: classical post-processing for Ising optimizer runs"};
    app.require_subcommand(1);

    Common common;

    std::size_t gen_count = 1;
    auto *gen = app.add_subcommand("gen", "Generate random problems on the configured topology");
    add_common(gen, common);
    gen->add_option("--count", gen_count, "Number of problems")->check(CLI::PositiveNumber);

    SampleArgs sample_args;
    auto *samp = app.add_subcommand("sample", "Sample runs for a problem file");
    add_common(samp, common);
    samp->add_option("--problem", sample_args.problem, "Problem file")->required()->check(CLI::ExistingFile);
    samp->add_option("--sampler", sample_args.sampler, "anneal | gibbs | random");
    samp->add_option("--runs", sample_args.runs, "Number of runs");
    samp->add_option("--sweeps", sample_args.sweeps, "Annealing sweeps per run");
    samp->add_option("--beta", sample_args.beta, "Gibbs inverse temperature");

    PpArgs pp_args;
    auto *pp = app.add_subcommand("pp", "Apply one post-processor to a run file");
    add_common(pp, common);
    pp->add_option("--problem", pp_args.problem, "Problem file")->required()->check(CLI::ExistingFile);
    pp->add_option("--runs", pp_args.runs, "Run file")->required()->check(CLI::ExistingFile);
    pp->add_option("--method", pp_args.method, "best_run | mqc_sequential | mqc_rank | mqc_maxdiff | builtin_pp");
    pp->add_flag("--repeat", pp_args.repeat, "builtin_pp: repeat passes until no improvement");

    std::vector<std::string> result_files;
    auto *cmp = app.add_subcommand("compare", "Build comparison tables from results files");
    add_common(cmp, common);
    cmp->add_option("results", result_files, "results.jsonl files (default: <out>/results.jsonl)");

    std::vector<std::size_t> bench_sizes{256, 512, 1024, 2048};
    std::size_t bench_repeats = 5;
    auto *bench = app.add_subcommand("bench", "Time sequential MQC reduction against run count");
    add_common(bench, common);
    bench->add_option("--sizes", bench_sizes, "Run counts to time");
    bench->add_option("--repeats", bench_repeats, "Repetitions per size (median reported)")
        ->check(CLI::PositiveNumber);

    auto *exp = app.add_subcommand("experiment", "Run the full comparison experiment");
    add_common(exp, common);
    auto *sens = app.add_subcommand("sensitivity", "Compare pairing strategies on identical run sets");
    add_common(sens, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e);
    }

    try {
        if (*gen) {
            cmd_gen(common, gen_count);
        } else if (*samp) {
            cmd_sample(common, sample_args);
        } else if (*pp) {
            cmd_pp(common, pp_args);
        } else if (*cmp) {
            cmd_compare(common, result_files);
        } else if (*bench) {
            cmd_bench(common, bench_sizes, bench_repeats);
        } else if (*exp) {
            cmd_experiment(common);
        } else if (*sens) {
            cmd_sensitivity(common);
        }
    } catch (const std::exception &e) {
        std::string msg = e.what();
        std::replace(msg.begin(), msg.end(), '\n', ' ');
        std::cerr << "error: " << msg << "\n";
        return 1;
    }
    return 0;
}
