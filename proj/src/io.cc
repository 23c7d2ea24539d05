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

#include "qpost/io.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qpost/errors.h"

namespace qpost::io {

namespace {

const Json &field(const Json &obj, const char *name, const std::string &where) {
    if (!obj.is_object()) {
        throw ParseError("field '" + where + "': expected an object");
    }
    auto it = obj.find(name);
    if (it == obj.end()) {
        throw ParseError("field '" + where + "': missing '" + name + "'");
    }
    return *it;
}

double as_number(const Json &v, const std::string &where) {
    if (!v.is_number()) {
        throw ParseError("field '" + where + "': expected a number");
    }
    return v.get<double>();
}

std::uint64_t as_uint(const Json &v, const std::string &where) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
        throw ParseError("field '" + where + "': expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

const Json &as_array(const Json &v, const std::string &where) {
    if (!v.is_array()) {
        throw ParseError("field '" + where + "': expected an array");
    }
    return v;
}

Vertex as_vertex(const Json &v, const std::string &where) {
    std::uint64_t x = as_uint(v, where);
    if (x > std::numeric_limits<Vertex>::max()) {
        throw ParseError("field '" + where + "': vertex index too large");
    }
    return static_cast<Vertex>(x);
}

}  // namespace

std::string format_spins(std::span<const Spin> spins) {
    std::string out(spins.size(), '+');
    for (std::size_t i = 0; i < spins.size(); ++i) {
        if (spins[i] < 0) {
            out[i] = '-';
        }
    }
    return out;
}

std::vector<Spin> parse_spins(std::string_view text) {
    std::vector<Spin> out(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '+') {
            out[i] = 1;
        } else if (text[i] == '-') {
            out[i] = -1;
        } else {
            throw ParseError("spin string: unexpected character at position " + std::to_string(i));
        }
    }
    return out;
}

Json problem_to_json(const IsingProblem &problem) {
    Json doc;
    doc["vertex_count"] = problem.vertex_count();
    Json h = Json::array();
    for (std::size_t v = 0; v < problem.vertex_count(); ++v) {
        h.push_back(Json::array({v, problem.h(static_cast<Vertex>(v))}));
    }
    doc["h"] = std::move(h);
    Json j = Json::array();
    for (const Coupling &c : problem.couplings()) {
        j.push_back(Json::array({c.a, c.b, c.value}));
    }
    doc["J"] = std::move(j);
    return doc;
}

IsingProblem problem_from_json(const Json &doc) {
    std::size_t n = as_uint(field(doc, "vertex_count", "problem"), "vertex_count");
    std::vector<std::pair<Vertex, double>> linear;
    const Json &h = as_array(field(doc, "h", "problem"), "h");
    for (std::size_t i = 0; i < h.size(); ++i) {
        std::string where = "h[" + std::to_string(i) + "]";
        if (!h[i].is_array() || h[i].size() != 2) {
            throw ParseError("field '" + where + "': expected [vertex, value]");
        }
        linear.emplace_back(as_vertex(h[i][0], where + "[0]"), as_number(h[i][1], where + "[1]"));
    }
    std::vector<Coupling> couplings;
    const Json &j = as_array(field(doc, "J", "problem"), "J");
    for (std::size_t i = 0; i < j.size(); ++i) {
        std::string where = "J[" + std::to_string(i) + "]";
        if (!j[i].is_array() || j[i].size() != 3) {
            throw ParseError("field '" + where + "': expected [a, b, value]");
        }
        couplings.push_back(
            {as_vertex(j[i][0], where + "[0]"), as_vertex(j[i][1], where + "[1]"), as_number(j[i][2], where + "[2]")});
    }
    try {
        return IsingProblem::from_sparse(n, linear, std::move(couplings));
    } catch (const Error &e) {
        throw ParseError(std::string("problem: ") + e.what());
    }
}

Json graph_to_json(const Graph &graph) {
    std::vector<Coupling> couplings;
    for (const Edge &e : graph.edges()) {
        couplings.push_back({e.a, e.b, 0.0});
    }
    return problem_to_json(
        IsingProblem(graph.vertex_count(), std::vector<double>(graph.vertex_count(), 0.0), std::move(couplings)));
}

Json sampler_params_to_json(const SamplerParams &params) {
    Json doc;
    doc["num_runs"] = params.num_runs;
    doc["sweeps"] = params.sweeps;
    doc["beta_start"] = params.beta_schedule.beta_start;
    doc["beta_end"] = params.beta_schedule.beta_end;
    doc["interpolation"] =
        params.beta_schedule.interpolation == Interpolation::geometric ? "geometric" : "linear";
    if (params.fixed_beta) {
        doc["fixed_beta"] = *params.fixed_beta;
    } else {
        doc["fixed_beta"] = nullptr;
    }
    doc["burn_in"] = params.burn_in;
    doc["thinning"] = params.thinning;
    doc["seed"] = params.seed;
    return doc;
}

SamplerParams sampler_params_from_json(const Json &doc, const SamplerParams &defaults) {
    if (!doc.is_object()) {
        throw ParseError("sampler params: expected an object");
    }
    SamplerParams p = defaults;
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        const std::string &key = it.key();
        const Json &v = it.value();
        if (key == "num_runs") {
            p.num_runs = as_uint(v, key);
        } else if (key == "sweeps") {
            p.sweeps = as_uint(v, key);
        } else if (key == "beta_start") {
            p.beta_schedule.beta_start = as_number(v, key);
        } else if (key == "beta_end") {
            p.beta_schedule.beta_end = as_number(v, key);
        } else if (key == "interpolation") {
            if (v == "geometric") {
                p.beta_schedule.interpolation = Interpolation::geometric;
            } else if (v == "linear") {
                p.beta_schedule.interpolation = Interpolation::linear;
            } else {
                throw ParseError("field 'interpolation': expected \"geometric\" or \"linear\"");
            }
        } else if (key == "fixed_beta") {
            if (v.is_null()) {
                p.fixed_beta.reset();
            } else {
                p.fixed_beta = as_number(v, key);
            }
        } else if (key == "burn_in") {
            p.burn_in = as_uint(v, key);
        } else if (key == "thinning") {
            p.thinning = as_uint(v, key);
        } else if (key == "seed") {
            p.seed = as_uint(v, key);
        } else {
            throw ParseError("sampler params: unknown field '" + key + "'");
        }
    }
    return p;
}

Json runset_to_json(const RunSet &runs) {
    Json doc;
    doc["problem_id"] = runs.problem_id;
    Json provenance;
    provenance["sampler"] = runs.provenance.sampler;
    provenance["seed"] = runs.provenance.params.seed;
    provenance["params"] = sampler_params_to_json(runs.provenance.params);
    doc["provenance"] = std::move(provenance);
    Json list = Json::array();
    for (const SpinConfiguration &run : runs.runs) {
        Json record;
        record["spins"] = format_spins(run.spins());
        record["energy"] = run.energy();
        list.push_back(std::move(record));
    }
    doc["runs"] = std::move(list);
    return doc;
}

RunSet runset_from_json(const Json &doc, const IsingProblem &problem) {
    RunSet out;
    const Json *list = &doc;
    if (doc.is_object()) {
        if (auto it = doc.find("problem_id"); it != doc.end()) {
            if (!it->is_string()) {
                throw ParseError("field 'problem_id': expected a string");
            }
            out.problem_id = it->get<std::string>();
        }
        if (auto it = doc.find("provenance"); it != doc.end()) {
            const Json &prov = *it;
            if (auto s = prov.find("sampler"); s != prov.end() && s->is_string()) {
                out.provenance.sampler = s->get<std::string>();
            }
            if (auto p = prov.find("params"); p != prov.end()) {
                out.provenance.params = sampler_params_from_json(*p);
            }
        }
        list = &field(doc, "runs", "runs file");
    }
    as_array(*list, "runs");
    for (std::size_t i = 0; i < list->size(); ++i) {
        std::string where = "runs[" + std::to_string(i) + "]";
        const Json &record = (*list)[i];
        const Json &spins = field(record, "spins", where);
        if (!spins.is_string()) {
            throw ParseError("field '" + where + ".spins': expected a string");
        }
        std::vector<Spin> values;
        try {
            values = parse_spins(spins.get<std::string>());
        } catch (const ParseError &e) {
            throw ParseError("field '" + where + ".spins': " + e.what());
        }
        if (values.size() != problem.vertex_count()) {
            throw ParseError(
                "field '" + where + ".spins': " + std::to_string(values.size()) + " spins, problem has " +
                std::to_string(problem.vertex_count()));
        }
        SpinConfiguration run(problem, std::move(values));
        if (auto e = record.find("energy"); e != record.end()) {
            double stored = as_number(*e, where + ".energy");
            if (std::abs(stored - run.energy()) > kEnergyTolerance) {
                throw ParseError("field '" + where + ".energy': does not match the problem");
            }
        }
        out.runs.push_back(std::move(run));
    }
    return out;
}

Json trace_to_json(const ReductionTrace &trace) {
    Json levels = Json::array();
    for (const LevelRecord &level : trace.levels) {
        Json l;
        l["input_size"] = level.input_size;
        Json pairs = Json::array();
        for (const PairRecord &pair : level.pairs) {
            Json p;
            p["pair"] = Json::array({pair.first, pair.second});
            p["energy"] = pair.energy;
            Json tunnels = Json::array();
            for (const TunnelDecision &t : pair.tunnels) {
                tunnels.push_back(Json::array({t.smallest_vertex, t.size, t.contribution_first,
                                               t.contribution_second, t.chosen == Side::first ? 1 : 2}));
            }
            p["tunnels"] = std::move(tunnels);
            pairs.push_back(std::move(p));
        }
        l["pairs"] = std::move(pairs);
        if (level.carried) {
            l["carried"] = *level.carried;
        } else {
            l["carried"] = nullptr;
        }
        levels.push_back(std::move(l));
    }
    Json doc;
    doc["levels"] = std::move(levels);
    return doc;
}

Json decomposition_to_json(std::span<const Subgraph> subgraphs) {
    Json list = Json::array();
    for (const Subgraph &sub : subgraphs) {
        Json s;
        s["vertices"] = sub.vertices;
        s["elimination_order"] = sub.elimination_order;
        s["width"] = sub.width;
        list.push_back(std::move(s));
    }
    return list;
}

Json hpe_report_to_json(const HpeReport &report) {
    Json doc;
    doc["scale_best_energies"] = report.scale_best_energies;
    doc["group_energies"] = report.group_energies;
    doc["input_min_energy"] = report.input_min_energy;
    doc["final_energy"] = report.result.energy();
    doc["final_spins"] = format_spins(report.result.spins());
    return doc;
}

Json parse_json(std::string_view text, const std::string &source) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        std::size_t offset = std::min<std::size_t>(e.byte, text.size());
        std::size_t line = 1;
        std::size_t column = 1;
        for (std::size_t i = 0; i + 1 < offset; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw ParseError(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": malformed JSON");
    }
}

Json read_json_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_json(buffer.str(), path.string());
}

void write_text_file(const std::filesystem::path &path, std::string_view text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) {
        throw IoError("failed writing " + path.string());
    }
}

void write_json_file(const std::filesystem::path &path, const Json &doc) {
    write_text_file(path, doc.dump(1) + "\n");
}

IsingProblem read_problem(const std::filesystem::path &path) {
    Json doc = read_json_file(path);
    try {
        return problem_from_json(doc);
    } catch (const ParseError &e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void write_problem(const std::filesystem::path &path, const IsingProblem &problem) {
    write_json_file(path, problem_to_json(problem));
}

RunSet read_runs(const std::filesystem::path &path, const IsingProblem &problem) {
    Json doc = read_json_file(path);
    try {
        return runset_from_json(doc, problem);
    } catch (const Error &e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void write_runs(const std::filesystem::path &path, const RunSet &runs) {
    write_json_file(path, runset_to_json(runs));
}

}  // namespace qpost::io
