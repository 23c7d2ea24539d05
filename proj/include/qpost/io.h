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

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qpost/altpp.h"
#include "qpost/graph.h"
#include "qpost/hpe.h"
#include "qpost/ising.h"
#include "qpost/mqc.h"
#include "qpost/samplers.h"

namespace qpost::io {

using Json = nlohmann::ordered_json;

/// '+' / '-' per spin.
std::string format_spins(std::span<const Spin> spins);
/// Inverse of format_spins; throws ParseError on any other character.
std::vector<Spin> parse_spins(std::string_view text);

/// {"vertex_count": n, "h": [[v, value], ...], "J": [[a, b, value], ...]}
Json problem_to_json(const IsingProblem &problem);
IsingProblem problem_from_json(const Json &doc);
/// Topology-only export in the problem format (all coefficients zero).
Json graph_to_json(const Graph &graph);

Json sampler_params_to_json(const SamplerParams &params);
SamplerParams sampler_params_from_json(const Json &doc, const SamplerParams &defaults = {});

/// {"problem_id": ..., "provenance": {...}, "runs": [{"spins": "+-..", "energy": e}, ...]}
Json runset_to_json(const RunSet &runs);
/// Accepts the object form above or a bare array of run records. Spins are
/// validated against `problem`, and every stored energy must match a fresh
/// evaluation within kEnergyTolerance.
RunSet runset_from_json(const Json &doc, const IsingProblem &problem);

Json trace_to_json(const ReductionTrace &trace);
Json decomposition_to_json(std::span<const Subgraph> subgraphs);
Json hpe_report_to_json(const HpeReport &report);

/// Parse JSON text; syntax errors become ParseError naming the line and column.
Json parse_json(std::string_view text, const std::string &source);
Json read_json_file(const std::filesystem::path &path);
/// Writes `text` atomically enough for our purposes; throws IoError.
void write_text_file(const std::filesystem::path &path, std::string_view text);
void write_json_file(const std::filesystem::path &path, const Json &doc);

IsingProblem read_problem(const std::filesystem::path &path);
void write_problem(const std::filesystem::path &path, const IsingProblem &problem);
RunSet read_runs(const std::filesystem::path &path, const IsingProblem &problem);
void write_runs(const std::filesystem::path &path, const RunSet &runs);

}  // namespace qpost::io
