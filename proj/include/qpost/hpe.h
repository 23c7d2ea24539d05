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

#include <cstddef>
#include <span>
#include <vector>

#include "qpost/ising.h"
#include "qpost/mqc.h"
#include "qpost/samplers.h"
#include "qpost/topology.h"

namespace qpost {

/// Limited coefficient precision: clip to the interval, then snap to the
/// nearest of `levels` evenly spaced points (endpoints included).
struct PrecisionModel {
    Interval h_clip{-2.0, 2.0};
    Interval j_clip{-1.0, 1.0};
    std::size_t levels = 17;
};

/// Nearest grid point of `levels` evenly spaced points on `clip` (after
/// clipping). Halfway cases round away from the lower endpoint.
double quantize(double value, const Interval &clip, std::size_t levels);

struct ScaleSet {
    std::vector<double> scales{1.0, 2.0, 4.0, 8.0};
    std::size_t runs_per_scale = 16;
};

/// Every h and J multiplied by l > 0.
IsingProblem scale_problem(const IsingProblem &problem, double l);

/// Quantize every coefficient under `model`. Couplings that round to zero are
/// kept, so the graph is unchanged.
IsingProblem quantize_problem(const IsingProblem &problem, const PrecisionModel &model);

struct HpeReport {
    SpinConfiguration result;
    /// Best full-precision energy among each scale's runs, in scale order.
    std::vector<double> scale_best_energies;
    /// Full-precision energy of each per-index group reduction.
    std::vector<double> group_energies;
    /// Lowest full-precision energy over all sampled runs.
    double input_min_energy = 0.0;
};

/// Aggregation stage: group i holds run i of every scale (in scale order) and
/// is reduced to one run; the group results are then reduced to the final
/// run. All tunnel decisions use the full-precision `problem`.
HpeReport hpe_aggregate(
    const IsingProblem &problem, std::span<const RunSet> per_scale,
    PairingStrategy strategy = PairingStrategy::sequential);

/// High Precision Enhancement. For each scale l, samples runs_per_scale runs
/// of quantize(scale(problem, l)) with seed derive_seed(params.seed, k) for the
/// k-th scale, then aggregates with hpe_aggregate.
HpeReport hpe(
    const IsingProblem &problem, const ScaleSet &scales, const PrecisionModel &model, SamplerKind kind,
    const SamplerParams &params, PairingStrategy strategy = PairingStrategy::sequential);

}  // namespace qpost
