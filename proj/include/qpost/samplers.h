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
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qpost/ising.h"

namespace qpost {

enum class Interpolation { geometric, linear };

/// Inverse-temperature ramp used by the annealer, one value per sweep.
struct BetaSchedule {
    double beta_start = 0.1;
    double beta_end = 5.0;
    Interpolation interpolation = Interpolation::geometric;

    /// Beta for sweep `sweep` of `sweeps` (first sweep at beta_start, last at beta_end).
    double at(std::size_t sweep, std::size_t sweeps) const;

    friend bool operator==(const BetaSchedule &, const BetaSchedule &) = default;
};

struct SamplerParams {
    std::size_t num_runs = 100;
    std::size_t sweeps = 1000;
    BetaSchedule beta_schedule;
    /// Inverse temperature of the Gibbs chain; required by gibbs_sample.
    std::optional<double> fixed_beta;
    /// Gibbs chain sweeps discarded before the first sample.
    std::size_t burn_in = 1000;
    /// Gibbs chain sweeps between consecutive samples.
    std::size_t thinning = 10;
    std::uint64_t seed = 0;

    friend bool operator==(const SamplerParams &, const SamplerParams &) = default;
};

enum class SamplerKind { anneal, gibbs, random };

std::string_view to_string(SamplerKind kind);
/// Accepts "anneal"/"sa", "gibbs", "random". Throws ParameterError otherwise.
SamplerKind parse_sampler_kind(std::string_view name);

struct Provenance {
    std::string sampler;
    SamplerParams params;

    friend bool operator==(const Provenance &, const Provenance &) = default;
};

/// Ordered runs for a single problem.
struct RunSet {
    std::vector<SpinConfiguration> runs;
    std::string problem_id;
    Provenance provenance;

    std::size_t size() const { return runs.size(); }
    bool empty() const { return runs.empty(); }
    /// Lowest-energy run (first one on ties). Throws InputError when empty.
    const SpinConfiguration &best() const;

    friend bool operator==(const RunSet &, const RunSet &) = default;
};

/// Single-spin-flip Metropolis annealing. Run i starts from a uniformly random
/// state drawn from derive_seed(seed, i) and performs `sweeps` in-order sweeps
/// over all vertices, with beta following the schedule.
RunSet simulated_anneal(const IsingProblem &problem, const SamplerParams &params);

/// One heat-bath (single-site Gibbs) chain at fixed_beta targeting
/// P(s) ~ exp(-beta F(s)). After burn_in sweeps, a state is recorded every
/// `thinning` sweeps until num_runs states are collected.
RunSet gibbs_sample(const IsingProblem &problem, const SamplerParams &params);

/// `count` i.i.d. uniform configurations; run i uses derive_seed(seed, i).
RunSet random_runs(const IsingProblem &problem, std::size_t count, std::uint64_t seed);

/// Dispatches on `kind`; the random sampler uses params.num_runs and params.seed.
RunSet sample(const IsingProblem &problem, SamplerKind kind, const SamplerParams &params);

inline constexpr std::size_t kMaxExactVertices = 25;

struct GroundState {
    SpinConfiguration config;
    double energy = 0.0;
};

/// Exhaustive minimum over all 2^n states (n <= kMaxExactVertices). Among
/// states within kEnergyTolerance of the minimum, the lexicographically
/// smallest spin vector (-1 < +1) is returned.
GroundState exact_ground_state(const IsingProblem &problem);

}  // namespace qpost
