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
#include <optional>
#include <span>
#include <vector>

#include "qpost/ising.h"
#include "qpost/samplers.h"

namespace qpost {

inline constexpr std::size_t kDefaultWidthCap = 4;
/// Largest elimination width optimize_subgraph will tabulate (2^(w+1) entries).
inline constexpr std::size_t kMaxTabulatedWidth = 24;

struct EliminationOrder {
    std::vector<Vertex> order;
    /// Largest neighbor count at elimination time (max clique size - 1).
    std::size_t width = 0;
};

/// Min-degree elimination of the subgraph induced by `vertices`; ties go to
/// the smallest vertex index.
EliminationOrder min_degree_order(const IsingProblem &problem, std::span<const Vertex> vertices);

/// Width of the subgraph induced by `vertices` when eliminated in `order`.
std::size_t elimination_width(const IsingProblem &problem, std::span<const Vertex> order);

struct Subgraph {
    std::vector<Vertex> vertices;  // ascending
    std::vector<Vertex> elimination_order;
    std::size_t width = 0;
};

/// Cover the problem graph with induced subgraphs whose min-degree width is
/// at most `width_cap`. Regions are seeded at the smallest uncovered vertex
/// and grown one neighbor at a time (most links into the region first, then
/// vertices no earlier region covers, then smallest index) until the next
/// neighbor would push the width over the cap. Regions may overlap.
std::vector<Subgraph> decompose_low_treewidth(const IsingProblem &problem, std::size_t width_cap);

/// Reassign the subgraph's spins to the exact minimum of F conditioned on all
/// other spins (min-sum variable elimination along the stored order; ties
/// resolve to +1). Throws ParameterError if the order's width exceeds
/// `width_cap`. Never returns a configuration with higher energy.
SpinConfiguration optimize_subgraph(
    const IsingProblem &problem, const SpinConfiguration &config, const Subgraph &sub,
    std::size_t width_cap = kDefaultWidthCap);

/// Local-optimization post-processing: every run visits every subgraph once,
/// in order; with `repeat_until_stable` the pass repeats until the run's
/// energy stops improving.
RunSet builtin_opt_pp(
    const IsingProblem &problem, const RunSet &runset, std::span<const Subgraph> subgraphs,
    std::size_t width_cap = kDefaultWidthCap, bool repeat_until_stable = false);
RunSet builtin_opt_pp(
    const IsingProblem &problem, const RunSet &runset, std::size_t width_cap = kDefaultWidthCap,
    bool repeat_until_stable = false);

/// Spins pinned to constants with their couplings folded into the remaining
/// (free) vertices' linear terms.
struct FixedAssignment {
    /// Per original vertex: the pinned value, or nullopt when free.
    std::vector<std::optional<Spin>> assignments;
    /// Original index of each reduced-problem vertex.
    std::vector<Vertex> free_vertices;
    IsingProblem reduced_problem;
    /// Energy of the fixed part: its linear terms and fixed-fixed couplings.
    double offset = 0.0;

    std::size_t fixed_count() const { return assignments.size() - free_vertices.size(); }
    /// Full-length spin vector from reduced-problem spins.
    std::vector<Spin> assemble(std::span<const Spin> free_spins) const;
};

/// Pin the given spins: h'_a = h_a + sum_{b pinned} J_ab s_b for each free a;
/// only free-free couplings survive.
FixedAssignment fix_spins(const IsingProblem &problem, std::span<const std::optional<Spin>> assignments);

/// Pin vertex a to s when at least `threshold` of the runs have s_a = s.
/// threshold must lie in (0.5, 1]; at least two runs are required.
FixedAssignment persistence_fix(const IsingProblem &problem, const RunSet &runset, double threshold);

inline constexpr double kDefaultPersistenceThreshold = 0.9;
inline constexpr std::size_t kDefaultPersistenceRounds = 3;

struct PersistenceResult {
    SpinConfiguration best;
    /// Pinned vertex count after each fixing step.
    std::vector<std::size_t> fixed_per_round;
};

/// Sample, pin persistent spins, re-sample the reduced problem; repeat for
/// `rounds` samplings or until every spin is pinned. Returns the lowest-energy
/// full configuration seen. Round r > 0 samples with derive_seed(seed, r).
PersistenceResult sample_persistence(
    const IsingProblem &problem, SamplerKind kind, const SamplerParams &params,
    double threshold = kDefaultPersistenceThreshold, std::size_t rounds = kDefaultPersistenceRounds);

}  // namespace qpost
