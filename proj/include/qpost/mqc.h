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
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "qpost/ising.h"
#include "qpost/samplers.h"

namespace qpost {

/// How runs are paired at each reduction level.
///   sequential      (0,1), (2,3), ... in current order.
///   rank_order      stable ascending-energy sort, then adjacent pairs.
///   max_difference  greedily take the remaining pair with the largest
///                   Hamming distance, ties to the smallest (i, j).
enum class PairingStrategy { sequential, rank_order, max_difference };

std::string_view to_string(PairingStrategy strategy);
/// Accepts the enum names plus "rank" and "maxdiff".
PairingStrategy parse_pairing_strategy(std::string_view name);

std::size_t hamming_distance(std::span<const Spin> x, std::span<const Spin> y);
std::size_t hamming_distance(const SpinConfiguration &x, const SpinConfiguration &y);

struct Pairing {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    /// The single unpaired index when the input size is odd.
    std::optional<std::size_t> leftover;
};

/// Throws InputError on an empty input.
Pairing pair_runs(std::span<const SpinConfiguration> runs, PairingStrategy strategy);
Pairing pair_runs(const RunSet &runset, PairingStrategy strategy);

enum class Side : std::uint8_t { first, second };

/// One tunnel of a merged pair: where it is, what each side contributed,
/// and which side was adopted.
struct TunnelDecision {
    Vertex smallest_vertex = 0;
    std::size_t size = 0;
    double contribution_first = 0.0;
    double contribution_second = 0.0;
    Side chosen = Side::first;
};

struct PairMerge {
    SpinConfiguration result;
    std::vector<TunnelDecision> tunnels;
};

/// Merge two runs: keep the spins they agree on, split the disagreement set
/// into tunnels (connected components), and for each tunnel adopt the side
/// with the strictly lower tunnel contribution, preferring `first` on ties.
PairMerge mqc_merge(const IsingProblem &problem, const SpinConfiguration &first, const SpinConfiguration &second);
SpinConfiguration mqc_pair(const IsingProblem &problem, const SpinConfiguration &first, const SpinConfiguration &second);

struct PairRecord {
    std::size_t first = 0;
    std::size_t second = 0;
    std::vector<TunnelDecision> tunnels;
    double energy = 0.0;
};

struct LevelRecord {
    std::size_t input_size = 0;
    std::vector<PairRecord> pairs;
    /// Index (into this level's input) of the run carried unchanged.
    std::optional<std::size_t> carried;
};

struct ReductionTrace {
    std::vector<LevelRecord> levels;
};

struct Reduction {
    SpinConfiguration result;
    ReductionTrace trace;
};

/// Pairwise reduction of N runs to one. Each level re-pairs its inputs with
/// `strategy`; merged pairs come first in the next level, in pair order, and
/// an odd leftover is appended after them unchanged.
Reduction mqc_reduce(const IsingProblem &problem, std::span<const SpinConfiguration> runs, PairingStrategy strategy);
Reduction mqc_reduce(const IsingProblem &problem, const RunSet &runset, PairingStrategy strategy);

}  // namespace qpost
