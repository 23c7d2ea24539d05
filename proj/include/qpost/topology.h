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
#include <span>
#include <vector>

#include "qpost/graph.h"
#include "qpost/ising.h"

namespace qpost {

/// Chimera lattice of rows x cols unit cells. Each cell is K_{shore,shore};
/// side 0 vertices couple to the same position in the cells above and below,
/// side 1 vertices to the cells left and right.
struct ChimeraSpec {
    std::size_t rows = 4;
    std::size_t cols = 4;
    std::size_t shore = 4;

    std::size_t vertex_count() const { return rows * cols * 2 * shore; }
    std::size_t edge_count() const {
        return rows * cols * shore * shore + shore * (cols * (rows - 1) + rows * (cols - 1));
    }
    /// Linear index of vertex k on `side` of cell (row, col).
    Vertex vertex(std::size_t row, std::size_t col, std::size_t side, std::size_t k) const {
        return static_cast<Vertex>(((row * cols + col) * 2 + side) * shore + k);
    }
};

Graph chimera_graph(const ChimeraSpec &spec);
Graph complete_graph(std::size_t n);
Graph path_graph(std::size_t n);
Graph grid_graph(std::size_t rows, std::size_t cols);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double x) const { return lo <= x && x <= hi; }
    friend bool operator==(const Interval &, const Interval &) = default;
};

/// Coefficient generator settings. Defaults reproduce the benchmark setup:
/// h ~ U[-2, 2], J ~ U[-1, 1], seed 316.
struct ProblemGenSpec {
    Interval h_range{-2.0, 2.0};
    Interval j_range{-1.0, 1.0};
    std::uint64_t seed = 316;
};

/// Name of the coefficient generator; bump when the stream discipline changes.
inline constexpr const char *kProblemGeneratorName = "mt19937_64/splitmix64-v1";

/// Draws h for every vertex (in vertex order) from one stream and J for every
/// edge (in sorted edge order) from a second stream. Both streams are
/// mt19937_64 seeded with derive_seed(seed, 0) and derive_seed(seed, 1), so a
/// given spec yields bit-identical coefficients on every platform.
IsingProblem random_problem(const Graph &graph, const ProblemGenSpec &spec);

/// Maximal connected components of the subgraph induced by `subset`.
/// Components are ordered by their smallest vertex; vertices inside a
/// component are ascending. Duplicate entries in `subset` are ignored.
std::vector<Tunnel> connected_components(std::span<const Vertex> subset, const Graph &graph);
std::vector<Tunnel> connected_components(std::span<const Vertex> subset, const IsingProblem &problem);

}  // namespace qpost
