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

#include "qpost/topology.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "qpost/errors.h"
#include "qpost/random.h"

namespace qpost {

Graph chimera_graph(const ChimeraSpec &spec) {
    if (spec.rows == 0 || spec.cols == 0 || spec.shore == 0) {
        throw ParameterError("chimera dimensions must be positive");
    }
    std::vector<Edge> edges;
    edges.reserve(spec.edge_count());
    for (std::size_t r = 0; r < spec.rows; ++r) {
        for (std::size_t c = 0; c < spec.cols; ++c) {
            for (std::size_t i = 0; i < spec.shore; ++i) {
                for (std::size_t j = 0; j < spec.shore; ++j) {
                    edges.push_back({spec.vertex(r, c, 0, i), spec.vertex(r, c, 1, j)});
                }
            }
            for (std::size_t k = 0; k < spec.shore; ++k) {
                if (r + 1 < spec.rows) {
                    edges.push_back({spec.vertex(r, c, 0, k), spec.vertex(r + 1, c, 0, k)});
                }
                if (c + 1 < spec.cols) {
                    edges.push_back({spec.vertex(r, c, 1, k), spec.vertex(r, c + 1, 1, k)});
                }
            }
        }
    }
    return Graph(spec.vertex_count(), std::move(edges));
}

Graph complete_graph(std::size_t n) {
    if (n < 2) {
        throw ParameterError("complete graph needs at least 2 vertices");
    }
    std::vector<Edge> edges;
    edges.reserve(n * (n - 1) / 2);
    for (Vertex a = 0; a < n; ++a) {
        for (Vertex b = a + 1; b < n; ++b) {
            edges.push_back({a, b});
        }
    }
    return Graph(n, std::move(edges));
}

Graph path_graph(std::size_t n) {
    if (n == 0) {
        throw ParameterError("path graph needs at least 1 vertex");
    }
    std::vector<Edge> edges;
    for (Vertex a = 0; a + 1 < n; ++a) {
        edges.push_back({a, a + 1});
    }
    return Graph(n, std::move(edges));
}

Graph grid_graph(std::size_t rows, std::size_t cols) {
    if (rows == 0 || cols == 0) {
        throw ParameterError("grid dimensions must be positive");
    }
    std::vector<Edge> edges;
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            auto v = static_cast<Vertex>(r * cols + c);
            if (c + 1 < cols) {
                edges.push_back({v, v + 1});
            }
            if (r + 1 < rows) {
                edges.push_back({v, static_cast<Vertex>(v + cols)});
            }
        }
    }
    return Graph(rows * cols, std::move(edges));
}

namespace {

void check_interval(const Interval &iv, const char *name) {
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || iv.lo > iv.hi) {
        throw ParameterError(std::string(name) + " is empty or not finite");
    }
}

template <typename ForEachNeighbor>
std::vector<Tunnel> components_impl(
    std::span<const Vertex> subset, std::size_t vertex_count, ForEachNeighbor for_each_neighbor) {
    // 0 = not in subset, 1 = in subset and unvisited, 2 = visited
    std::vector<std::uint8_t> state(vertex_count, 0);
    std::vector<Vertex> order;
    order.reserve(subset.size());
    for (Vertex v : subset) {
        if (v >= vertex_count) {
            throw IndexError("subset vertex " + std::to_string(v) + " out of range");
        }
        if (state[v] == 0) {
            state[v] = 1;
            order.push_back(v);
        }
    }
    std::sort(order.begin(), order.end());

    std::vector<Tunnel> components;
    std::vector<Vertex> stack;
    for (Vertex start : order) {
        if (state[start] != 1) {
            continue;
        }
        Tunnel component;
        state[start] = 2;
        stack.push_back(start);
        while (!stack.empty()) {
            Vertex v = stack.back();
            stack.pop_back();
            component.vertices.push_back(v);
            for_each_neighbor(v, [&](Vertex w) {
                if (state[w] == 1) {
                    state[w] = 2;
                    stack.push_back(w);
                }
            });
        }
        std::sort(component.vertices.begin(), component.vertices.end());
        components.push_back(std::move(component));
    }
    return components;
}

}  // namespace

IsingProblem random_problem(const Graph &graph, const ProblemGenSpec &spec) {
    check_interval(spec.h_range, "h range");
    check_interval(spec.j_range, "J range");
    Rng h_stream(derive_seed(spec.seed, 0));
    Rng j_stream(derive_seed(spec.seed, 1));
    std::vector<double> linear(graph.vertex_count());
    for (double &h : linear) {
        h = h_stream.uniform(spec.h_range.lo, spec.h_range.hi);
    }
    std::vector<double> values(graph.edge_count());
    for (double &j : values) {
        j = j_stream.uniform(spec.j_range.lo, spec.j_range.hi);
    }
    return IsingProblem::on_graph(graph, std::move(linear), values);
}

std::vector<Tunnel> connected_components(std::span<const Vertex> subset, const Graph &graph) {
    return components_impl(subset, graph.vertex_count(), [&](Vertex v, auto &&visit) {
        for (Vertex w : graph.neighbors(v)) {
            visit(w);
        }
    });
}

std::vector<Tunnel> connected_components(std::span<const Vertex> subset, const IsingProblem &problem) {
    return components_impl(subset, problem.vertex_count(), [&](Vertex v, auto &&visit) {
        for (const Neighbor &nb : problem.neighbors(v)) {
            visit(nb.vertex);
        }
    });
}

}  // namespace qpost
