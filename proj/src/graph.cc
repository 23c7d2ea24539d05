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

#include "qpost/graph.h"

#include <algorithm>
#include <string>

#include "qpost/errors.h"

namespace qpost {

Graph::Graph(std::size_t vertex_count, std::vector<Edge> edges) : vertex_count_(vertex_count), edges_(std::move(edges)) {
    for (Edge &e : edges_) {
        if (e.a == e.b) {
            throw ParameterError("self-loop on vertex " + std::to_string(e.a));
        }
        if (e.a >= vertex_count_ || e.b >= vertex_count_) {
            throw IndexError(
                "edge (" + std::to_string(e.a) + ", " + std::to_string(e.b) + ") out of range for " +
                std::to_string(vertex_count_) + " vertices");
        }
        if (e.a > e.b) {
            std::swap(e.a, e.b);
        }
    }
    std::sort(edges_.begin(), edges_.end());
    auto dup = std::adjacent_find(edges_.begin(), edges_.end());
    if (dup != edges_.end()) {
        throw ParameterError("duplicate edge (" + std::to_string(dup->a) + ", " + std::to_string(dup->b) + ")");
    }

    offsets_.assign(vertex_count_ + 1, 0);
    for (const Edge &e : edges_) {
        ++offsets_[e.a + 1];
        ++offsets_[e.b + 1];
    }
    for (std::size_t v = 0; v < vertex_count_; ++v) {
        offsets_[v + 1] += offsets_[v];
    }
    adjacency_.resize(2 * edges_.size());
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (const Edge &e : edges_) {
        adjacency_[fill[e.a]++] = e.b;
        adjacency_[fill[e.b]++] = e.a;
    }
}

}  // namespace qpost
