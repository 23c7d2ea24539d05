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
#include <utility>
#include <vector>

#include "qpost/graph.h"

namespace qpost {

using Spin = std::int8_t;

/// Absolute tolerance used for every energy equality in the library.
inline constexpr double kEnergyTolerance = 1e-9;

struct Coupling {
    Vertex a;
    Vertex b;
    double value;

    friend bool operator==(const Coupling &, const Coupling &) = default;
};

struct Neighbor {
    Vertex vertex;
    double coupling;
};

/// Ising objective  F(s) = sum_a h_a s_a + sum_{a<b} J_ab s_a s_b.
///
/// Immutable after construction. Couplings are normalized to a < b and kept
/// sorted; the per-vertex adjacency is their symmetric closure, with
/// neighbors in ascending order. Vertices that carry no coefficients are
/// allowed (they model inactive qubits).
class IsingProblem {
  public:
    IsingProblem() = default;

    /// `linear` must have exactly `vertex_count` entries.
    IsingProblem(std::size_t vertex_count, std::vector<double> linear, std::vector<Coupling> couplings);

    /// Sparse form: unlisted vertices get h = 0. A vertex listed twice is an error.
    static IsingProblem from_sparse(
        std::size_t vertex_count,
        std::span<const std::pair<Vertex, double>> linear,
        std::vector<Coupling> couplings);

    /// Coefficients on top of an existing graph, one J value per graph edge (same order).
    static IsingProblem on_graph(const Graph &graph, std::vector<double> linear, std::span<const double> edge_values);

    std::size_t vertex_count() const { return vertex_count_; }
    std::size_t coupling_count() const { return couplings_.size(); }
    double h(Vertex v) const { return linear_[v]; }
    std::span<const double> linear() const { return linear_; }
    std::span<const Coupling> couplings() const { return couplings_; }
    std::span<const Neighbor> neighbors(Vertex v) const {
        return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
    }
    Graph graph() const;

    friend bool operator==(const IsingProblem &x, const IsingProblem &y) {
        return x.vertex_count_ == y.vertex_count_ && x.linear_ == y.linear_ && x.couplings_ == y.couplings_;
    }

  private:
    std::size_t vertex_count_ = 0;
    std::vector<double> linear_;
    std::vector<Coupling> couplings_;
    std::vector<std::size_t> offsets_{0};
    std::vector<Neighbor> adjacency_;
};

/// Energy evaluated term by term: linear terms in vertex order, then
/// couplings in sorted order. Throws DimensionError on a length mismatch.
double energy(const IsingProblem &problem, std::span<const Spin> spins);

/// h_v + sum_b J_vb s_b.
double local_field(const IsingProblem &problem, std::span<const Spin> spins, Vertex v);

/// Energy change from negating s_v in the current state: -2 s_v (h_v + sum_b J_vb s_b).
double flip_delta(const IsingProblem &problem, std::span<const Spin> spins, Vertex v);

/// One +/-1 assignment per vertex with its energy cached. Every mutating
/// member refreshes the cache.
class SpinConfiguration {
  public:
    SpinConfiguration() = default;
    SpinConfiguration(const IsingProblem &problem, std::vector<Spin> spins);

    std::span<const Spin> spins() const { return spins_; }
    const std::vector<Spin> &spin_vector() const { return spins_; }
    Spin operator[](std::size_t v) const { return spins_[v]; }
    std::size_t size() const { return spins_.size(); }
    double energy() const { return energy_; }

    void assign(const IsingProblem &problem, std::vector<Spin> spins);
    void flip(const IsingProblem &problem, Vertex v);

    /// True when the length matches and the cached energy agrees with a fresh
    /// evaluation within kEnergyTolerance.
    bool consistent_with(const IsingProblem &problem) const;

    friend bool operator==(const SpinConfiguration &, const SpinConfiguration &) = default;

  private:
    std::vector<Spin> spins_;
    double energy_ = 0.0;
};

double energy(const IsingProblem &problem, const SpinConfiguration &config);

/// A connected set of vertices, sorted ascending.
struct Tunnel {
    std::vector<Vertex> vertices;

    friend bool operator==(const Tunnel &, const Tunnel &) = default;
};

/// Energy attributable to the tunnel under `spins`: its linear terms plus
/// every coupling from a tunnel vertex to a vertex outside the tunnel.
/// Internal couplings are excluded since they are invariant when the whole
/// tunnel is negated.
double tunnel_contribution(const IsingProblem &problem, std::span<const Spin> spins, const Tunnel &tunnel);

}  // namespace qpost
