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

#include "qpost/ising.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "qpost/errors.h"

namespace qpost {

namespace {

void check_length(const IsingProblem &problem, std::size_t length) {
    if (length != problem.vertex_count()) {
        throw DimensionError(
            "configuration has " + std::to_string(length) + " spins, problem has " +
            std::to_string(problem.vertex_count()) + " vertices");
    }
}

}  // namespace

IsingProblem::IsingProblem(std::size_t vertex_count, std::vector<double> linear, std::vector<Coupling> couplings)
    : vertex_count_(vertex_count), linear_(std::move(linear)), couplings_(std::move(couplings)) {
    if (linear_.size() != vertex_count_) {
        throw DimensionError(
            "linear coefficients have " + std::to_string(linear_.size()) + " entries, expected " +
            std::to_string(vertex_count_));
    }
    for (Coupling &c : couplings_) {
        if (c.a == c.b) {
            throw ParameterError("self-coupling on vertex " + std::to_string(c.a));
        }
        if (c.a >= vertex_count_ || c.b >= vertex_count_) {
            throw IndexError(
                "coupling (" + std::to_string(c.a) + ", " + std::to_string(c.b) + ") out of range for " +
                std::to_string(vertex_count_) + " vertices");
        }
        if (c.a > c.b) {
            std::swap(c.a, c.b);
        }
    }
    std::sort(couplings_.begin(), couplings_.end(), [](const Coupling &x, const Coupling &y) {
        return x.a != y.a ? x.a < y.a : x.b < y.b;
    });
    for (std::size_t i = 1; i < couplings_.size(); ++i) {
        if (couplings_[i].a == couplings_[i - 1].a && couplings_[i].b == couplings_[i - 1].b) {
            throw ParameterError(
                "duplicate coupling (" + std::to_string(couplings_[i].a) + ", " + std::to_string(couplings_[i].b) +
                ")");
        }
    }

    offsets_.assign(vertex_count_ + 1, 0);
    for (const Coupling &c : couplings_) {
        ++offsets_[c.a + 1];
        ++offsets_[c.b + 1];
    }
    for (std::size_t v = 0; v < vertex_count_; ++v) {
        offsets_[v + 1] += offsets_[v];
    }
    adjacency_.resize(2 * couplings_.size());
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (const Coupling &c : couplings_) {
        adjacency_[fill[c.a]++] = {c.b, c.value};
        adjacency_[fill[c.b]++] = {c.a, c.value};
    }
}

IsingProblem IsingProblem::from_sparse(
    std::size_t vertex_count, std::span<const std::pair<Vertex, double>> linear, std::vector<Coupling> couplings) {
    std::vector<double> dense(vertex_count, 0.0);
    std::vector<char> seen(vertex_count, 0);
    for (const auto &[v, value] : linear) {
        if (v >= vertex_count) {
            throw IndexError("h entry for vertex " + std::to_string(v) + " out of range");
        }
        if (seen[v]) {
            throw ParameterError("duplicate h entry for vertex " + std::to_string(v));
        }
        seen[v] = 1;
        dense[v] = value;
    }
    return IsingProblem(vertex_count, std::move(dense), std::move(couplings));
}

IsingProblem IsingProblem::on_graph(const Graph &graph, std::vector<double> linear, std::span<const double> edge_values) {
    if (edge_values.size() != graph.edge_count()) {
        throw DimensionError("expected one coupling value per graph edge");
    }
    std::vector<Coupling> couplings;
    couplings.reserve(graph.edge_count());
    auto edges = graph.edges();
    for (std::size_t i = 0; i < edges.size(); ++i) {
        couplings.push_back({edges[i].a, edges[i].b, edge_values[i]});
    }
    return IsingProblem(graph.vertex_count(), std::move(linear), std::move(couplings));
}

Graph IsingProblem::graph() const {
    std::vector<Edge> edges;
    edges.reserve(couplings_.size());
    for (const Coupling &c : couplings_) {
        edges.push_back({c.a, c.b});
    }
    return Graph(vertex_count_, std::move(edges));
}

double energy(const IsingProblem &problem, std::span<const Spin> spins) {
    check_length(problem, spins.size());
    double total = 0.0;
    auto h = problem.linear();
    for (std::size_t a = 0; a < spins.size(); ++a) {
        total += h[a] * spins[a];
    }
    for (const Coupling &c : problem.couplings()) {
        total += c.value * spins[c.a] * spins[c.b];
    }
    return total;
}

double energy(const IsingProblem &problem, const SpinConfiguration &config) {
    return energy(problem, config.spins());
}

double local_field(const IsingProblem &problem, std::span<const Spin> spins, Vertex v) {
    double field = problem.h(v);
    for (const Neighbor &nb : problem.neighbors(v)) {
        field += nb.coupling * spins[nb.vertex];
    }
    return field;
}

double flip_delta(const IsingProblem &problem, std::span<const Spin> spins, Vertex v) {
    return -2.0 * spins[v] * local_field(problem, spins, v);
}

SpinConfiguration::SpinConfiguration(const IsingProblem &problem, std::vector<Spin> spins) {
    assign(problem, std::move(spins));
}

void SpinConfiguration::assign(const IsingProblem &problem, std::vector<Spin> spins) {
    check_length(problem, spins.size());
    for (std::size_t v = 0; v < spins.size(); ++v) {
        if (spins[v] != 1 && spins[v] != -1) {
            throw ParameterError("spin at vertex " + std::to_string(v) + " is not +1 or -1");
        }
    }
    spins_ = std::move(spins);
    energy_ = qpost::energy(problem, spins_);
}

void SpinConfiguration::flip(const IsingProblem &problem, Vertex v) {
    check_length(problem, spins_.size());
    if (v >= spins_.size()) {
        throw IndexError("vertex " + std::to_string(v) + " out of range");
    }
    energy_ += flip_delta(problem, spins_, v);
    spins_[v] = static_cast<Spin>(-spins_[v]);
}

bool SpinConfiguration::consistent_with(const IsingProblem &problem) const {
    if (spins_.size() != problem.vertex_count()) {
        return false;
    }
    return std::abs(energy_ - qpost::energy(problem, spins_)) <= kEnergyTolerance;
}

double tunnel_contribution(const IsingProblem &problem, std::span<const Spin> spins, const Tunnel &tunnel) {
    check_length(problem, spins.size());
    std::vector<char> inside(problem.vertex_count(), 0);
    for (Vertex v : tunnel.vertices) {
        if (v >= problem.vertex_count()) {
            throw IndexError("tunnel vertex " + std::to_string(v) + " out of range");
        }
        inside[v] = 1;
    }
    double total = 0.0;
    for (Vertex a : tunnel.vertices) {
        total += problem.h(a) * spins[a];
        for (const Neighbor &nb : problem.neighbors(a)) {
            if (!inside[nb.vertex]) {
                total += nb.coupling * spins[a] * spins[nb.vertex];
            }
        }
    }
    return total;
}

}  // namespace qpost
