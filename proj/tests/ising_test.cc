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

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "oracles.h"
#include "qpost/errors.h"
#include "qpost/ising.h"
#include "qpost/random.h"
#include "qpost/samplers.h"
#include "qpost/topology.h"

namespace qpost {
namespace {

IsingProblem two_spin() { return IsingProblem(2, {1.0, -1.0}, {{0, 1, 0.5}}); }

TEST(Energy, HandEvaluation) {
    EXPECT_DOUBLE_EQ(energy(two_spin(), std::vector<Spin>{-1, 1}), -2.5);
}

TEST(Energy, RepeatedQueryIsIdentical) {
    IsingProblem p = random_problem(chimera_graph({2, 2, 4}), {{-2, 2}, {-1, 1}, 9});
    std::vector<Spin> s = random_runs(p, 1, 3).runs[0].spin_vector();
    EXPECT_EQ(energy(p, s), energy(p, s));
}

TEST(Energy, AllUpIsCoefficientSum) {
    IsingProblem p = random_problem(complete_graph(12), {{-2, 2}, {-1, 1}, 12});
    double sum = 0.0;
    for (double h : p.linear()) {
        sum += h;
    }
    for (const Coupling &c : p.couplings()) {
        sum += c.value;
    }
    EXPECT_NEAR(energy(p, std::vector<Spin>(12, 1)), sum, kEnergyTolerance);
}

TEST(Energy, MatchesDenseOracle) {
    IsingProblem p = random_problem(chimera_graph({2, 2, 4}), {{-2, 2}, {-1, 1}, 5});
    oracle::Dense d = oracle::dense(p);
    for (const auto &run : random_runs(p, 50, 8).runs) {
        EXPECT_NEAR(run.energy(), oracle::energy(d, run.spin_vector()), kEnergyTolerance);
    }
}

TEST(Energy, SummationOrderDoesNotMatter) {
    IsingProblem p = random_problem(chimera_graph({2, 2, 4}), {{-2, 2}, {-1, 1}, 6});
    std::vector<Coupling> shuffled(p.couplings().begin(), p.couplings().end());
    std::reverse(shuffled.begin(), shuffled.end());
    Rng rng(4);
    for (const auto &run : random_runs(p, 20, 1).runs) {
        double e = 0.0;
        for (const Coupling &c : shuffled) {
            e += c.value * run[c.a] * run[c.b];
        }
        for (std::size_t v = p.vertex_count(); v-- > 0;) {
            e += p.h(static_cast<Vertex>(v)) * run[v];
        }
        EXPECT_NEAR(e, run.energy(), kEnergyTolerance);
    }
}

TEST(Energy, GlobalFlipSymmetryWithoutFields) {
    IsingProblem p = random_problem(chimera_graph({2, 2, 4}), {{0, 0}, {-1, 1}, 2});
    for (const auto &run : random_runs(p, 20, 2).runs) {
        std::vector<Spin> neg = run.spin_vector();
        for (Spin &s : neg) {
            s = static_cast<Spin>(-s);
        }
        EXPECT_NEAR(energy(p, neg), run.energy(), kEnergyTolerance);
    }
}

TEST(Energy, LengthMismatchThrows) {
    EXPECT_THROW(energy(two_spin(), std::vector<Spin>{1}), DimensionError);
    EXPECT_THROW(SpinConfiguration(two_spin(), {1, 1, 1}), DimensionError);
}

TEST(Problem, RejectsInvalidCouplings) {
    EXPECT_THROW(IsingProblem(2, {0, 0}, {{0, 0, 1.0}}), ParameterError);
    EXPECT_THROW(IsingProblem(2, {0, 0}, {{0, 2, 1.0}}), IndexError);
    EXPECT_THROW(IsingProblem(2, {0, 0}, {{0, 1, 1.0}, {1, 0, 2.0}}), ParameterError);
    EXPECT_THROW(IsingProblem(3, {0, 0}, {}), DimensionError);
}

TEST(Problem, AdjacencyIsSymmetricClosure) {
    IsingProblem p = random_problem(chimera_graph({2, 2, 4}), {{-2, 2}, {-1, 1}, 1});
    std::size_t entries = 0;
    for (Vertex v = 0; v < p.vertex_count(); ++v) {
        Vertex prev = 0;
        bool first = true;
        for (const Neighbor &nb : p.neighbors(v)) {
            ++entries;
            EXPECT_TRUE(first || nb.vertex > prev);
            prev = nb.vertex;
            first = false;
            Vertex a = std::min(v, nb.vertex);
            Vertex b = std::max(v, nb.vertex);
            auto it = std::find_if(p.couplings().begin(), p.couplings().end(),
                                   [&](const Coupling &c) { return c.a == a && c.b == b; });
            ASSERT_NE(it, p.couplings().end());
            EXPECT_EQ(it->value, nb.coupling);
        }
    }
    EXPECT_EQ(entries, 2 * p.coupling_count());
}

TEST(Problem, SparseFormDefaultsToZero) {
    std::vector<std::pair<Vertex, double>> h{{2, 1.5}};
    IsingProblem p = IsingProblem::from_sparse(4, h, {{3, 1, -0.25}});
    EXPECT_EQ(p.h(0), 0.0);
    EXPECT_EQ(p.h(2), 1.5);
    ASSERT_EQ(p.coupling_count(), 1u);
    EXPECT_EQ(p.couplings()[0].a, 1u);
    EXPECT_EQ(p.couplings()[0].b, 3u);
    std::vector<std::pair<Vertex, double>> dup{{1, 1.0}, {1, 2.0}};
    EXPECT_THROW(IsingProblem::from_sparse(4, dup, {}), ParameterError);
}

TEST(Configuration, RejectsNonSpins) {
    EXPECT_THROW(SpinConfiguration(two_spin(), {1, 0}), ParameterError);
}

TEST(Configuration, FlipKeepsCacheConsistent) {
    IsingProblem p = random_problem(chimera_graph({2, 2, 4}), {{-2, 2}, {-1, 1}, 17});
    SpinConfiguration c = random_runs(p, 1, 5).runs[0];
    Rng rng(11);
    for (int i = 0; i < 1000; ++i) {
        c.flip(p, static_cast<Vertex>(rng.below(p.vertex_count())));
    }
    EXPECT_TRUE(c.consistent_with(p));
    EXPECT_NEAR(c.energy(), oracle::energy(oracle::dense(p), c.spin_vector()), kEnergyTolerance);
}

TEST(FlipDelta, MatchesTwoFullEvaluations) {
    IsingProblem p = random_problem(chimera_graph({2, 2, 4}), {{-2, 2}, {-1, 1}, 3});
    oracle::Dense d = oracle::dense(p);
    Rng rng(7);
    for (const auto &run : random_runs(p, 50, 3).runs) {
        std::vector<Spin> s = run.spin_vector();
        Vertex v = static_cast<Vertex>(rng.below(p.vertex_count()));
        double before = oracle::energy(d, s);
        double delta = flip_delta(p, s, v);
        s[v] = static_cast<Spin>(-s[v]);
        EXPECT_NEAR(delta, oracle::energy(d, s) - before, kEnergyTolerance);
    }
}

TEST(TunnelContribution, SingleEdgeToExterior) {
    IsingProblem p(3, {0, 0, 0}, {{0, 1, -1.0}});
    EXPECT_DOUBLE_EQ(tunnel_contribution(p, std::vector<Spin>{-1, 1, 1}, Tunnel{{0}}), 1.0);
}

TEST(TunnelContribution, WholeGraphIsLinearPart) {
    IsingProblem p = random_problem(complete_graph(6), {{-2, 2}, {-1, 1}, 4});
    std::vector<Spin> s{1, -1, -1, 1, 1, -1};
    double linear = 0.0;
    for (Vertex v = 0; v < 6; ++v) {
        linear += p.h(v) * s[v];
    }
    EXPECT_NEAR(tunnel_contribution(p, s, Tunnel{{0, 1, 2, 3, 4, 5}}), linear, kEnergyTolerance);
}

TEST(TunnelContribution, InvalidVertexThrows) {
    EXPECT_THROW(tunnel_contribution(two_spin(), std::vector<Spin>{1, 1}, Tunnel{{2}}), IndexError);
}

TEST(TunnelContribution, NegationIdentity) {
    IsingProblem p = random_problem(chimera_graph({2, 2, 4}), {{-2, 2}, {-1, 1}, 8});
    oracle::Dense d = oracle::dense(p);
    RunSet a = random_runs(p, 200, 21);
    RunSet b = random_runs(p, 200, 22);
    std::size_t checked = 0;
    for (std::size_t i = 0; i < 200; ++i) {
        std::vector<Vertex> diff;
        for (Vertex v = 0; v < p.vertex_count(); ++v) {
            if (a.runs[i][v] != b.runs[i][v]) {
                diff.push_back(v);
            }
        }
        for (const Tunnel &t : connected_components(diff, p)) {
            std::vector<Spin> s = a.runs[i].spin_vector();
            double c0 = tunnel_contribution(p, s, t);
            double e0 = oracle::energy(d, s);
            for (Vertex v : t.vertices) {
                s[v] = static_cast<Spin>(-s[v]);
            }
            double c1 = tunnel_contribution(p, s, t);
            EXPECT_NEAR(oracle::energy(d, s) - e0, c1 - c0, kEnergyTolerance);
            ++checked;
        }
    }
    EXPECT_GT(checked, 200u);
}

}  // namespace
}  // namespace qpost
