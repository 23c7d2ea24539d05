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

#include <cmath>

#include "oracles.h"
#include "qpost/errors.h"
#include "qpost/random.h"
#include "qpost/samplers.h"
#include "qpost/topology.h"

namespace qpost {
namespace {

IsingProblem random_on(const Graph &g, std::uint64_t seed) { return random_problem(g, {{-2, 2}, {-1, 1}, seed}); }

SamplerParams gibbs_params(double beta, std::size_t runs, std::uint64_t seed) {
    SamplerParams p;
    p.fixed_beta = beta;
    p.num_runs = runs;
    p.seed = seed;
    return p;
}

TEST(Rng, SeedDerivationIsStable) {
    EXPECT_EQ(splitmix64(0), 0xe220a8397b1dcdafull);
    EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
    EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
    Rng a(5), b(5);
    for (int i = 0; i < 100; ++i) {
        EXPECT_EQ(a.next_u64(), b.next_u64());
    }
}

TEST(Rng, UniformAndBelowRanges) {
    Rng rng(3);
    for (int i = 0; i < 10000; ++i) {
        double u = rng.uniform();
        EXPECT_TRUE(u >= 0.0 && u < 1.0);
        EXPECT_LT(rng.below(7), 7u);
    }
}

TEST(Schedule, EndpointsAndShape) {
    BetaSchedule geo{0.1, 5.0, Interpolation::geometric};
    EXPECT_DOUBLE_EQ(geo.at(0, 11), 0.1);
    EXPECT_NEAR(geo.at(10, 11), 5.0, 1e-12);
    EXPECT_NEAR(geo.at(5, 11), std::sqrt(0.1 * 5.0), 1e-12);
    BetaSchedule lin{1.0, 3.0, Interpolation::linear};
    EXPECT_NEAR(lin.at(1, 3), 2.0, 1e-12);
    // A one-sweep schedule runs entirely at the final beta.
    EXPECT_DOUBLE_EQ(lin.at(0, 1), 3.0);
}

TEST(Anneal, SingleVertexFindsMinimum) {
    IsingProblem p(1, {2.0}, {});
    SamplerParams params;
    params.num_runs = 20;
    params.sweeps = 50;
    for (const auto &run : simulated_anneal(p, params).runs) {
        EXPECT_EQ(run[0], -1);
    }
}

TEST(Anneal, Deterministic) {
    IsingProblem p = random_on(chimera_graph({2, 2, 4}), 4);
    SamplerParams params;
    params.num_runs = 16;
    params.sweeps = 30;
    params.seed = 77;
    EXPECT_EQ(simulated_anneal(p, params), simulated_anneal(p, params));
}

TEST(Anneal, InvalidScheduleThrows) {
    IsingProblem p(1, {1.0}, {});
    SamplerParams params;
    params.beta_schedule = {5.0, 1.0, Interpolation::geometric};
    EXPECT_THROW(simulated_anneal(p, params), ParameterError);
    params.beta_schedule = {0.0, 1.0, Interpolation::linear};
    EXPECT_THROW(simulated_anneal(p, params), ParameterError);
    params.beta_schedule = {};
    params.sweeps = 0;
    EXPECT_THROW(simulated_anneal(p, params), ParameterError);
}

TEST(Anneal, RunsCarryValidEnergies) {
    IsingProblem p = random_on(chimera_graph({2, 2, 4}), 5);
    SamplerParams params;
    params.num_runs = 10;
    params.sweeps = 20;
    oracle::Dense d = oracle::dense(p);
    RunSet rs = simulated_anneal(p, params);
    EXPECT_EQ(rs.provenance.sampler, "anneal");
    for (const auto &run : rs.runs) {
        EXPECT_NEAR(run.energy(), oracle::energy(d, run.spin_vector()), kEnergyTolerance);
    }
}

// 16-vertex problems (a 2x1 Chimera strip), 64 runs of 500 sweeps: the best run
// reaches the exact ground energy for at least 80% of 50 seeds.
TEST(Anneal, FindsGroundStateOnSmallProblems) {
    Graph g = chimera_graph({2, 1, 4});
    std::size_t hits = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        IsingProblem p = random_on(g, 1000 + seed);
        SamplerParams params;
        params.num_runs = 64;
        params.sweeps = 500;
        params.seed = seed;
        double best = simulated_anneal(p, params).best().energy();
        hits += std::abs(best - oracle::ground(p).energy) <= kEnergyTolerance;
    }
    EXPECT_GE(hits, 40u);
}

TEST(Gibbs, MissingBetaThrows) {
    IsingProblem p(1, {1.0}, {});
    EXPECT_THROW(gibbs_sample(p, SamplerParams{}), ParameterError);
    EXPECT_THROW(gibbs_sample(p, gibbs_params(-1.0, 5, 0)), ParameterError);
}

TEST(Gibbs, Deterministic) {
    IsingProblem p = random_on(chimera_graph({1, 1, 4}), 8);
    EXPECT_EQ(gibbs_sample(p, gibbs_params(1.0, 50, 3)), gibbs_sample(p, gibbs_params(1.0, 50, 3)));
}

TEST(Gibbs, ColdChainSitsInGroundState) {
    // Six vertices on a path; seed chosen so the ground state is non-degenerate.
    IsingProblem p = random_on(path_graph(6), 21);
    oracle::Minimum g = oracle::ground(p);
    RunSet rs = gibbs_sample(p, gibbs_params(20.0, 1000, 1));
    std::size_t hits = 0;
    for (const auto &run : rs.runs) {
        hits += run.spin_vector() == g.spins;
    }
    EXPECT_GE(hits, 900u);
}

TEST(Gibbs, HotChainIsNearlyUniform) {
    IsingProblem p = random_on(chimera_graph({1, 1, 4}), 3);
    std::vector<double> zero_h(p.vertex_count(), 0.0);
    IsingProblem q(p.vertex_count(), zero_h, std::vector<Coupling>(p.couplings().begin(), p.couplings().end()));
    SamplerParams params = gibbs_params(0.01, 10000, 4);
    params.thinning = 1;
    RunSet rs = gibbs_sample(q, params);
    for (Vertex v = 0; v < q.vertex_count(); ++v) {
        double mean = 0.0;
        for (const auto &run : rs.runs) {
            mean += run[v];
        }
        EXPECT_NEAR(mean / rs.size(), 0.0, 0.1);
    }
}

TEST(Gibbs, MatchesBoltzmannOnThreeSpins) {
    IsingProblem p(3, {0.3, -0.5, 0.2}, {{0, 1, -0.7}, {1, 2, 0.4}, {0, 2, 0.25}});
    std::vector<double> exact = oracle::boltzmann(p, 1.0);
    SamplerParams params = gibbs_params(1.0, 100000, 9);
    params.thinning = 1;
    RunSet rs = gibbs_sample(p, params);
    std::vector<double> freq(8, 0.0);
    for (const auto &run : rs.runs) {
        freq[oracle::bits_of(run.spins())] += 1.0 / rs.size();
    }
    double tv = 0.0;
    for (std::size_t i = 0; i < 8; ++i) {
        tv += std::abs(freq[i] - exact[i]) / 2;
    }
    EXPECT_LE(tv, 0.05);
}

TEST(RandomRuns, EmptyAndReproducible) {
    IsingProblem p = random_on(path_graph(4), 1);
    EXPECT_TRUE(random_runs(p, 0, 1).empty());
    EXPECT_THROW(random_runs(p, 0, 1).best(), InputError);
    EXPECT_EQ(random_runs(p, 30, 5), random_runs(p, 30, 5));
    EXPECT_FALSE(random_runs(p, 30, 5) == random_runs(p, 30, 6));
}

TEST(RandomRuns, SpinsAreBalanced) {
    IsingProblem p = random_on(path_graph(10), 1);
    RunSet rs = random_runs(p, 10000, 12);
    double mean = 0.0;
    for (const auto &run : rs.runs) {
        for (Spin s : run.spins()) {
            mean += s;
        }
    }
    EXPECT_NEAR(mean / 1e5, 0.0, 0.02);
}

TEST(Exact, HandExample) {
    IsingProblem p(2, {1.0, -1.0}, {{0, 1, 0.5}});
    GroundState g = exact_ground_state(p);
    EXPECT_EQ(g.config.spin_vector(), (std::vector<Spin>{-1, 1}));
    EXPECT_DOUBLE_EQ(g.energy, -2.5);
}

TEST(Exact, FlipSymmetricGroundWithoutFields) {
    IsingProblem p = random_problem(chimera_graph({1, 1, 4}), {{0, 0}, {-1, 1}, 4});
    GroundState g = exact_ground_state(p);
    std::vector<Spin> neg = g.config.spin_vector();
    for (Spin &s : neg) {
        s = static_cast<Spin>(-s);
    }
    EXPECT_NEAR(energy(p, neg), g.energy, kEnergyTolerance);
    // Lexicographic tie-break: the first spin of the returned state is -1.
    EXPECT_EQ(g.config[0], -1);
}

TEST(Exact, BeatsRandomSamplingAndMatchesOracle) {
    IsingProblem p = random_on(chimera_graph({2, 1, 4}), 6);
    GroundState g = exact_ground_state(p);
    EXPECT_NEAR(g.energy, oracle::ground(p).energy, kEnergyTolerance);
    for (const auto &run : random_runs(p, 10000, 2).runs) {
        EXPECT_LE(g.energy, run.energy() + kEnergyTolerance);
    }
}

TEST(Exact, SizeCap) {
    EXPECT_THROW(exact_ground_state(random_on(path_graph(26), 1)), SizeError);
}

TEST(Dispatch, ParsesNames) {
    EXPECT_EQ(parse_sampler_kind("sa"), SamplerKind::anneal);
    EXPECT_EQ(parse_sampler_kind("gibbs"), SamplerKind::gibbs);
    EXPECT_EQ(parse_sampler_kind("random"), SamplerKind::random);
    EXPECT_THROW(parse_sampler_kind("qaoa"), ParameterError);
}

}  // namespace
}  // namespace qpost
