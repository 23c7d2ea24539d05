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

#include "qpost/samplers.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "parallel.h"
#include "qpost/errors.h"
#include "qpost/random.h"

namespace qpost {

namespace {

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

void check_anneal_params(const SamplerParams &params) {
    if (params.num_runs == 0) {
        throw ParameterError("num_runs must be positive");
    }
    if (params.sweeps == 0) {
        throw ParameterError("sweeps must be positive");
    }
    const BetaSchedule &s = params.beta_schedule;
    if (!positive_finite(s.beta_start) || !positive_finite(s.beta_end)) {
        throw ParameterError("beta schedule endpoints must be positive and finite");
    }
    if (s.beta_start > s.beta_end) {
        throw ParameterError("beta_start must not exceed beta_end");
    }
}

std::vector<Spin> uniform_spins(std::size_t n, Rng &rng) {
    std::vector<Spin> spins(n);
    for (Spin &s : spins) {
        s = static_cast<Spin>(rng.spin());
    }
    return spins;
}

}  // namespace

double BetaSchedule::at(std::size_t sweep, std::size_t sweeps) const {
    if (sweeps <= 1) {
        return beta_end;
    }
    double t = static_cast<double>(sweep) / static_cast<double>(sweeps - 1);
    if (interpolation == Interpolation::geometric) {
        return beta_start * std::pow(beta_end / beta_start, t);
    }
    return beta_start + (beta_end - beta_start) * t;
}

std::string_view to_string(SamplerKind kind) {
    switch (kind) {
        case SamplerKind::anneal:
            return "anneal";
        case SamplerKind::gibbs:
            return "gibbs";
        case SamplerKind::random:
            return "random";
    }
    return "unknown";
}

SamplerKind parse_sampler_kind(std::string_view name) {
    if (name == "anneal" || name == "sa") {
        return SamplerKind::anneal;
    }
    if (name == "gibbs") {
        return SamplerKind::gibbs;
    }
    if (name == "random") {
        return SamplerKind::random;
    }
    throw ParameterError("unknown sampler '" + std::string(name) + "'");
}

const SpinConfiguration &RunSet::best() const {
    if (runs.empty()) {
        throw InputError("run set is empty");
    }
    auto it = std::min_element(runs.begin(), runs.end(), [](const SpinConfiguration &x, const SpinConfiguration &y) {
        return x.energy() < y.energy();
    });
    return *it;
}

RunSet simulated_anneal(const IsingProblem &problem, const SamplerParams &params) {
    check_anneal_params(params);
    const std::size_t n = problem.vertex_count();
    std::vector<double> betas(params.sweeps);
    for (std::size_t s = 0; s < params.sweeps; ++s) {
        betas[s] = params.beta_schedule.at(s, params.sweeps);
    }

    RunSet out;
    out.provenance = {"anneal", params};
    out.runs.resize(params.num_runs);
    detail::parallel_for(params.num_runs, [&](std::size_t i) {
        Rng rng(derive_seed(params.seed, i));
        std::vector<Spin> spins = uniform_spins(n, rng);
        for (double beta : betas) {
            for (Vertex v = 0; v < n; ++v) {
                double delta = flip_delta(problem, spins, v);
                if (delta <= 0.0 || rng.uniform() < std::exp(-beta * delta)) {
                    spins[v] = static_cast<Spin>(-spins[v]);
                }
            }
        }
        out.runs[i] = SpinConfiguration(problem, std::move(spins));
    });
    return out;
}

RunSet gibbs_sample(const IsingProblem &problem, const SamplerParams &params) {
    if (!params.fixed_beta) {
        throw ParameterError("gibbs sampling requires fixed_beta");
    }
    const double beta = *params.fixed_beta;
    if (!positive_finite(beta)) {
        throw ParameterError("fixed_beta must be positive and finite");
    }
    if (params.num_runs == 0) {
        throw ParameterError("num_runs must be positive");
    }
    if (params.thinning == 0) {
        throw ParameterError("thinning must be positive");
    }

    const std::size_t n = problem.vertex_count();
    Rng rng(derive_seed(params.seed, 0));
    std::vector<Spin> spins = uniform_spins(n, rng);
    auto sweep = [&] {
        for (Vertex v = 0; v < n; ++v) {
            double field = local_field(problem, spins, v);
            double p_up = 1.0 / (1.0 + std::exp(2.0 * beta * field));
            spins[v] = rng.uniform() < p_up ? Spin{1} : Spin{-1};
        }
    };

    for (std::size_t s = 0; s < params.burn_in; ++s) {
        sweep();
    }
    RunSet out;
    out.provenance = {"gibbs", params};
    out.runs.reserve(params.num_runs);
    for (std::size_t k = 0; k < params.num_runs; ++k) {
        for (std::size_t s = 0; s < params.thinning; ++s) {
            sweep();
        }
        out.runs.emplace_back(problem, spins);
    }
    return out;
}

RunSet random_runs(const IsingProblem &problem, std::size_t count, std::uint64_t seed) {
    RunSet out;
    out.provenance.sampler = "random";
    out.provenance.params.num_runs = count;
    out.provenance.params.seed = seed;
    out.runs.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        Rng rng(derive_seed(seed, i));
        out.runs[i] = SpinConfiguration(problem, uniform_spins(problem.vertex_count(), rng));
    }
    return out;
}

RunSet sample(const IsingProblem &problem, SamplerKind kind, const SamplerParams &params) {
    switch (kind) {
        case SamplerKind::anneal:
            return simulated_anneal(problem, params);
        case SamplerKind::gibbs:
            return gibbs_sample(problem, params);
        case SamplerKind::random: {
            RunSet out = random_runs(problem, params.num_runs, params.seed);
            out.provenance.params = params;
            return out;
        }
    }
    throw ParameterError("unknown sampler kind");
}

GroundState exact_ground_state(const IsingProblem &problem) {
    const std::size_t n = problem.vertex_count();
    if (n > kMaxExactVertices) {
        throw SizeError(
            "exact enumeration supports at most " + std::to_string(kMaxExactVertices) + " vertices, got " +
            std::to_string(n));
    }
    std::vector<Spin> state(n, Spin{-1});
    std::vector<Spin> best = state;
    double current = energy(problem, state);
    double best_energy = current;

    // Gray-code walk: step k flips the vertex at the lowest set bit of k.
    // The running sum is re-synchronized periodically to bound drift.
    constexpr std::uint64_t kResync = std::uint64_t{1} << 12;
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t k = 1; k < total; ++k) {
        auto v = static_cast<Vertex>(std::countr_zero(k));
        current += flip_delta(problem, state, v);
        state[v] = static_cast<Spin>(-state[v]);
        if (k % kResync == 0) {
            current = energy(problem, state);
        }
        if (current < best_energy - kEnergyTolerance) {
            best_energy = current;
            best = state;
        } else if (current <= best_energy + kEnergyTolerance &&
                   std::lexicographical_compare(state.begin(), state.end(), best.begin(), best.end())) {
            best_energy = std::min(best_energy, current);
            best = state;
        }
    }
    GroundState out;
    out.config = SpinConfiguration(problem, std::move(best));
    out.energy = out.config.energy();
    return out;
}

}  // namespace qpost
