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

#include "qpost/mqc.h"

#include <algorithm>
#include <numeric>
#include <string>
#include <tuple>

#include "qpost/errors.h"
#include "qpost/topology.h"

namespace qpost {

std::string_view to_string(PairingStrategy strategy) {
    switch (strategy) {
        case PairingStrategy::sequential:
            return "sequential";
        case PairingStrategy::rank_order:
            return "rank_order";
        case PairingStrategy::max_difference:
            return "max_difference";
    }
    return "unknown";
}

PairingStrategy parse_pairing_strategy(std::string_view name) {
    if (name == "sequential") {
        return PairingStrategy::sequential;
    }
    if (name == "rank_order" || name == "rank") {
        return PairingStrategy::rank_order;
    }
    if (name == "max_difference" || name == "maxdiff") {
        return PairingStrategy::max_difference;
    }
    throw ParameterError("unknown pairing strategy '" + std::string(name) + "'");
}

std::size_t hamming_distance(std::span<const Spin> x, std::span<const Spin> y) {
    if (x.size() != y.size()) {
        throw DimensionError(
            "runs differ in length (" + std::to_string(x.size()) + " vs " + std::to_string(y.size()) + ")");
    }
    std::size_t d = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        d += x[i] != y[i];
    }
    return d;
}

std::size_t hamming_distance(const SpinConfiguration &x, const SpinConfiguration &y) {
    return hamming_distance(x.spins(), y.spins());
}

namespace {

Pairing pair_in_order(std::span<const std::size_t> order) {
    Pairing out;
    std::size_t i = 0;
    for (; i + 1 < order.size(); i += 2) {
        out.pairs.emplace_back(order[i], order[i + 1]);
    }
    if (i < order.size()) {
        out.leftover = order[i];
    }
    return out;
}

Pairing pair_max_difference(std::span<const SpinConfiguration> runs) {
    const std::size_t n = runs.size();
    struct Candidate {
        std::size_t distance;
        std::size_t i;
        std::size_t j;
    };
    std::vector<Candidate> candidates;
    candidates.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            candidates.push_back({hamming_distance(runs[i], runs[j]), i, j});
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate &x, const Candidate &y) {
        return std::tie(y.distance, x.i, x.j) < std::tie(x.distance, y.i, y.j);
    });
    Pairing out;
    std::vector<char> used(n, 0);
    for (const Candidate &c : candidates) {
        if (!used[c.i] && !used[c.j]) {
            used[c.i] = used[c.j] = 1;
            out.pairs.emplace_back(c.i, c.j);
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!used[i]) {
            out.leftover = i;
        }
    }
    return out;
}

}  // namespace

Pairing pair_runs(std::span<const SpinConfiguration> runs, PairingStrategy strategy) {
    if (runs.empty()) {
        throw InputError("cannot pair an empty run set");
    }
    std::vector<std::size_t> order(runs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    switch (strategy) {
        case PairingStrategy::sequential:
            return pair_in_order(order);
        case PairingStrategy::rank_order:
            std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
                return runs[x].energy() < runs[y].energy();
            });
            return pair_in_order(order);
        case PairingStrategy::max_difference:
            return pair_max_difference(runs);
    }
    throw ParameterError("unknown pairing strategy");
}

Pairing pair_runs(const RunSet &runset, PairingStrategy strategy) {
    return pair_runs(std::span<const SpinConfiguration>(runset.runs), strategy);
}

PairMerge mqc_merge(const IsingProblem &problem, const SpinConfiguration &first, const SpinConfiguration &second) {
    const std::size_t n = problem.vertex_count();
    if (first.size() != n || second.size() != n) {
        throw DimensionError("runs do not match the problem's vertex count");
    }
    auto s1 = first.spins();
    auto s2 = second.spins();

    std::vector<Vertex> disagree;
    for (Vertex v = 0; v < n; ++v) {
        if (s1[v] != s2[v]) {
            disagree.push_back(v);
        }
    }
    PairMerge out;
    if (disagree.empty()) {
        out.result = first;
        return out;
    }

    std::vector<Tunnel> tunnels = connected_components(disagree, problem);
    std::vector<std::int32_t> label(n, -1);
    for (std::size_t t = 0; t < tunnels.size(); ++t) {
        for (Vertex v : tunnels[t].vertices) {
            label[v] = static_cast<std::int32_t>(t);
        }
    }

    std::vector<Spin> merged(s1.begin(), s1.end());
    out.tunnels.reserve(tunnels.size());
    for (std::size_t t = 0; t < tunnels.size(); ++t) {
        double c1 = 0.0;
        double c2 = 0.0;
        for (Vertex a : tunnels[t].vertices) {
            c1 += problem.h(a) * s1[a];
            c2 += problem.h(a) * s2[a];
            for (const Neighbor &nb : problem.neighbors(a)) {
                if (label[nb.vertex] != static_cast<std::int32_t>(t)) {
                    // nb.vertex lies in the agreement set, so s1 and s2 match there.
                    c1 += nb.coupling * s1[a] * s1[nb.vertex];
                    c2 += nb.coupling * s2[a] * s2[nb.vertex];
                }
            }
        }
        Side chosen = c2 < c1 ? Side::second : Side::first;
        if (chosen == Side::second) {
            for (Vertex a : tunnels[t].vertices) {
                merged[a] = s2[a];
            }
        }
        out.tunnels.push_back({tunnels[t].vertices.front(), tunnels[t].vertices.size(), c1, c2, chosen});
    }
    out.result = SpinConfiguration(problem, std::move(merged));
    return out;
}

SpinConfiguration mqc_pair(const IsingProblem &problem, const SpinConfiguration &first, const SpinConfiguration &second) {
    return mqc_merge(problem, first, second).result;
}

Reduction mqc_reduce(const IsingProblem &problem, std::span<const SpinConfiguration> runs, PairingStrategy strategy) {
    if (runs.empty()) {
        throw InputError("cannot reduce an empty run set");
    }
    // Energies are re-evaluated against `problem`; inputs may carry energies
    // from a different (e.g. scaled or quantized) problem.
    std::vector<SpinConfiguration> level;
    level.reserve(runs.size());
    for (const SpinConfiguration &run : runs) {
        level.emplace_back(problem, run.spin_vector());
    }
    Reduction out;
    while (level.size() > 1) {
        Pairing pairing = pair_runs(level, strategy);
        LevelRecord record;
        record.input_size = level.size();
        record.carried = pairing.leftover;

        std::vector<SpinConfiguration> next;
        next.reserve(pairing.pairs.size() + 1);
        for (const auto &[i, j] : pairing.pairs) {
            PairMerge merge = mqc_merge(problem, level[i], level[j]);
            record.pairs.push_back({i, j, std::move(merge.tunnels), merge.result.energy()});
            next.push_back(std::move(merge.result));
        }
        if (pairing.leftover) {
            next.push_back(std::move(level[*pairing.leftover]));
        }
        out.trace.levels.push_back(std::move(record));
        level = std::move(next);
    }
    out.result = std::move(level.front());
    return out;
}

Reduction mqc_reduce(const IsingProblem &problem, const RunSet &runset, PairingStrategy strategy) {
    return mqc_reduce(problem, std::span<const SpinConfiguration>(runset.runs), strategy);
}

}  // namespace qpost
