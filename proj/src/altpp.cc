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

#include "qpost/altpp.h"

#include <algorithm>
#include <cstdint>
#include <string>

#include "parallel.h"
#include "qpost/errors.h"
#include "qpost/random.h"

namespace qpost {

namespace {

/// Dense adjacency of the subgraph induced by `vertices` (local indices
/// follow the order of `vertices`).
std::vector<std::vector<char>> induced_adjacency(const IsingProblem &problem, std::span<const Vertex> vertices) {
    const std::size_t n = problem.vertex_count();
    std::vector<std::int32_t> pos(n, -1);
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        Vertex v = vertices[i];
        if (v >= n) {
            throw IndexError("vertex " + std::to_string(v) + " out of range");
        }
        if (pos[v] >= 0) {
            throw ParameterError("vertex " + std::to_string(v) + " listed twice");
        }
        pos[v] = static_cast<std::int32_t>(i);
    }
    std::vector<std::vector<char>> adj(vertices.size(), std::vector<char>(vertices.size(), 0));
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        for (const Neighbor &nb : problem.neighbors(vertices[i])) {
            if (pos[nb.vertex] >= 0) {
                adj[i][pos[nb.vertex]] = 1;
            }
        }
    }
    return adj;
}

/// Eliminates local vertex x: returns its remaining-neighbor count and adds fill edges.
std::size_t eliminate(std::vector<std::vector<char>> &adj, std::vector<char> &gone, std::size_t x) {
    std::vector<std::size_t> nbrs;
    for (std::size_t y = 0; y < adj.size(); ++y) {
        if (!gone[y] && adj[x][y]) {
            nbrs.push_back(y);
        }
    }
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
        for (std::size_t j = i + 1; j < nbrs.size(); ++j) {
            adj[nbrs[i]][nbrs[j]] = adj[nbrs[j]][nbrs[i]] = 1;
        }
    }
    gone[x] = 1;
    return nbrs.size();
}

}  // namespace

EliminationOrder min_degree_order(const IsingProblem &problem, std::span<const Vertex> vertices) {
    std::vector<Vertex> sorted(vertices.begin(), vertices.end());
    std::sort(sorted.begin(), sorted.end());
    auto adj = induced_adjacency(problem, sorted);
    const std::size_t k = sorted.size();
    std::vector<char> gone(k, 0);
    EliminationOrder out;
    out.order.reserve(k);
    for (std::size_t step = 0; step < k; ++step) {
        std::size_t pick = k;
        std::size_t pick_degree = 0;
        for (std::size_t x = 0; x < k; ++x) {
            if (gone[x]) {
                continue;
            }
            std::size_t d = 0;
            for (std::size_t y = 0; y < k; ++y) {
                d += !gone[y] && adj[x][y];
            }
            if (pick == k || d < pick_degree) {
                pick = x;
                pick_degree = d;
            }
        }
        out.width = std::max(out.width, eliminate(adj, gone, pick));
        out.order.push_back(sorted[pick]);
    }
    return out;
}

std::size_t elimination_width(const IsingProblem &problem, std::span<const Vertex> order) {
    auto adj = induced_adjacency(problem, order);
    std::vector<char> gone(order.size(), 0);
    std::size_t width = 0;
    for (std::size_t x = 0; x < order.size(); ++x) {
        width = std::max(width, eliminate(adj, gone, x));
    }
    return width;
}

std::vector<Subgraph> decompose_low_treewidth(const IsingProblem &problem, std::size_t width_cap) {
    if (width_cap == 0) {
        throw ParameterError("width cap must be positive");
    }
    const std::size_t n = problem.vertex_count();
    std::vector<char> covered(n, 0);
    std::vector<Subgraph> out;
    for (Vertex seed = 0; seed < n; ++seed) {
        if (covered[seed]) {
            continue;
        }
        std::vector<Vertex> region{seed};
        std::vector<char> in_region(n, 0);
        std::vector<std::size_t> links(n, 0);
        in_region[seed] = 1;
        for (const Neighbor &nb : problem.neighbors(seed)) {
            ++links[nb.vertex];
        }
        while (true) {
            Vertex pick = 0;
            std::size_t pick_links = 0;
            bool pick_fresh = false;
            for (Vertex v = 0; v < n; ++v) {
                if (in_region[v] || links[v] == 0) {
                    continue;
                }
                bool fresh = !covered[v];
                if (links[v] > pick_links || (links[v] == pick_links && fresh && !pick_fresh)) {
                    pick = v;
                    pick_links = links[v];
                    pick_fresh = fresh;
                }
            }
            if (pick_links == 0) {
                break;
            }
            region.push_back(pick);
            if (min_degree_order(problem, region).width > width_cap) {
                region.pop_back();
                break;
            }
            in_region[pick] = 1;
            for (const Neighbor &nb : problem.neighbors(pick)) {
                ++links[nb.vertex];
            }
        }
        EliminationOrder elim = min_degree_order(problem, region);
        Subgraph sub;
        sub.vertices = std::move(region);
        std::sort(sub.vertices.begin(), sub.vertices.end());
        sub.elimination_order = std::move(elim.order);
        sub.width = elim.width;
        for (Vertex v : sub.vertices) {
            covered[v] = 1;
        }
        out.push_back(std::move(sub));
    }
    return out;
}

namespace {

// Elimination schedule of one subgraph. Everything here depends only on the
// problem's structure; the spins outside the subgraph enter at run time
// through each variable's unary field.
struct PairTerm {
    double coupling;
    std::int32_t slot;  // position of the partner in the step's scope
};

struct MessageTerm {
    std::size_t step;                 // producing step
    std::vector<std::int32_t> slots;  // per message variable: scope position, -1 for the eliminated one
};

struct PlanStep {
    std::uint32_t var;
    std::vector<std::uint32_t> scope;  // local ids, ascending; bit i of an index is scope[i]
    std::vector<PairTerm> pairs;
    std::vector<MessageTerm> messages;
};

struct Plan {
    std::vector<Vertex> vertices;
    std::vector<std::vector<Neighbor>> external;  // couplings leaving the subgraph, per local id
    std::vector<PlanStep> steps;
};

Plan compile_plan(const IsingProblem &problem, const Subgraph &sub, std::size_t width_cap) {
    const std::size_t n = problem.vertex_count();
    const std::size_t k = sub.vertices.size();
    std::vector<std::int32_t> pos(n, -1);
    for (std::size_t i = 0; i < k; ++i) {
        Vertex v = sub.vertices[i];
        if (v >= n) {
            throw IndexError("subgraph vertex " + std::to_string(v) + " out of range");
        }
        if (pos[v] >= 0) {
            throw ParameterError("subgraph vertex " + std::to_string(v) + " listed twice");
        }
        pos[v] = static_cast<std::int32_t>(i);
    }
    if (sub.elimination_order.size() != k) {
        throw ParameterError("elimination order is not a permutation of the subgraph's vertices");
    }
    std::vector<std::uint32_t> order;
    order.reserve(k);
    {
        std::vector<char> seen(k, 0);
        for (Vertex v : sub.elimination_order) {
            if (v >= n || pos[v] < 0 || seen[pos[v]]) {
                throw ParameterError("elimination order is not a permutation of the subgraph's vertices");
            }
            seen[pos[v]] = 1;
            order.push_back(static_cast<std::uint32_t>(pos[v]));
        }
    }

    Plan plan;
    plan.vertices = sub.vertices;
    plan.external.resize(k);
    // Internal couplings per local id, and which messages mention each variable.
    std::vector<std::vector<std::pair<std::uint32_t, double>>> internal(k);
    for (std::size_t i = 0; i < k; ++i) {
        for (const Neighbor &nb : problem.neighbors(sub.vertices[i])) {
            if (pos[nb.vertex] < 0) {
                plan.external[i].push_back(nb);
            } else {
                internal[i].push_back({static_cast<std::uint32_t>(pos[nb.vertex]), nb.coupling});
            }
        }
    }
    std::vector<char> eliminated(k, 0);
    std::vector<char> consumed;  // per step: message already absorbed
    std::vector<std::vector<std::size_t>> var_messages(k);
    for (std::uint32_t x : order) {
        PlanStep step;
        step.var = x;
        std::vector<std::size_t> bucket;
        for (std::size_t m : var_messages[x]) {
            if (!consumed[m]) {
                bucket.push_back(m);
            }
        }
        for (const auto &[y, j] : internal[x]) {
            if (!eliminated[y]) {
                step.scope.push_back(y);
            }
        }
        for (std::size_t m : bucket) {
            for (std::uint32_t y : plan.steps[m].scope) {
                if (y != x) {
                    step.scope.push_back(y);
                }
            }
        }
        std::sort(step.scope.begin(), step.scope.end());
        step.scope.erase(std::unique(step.scope.begin(), step.scope.end()), step.scope.end());
        if (step.scope.size() > width_cap) {
            throw ParameterError(
                "subgraph width exceeds cap " + std::to_string(width_cap) + "; re-decompose with a larger cap");
        }
        if (step.scope.size() > kMaxTabulatedWidth) {
            throw ParameterError("subgraph width too large to tabulate");
        }
        auto slot_of = [&](std::uint32_t y) {
            return static_cast<std::int32_t>(
                std::lower_bound(step.scope.begin(), step.scope.end(), y) - step.scope.begin());
        };
        for (const auto &[y, j] : internal[x]) {
            if (!eliminated[y]) {
                step.pairs.push_back({j, slot_of(y)});
            }
        }
        for (std::size_t m : bucket) {
            MessageTerm term{m, {}};
            for (std::uint32_t y : plan.steps[m].scope) {
                term.slots.push_back(y == x ? -1 : slot_of(y));
            }
            step.messages.push_back(std::move(term));
            consumed[m] = 1;
        }
        eliminated[x] = 1;
        const std::size_t id = plan.steps.size();
        for (std::uint32_t y : step.scope) {
            var_messages[y].push_back(id);
        }
        consumed.push_back(step.scope.empty() ? 1 : 0);
        plan.steps.push_back(std::move(step));
    }
    return plan;
}

struct Workspace {
    std::vector<double> field;
    std::vector<std::vector<double>> tables;
    std::vector<std::vector<std::uint8_t>> argmin;
    std::vector<std::uint8_t> value;
    std::vector<Spin> out;
};

/// Conditional minimizer of the plan's variables given `spins` outside it.
/// Leaves the minimizing spins in ws.out (one per local id).
void solve_plan(const IsingProblem &problem, const Plan &plan, std::span<const Spin> spins, Workspace &ws) {
    const std::size_t k = plan.vertices.size();
    std::vector<double> &field = ws.field;
    field.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        double f = problem.h(plan.vertices[i]);
        for (const Neighbor &nb : plan.external[i]) {
            f += nb.coupling * spins[nb.vertex];
        }
        field[i] = f;
    }
    std::vector<std::vector<double>> &tables = ws.tables;
    std::vector<std::vector<std::uint8_t>> &argmin = ws.argmin;
    if (tables.size() < plan.steps.size()) {
        tables.resize(plan.steps.size());
        argmin.resize(plan.steps.size());
    }
    for (std::size_t s = 0; s < plan.steps.size(); ++s) {
        const PlanStep &step = plan.steps[s];
        const std::size_t size = std::size_t{1} << step.scope.size();
        std::vector<double> &table = tables[s];
        table.resize(size);
        argmin[s].resize(size);
        for (std::size_t assignment = 0; assignment < size; ++assignment) {
            // Energy terms involving the variable, with it at -1 and at +1.
            double down = -field[step.var];
            double up = field[step.var];
            for (const PairTerm &p : step.pairs) {
                double other = (assignment >> p.slot) & 1 ? p.coupling : -p.coupling;
                down -= other;
                up += other;
            }
            for (const MessageTerm &m : step.messages) {
                std::size_t index0 = 0;
                std::size_t index1 = 0;
                for (std::size_t b = 0; b < m.slots.size(); ++b) {
                    if (m.slots[b] < 0) {
                        index1 |= std::size_t{1} << b;
                    } else {
                        std::size_t bit = (assignment >> m.slots[b]) & 1;
                        index0 |= bit << b;
                        index1 |= bit << b;
                    }
                }
                down += tables[m.step][index0];
                up += tables[m.step][index1];
            }
            if (down < up) {
                table[assignment] = down;
                argmin[s][assignment] = 0;
            } else {
                table[assignment] = up;
                argmin[s][assignment] = 1;
            }
        }
    }
    std::vector<std::uint8_t> &value = ws.value;
    value.assign(k, 0);
    for (std::size_t s = plan.steps.size(); s-- > 0;) {
        const PlanStep &step = plan.steps[s];
        std::size_t assignment = 0;
        for (std::size_t b = 0; b < step.scope.size(); ++b) {
            assignment |= std::size_t{value[step.scope[b]]} << b;
        }
        value[step.var] = argmin[s][assignment];
    }
    ws.out.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        ws.out[i] = value[i] ? Spin{1} : Spin{-1};
    }
}

/// Applies the plan's minimizer to `spins` in place unless that raises the
/// energy. Returns the energy change (0 when rejected).
double apply_plan(const IsingProblem &problem, const Plan &plan, std::vector<Spin> &spins, Workspace &ws) {
    solve_plan(problem, plan, spins, ws);
    const std::vector<Spin> &scratch = ws.out;
    std::vector<Vertex> flipped;
    double delta = 0.0;
    for (std::size_t i = 0; i < plan.vertices.size(); ++i) {
        Vertex v = plan.vertices[i];
        if (spins[v] != scratch[i]) {
            delta += flip_delta(problem, spins, v);
            spins[v] = scratch[i];
            flipped.push_back(v);
        }
    }
    if (delta > 0.0) {
        for (Vertex v : flipped) {
            spins[v] = static_cast<Spin>(-spins[v]);
        }
        return 0.0;
    }
    return delta;
}

}  // namespace

SpinConfiguration optimize_subgraph(
    const IsingProblem &problem, const SpinConfiguration &config, const Subgraph &sub, std::size_t width_cap) {
    if (config.size() != problem.vertex_count()) {
        throw DimensionError("configuration does not match the problem's vertex count");
    }
    if (sub.vertices.empty()) {
        return config;
    }
    Plan plan = compile_plan(problem, sub, width_cap);
    Workspace ws;
    solve_plan(problem, plan, config.spins(), ws);
    const std::vector<Spin> &scratch = ws.out;
    std::vector<Spin> spins = config.spin_vector();
    bool changed = false;
    for (std::size_t i = 0; i < plan.vertices.size(); ++i) {
        changed |= spins[plan.vertices[i]] != scratch[i];
        spins[plan.vertices[i]] = scratch[i];
    }
    if (!changed) {
        return config;
    }
    SpinConfiguration candidate(problem, std::move(spins));
    if (candidate.energy() > config.energy()) {
        return config;
    }
    return candidate;
}

RunSet builtin_opt_pp(
    const IsingProblem &problem, const RunSet &runset, std::span<const Subgraph> subgraphs, std::size_t width_cap,
    bool repeat_until_stable) {
    if (runset.empty()) {
        throw InputError("cannot post-process an empty run set");
    }
    RunSet out;
    out.problem_id = runset.problem_id;
    out.provenance = runset.provenance;
    out.runs.resize(runset.size());
    std::vector<Plan> plans;
    plans.reserve(subgraphs.size());
    for (const Subgraph &sub : subgraphs) {
        plans.push_back(compile_plan(problem, sub, width_cap));
    }
    detail::parallel_for(runset.size(), [&](std::size_t r) {
        if (runset.runs[r].size() != problem.vertex_count()) {
            throw DimensionError("run does not match the problem's vertex count");
        }
        std::vector<Spin> spins = runset.runs[r].spin_vector();
        Workspace ws;
        while (true) {
            double gain = 0.0;
            for (const Plan &plan : plans) {
                gain += apply_plan(problem, plan, spins, ws);
            }
            if (!repeat_until_stable || !(gain < -kEnergyTolerance)) {
                break;
            }
        }
        out.runs[r] = SpinConfiguration(problem, std::move(spins));
    });
    return out;
}

RunSet builtin_opt_pp(
    const IsingProblem &problem, const RunSet &runset, std::size_t width_cap, bool repeat_until_stable) {
    if (runset.empty()) {
        throw InputError("cannot post-process an empty run set");
    }
    std::vector<Subgraph> subgraphs = decompose_low_treewidth(problem, width_cap);
    return builtin_opt_pp(problem, runset, subgraphs, width_cap, repeat_until_stable);
}

std::vector<Spin> FixedAssignment::assemble(std::span<const Spin> free_spins) const {
    if (free_spins.size() != free_vertices.size()) {
        throw DimensionError("free spin count does not match the reduced problem");
    }
    std::vector<Spin> full(assignments.size());
    for (std::size_t v = 0; v < assignments.size(); ++v) {
        if (assignments[v]) {
            full[v] = *assignments[v];
        }
    }
    for (std::size_t i = 0; i < free_vertices.size(); ++i) {
        full[free_vertices[i]] = free_spins[i];
    }
    return full;
}

FixedAssignment fix_spins(const IsingProblem &problem, std::span<const std::optional<Spin>> assignments) {
    const std::size_t n = problem.vertex_count();
    if (assignments.size() != n) {
        throw DimensionError("assignment length does not match the problem's vertex count");
    }
    FixedAssignment out;
    out.assignments.assign(assignments.begin(), assignments.end());
    std::vector<std::int32_t> reduced_index(n, -1);
    for (Vertex v = 0; v < n; ++v) {
        if (assignments[v]) {
            if (*assignments[v] != 1 && *assignments[v] != -1) {
                throw ParameterError("fixed spin at vertex " + std::to_string(v) + " is not +1 or -1");
            }
            out.offset += problem.h(v) * *assignments[v];
        } else {
            reduced_index[v] = static_cast<std::int32_t>(out.free_vertices.size());
            out.free_vertices.push_back(v);
        }
    }
    std::vector<double> linear;
    linear.reserve(out.free_vertices.size());
    for (Vertex v : out.free_vertices) {
        linear.push_back(problem.h(v));
    }
    std::vector<Coupling> couplings;
    for (const Coupling &c : problem.couplings()) {
        bool fa = assignments[c.a].has_value();
        bool fb = assignments[c.b].has_value();
        if (fa && fb) {
            out.offset += c.value * *assignments[c.a] * *assignments[c.b];
        } else if (fa) {
            linear[reduced_index[c.b]] += c.value * *assignments[c.a];
        } else if (fb) {
            linear[reduced_index[c.a]] += c.value * *assignments[c.b];
        } else {
            couplings.push_back(
                {static_cast<Vertex>(reduced_index[c.a]), static_cast<Vertex>(reduced_index[c.b]), c.value});
        }
    }
    out.reduced_problem = IsingProblem(out.free_vertices.size(), std::move(linear), std::move(couplings));
    return out;
}

FixedAssignment persistence_fix(const IsingProblem &problem, const RunSet &runset, double threshold) {
    if (!(threshold > 0.5 && threshold <= 1.0)) {
        throw ParameterError("persistence threshold must lie in (0.5, 1]");
    }
    if (runset.size() < 2) {
        throw InputError("persistence needs at least two runs");
    }
    const std::size_t n = problem.vertex_count();
    std::vector<std::size_t> up(n, 0);
    for (const SpinConfiguration &run : runset.runs) {
        if (run.size() != n) {
            throw DimensionError("run length does not match the problem's vertex count");
        }
        for (std::size_t v = 0; v < n; ++v) {
            up[v] += run[v] == 1;
        }
    }
    const double total = static_cast<double>(runset.size());
    std::vector<std::optional<Spin>> assignments(n);
    for (std::size_t v = 0; v < n; ++v) {
        double frac_up = static_cast<double>(up[v]) / total;
        double frac_down = static_cast<double>(runset.size() - up[v]) / total;
        if (frac_up >= threshold) {
            assignments[v] = Spin{1};
        } else if (frac_down >= threshold) {
            assignments[v] = Spin{-1};
        }
    }
    return fix_spins(problem, assignments);
}

PersistenceResult sample_persistence(
    const IsingProblem &problem, SamplerKind kind, const SamplerParams &params, double threshold, std::size_t rounds) {
    if (!(threshold > 0.5 && threshold <= 1.0)) {
        throw ParameterError("persistence threshold must lie in (0.5, 1]");
    }
    if (rounds == 0) {
        throw ParameterError("rounds must be positive");
    }
    RunSet full = sample(problem, kind, params);
    PersistenceResult out;
    out.best = full.best();
    for (std::size_t round = 1; round < rounds; ++round) {
        FixedAssignment fixed = persistence_fix(problem, full, threshold);
        out.fixed_per_round.push_back(fixed.fixed_count());
        if (fixed.free_vertices.empty()) {
            SpinConfiguration pinned(problem, fixed.assemble({}));
            if (pinned.energy() < out.best.energy()) {
                out.best = std::move(pinned);
            }
            break;
        }
        SamplerParams round_params = params;
        round_params.seed = derive_seed(params.seed, round);
        RunSet reduced = sample(fixed.reduced_problem, kind, round_params);
        full.runs.clear();
        for (const SpinConfiguration &run : reduced.runs) {
            full.runs.emplace_back(problem, fixed.assemble(run.spins()));
        }
        const SpinConfiguration &round_best = full.best();
        if (round_best.energy() < out.best.energy()) {
            out.best = round_best;
        }
    }
    return out;
}

}  // namespace qpost
