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

#include "qpost/hpe.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qpost/errors.h"
#include "qpost/random.h"

namespace qpost {

namespace {

void check_model(const PrecisionModel &model) {
    for (const Interval *iv : {&model.h_clip, &model.j_clip}) {
        if (!std::isfinite(iv->lo) || !std::isfinite(iv->hi) || iv->lo > iv->hi) {
            throw ParameterError("precision clip interval is empty or not finite");
        }
    }
    if (model.levels < 2) {
        throw ParameterError("precision model needs at least 2 levels");
    }
}

}  // namespace

double quantize(double value, const Interval &clip, std::size_t levels) {
    double x = std::clamp(value, clip.lo, clip.hi);
    if (clip.lo == clip.hi || levels < 2) {
        return x;
    }
    const double m = static_cast<double>(levels - 1);
    double k = std::round((x - clip.lo) / (clip.hi - clip.lo) * m);
    k = std::clamp(k, 0.0, m);
    // Weighted form keeps both endpoints (and 0 on symmetric odd grids) exact.
    return (clip.lo * (m - k) + clip.hi * k) / m;
}

IsingProblem scale_problem(const IsingProblem &problem, double l) {
    if (!std::isfinite(l) || l <= 0.0) {
        throw ParameterError("scale factor must be positive and finite");
    }
    std::vector<double> linear(problem.linear().begin(), problem.linear().end());
    for (double &h : linear) {
        h *= l;
    }
    std::vector<Coupling> couplings(problem.couplings().begin(), problem.couplings().end());
    for (Coupling &c : couplings) {
        c.value *= l;
    }
    return IsingProblem(problem.vertex_count(), std::move(linear), std::move(couplings));
}

IsingProblem quantize_problem(const IsingProblem &problem, const PrecisionModel &model) {
    check_model(model);
    std::vector<double> linear(problem.linear().begin(), problem.linear().end());
    for (double &h : linear) {
        h = quantize(h, model.h_clip, model.levels);
    }
    std::vector<Coupling> couplings(problem.couplings().begin(), problem.couplings().end());
    for (Coupling &c : couplings) {
        c.value = quantize(c.value, model.j_clip, model.levels);
    }
    return IsingProblem(problem.vertex_count(), std::move(linear), std::move(couplings));
}

HpeReport hpe_aggregate(const IsingProblem &problem, std::span<const RunSet> per_scale, PairingStrategy strategy) {
    if (per_scale.empty()) {
        throw InputError("no scaled run sets to aggregate");
    }
    const std::size_t n = per_scale.front().size();
    if (n == 0) {
        throw InputError("scaled run sets are empty");
    }
    HpeReport report;
    report.input_min_energy = std::numeric_limits<double>::infinity();
    // Re-evaluate every run at full precision.
    std::vector<std::vector<SpinConfiguration>> full(per_scale.size());
    for (std::size_t k = 0; k < per_scale.size(); ++k) {
        if (per_scale[k].size() != n) {
            throw InputError(
                "scale " + std::to_string(k) + " has " + std::to_string(per_scale[k].size()) + " runs, expected " +
                std::to_string(n));
        }
        double best = std::numeric_limits<double>::infinity();
        for (const SpinConfiguration &run : per_scale[k].runs) {
            full[k].emplace_back(problem, run.spin_vector());
            best = std::min(best, full[k].back().energy());
        }
        report.scale_best_energies.push_back(best);
        report.input_min_energy = std::min(report.input_min_energy, best);
    }

    std::vector<SpinConfiguration> intermediate;
    intermediate.reserve(n);
    std::vector<SpinConfiguration> group(per_scale.size());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < per_scale.size(); ++k) {
            group[k] = full[k][i];
        }
        intermediate.push_back(mqc_reduce(problem, group, strategy).result);
        report.group_energies.push_back(intermediate.back().energy());
    }
    report.result = mqc_reduce(problem, intermediate, strategy).result;
    return report;
}

HpeReport hpe(
    const IsingProblem &problem, const ScaleSet &scales, const PrecisionModel &model, SamplerKind kind,
    const SamplerParams &params, PairingStrategy strategy) {
    if (scales.scales.empty()) {
        throw ParameterError("scale set is empty");
    }
    for (std::size_t k = 0; k < scales.scales.size(); ++k) {
        double l = scales.scales[k];
        if (!std::isfinite(l) || l <= 0.0) {
            throw ParameterError("scale factors must be positive and finite");
        }
        if (k > 0 && !(scales.scales[k - 1] < l)) {
            throw ParameterError("scale factors must be distinct and ascending");
        }
    }
    if (scales.runs_per_scale == 0) {
        throw ParameterError("runs_per_scale must be positive");
    }
    check_model(model);

    std::vector<RunSet> per_scale;
    per_scale.reserve(scales.scales.size());
    for (std::size_t k = 0; k < scales.scales.size(); ++k) {
        IsingProblem device = quantize_problem(scale_problem(problem, scales.scales[k]), model);
        SamplerParams p = params;
        p.num_runs = scales.runs_per_scale;
        p.seed = derive_seed(params.seed, k);
        per_scale.push_back(sample(device, kind, p));
    }
    return hpe_aggregate(problem, per_scale, strategy);
}

}  // namespace qpost
