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

// Brute-force reference computations shared by the tests. Nothing here calls
// into the library's arithmetic; problems are read only for their raw
// coefficient lists.

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qpost/ising.h"

namespace oracle {

using qpost::Spin;

struct Dense {
    std::size_t n = 0;
    std::vector<double> h;
    std::vector<std::vector<double>> j;  // symmetric, zero diagonal
};

inline Dense dense(const qpost::IsingProblem &p) {
    Dense d;
    d.n = p.vertex_count();
    d.h.assign(p.linear().begin(), p.linear().end());
    d.j.assign(d.n, std::vector<double>(d.n, 0.0));
    for (const auto &c : p.couplings()) {
        d.j[c.a][c.b] = c.value;
        d.j[c.b][c.a] = c.value;
    }
    return d;
}

inline double energy(const Dense &d, const std::vector<Spin> &s) {
    double e = 0.0;
    for (std::size_t a = 0; a < d.n; ++a) {
        e += d.h[a] * s[a];
        for (std::size_t b = a + 1; b < d.n; ++b) {
            e += d.j[a][b] * s[a] * s[b];
        }
    }
    return e;
}

inline std::vector<Spin> state(std::uint64_t bits, std::size_t n) {
    std::vector<Spin> s(n);
    for (std::size_t i = 0; i < n; ++i) {
        s[i] = (bits >> i) & 1 ? 1 : -1;
    }
    return s;
}

struct Minimum {
    double energy = std::numeric_limits<double>::infinity();
    std::vector<Spin> spins;
};

/// Plain enumeration of all 2^n states.
inline Minimum ground(const qpost::IsingProblem &p) {
    Dense d = dense(p);
    Minimum best;
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << d.n); ++bits) {
        auto s = state(bits, d.n);
        double e = energy(d, s);
        if (e < best.energy) {
            best = {e, s};
        }
    }
    return best;
}

/// Minimum over the 2^|free| assignments of `free` with the rest of `base` held.
inline Minimum conditional_ground(const qpost::IsingProblem &p, std::vector<Spin> base,
                                  const std::vector<qpost::Vertex> &free) {
    Dense d = dense(p);
    Minimum best;
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << free.size()); ++bits) {
        for (std::size_t i = 0; i < free.size(); ++i) {
            base[free[i]] = (bits >> i) & 1 ? 1 : -1;
        }
        double e = energy(d, base);
        if (e < best.energy) {
            best = {e, base};
        }
    }
    return best;
}

/// Exact Boltzmann probabilities exp(-beta E)/Z indexed by state bits.
inline std::vector<double> boltzmann(const qpost::IsingProblem &p, double beta) {
    Dense d = dense(p);
    std::vector<double> w(std::size_t{1} << d.n);
    double emin = std::numeric_limits<double>::infinity();
    std::vector<double> e(w.size());
    for (std::uint64_t bits = 0; bits < w.size(); ++bits) {
        e[bits] = energy(d, state(bits, d.n));
        emin = std::min(emin, e[bits]);
    }
    double z = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        w[i] = std::exp(-beta * (e[i] - emin));
        z += w[i];
    }
    for (double &x : w) {
        x /= z;
    }
    return w;
}

inline std::uint64_t bits_of(std::span<const Spin> s) {
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        bits |= std::uint64_t{s[i] > 0} << i;
    }
    return bits;
}

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(const std::string &data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace oracle
