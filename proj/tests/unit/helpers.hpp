// Copyright 2026 The trapsim Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <random>

#include "trapsim/trapsim.hpp"

namespace trapsim::fixtures {

inline TrapConfig reference_trap(Mode vmax = {2, 2, 2})
{
    TrapConfig c;
    c.omega_perp = units::angular_from_kHz(72.0);
    c.omega_par = units::angular_from_kHz(9.6);
    c.vmax = vmax;
    return c;
}

inline DerivedTrap reference_derived() { return derive_trap(PhysicalConstants::rubidium87(), reference_trap()); }

/// Random valid 2x2 blocks on every mode, normalized to unit trace.
inline QubitVibState random_state(std::size_t n, unsigned seed, double t = 0.0)
{
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    QubitVibState s(n);
    double tr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        s.rho_aa[i] = u(rng);
        s.rho_bb[i] = u(rng);
        const double lim = std::sqrt(s.rho_aa[i] * s.rho_bb[i]);
        s.rho_ba[i] = std::polar(lim * u(rng), two_pi * u(rng));
        tr += s.rho_aa[i] + s.rho_bb[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
        s.rho_aa[i] /= tr;
        s.rho_bb[i] /= tr;
        s.rho_ba[i] /= tr;
    }
    s.time = t;
    return s;
}

inline double max_block_diff(const QubitVibState& x, const QubitVibState& y)
{
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        d = std::max(d, std::abs(x.rho_aa[i] - y.rho_aa[i]));
        d = std::max(d, std::abs(x.rho_bb[i] - y.rho_bb[i]));
        d = std::max(d, std::abs(x.rho_ba[i] - y.rho_ba[i]));
    }
    return d;
}

} // namespace trapsim::fixtures
