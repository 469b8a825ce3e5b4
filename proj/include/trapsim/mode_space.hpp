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

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <sstream>
#include <vector>

#include "trapsim/trap.hpp"

namespace trapsim {

/// Vibrational energy difference between the b and a potentials for mode v,
/// divided by hbar:
///   (vx + 1/2)(wb-wa)_x + (vy + 1/2)(wb-wa)_y + (vz + 1/2)(wb-wa)_z,
/// which for degenerate transverse axes is (vx+vy+1) dw_perp + (vz+1/2) dw_par.
inline double delta_omega_v(const Mode& v, const DerivedTrap& d)
{
    double out = 0.0;
    for (int i = 0; i < 3; ++i)
        out += (v[i] + 0.5) * (d.omega_b[i] - d.omega_a[i]);
    return out;
}

/// Truncated box of 3-D vibrational modes. Modes are ordered
/// lexicographically in (vx, vy, vz), so z (the densest, axial ladder) is the
/// fastest-running index. Per-mode energies and detunings are computed from
/// the per-axis ladders rather than stored.
class ModeSpace {
public:
    ModeSpace() = default;

    /// `levels` is the number of kept levels per axis (vmax + 1).
    ModeSpace(const std::array<int, 3>& levels, const DerivedTrap& trap)
        : levels_(levels), trap_(trap)
    {
        for (int n : levels_)
            if (n < 1)
                throw std::invalid_argument("ModeSpace: every axis needs at least one level");
        size_ = static_cast<std::size_t>(levels_[0]) * levels_[1] * levels_[2];
        for (int i = 0; i < 3; ++i) {
            split_[i] = trap.omega_b[i] - trap.omega_a[i];
            delta0_ += 0.5 * split_[i];
        }
    }

    std::size_t size() const { return size_; }
    bool empty() const { return size_ == 0; }
    int levels(Axis a) const { return levels_[static_cast<int>(a)]; }
    const std::array<int, 3>& levels() const { return levels_; }
    const DerivedTrap& trap() const { return trap_; }

    Mode mode(std::size_t i) const
    {
        const int vz = static_cast<int>(i % levels_[2]);
        i /= levels_[2];
        const int vy = static_cast<int>(i % levels_[1]);
        const int vx = static_cast<int>(i / levels_[1]);
        return {vx, vy, vz};
    }

    bool contains(const Mode& v) const
    {
        for (int i = 0; i < 3; ++i)
            if (v[i] < 0 || v[i] >= levels_[i])
                return false;
        return true;
    }

    std::size_t index(const Mode& v) const
    {
        return (static_cast<std::size_t>(v[0]) * levels_[1] + v[1]) * levels_[2] + v[2];
    }

    /// Stride of one quantum along an axis in the linear index.
    std::ptrdiff_t stride(Axis a) const
    {
        switch (a) {
        case Axis::x: return static_cast<std::ptrdiff_t>(levels_[1]) * levels_[2];
        case Axis::y: return levels_[2];
        default: return 1;
        }
    }

    double energy_a(std::size_t i) const { return energy(i, trap_.omega_a); }
    double energy_b(std::size_t i) const { return energy(i, trap_.omega_b); }

    double delta_omega(std::size_t i) const
    {
        const Mode v = mode(i);
        return delta0_ + v[0] * split_[0] + v[1] * split_[1] + v[2] * split_[2];
    }

    /// delta omega of the ground mode (0,0,0).
    double delta_omega_ground() const { return delta0_; }
    /// Increment of delta omega per quantum on an axis.
    double delta_omega_step(Axis a) const { return split_[static_cast<int>(a)]; }

    /// Calls f(i, exp(sign * i * delta_omega_i * t)) for every mode in index
    /// order, assembling the factor from per-axis tables.
    template <class F>
    void for_each_phase_factor(double t, double sign, F&& f) const
    {
        std::array<std::vector<std::complex<double>>, 3> axis;
        for (int a = 0; a < 3; ++a) {
            axis[a].resize(levels_[a]);
            for (int n = 0; n < levels_[a]; ++n) {
                // the ground offset is folded into the z table
                const double w = n * split_[a] + (a == 2 ? delta0_ : 0.0);
                axis[a][n] = std::polar(1.0, sign * w * t);
            }
        }
        std::size_t i = 0;
        for (int x = 0; x < levels_[0]; ++x)
            for (int y = 0; y < levels_[1]; ++y) {
                const auto xy = axis[0][x] * axis[1][y];
                for (int z = 0; z < levels_[2]; ++z, ++i)
                    f(i, xy * axis[2][z]);
            }
    }

    /// out[i] = exp(sign * i * delta_omega_i * t) for every mode.
    void phase_factors(double t, double sign, std::vector<std::complex<double>>& out) const
    {
        out.resize(size_);
        for_each_phase_factor(t, sign, [&](std::size_t i, std::complex<double> e) { out[i] = e; });
    }

    /// Max |delta_omega_v - delta_omega_v'| over pairs whose index offsets
    /// are bounded by `reach` quanta in total.
    double max_delta_omega_difference(int reach) const
    {
        double best = 0.0;
        for (int a = 0; a < 3; ++a)
            if (levels_[a] > 1)
                best = std::max(best, std::abs(split_[a]) * std::min(reach, levels_[a] - 1));
        return best;
    }

private:
    double energy(std::size_t i, const AxisArray& w) const
    {
        const Mode v = mode(i);
        double e = 0.0;
        for (int a = 0; a < 3; ++a)
            e += trap_.hbar * w[a] * (v[a] + 0.5);
        return e;
    }

    std::array<int, 3> levels_{1, 1, 1};
    std::size_t size_ = 0;
    DerivedTrap trap_{};
    AxisArray split_{};
    double delta0_ = 0.0;
};

/// Levels needed on one axis so the discarded Boltzmann weight is at most
/// `tail`: the smallest N with exp(-beta hbar w)^N <= tail.
inline int levels_for_tail(double hbar_omega, double kT, double tail)
{
    if (kT <= 0.0)
        return 1;
    const double log_x = -hbar_omega / kT;
    const double n = std::ceil(std::log(tail) / log_x);
    if (n > std::numeric_limits<int>::max() / 2)
        return std::numeric_limits<int>::max() / 2;
    return std::max(1, static_cast<int>(n));
}

/// Builds the truncated mode box. With occupancy_eps the box on each axis
/// keeps all but eps/3 of that axis' thermal weight (so the product keeps at
/// least 1 - eps); vmax, when also given, caps the box.
inline ModeSpace enumerate_modes(const TrapConfig& cfg, const DerivedTrap& trap,
                                 double kB = 1.380649e-23)
{
    std::array<int, 3> levels{};
    for (int a = 0; a < 3; ++a) {
        long long n = std::numeric_limits<int>::max() / 2;
        if (cfg.occupancy_eps)
            n = levels_for_tail(trap.hbar * trap.omega_a[a], kB * cfg.temperature,
                                *cfg.occupancy_eps / 3.0);
        if (cfg.vmax)
            n = std::min<long long>(n, (*cfg.vmax)[a] + 1LL);
        levels[a] = static_cast<int>(n);
    }
    long double total = 1.0L;
    for (int n : levels)
        total *= n;
    if (total > static_cast<long double>(cfg.max_modes)) {
        int worst = 0;
        for (int a = 1; a < 3; ++a)
            if (levels[a] > levels[worst])
                worst = a;
        std::ostringstream msg;
        msg << "truncation infeasible: axis " << axis_name(static_cast<Axis>(worst)) << " needs "
            << levels[worst] << " levels; box " << levels[0] << "x" << levels[1] << "x" << levels[2]
            << " exceeds max_modes = " << cfg.max_modes;
        throw TruncationError(msg.str());
    }
    return ModeSpace(levels, trap);
}

} // namespace trapsim
