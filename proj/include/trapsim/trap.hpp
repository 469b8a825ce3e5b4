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
#include <optional>
#include <sstream>
#include <string>

#include "trapsim/constants.hpp"
#include "trapsim/oscillator.hpp"
#include "trapsim/quadrature.hpp"

namespace trapsim {

/// Trap axes. x and y are transverse to the trap beam, z is along it.
enum class Axis : int { x = 0, y = 1, z = 2 };

inline constexpr std::array<Axis, 3> all_axes = {Axis::x, Axis::y, Axis::z};

inline const char* axis_name(Axis a)
{
    switch (a) {
    case Axis::x: return "x";
    case Axis::y: return "y";
    default: return "z";
    }
}

using AxisArray = std::array<double, 3>;
using Mode = std::array<int, 3>;

/// Physical inputs for one trap. All SI; unit conversion happens at the
/// config boundary.
struct TrapConfig {
    double depth = 300.0 * units::microkelvin * 1.380649e-23; // |U0| in J
    double waist = 1.4 * units::micrometer;
    double wavelength = 852.0 * units::nanometer;
    /// Mean trap frequencies at `depth`. When unset they follow from depth,
    /// waist and wavelength for a Gaussian focus.
    std::optional<double> omega_perp;
    std::optional<double> omega_par;
    double temperature = 0.0; // K
    /// Highest vibrational number kept per axis (x, y, z).
    std::optional<Mode> vmax;
    std::optional<double> occupancy_eps;
    /// Fractional depth difference between the spin states. Overrides the
    /// two-level estimate omega_hpf / (omega_0 - omega_L).
    std::optional<double> s_diff;
    /// Lamb-Dicke parameters at |k_L| per axis. Overrides k_L * x_zpf.
    std::optional<AxisArray> eta;
    /// |omega_L - omega_0| must exceed this multiple of the fine-structure
    /// splitting for the two-level reduction.
    double min_detuning_ratio = 3.0;
    std::size_t max_modes = 50'000'000;

    void validate() const
    {
        if (!(depth > 0))
            throw ConfigError("trap depth must be positive");
        if (!(waist > 0) || !(wavelength > 0))
            throw ConfigError("waist and wavelength must be positive");
        if (omega_perp.has_value() != omega_par.has_value())
            throw ConfigError("give both omega_perp and omega_par, or neither");
        if (omega_perp && !(*omega_perp >= *omega_par && *omega_par > 0))
            throw ConfigError("trap frequencies must satisfy omega_perp >= omega_par > 0");
        if (!(temperature >= 0))
            throw ConfigError("temperature must be >= 0");
        if (vmax)
            for (int v : *vmax)
                if (v < 0)
                    throw ConfigError("vmax entries must be >= 0");
        if (occupancy_eps && !(*occupancy_eps > 0 && *occupancy_eps < 1))
            throw ConfigError("occupancy_eps must lie in (0, 1)");
        if (!vmax && !occupancy_eps)
            throw ConfigError("truncation needs vmax or occupancy_eps");
        if (eta)
            for (double e : *eta)
                if (!(e > 0))
                    throw ConfigError("eta overrides must be positive");
        if (!(min_detuning_ratio > 0))
            throw ConfigError("min_detuning_ratio must be positive");
        if (max_modes == 0)
            throw ConfigError("max_modes must be positive");
    }

    /// Same geometry at a different depth. Explicit frequencies scale as
    /// sqrt(depth).
    TrapConfig with_depth(double new_depth) const
    {
        TrapConfig out = *this;
        out.depth = new_depth;
        if (omega_perp) {
            const double r = std::sqrt(new_depth / depth);
            out.omega_perp = *omega_perp * r;
            out.omega_par = *omega_par * r;
        }
        return out;
    }
};

/// Quantities derived from constants + trap config.
struct DerivedTrap {
    double hbar = 0;
    double mass = 0;
    double depth = 0;           // |U0|, J
    double omega_L = 0;         // trap light, rad/s
    double k_L = 0;             // rad/m
    double detuning = 0;        // omega_L - omega_0, rad/s
    double omega_0 = 0;
    double s_diff = 0;
    double d0 = 0;              // C m
    AxisArray omega{};          // mean potential
    AxisArray omega_a{};
    AxisArray omega_b{};
    AxisArray x_zpf{};
    AxisArray eta{};

    double omega_of(Axis a) const { return omega[static_cast<int>(a)]; }
    /// omega^(b) - omega^(a) on one axis.
    double omega_split(Axis a) const
    {
        const int i = static_cast<int>(a);
        return omega_b[i] - omega_a[i];
    }
};

/// Trap frequencies of a Gaussian focus: omega_perp = sqrt(4U/(m w^2)),
/// omega_par = sqrt(2U/(m z_R^2)) with z_R = pi w^2 / lambda.
inline std::pair<double, double> gaussian_focus_frequencies(double depth, double mass, double waist,
                                                            double wavelength)
{
    const double z_r = pi * waist * waist / wavelength;
    return {std::sqrt(4.0 * depth / (mass * waist * waist)),
            std::sqrt(2.0 * depth / (mass * z_r * z_r))};
}

inline DerivedTrap derive_trap(const PhysicalConstants& k, const TrapConfig& cfg)
{
    k.validate();
    cfg.validate();
    DerivedTrap d;
    d.hbar = k.hbar;
    d.mass = k.atom_mass;
    d.depth = cfg.depth;
    d.omega_L = two_pi * k.c / cfg.wavelength;
    d.k_L = two_pi / cfg.wavelength;
    d.omega_0 = k.omega_0();
    d.detuning = d.omega_L - d.omega_0;
    if (std::abs(d.detuning) < cfg.min_detuning_ratio * k.fine_structure_splitting()) {
        std::ostringstream msg;
        msg << "trap light too close to resonance for the two-level reduction: |omega_L - omega_0| = "
            << std::abs(d.detuning) << " rad/s is below " << cfg.min_detuning_ratio
            << " x fine-structure splitting";
        throw ConfigError(msg.str());
    }
    d.s_diff = cfg.s_diff.value_or(k.omega_hpf / (d.omega_0 - d.omega_L));

    double w_perp, w_par;
    if (cfg.omega_perp) {
        w_perp = *cfg.omega_perp;
        w_par = *cfg.omega_par;
    }
    else {
        std::tie(w_perp, w_par) =
            gaussian_focus_frequencies(cfg.depth, k.atom_mass, cfg.waist, cfg.wavelength);
    }
    d.omega = {w_perp, w_perp, w_par};
    for (int i = 0; i < 3; ++i) {
        // depth ratio b/a = (1 + s/2)/(1 - s/2); frequency goes as sqrt(depth)
        d.omega_a[i] = d.omega[i] * (1.0 - 0.25 * d.s_diff);
        d.omega_b[i] = d.omega[i] * (1.0 + 0.25 * d.s_diff);
        d.x_zpf[i] = std::sqrt(k.hbar / (2.0 * k.atom_mass * d.omega[i]));
        d.eta[i] = cfg.eta ? (*cfg.eta)[i] : d.k_L * d.x_zpf[i];
    }
    // two-level dipole from the D2 linewidth: Gamma = omega^3 d^2 / (3 pi eps0 hbar c^3)
    d.d0 = std::sqrt(3.0 * pi * vacuum_permittivity * k.hbar * k.c * k.c * k.c * k.gamma_D2 /
                     (k.omega_D2 * k.omega_D2 * k.omega_D2));
    return d;
}

/// Magnetic-dipole decay rate of the clock transition (SI form).
inline double gamma0(const PhysicalConstants& k)
{
    const double I = k.nuclear_spin;
    const double w3 = k.omega_hpf * k.omega_hpf * k.omega_hpf;
    return 4.0 * I * k.g_electron * k.g_electron / (3.0 * (2.0 * I + 1.0)) * mu0_over_4pi * w3 *
           k.muB * k.muB / (k.hbar * k.c * k.c * k.c);
}

/// <n|(1/2) m omega^2 x^2|n'> on one axis of the mean potential, in J. The
/// constant -|U0| of the full potential is not included.
inline double osc_elem_position_quadratic(int n, int n_prime, Axis axis, const DerivedTrap& d)
{
    return 0.25 * d.hbar * d.omega_of(axis) * oscillator::x2_element(n, n_prime);
}

/// Overlap <psi_n(omega_b)|psi_n(omega_a)> of same-index eigenfunctions of
/// two oscillators with equal mass, by Gauss-Hermite quadrature. Both
/// Gaussians combine to exp(-xi^2) in the mean-frequency scaling, so the
/// rule is exact once it has more than n nodes.
inline double mode_overlap_1d(int n, double omega_a, double omega_b)
{
    if (omega_a == omega_b)
        return 1.0;
    const double wm = 0.5 * (omega_a + omega_b);
    const double sa = std::sqrt(omega_a / wm);
    const double sb = std::sqrt(omega_b / wm);
    const int nodes = std::max(n + 8, 16);
    const auto rule = quadrature::gauss_hermite_scaled(nodes);
    std::vector<double> pa(n + 1), pb(n + 1);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double xi = rule.nodes[i];
        oscillator::hermite_functions(sa * xi, n + 1, pa.data());
        oscillator::hermite_functions(sb * xi, n + 1, pb.data());
        acc += rule.weights[i] * pa[n] * pb[n];
    }
    return std::pow(omega_a * omega_b, 0.25) / std::sqrt(wm) * acc;
}

/// Product of per-axis overlaps for mode v. Diagnostic only; the dynamics
/// take the overlap as exactly one.
inline double mode_overlap_diagnostic(const Mode& v, const DerivedTrap& d)
{
    double out = 1.0;
    for (int i = 0; i < 3; ++i)
        out *= mode_overlap_1d(v[i], d.omega_a[i], d.omega_b[i]);
    return out;
}

} // namespace trapsim
