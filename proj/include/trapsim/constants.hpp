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

#include <numbers>

#include "trapsim/errors.hpp"

namespace trapsim {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// CODATA 2018
inline constexpr double vacuum_permittivity = 8.8541878128e-12; // F/m
inline constexpr double mu0_over_4pi = 1.00000000055e-7;        // T m/A

namespace units {

inline constexpr double microkelvin = 1e-6;
inline constexpr double millikelvin = 1e-3;
inline constexpr double nanometer = 1e-9;
inline constexpr double micrometer = 1e-6;
inline constexpr double microsecond = 1e-6;
inline constexpr double millisecond = 1e-3;

/// Cyclic frequency in kHz -> angular frequency in rad/s.
constexpr double angular_from_kHz(double f_kHz) { return two_pi * 1e3 * f_kHz; }
constexpr double angular_from_Hz(double f_Hz) { return two_pi * f_Hz; }
constexpr double Hz_from_angular(double w) { return w / two_pi; }

} // namespace units

/// Fundamental and species constants, SI throughout.
struct PhysicalConstants {
    double hbar = 1.054571817e-34;      // J s
    double c = 299792458.0;             // m/s
    double kB = 1.380649e-23;           // J/K
    double muB = 9.2740100783e-24;      // J/T
    double g_electron = -2.0;
    double atom_mass = 1.443160648e-25; // kg
    double nuclear_spin = 1.5;
    double omega_hpf = two_pi * 6.834682610904290e9;
    double omega_D1 = two_pi * 377.107463380e12;
    double omega_D2 = two_pi * 384.2304844685e12;
    double gamma_D2 = 38.117e6; // rad/s, natural linewidth of D2

    static PhysicalConstants rubidium87() { return {}; }

    /// Center of gravity of the D doublet, used for the two-level reduction.
    double omega_0() const { return (2.0 * omega_D2 + omega_D1) / 3.0; }
    double fine_structure_splitting() const { return omega_D2 - omega_D1; }

    void validate() const
    {
        if (!(hbar > 0 && c > 0 && kB > 0 && muB > 0 && atom_mass > 0 &&
              nuclear_spin > 0 && omega_hpf > 0 && omega_D1 > 0 && omega_D2 > 0 &&
              gamma_D2 > 0))
            throw ConfigError("physical constants must be strictly positive");
        if (!(omega_D2 > omega_D1))
            throw ConfigError("omega_D2 must exceed omega_D1");
    }
};

} // namespace trapsim
