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


// Reference values evaluated once with independent scripts (see
// tests/oracles/*.py, 30-digit mpmath or numpy) and frozen here.

#pragma once

namespace golden {

// Rb-87 defaults, 852 nm light, 72 kHz / 9.6 kHz trap
inline constexpr double omega_0 = 2399272914100975.655;      // rad/s
inline constexpr double detuning = -188414267024856.785;     // rad/s
inline constexpr double s_diff = 2.27921048857750592e-4;
inline constexpr double x_zpf_perp = 2.84190503296143581e-8; // m
inline constexpr double x_zpf_par = 7.78287746420220511e-8;  // m
inline constexpr double eta_perp = 0.209579999383838167;
inline constexpr double eta_par = 0.573958466322234897;
inline constexpr double split_perp = 51.5545266736792508;    // rad/s, omega_b - omega_a
inline constexpr double split_par = 6.87393688982390010;     // rad/s
inline constexpr double delta_omega_0 = 54.9914951185912008; // rad/s
inline constexpr double nbar_z_40uK = 86.3202062468857761;
inline constexpr double gamma0 = 4.79425923202561124e-13;    // Hz
inline constexpr double d0 = 2.53443343563430462e-29;        // C m
inline constexpr double sigma0 = 2.09173265853826433e-27;    // m^2
inline constexpr double flux_1mK = 9.72464465783437358e27;   // 1/(m^2 s)
inline constexpr double flux_sigma_0p3mK = 6.10240704704154725;
inline constexpr double flux_sigma_0p5mK = 10.1706784117359121;
inline constexpr double flux_sigma_1mK = 20.3413568234718242;
inline constexpr double flux_sigma_5mK = 101.706784117359121;

// Ramsey contrast |<exp(-i dw_v t)>| over the untruncated thermal state,
// 72 / 9.6 kHz trap, sampled every 50 us, first half-crossing
inline constexpr double halftime_40uK = 1.2848393864254989e-3; // s
inline constexpr double halftime_15uK = 3.4328084091672707e-3; // s
inline constexpr double thermal_mean_dw_40uK = 1791.118455775587; // rad/s

} // namespace golden
