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

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace trapsim::oscillator {

/// <n|(a + a^dagger)^2|m> for the harmonic oscillator; nonzero only for
/// m - n in {0, +-2}.
inline double x2_element(int n, int m)
{
    if (n < 0 || m < 0)
        return 0.0;
    if (n == m)
        return 2.0 * n + 1.0;
    if (m == n + 2)
        return std::sqrt((n + 1.0) * (n + 2.0));
    if (n == m + 2)
        return std::sqrt((m + 1.0) * (m + 2.0));
    return 0.0;
}

/// Generalized Laguerre polynomial L_n^(alpha)(x) by the forward three-term
/// recurrence.
inline double laguerre(int n, int alpha, double x)
{
    if (n < 0)
        return 0.0;
    double prev = 1.0;
    if (n == 0)
        return prev;
    double cur = 1.0 + alpha - x;
    for (int k = 1; k < n; ++k) {
        const double next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

/// <n'|exp(i eta (a + a^dagger))|n>, i.e. <n'|exp(i q x)|n> with eta = q x_zpf.
///
///   = i^|n-n'| exp(-eta^2/2) eta^|n-n'| sqrt(n_<! / n_>!) L_{n_<}^{|n-n'|}(eta^2)
///
/// The prefactor is evaluated in log space so large n does not overflow. The
/// operator is complex symmetric, so the phase i^|n-n'| is the same for both
/// orderings. For negative eta the real factor picks up (-1)^|n-n'|.
inline std::complex<double> debye_waller_1d(int n, int n_prime, double eta)
{
    if (n < 0 || n_prime < 0)
        return 0.0;
    const int lo = std::min(n, n_prime);
    const int d = std::abs(n - n_prime);
    const double eta2 = eta * eta;
    if (eta == 0.0)
        return d == 0 ? 1.0 : 0.0;

    double mag;
    if (d == 0) {
        mag = std::exp(-0.5 * eta2) * laguerre(lo, 0, eta2);
    }
    else {
        const double lpre = -0.5 * eta2 + d * std::log(std::abs(eta)) +
                            0.5 * (std::lgamma(lo + 1.0) - std::lgamma(lo + d + 1.0));
        mag = std::exp(lpre) * laguerre(lo, d, eta2);
        if (eta < 0 && (d % 2 == 1))
            mag = -mag;
    }
    static constexpr std::complex<double> ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return ipow[d % 4] * mag;
}

/// Table of |<n+d|exp(i eta x)|n>|^2 for n in [0, levels) at fixed offset d
/// (d may be negative). Built by the Laguerre recurrence in n, so a whole row
/// costs O(levels).
inline void debye_waller_sq_row(int d, double eta, int levels, double* out)
{
    const double eta2 = eta * eta;
    const int ad = std::abs(d);
    const double gauss = std::exp(-eta2);
    if (eta == 0.0) {
        for (int n = 0; n < levels; ++n)
            out[n] = d == 0 ? 1.0 : 0.0;
        return;
    }
    // For d < 0 the lower index is n + d = n - |d|; entries with n < |d| vanish.
    // |<n+d|..|n>|^2 = e^{-eta^2} eta^{2|d|} (lo!/(lo+|d|)!) L_lo^{|d|}(eta^2)^2, lo = min(n, n+d).
    const int start = d < 0 ? ad : 0;
    for (int n = 0; n < std::min(start, levels); ++n)
        out[n] = 0.0;
    // pre(lo) = eta^{2|d|} lo! / (lo+|d|)!
    double pre = std::pow(eta2, ad) / std::exp(std::lgamma(ad + 1.0));
    double l_prev = 0.0;
    double l_cur = 1.0; // L_0
    for (int lo = 0; start + lo < levels; ++lo) {
        if (lo == 1) {
            l_prev = 1.0;
            l_cur = 1.0 + ad - eta2;
        }
        else if (lo > 1) {
            const int k = lo - 1;
            const double next = ((2.0 * k + 1.0 + ad - eta2) * l_cur - (k + ad) * l_prev) / (k + 1.0);
            l_prev = l_cur;
            l_cur = next;
        }
        if (lo > 0)
            pre *= lo / static_cast<double>(lo + ad);
        out[start + lo] = gauss * pre * l_cur * l_cur;
    }
}

/// Normalized Hermite functions phi_0..phi_{count-1} at x (Gaussian factor
/// included), by the stable recurrence.
inline void hermite_functions(double x, int count, double* out)
{
    if (count <= 0)
        return;
    out[0] = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
    if (count > 1)
        out[1] = std::sqrt(2.0) * x * out[0];
    for (int n = 1; n + 1 < count; ++n)
        out[n + 1] = std::sqrt(2.0 / (n + 1.0)) * x * out[n] - std::sqrt(n / (n + 1.0)) * out[n - 1];
}

} // namespace trapsim::oscillator
