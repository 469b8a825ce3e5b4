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

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "trapsim/oscillator.hpp"

namespace trapsim::quadrature {

struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss-Legendre rule on [-1, 1] by Newton iteration on P_n.
inline Rule gauss_legendre(int n)
{
    if (n < 1)
        throw std::invalid_argument("gauss_legendre: need at least one node");
    Rule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 1; i <= m; ++i) {
        double z = std::cos(std::numbers::pi * (i - 0.25) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) < 1e-15)
                break;
        }
        r.nodes[i - 1] = -z;
        r.nodes[n - i] = z;
        r.weights[i - 1] = 2.0 / ((1.0 - z * z) * pp * pp);
        r.weights[n - i] = r.weights[i - 1];
    }
    return r;
}

/// Gauss-Hermite rule for weight exp(-x^2). The returned weights are the
/// scaled weights w_i exp(x_i^2), so integrands are supplied as Hermite
/// functions (Gaussian already included) and nothing under- or overflows.
/// Practical up to a few hundred nodes.
inline Rule gauss_hermite_scaled(int n)
{
    if (n < 1)
        throw std::invalid_argument("gauss_hermite: need at least one node");
    if (n > 600)
        throw std::invalid_argument("gauss_hermite: node count above 600 underflows");
    Rule r;
    r.nodes.assign(n, 0.0);
    r.weights.assign(n, 0.0);
    std::vector<double> phi(n + 1);
    const int m = (n + 1) / 2;
    double z = 0.0;
    for (int i = 0; i < m; ++i) {
        // initial guesses for the largest roots first (Numerical Recipes)
        if (i == 0)
            z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -0.16667);
        else if (i == 1)
            z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
        else if (i == 2)
            z = 1.86 * z - 0.86 * r.nodes[0];
        else if (i == 3)
            z = 1.91 * z - 0.91 * r.nodes[1];
        else
            z = 2.0 * z - r.nodes[i - 2];
        for (int iter = 0; iter < 200; ++iter) {
            oscillator::hermite_functions(z, n + 1, phi.data());
            // phi_n' = sqrt(2n) phi_{n-1} - x phi_n
            const double d = std::sqrt(2.0 * n) * phi[n - 1] - z * phi[n];
            const double z1 = z;
            z = z1 - phi[n] / d;
            if (std::abs(z - z1) <= 1e-14 * std::max(1.0, std::abs(z)))
                break;
        }
        oscillator::hermite_functions(z, n, phi.data());
        const double w = 1.0 / (n * phi[n - 1] * phi[n - 1]);
        r.nodes[i] = z;
        r.nodes[n - 1 - i] = -z;
        r.weights[i] = w;
        r.weights[n - 1 - i] = w;
    }
    return r;
}

} // namespace trapsim::quadrature
