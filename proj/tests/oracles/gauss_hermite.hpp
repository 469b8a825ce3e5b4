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


// Gauss-Hermite quadrature built independently of the library: nodes from
// the Jacobi matrix eigenvalues, weights from the Christoffel sum. Used as
// the reference for the Debye-Waller closed form.

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

inline void gauss_hermite(int n, std::vector<double>& x, std::vector<double>& w)
{
    const double pi = std::numbers::pi;
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k)
        J(k, k - 1) = J(k - 1, k) = std::sqrt(k / 2.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J, Eigen::EigenvaluesOnly);
    x.resize(n);
    w.resize(n);
    // the eigenvector route loses all relative accuracy at the outer nodes
    for (int i = 0; i < n; ++i) {
        x[i] = es.eigenvalues()(i);
        double hm = 0.0;
        double h = std::pow(pi, -0.25);
        double s = h * h;
        for (int k = 0; k + 1 < n; ++k) {
            const double hn = std::sqrt(2.0 / (k + 1.0)) * x[i] * h - std::sqrt(k / (k + 1.0)) * hm;
            hm = h;
            h = hn;
            s += h * h;
        }
        w[i] = 1.0 / s;
    }
}

/// <np|exp(i eta (a + a^dagger))|n> by quadrature of normalized Hermite
/// functions; a + a^dagger = sqrt(2) xi.
inline std::complex<double> debye_waller(int n, int np, double eta, int nodes)
{
    const double pi = std::numbers::pi;
    std::vector<double> x, w;
    gauss_hermite(nodes, x, w);
    std::complex<double> acc = 0.0;
    const int top = std::max(n, np) + 1;
    std::vector<double> h(top + 1);
    for (int i = 0; i < nodes; ++i) {
        h[0] = std::pow(pi, -0.25);
        if (top > 1)
            h[1] = std::sqrt(2.0) * x[i] * h[0];
        for (int k = 1; k + 1 < top; ++k)
            h[k + 1] = std::sqrt(2.0 / (k + 1.0)) * x[i] * h[k] - std::sqrt(k / (k + 1.0)) * h[k - 1];
        acc += w[i] * h[n] * h[np] * std::polar(1.0, std::sqrt(2.0) * eta * x[i]);
    }
    return acc;
}

} // namespace oracle
