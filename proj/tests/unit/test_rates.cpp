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


#include <cmath>
#include <sstream>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "helpers.hpp"
#include "oracles/golden.hpp"

using namespace trapsim;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

ScatteringModel fast_scatter(int dv = 2)
{
    ScatteringModel m;
    m.dv_max = dv;
    m.check_convergence = false;
    return m;
}

// Angle average of 1 - exp(-|q.x_zpf|^2) by a dense midpoint rule.
double ground_loss_bruteforce(const AxisArray& eta)
{
    const int nt = 400, np = 400;
    double acc = 0.0;
    for (int i = 0; i < nt; ++i) {
        const double th = pi * (i + 0.5) / nt;
        for (int j = 0; j < np; ++j) {
            const double ph = two_pi * (j + 0.5) / np;
            const double ex = eta[0] * std::sin(th) * std::cos(ph);
            const double ey = eta[1] * std::sin(th) * std::sin(ph);
            const double ez = eta[2] * (std::cos(th) - 1.0);
            const double e2 = ex * ex + ey * ey + ez * ez;
            acc += angular_weight(th, ph) * std::sin(th) * (pi / nt) * (two_pi / np) *
                   (1.0 - std::exp(-e2));
        }
    }
    return acc;
}

} // namespace

TEST(AngularWeight, PointValues)
{
    EXPECT_NEAR(angular_weight(0.5 * pi, 0.0), 0.0, 1e-17);
    EXPECT_DOUBLE_EQ(angular_weight(0.0, 0.3), 3.0 / (8.0 * pi));
    EXPECT_DOUBLE_EQ(angular_weight(0.5 * pi, 0.5 * pi), 3.0 / (8.0 * pi));
}

TEST(AngularWeight, NormalizedAtProductionNodeCounts)
{
    for (auto [nt, np] : {std::pair{24, 48}, std::pair{48, 96}, std::pair{8, 8}}) {
        double full = 0.0, folded = 0.0;
        for (double w : angular_rule(nt, np).weight)
            full += w;
        for (double w : angular_rule_folded(nt, np).weight)
            folded += w;
        EXPECT_NEAR(full, 1.0, 1e-10);
        EXPECT_NEAR(folded, 1.0, 1e-10);
    }
}

TEST(AngularWeight, FoldedRuleMatchesFullRuleOnEvenIntegrands)
{
    const auto full = angular_rule(24, 48);
    const auto fold = angular_rule_folded(24, 48);
    auto f = [](double ct, double ph) {
        const double st = std::sqrt(1.0 - ct * ct);
        return std::exp(-0.3 * st * st * std::cos(ph) * std::cos(ph) - 0.1 * st * st * std::sin(ph) * std::sin(ph) -
                        0.5 * (ct - 1.0) * (ct - 1.0));
    };
    double a = 0.0, b = 0.0;
    for (std::size_t k = 0; k < full.size(); ++k)
        a += full.weight[k] * f(full.cos_theta[k], full.phi[k]);
    for (std::size_t k = 0; k < fold.size(); ++k)
        b += fold.weight[k] * f(fold.cos_theta[k], fold.phi[k]);
    EXPECT_NEAR(a, b, 1e-14);
    EXPECT_THROW(angular_rule_folded(4, 6), std::invalid_argument);
}

TEST(CrossSection, GoldenValueAndDetuningScaling)
{
    const auto k = PhysicalConstants::rubidium87();
    const auto d = fixtures::reference_derived();
    const double s = total_cross_section(d.omega_L, d.omega_0, d.d0, k.hbar, k.c);
    EXPECT_LT(rel(s, golden::sigma0), 1e-12);
    const double s2 = total_cross_section(d.omega_L, d.omega_L - 2.0 * d.detuning, d.d0, k.hbar, k.c);
    EXPECT_NEAR(s2 / s, 0.25, 1e-12);
}

TEST(CrossSection, ScatteringRateIdentity)
{
    const auto k = PhysicalConstants::rubidium87();
    for (double depth_mK : {0.3, 1.0, 5.0}) {
        auto c = fixtures::reference_trap();
        c.depth = depth_mK * 1e-3 * k.kB;
        const auto d = derive_trap(k, c);
        const double sigma = total_cross_section(d.omega_L, d.omega_0, d.d0, k.hbar, k.c);
        const double flux = photon_flux_from_depth(d.depth, d.detuning, d.d0, d.omega_L, k.hbar, k.c);
        const double lhs = sigma * flux * k.hbar * std::abs(d.detuning) / d.depth;
        EXPECT_LT(rel(lhs, gamma_nat(k, d.omega_L)), 1e-12);
    }
}

TEST(PhotonFlux, LinearInDepthAndGolden)
{
    const auto k = PhysicalConstants::rubidium87();
    const auto d = fixtures::reference_derived();
    auto flux = [&](double U) {
        return photon_flux_from_depth(U, d.detuning, d.d0, d.omega_L, k.hbar, k.c);
    };
    EXPECT_EQ(flux(0.0), 0.0);
    const double U1 = 1e-3 * k.kB;
    EXPECT_NEAR(flux(3.0 * U1) / flux(U1), 3.0, 1e-14);
    EXPECT_LT(rel(flux(U1), golden::flux_1mK), 1e-12);
    const double sigma = total_cross_section(d.omega_L, d.omega_0, d.d0, k.hbar, k.c);
    const double rate = flux(U1) * sigma;
    EXPECT_LT(rel(rate, golden::flux_sigma_1mK), 1e-12);
    EXPECT_LT(rel(rate, gamma_nat(k, d.omega_L) * U1 / (k.hbar * std::abs(d.detuning))), 1e-12);
    EXPECT_GT(rate, 1.0);
    EXPECT_LT(rate, 100.0);
}

TEST(ScatteringPrefactor, HonoursOverrides)
{
    const auto k = PhysicalConstants::rubidium87();
    const auto d = fixtures::reference_derived();
    ScatteringModel m;
    EXPECT_LT(rel(scattering_prefactor(k, d, m), golden::flux_sigma_0p3mK), 1e-12);
    m.sigma0 = 2e-27;
    m.photon_flux = 5e27;
    EXPECT_DOUBLE_EQ(scattering_prefactor(k, d, m), 10.0);
}

TEST(NoiseModel, Conventions)
{
    NoiseModel n;
    EXPECT_EQ(n.xi2(), 1e-13);
    n.convention = PsdConvention::one_sided;
    EXPECT_EQ(n.xi2(), 0.5e-13);
    n.enabled = false;
    EXPECT_EQ(n.xi2(), 0.0);
    n.rin_psd = -1.0;
    EXPECT_THROW(n.validate(), ConfigError);
}

TEST(FluctRates, ZeroPsdGivesZeroRates)
{
    const ModeSpace m({3, 3, 8}, fixtures::reference_derived());
    NoiseModel n;
    n.rin_psd = 0.0;
    const auto r = fluct_rates(m, n);
    EXPECT_EQ(r.gamma_in.nnz(), 0u);
    for (double g : r.gamma_out)
        EXPECT_EQ(g, 0.0);
}

TEST(FluctRates, GroundStateMatchesDenseVariance)
{
    const double omega = units::angular_from_kHz(9.6), xi2 = 1e-13, hbar = 1.054571817e-34;
    // U = (hbar w / 4)(a + a^dagger)^2 in a 40-level basis
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(40, 40);
    for (int n = 1; n < 40; ++n)
        a(n - 1, n) = std::sqrt(static_cast<double>(n));
    const Eigen::MatrixXd X = a + a.transpose();
    const Eigen::MatrixXd U = 0.25 * hbar * omega * X * X;
    const Eigen::MatrixXd U2 = U * U;
    const auto r = fluct_rates_1d(30, omega, xi2);
    for (int n = 0; n < 30; ++n) {
        const double var = U2(n, n) - U(n, n) * U(n, n);
        EXPECT_LT(rel(r.gamma_out[n], xi2 * var / (hbar * hbar)), 1e-12) << n;
    }
    EXPECT_LT(rel(r.gamma_out[0], xi2 * omega * omega / 8.0), 1e-14);
}

TEST(FluctRates, SourceConservationAndSymmetry)
{
    const auto r = fluct_rates_1d(30, units::angular_from_kHz(72.0), 1e-13);
    const auto sums = r.gamma_in.column_sums();
    for (int n = 0; n < 28; ++n)
        EXPECT_LT(rel(sums[n], r.gamma_out[n]), 1e-10) << n;
    for (const auto& t : r.gamma_in.triplets()) {
        EXPECT_EQ(std::abs(static_cast<int>(t.dest) - static_cast<int>(t.src)), 2);
        EXPECT_EQ(t.rate, r.gamma_in.at(t.src, t.dest));
        EXPECT_GT(t.rate, 0.0);
    }
}

TEST(FluctRates, ThreeDimensionalIsSumOfAxes)
{
    const auto d = fixtures::reference_derived();
    const ModeSpace m({4, 5, 9}, d);
    const NoiseModel noise;
    const auto r = fluct_rates(m, noise);
    std::array<ChannelRates, 3> ax;
    for (int a = 0; a < 3; ++a)
        ax[a] = fluct_rates_1d(m.levels(static_cast<Axis>(a)), d.omega[a], noise.xi2());
    for (std::size_t i = 0; i < m.size(); ++i) {
        const Mode v = m.mode(i);
        EXPECT_NEAR(r.gamma_out[i], ax[0].gamma_out[v[0]] + ax[1].gamma_out[v[1]] + ax[2].gamma_out[v[2]],
                    1e-13 * r.gamma_out[i]);
        Mode up = v;
        up[2] += 2;
        if (m.contains(up)) {
            EXPECT_EQ(r.gamma_in.at(m.index(up), i), ax[2].gamma_in.at(up[2], v[2]));
        }
    }
}

TEST(FluctRates, InvariantUnderDepthOffset)
{
    // explicit frequencies: the well depth is a constant offset of U
    const auto k = PhysicalConstants::rubidium87();
    auto c1 = fixtures::reference_trap();
    auto c2 = c1;
    c2.depth = 7.0 * c1.depth;
    const ModeSpace m1({3, 3, 7}, derive_trap(k, c1));
    const ModeSpace m2({3, 3, 7}, derive_trap(k, c2));
    const auto r1 = fluct_rates(m1, NoiseModel{});
    const auto r2 = fluct_rates(m2, NoiseModel{});
    EXPECT_EQ(r1.gamma_out, r2.gamma_out);
    EXPECT_EQ(r1.gamma_in.rate, r2.gamma_in.rate);
    EXPECT_EQ(r1.gamma_in.src, r2.gamma_in.src);
}

TEST(ScatterRates, LambDickeLimitStopsMotionalChanges)
{
    auto c = fixtures::reference_trap();
    c.eta = AxisArray{1e-7, 1e-7, 1e-7};
    const ModeSpace m({3, 3, 4}, derive_trap(PhysicalConstants::rubidium87(), c));
    const auto r = scatter_rates(m, fast_scatter(), 10.0);
    for (double g : r.gamma_out)
        EXPECT_LT(g, 1e-11);
    for (double g : r.gamma_in.rate)
        EXPECT_LT(g, 1e-11);
}

TEST(ScatterRates, GroundOutRateMatchesBruteForce)
{
    const auto d = fixtures::reference_derived();
    const ModeSpace m({1, 1, 1}, d);
    const double flux_sigma = 6.1;
    const auto r = scatter_rates(m, fast_scatter(), flux_sigma);
    const double want = flux_sigma * ground_loss_bruteforce(d.eta);
    EXPECT_GT(r.gamma_out[0], 0.0);
    EXPECT_LT(rel(r.gamma_out[0], want), 1e-5);
}

TEST(ScatterRates, CompletenessFromGroundState)
{
    auto c = fixtures::reference_trap();
    c.eta = AxisArray{0.3, 0.3, 0.3};
    const ModeSpace m({7, 7, 7}, derive_trap(PhysicalConstants::rubidium87(), c));
    auto model = fast_scatter(6);
    const auto r = scatter_rates(m, model, 1.0);
    const auto sums = r.gamma_in.column_sums();
    EXPECT_LT(rel(sums[0], r.gamma_out[0]), 1e-4);
}

TEST(ScatterRates, OutRateNondecreasingInEachIndex)
{
    const auto d = fixtures::reference_derived();
    const ModeSpace m({11, 11, 11}, d);
    const auto r = scatter_rates(m, fast_scatter(0), 1.0);
    for (std::size_t i = 0; i < m.size(); ++i)
        for (int a = 0; a < 3; ++a) {
            Mode v = m.mode(i);
            v[a] += 1;
            if (m.contains(v)) {
                EXPECT_GE(r.gamma_out[m.index(v)], r.gamma_out[i] * (1.0 - 1e-12));
            }
        }
}

TEST(ScatterRates, NonnegativeAndBoundedByPrefactor)
{
    const ModeSpace m({4, 4, 10}, fixtures::reference_derived());
    const auto r = scatter_rates(m, fast_scatter(4), 6.1);
    const auto sums = r.gamma_in.column_sums();
    for (std::size_t i = 0; i < m.size(); ++i) {
        EXPECT_GE(r.gamma_out[i], 0.0);
        EXPECT_LE(r.gamma_out[i], 6.1);
        EXPECT_LE(sums[i], r.gamma_out[i] * (1.0 + 1e-9));
    }
    for (double g : r.gamma_in.rate)
        EXPECT_GT(g, 0.0);
}

TEST(ScatterRates, ThreadCountDoesNotChangeResult)
{
    const ModeSpace m({4, 4, 10}, fixtures::reference_derived());
    const auto a = scatter_rates(m, fast_scatter(3), 6.1, 1);
    const auto b = scatter_rates(m, fast_scatter(3), 6.1, 3);
    EXPECT_EQ(a.gamma_out, b.gamma_out);
    EXPECT_EQ(a.gamma_in.rate, b.gamma_in.rate);
    EXPECT_EQ(a.gamma_in.src, b.gamma_in.src);
}

TEST(ScatterRates, CoarseQuadratureReportsNonConvergence)
{
    auto c = fixtures::reference_trap();
    c.eta = AxisArray{1.5, 1.5, 1.5};
    const ModeSpace m({6, 6, 6}, derive_trap(PhysicalConstants::rubidium87(), c));
    ScatteringModel model;
    model.n_theta = 2;
    model.n_phi = 4;
    model.dv_max = 2;
    try {
        scatter_rates(m, model, 1.0);
        FAIL() << "expected ConvergenceError";
    }
    catch (const ConvergenceError& e) {
        EXPECT_NE(std::string(e.what()).find("not converged"), std::string::npos);
    }
    // production rule on the reference trap passes the check
    const ModeSpace m2({5, 5, 12}, fixtures::reference_derived());
    EXPECT_NO_THROW(scatter_rates(m2, ScatteringModel{}, 1.0));
}

TEST(ScatterRates, DisabledGivesZero)
{
    const ModeSpace m({2, 2, 2}, fixtures::reference_derived());
    ScatteringModel model;
    model.enabled = false;
    const auto r = scatter_rates(m, model, 5.0);
    EXPECT_EQ(r.gamma_in.nnz(), 0u);
    EXPECT_EQ(r.gamma_out, std::vector<double>(8, 0.0));
}

TEST(ScatterRates, GroundRateFallsWithShallowerTraps)
{
    const auto k = PhysicalConstants::rubidium87();
    double prev = 0.0;
    for (double depth_mK : {0.5, 1.0, 5.0}) {
        TrapConfig c;
        c.depth = depth_mK * 1e-3 * k.kB;
        c.vmax = Mode{0, 0, 0};
        const auto d = derive_trap(k, c);
        const ModeSpace m({1, 1, 1}, d);
        const auto r = scatter_rates(m, fast_scatter(), scattering_prefactor(k, d, ScatteringModel{}));
        EXPECT_GT(r.gamma_out[0], prev);
        prev = r.gamma_out[0];
    }
}

TEST(SparseRates, TripletsMergeAndDropDiagonal)
{
    using T = SparseRates::Triplet;
    const auto s = SparseRates::from_triplets(4, {T{2, 1, 1.0}, T{0, 3, 2.0}, T{2, 1, 0.5}, T{1, 1, 9.0},
                                                  T{2, 0, 4.0}});
    EXPECT_EQ(s.nnz(), 3u);
    EXPECT_EQ(s.at(2, 1), 1.5);
    EXPECT_EQ(s.at(2, 0), 4.0);
    EXPECT_EQ(s.at(0, 3), 2.0);
    EXPECT_EQ(s.at(1, 1), 0.0);
    EXPECT_EQ(s.at(3, 2), 0.0);
    EXPECT_EQ(s.column_sums(), (std::vector<double>{4.0, 1.5, 0.0, 2.0}));
}

TEST(AssembleRates, SumsChannelsAndKeepsProvenance)
{
    const ModeSpace m({3, 3, 6}, fixtures::reference_derived());
    const auto fl = fluct_rates(m, NoiseModel{});
    const auto sc = scatter_rates(m, fast_scatter(2), 6.1);
    const auto r = assemble_rates(fl, sc);
    for (std::size_t i = 0; i < m.size(); ++i)
        EXPECT_EQ(r.gamma_out[i], fl.gamma_out[i] + sc.gamma_out[i]);
    EXPECT_EQ(r.channel_gamma_out(Channel::scattering, 4), sc.gamma_out[4]);
    EXPECT_EQ(r.channel_gamma_out(Channel::fluctuation, 4), fl.gamma_out[4]);

    NoiseModel off;
    off.rin_psd = 0.0;
    const auto only_sc = assemble_rates(fluct_rates(m, off), sc);
    EXPECT_EQ(only_sc.gamma_out, sc.gamma_out);
    EXPECT_EQ(only_sc.gamma_in.rate, sc.gamma_in.rate);
    EXPECT_FALSE(only_sc.is_zero());

    ScatteringModel sc_off;
    sc_off.enabled = false;
    EXPECT_TRUE(assemble_rates(fluct_rates(m, off), scatter_rates(m, sc_off, 6.1)).is_zero());
}

TEST(AssembleRates, ClosedBoxConservesEachSource)
{
    const ModeSpace m({3, 3, 6}, fixtures::reference_derived());
    const auto r = close_box(assemble_rates(fluct_rates(m, NoiseModel{}), scatter_rates(m, fast_scatter(2), 6.1)));
    const auto sums = r.gamma_in.column_sums();
    for (std::size_t i = 0; i < m.size(); ++i)
        EXPECT_NEAR(sums[i], r.gamma_out[i], 1e-12 * (1.0 + r.gamma_out[i]));
    const auto f = captured_fraction(r.channels[1]);
    EXPECT_NEAR(f.min, 1.0, 1e-12);
}

TEST(AssembleRates, CapturedFractionBelowOneForOpenBox)
{
    const ModeSpace m({3, 3, 6}, fixtures::reference_derived());
    const auto f = captured_fraction(fluct_rates(m, NoiseModel{}));
    EXPECT_LT(f.min, 1.0);
    EXPECT_GT(f.min, 0.0);
    EXPECT_LE(f.weighted_mean, 1.0);
}

TEST(RatesCsv, TripletExport)
{
    const ModeSpace m({1, 1, 3}, fixtures::reference_derived());
    const auto r = assemble_rates(fluct_rates(m, NoiseModel{}), scatter_rates(m, fast_scatter(1), 1.0));
    std::ostringstream os;
    write_rates_csv(os, r);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    EXPECT_EQ(line, "dest_index,src_index,rate,channel");
    int fl = 0, sc = 0;
    while (std::getline(is, line)) {
        if (line.ends_with(",fl"))
            ++fl;
        if (line.ends_with(",sc"))
            ++sc;
    }
    EXPECT_EQ(fl, 2); // 0 <-> 2 on the axial ladder
    EXPECT_EQ(sc, 4); // nearest neighbours 0-1, 1-2 both ways
}
