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
#include <cstdint>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "trapsim/mode_space.hpp"

namespace trapsim {

enum class Channel : std::uint8_t { fluctuation, scattering };

inline const char* channel_name(Channel c) { return c == Channel::fluctuation ? "fl" : "sc"; }

/// Which power spectral density convention rin_psd is quoted in. The rates
/// use the two-sided value; a one-sided figure is halved on the way in.
enum class PsdConvention { two_sided, one_sided };

struct NoiseModel {
    bool enabled = true;
    double rin_psd = 1e-13; // 1/Hz, flat at low frequency
    PsdConvention convention = PsdConvention::two_sided;

    double xi2() const
    {
        if (!enabled)
            return 0.0;
        return convention == PsdConvention::two_sided ? rin_psd : 0.5 * rin_psd;
    }

    void validate() const
    {
        if (!(rin_psd >= 0))
            throw ConfigError("rin_psd must be >= 0");
    }
};

struct ScatteringModel {
    bool enabled = true;
    /// Overrides for the cross section (m^2) and photon flux (1/(m^2 s));
    /// by default both follow from the trap.
    std::optional<double> sigma0;
    std::optional<double> photon_flux;
    int n_theta = 24;
    int n_phi = 48;
    /// Largest total |delta v| kept for in-scattering.
    int dv_max = 4;
    bool check_convergence = true;
    /// Allowed disagreement between the production and doubled rules,
    /// relative to I sigma0.
    double convergence_tol = 1e-6;

    void validate() const
    {
        if (n_theta < 2 || n_phi < 4 || n_phi % 4 != 0)
            throw ConfigError("scattering quadrature needs n_theta >= 2 and n_phi a multiple of 4");
        if (dv_max < 0)
            throw ConfigError("dv_max must be >= 0");
        if (sigma0 && !(*sigma0 > 0))
            throw ConfigError("sigma0 override must be positive");
        if (photon_flux && !(*photon_flux >= 0))
            throw ConfigError("photon_flux override must be >= 0");
        if (!(convergence_tol > 0))
            throw ConfigError("convergence_tol must be positive");
    }
};

/// Sparse in-rates Gamma_{v v'} stored by destination row v (CSR).
struct SparseRates {
    std::size_t n = 0;
    std::vector<std::size_t> row_ptr;
    std::vector<std::uint32_t> src;
    std::vector<double> rate;

    struct Triplet {
        std::uint32_t dest;
        std::uint32_t src;
        double rate;
    };

    std::size_t nnz() const { return rate.size(); }

    static SparseRates empty(std::size_t n)
    {
        SparseRates s;
        s.n = n;
        s.row_ptr.assign(n + 1, 0);
        return s;
    }

    /// Duplicate (dest, src) pairs are summed; diagonal entries are dropped.
    static SparseRates from_triplets(std::size_t n, std::vector<Triplet> t)
    {
        std::sort(t.begin(), t.end(), [](const Triplet& a, const Triplet& b) {
            return a.dest != b.dest ? a.dest < b.dest : a.src < b.src;
        });
        SparseRates s = empty(n);
        bool have = false;
        Triplet last{};
        for (const auto& e : t) {
            if (e.dest == e.src)
                continue;
            if (have && e.dest == last.dest && e.src == last.src) {
                s.rate.back() += e.rate;
                continue;
            }
            s.src.push_back(e.src);
            s.rate.push_back(e.rate);
            ++s.row_ptr[e.dest + 1];
            last = e;
            have = true;
        }
        for (std::size_t i = 0; i < n; ++i)
            s.row_ptr[i + 1] += s.row_ptr[i];
        return s;
    }

    std::vector<Triplet> triplets() const
    {
        std::vector<Triplet> out;
        out.reserve(nnz());
        for (std::size_t v = 0; v < n; ++v)
            for (std::size_t k = row_ptr[v]; k < row_ptr[v + 1]; ++k)
                out.push_back({static_cast<std::uint32_t>(v), src[k], rate[k]});
        return out;
    }

    /// sum over destinations for every source
    std::vector<double> column_sums() const
    {
        std::vector<double> out(n, 0.0);
        for (std::size_t k = 0; k < nnz(); ++k)
            out[src[k]] += rate[k];
        return out;
    }

    double at(std::size_t dest, std::size_t source) const
    {
        const auto b = src.begin() + static_cast<std::ptrdiff_t>(row_ptr[dest]);
        const auto e = src.begin() + static_cast<std::ptrdiff_t>(row_ptr[dest + 1]);
        const auto it = std::lower_bound(b, e, static_cast<std::uint32_t>(source));
        return (it != e && *it == source) ? rate[static_cast<std::size_t>(it - src.begin())] : 0.0;
    }
};

struct ChannelRates {
    Channel channel = Channel::fluctuation;
    std::vector<double> gamma_out;
    SparseRates gamma_in;
};

struct RateMatrices {
    std::size_t n = 0;
    std::vector<double> gamma_out;
    SparseRates gamma_in;
    std::vector<ChannelRates> channels;

    double max_gamma_out() const
    {
        double m = 0.0;
        for (double g : gamma_out)
            m = std::max(m, g);
        return m;
    }

    bool is_zero() const { return max_gamma_out() == 0.0 && gamma_in.nnz() == 0; }

    const ChannelRates* channel(Channel c) const
    {
        for (const auto& ch : channels)
            if (ch.channel == c)
                return &ch;
        return nullptr;
    }

    /// Out-rate of one mode in one channel (0 if the channel is absent).
    double channel_gamma_out(Channel c, std::size_t v) const
    {
        const auto* ch = channel(c);
        return ch ? ch->gamma_out[v] : 0.0;
    }

    static RateMatrices zero(std::size_t n)
    {
        RateMatrices r;
        r.n = n;
        r.gamma_out.assign(n, 0.0);
        r.gamma_in = SparseRates::empty(n);
        return r;
    }
};

/// Free-atom cross section of a far-detuned two-level atom,
/// sigma0 = (8 pi / 3) (omega_L / c)^4 d0^4 / ((4 pi eps0)^2 hbar^2 Delta^2).
inline double total_cross_section(double omega_L, double omega_0, double d0, double hbar,
                                  double c)
{
    const double delta = omega_L - omega_0;
    const double k4 = std::pow(omega_L / c, 4);
    const double f = 4.0 * pi * vacuum_permittivity * hbar * delta;
    return 8.0 * pi / 3.0 * k4 * std::pow(d0, 4) / (f * f);
}

/// Photon flux at the focus for a well of depth |U0|. With the field
/// E = E0 cos(omega_L t) the two-level light shift is |U0| = d0^2 E0^2 / (4 hbar |Delta|)
/// and the intensity I = eps0 c E0^2 / 2, so I = 2 eps0 c hbar |Delta| |U0| / d0^2.
inline double photon_flux_from_depth(double depth, double detuning, double d0, double omega_L,
                                     double hbar, double c)
{
    const double intensity = 2.0 * vacuum_permittivity * c * hbar * std::abs(detuning) * depth /
                             (d0 * d0);
    return intensity / (hbar * omega_L);
}

/// Spontaneous rate of the two-level atom evaluated at the light frequency,
/// Gamma_D2 (omega_L / omega_D2)^3.
inline double gamma_nat(const PhysicalConstants& k, double omega_L)
{
    return k.gamma_D2 * std::pow(omega_L / k.omega_D2, 3);
}

inline double angular_weight(double theta, double phi)
{
    const double s = std::sin(theta) * std::cos(phi);
    return 3.0 / (8.0 * pi) * (1.0 - s * s);
}

/// Product rule over the sphere: Gauss-Legendre in cos(theta) times the
/// trapezoid rule in phi. Weights include the dipole pattern.
struct AngularRule {
    std::vector<double> cos_theta;
    std::vector<double> phi;
    std::vector<double> weight;
    std::size_t size() const { return weight.size(); }
};

/// Full rule over all n_theta x n_phi nodes.
inline AngularRule angular_rule(int n_theta, int n_phi)
{
    const auto gl = quadrature::gauss_legendre(n_theta);
    AngularRule r;
    for (int i = 0; i < n_theta; ++i)
        for (int j = 0; j < n_phi; ++j) {
            const double ph = two_pi * j / n_phi;
            const double th = std::acos(gl.nodes[i]);
            r.cos_theta.push_back(gl.nodes[i]);
            r.phi.push_back(ph);
            r.weight.push_back(gl.weights[i] * (two_pi / n_phi) * angular_weight(th, ph));
        }
    return r;
}

/// Same rule folded onto phi in [0, pi/2]: squared Debye-Waller factors and
/// the dipole pattern are even under phi -> -phi and phi -> pi - phi.
inline AngularRule angular_rule_folded(int n_theta, int n_phi)
{
    if (n_phi % 4 != 0)
        throw std::invalid_argument("angular_rule_folded: n_phi must be a multiple of 4");
    const auto gl = quadrature::gauss_legendre(n_theta);
    const int q = n_phi / 4;
    AngularRule r;
    for (int i = 0; i < n_theta; ++i)
        for (int j = 0; j <= q; ++j) {
            const double ph = two_pi * j / n_phi;
            const double th = std::acos(gl.nodes[i]);
            const double mult = (j == 0 || j == q) ? 2.0 : 4.0;
            r.cos_theta.push_back(gl.nodes[i]);
            r.phi.push_back(ph);
            r.weight.push_back(mult * gl.weights[i] * (two_pi / n_phi) * angular_weight(th, ph));
        }
    return r;
}

// ---------------------------------------------------------------------------
// intensity-noise channel

/// Per-axis couplings of the quadratic potential: <n+2|U|n> = (hbar w/4) sqrt((n+1)(n+2)).
/// Returns xi2 / hbar^2 * |<n+2|U|n>|^2.
inline double fluct_up_rate(int n, double omega, double xi2)
{
    return xi2 * omega * omega / 16.0 * (n + 1.0) * (n + 2.0);
}

/// Rates on a single oscillator with `levels` levels. The out-rate is the
/// variance of U in |n>, written as the sum of squared off-diagonal
/// elements, so constants in U (the well depth) drop out identically.
inline ChannelRates fluct_rates_1d(int levels, double omega, double xi2)
{
    ChannelRates r;
    r.channel = Channel::fluctuation;
    r.gamma_out.assign(levels, 0.0);
    std::vector<SparseRates::Triplet> t;
    for (int n = 0; n < levels; ++n) {
        const double up = fluct_up_rate(n, omega, xi2);
        const double down = n >= 2 ? fluct_up_rate(n - 2, omega, xi2) : 0.0;
        r.gamma_out[n] = up + down;
        if (xi2 == 0.0)
            continue;
        if (n + 2 < levels)
            t.push_back({static_cast<std::uint32_t>(n + 2), static_cast<std::uint32_t>(n), up});
        if (n >= 2)
            t.push_back({static_cast<std::uint32_t>(n - 2), static_cast<std::uint32_t>(n), down});
    }
    r.gamma_in = SparseRates::from_triplets(levels, std::move(t));
    return r;
}

/// Intensity-noise rates on the 3-D box. U0(r) is a sum of per-axis
/// quadratics, so every off-diagonal element changes one axis by +-2.
inline ChannelRates fluct_rates(const ModeSpace& modes, const NoiseModel& noise)
{
    const auto& trap = modes.trap();
    const double xi2 = noise.xi2();
    ChannelRates r;
    r.channel = Channel::fluctuation;
    r.gamma_out.assign(modes.size(), 0.0);
    if (xi2 == 0.0) {
        r.gamma_in = SparseRates::empty(modes.size());
        return r;
    }
    std::vector<SparseRates::Triplet> t;
    t.reserve(modes.size() * 6);
    for (std::size_t i = 0; i < modes.size(); ++i) {
        const Mode v = modes.mode(i);
        double out = 0.0;
        for (int a = 0; a < 3; ++a) {
            const double w = trap.omega[a];
            const double up = fluct_up_rate(v[a], w, xi2);
            const double down = v[a] >= 2 ? fluct_up_rate(v[a] - 2, w, xi2) : 0.0;
            out += up + down;
            const auto stride = modes.stride(static_cast<Axis>(a));
            if (v[a] + 2 < modes.levels(static_cast<Axis>(a)))
                t.push_back({static_cast<std::uint32_t>(i + 2 * stride), static_cast<std::uint32_t>(i), up});
            if (v[a] >= 2)
                t.push_back({static_cast<std::uint32_t>(i - 2 * stride), static_cast<std::uint32_t>(i), down});
        }
        r.gamma_out[i] = out;
    }
    r.gamma_in = SparseRates::from_triplets(modes.size(), std::move(t));
    return r;
}

// ---------------------------------------------------------------------------
// photon-scattering channel

namespace detail {

/// |<n+d|e^{i eta_eff x}|n>|^2 per axis, offset d, source level n and node,
/// laid out [axis][d + dv][n][node].
struct DebyeWallerTables {
    int dv = 0;
    std::size_t nodes = 0;
    std::array<int, 3> levels{};
    std::array<std::vector<double>, 3> data;

    const double* row(int axis, int d, int n) const
    {
        return data[axis].data() +
               (static_cast<std::size_t>(d + dv) * levels[axis] + n) * nodes;
    }
};

inline DebyeWallerTables build_dw_tables(const ModeSpace& modes, const AngularRule& rule, int dv)
{
    const auto& eta = modes.trap().eta;
    DebyeWallerTables tb;
    tb.dv = dv;
    tb.nodes = rule.size();
    tb.levels = modes.levels();
    std::vector<double> buf;
    for (int a = 0; a < 3; ++a) {
        const int lv = tb.levels[a];
        tb.data[a].assign(static_cast<std::size_t>(2 * dv + 1) * lv * tb.nodes, 0.0);
        buf.resize(lv);
        for (std::size_t k = 0; k < tb.nodes; ++k) {
            const double ct = rule.cos_theta[k];
            const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
            double e;
            if (a == 0)
                e = eta[0] * st * std::cos(rule.phi[k]);
            else if (a == 1)
                e = eta[1] * st * std::sin(rule.phi[k]);
            else
                e = eta[2] * (ct - 1.0);
            for (int d = -dv; d <= dv; ++d) {
                oscillator::debye_waller_sq_row(d, e, lv, buf.data());
                for (int n = 0; n < lv; ++n)
                    tb.data[a][(static_cast<std::size_t>(d + dv) * lv + n) * tb.nodes + k] = buf[n];
            }
        }
    }
    return tb;
}

/// Offsets d with sum |d_a| <= dv_max, excluding 0.
inline std::vector<Mode> scatter_offsets(int dv_max)
{
    std::vector<Mode> out;
    for (int x = -dv_max; x <= dv_max; ++x)
        for (int y = -dv_max; y <= dv_max; ++y)
            for (int z = -dv_max; z <= dv_max; ++z)
                if (std::abs(x) + std::abs(y) + std::abs(z) <= dv_max && (x || y || z))
                    out.push_back({x, y, z});
    return out;
}

/// Angle-averaged <|<v'+d|e^{iq.r}|v'>|^2> for source v', per offset, and the
/// elastic term for d = 0.
inline double dw_average(const DebyeWallerTables& tb, const AngularRule& rule, const Mode& v,
                         const Mode& d)
{
    const double* tx = tb.row(0, d[0], v[0]);
    const double* ty = tb.row(1, d[1], v[1]);
    const double* tz = tb.row(2, d[2], v[2]);
    const double* w = rule.weight.data();
    double acc = 0.0;
    for (std::size_t k = 0; k < tb.nodes; ++k)
        acc += w[k] * tx[k] * ty[k] * tz[k];
    return acc;
}

inline double inelastic_average(const DebyeWallerTables& tb, const AngularRule& rule,
                                const Mode& v)
{
    const double* tx = tb.row(0, 0, v[0]);
    const double* ty = tb.row(1, 0, v[1]);
    const double* tz = tb.row(2, 0, v[2]);
    double acc = 0.0;
    for (std::size_t k = 0; k < tb.nodes; ++k)
        acc += rule.weight[k] * (1.0 - tx[k] * ty[k] * tz[k]);
    return acc;
}

/// Up to eight levels per axis, always including the first and last.
inline std::vector<int> coarse_levels(int levels)
{
    std::vector<int> out;
    const int m = std::min(levels, 8);
    for (int i = 0; i < m; ++i)
        out.push_back(m == 1 ? 0 : static_cast<int>(std::lround(i * (levels - 1.0) / (m - 1))));
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

} // namespace detail

/// I sigma0 for the trap, honouring overrides.
inline double scattering_prefactor(const PhysicalConstants& k, const DerivedTrap& trap,
                                   const ScatteringModel& m)
{
    const double sigma =
        m.sigma0.value_or(total_cross_section(trap.omega_L, trap.omega_0, trap.d0, k.hbar, k.c));
    const double flux = m.photon_flux.value_or(
        photon_flux_from_depth(trap.depth, trap.detuning, trap.d0, trap.omega_L, k.hbar, k.c));
    return sigma * flux;
}

/// Scattering rates for a given I sigma0. The recoil wavevector q = k - k_L
/// has components (k sin th cos ph, k sin th sin ph, k (cos th - 1)) with
/// k_L along +z and the trap light polarized along x.
inline ChannelRates scatter_rates(const ModeSpace& modes, const ScatteringModel& m,
                                  double flux_sigma, unsigned threads = 1)
{
    m.validate();
    ChannelRates r;
    r.channel = Channel::scattering;
    const std::size_t n = modes.size();
    r.gamma_out.assign(n, 0.0);
    if (!m.enabled || flux_sigma == 0.0) {
        r.gamma_in = SparseRates::empty(n);
        return r;
    }
    if (n > std::numeric_limits<std::uint32_t>::max())
        throw TruncationError("mode space too large for 32-bit rate indices");

    const auto rule = angular_rule_folded(m.n_theta, m.n_phi);
    const auto tb = detail::build_dw_tables(modes, rule, m.dv_max);
    const auto offsets = detail::scatter_offsets(m.dv_max);

    if (m.check_convergence) {
        const auto rule2 = angular_rule_folded(2 * m.n_theta, 2 * m.n_phi);
        const auto tb2 = detail::build_dw_tables(modes, rule2, m.dv_max);
        double worst = 0.0;
        Mode worst_v{};
        const auto cx = detail::coarse_levels(modes.levels(Axis::x));
        const auto cy = detail::coarse_levels(modes.levels(Axis::y));
        const auto cz = detail::coarse_levels(modes.levels(Axis::z));
        for (int x : cx)
            for (int y : cy)
                for (int z : cz) {
                    const Mode v{x, y, z};
                    double diff = std::abs(detail::inelastic_average(tb, rule, v) -
                                           detail::inelastic_average(tb2, rule2, v));
                    for (const auto& d : offsets)
                        diff = std::max(diff, std::abs(detail::dw_average(tb, rule, v, d) -
                                                       detail::dw_average(tb2, rule2, v, d)));
                    if (diff > worst) {
                        worst = diff;
                        worst_v = v;
                    }
                }
        if (worst > m.convergence_tol) {
            std::ostringstream msg;
            msg << "scattering quadrature not converged: rules " << m.n_theta << "x" << m.n_phi
                << " and " << 2 * m.n_theta << "x" << 2 * m.n_phi << " differ by " << worst
                << " (relative to I sigma0) at mode (" << worst_v[0] << "," << worst_v[1] << ","
                << worst_v[2] << "); raise n_theta/n_phi or shrink the basis";
            throw ConvergenceError(msg.str());
        }
    }

    threads = std::max(1u, threads);
    std::vector<std::vector<SparseRates::Triplet>> parts(threads);
    auto work = [&](unsigned id) {
        auto& out = parts[id];
        const std::size_t lo = n * id / threads;
        const std::size_t hi = n * (id + 1) / threads;
        for (std::size_t i = lo; i < hi; ++i) {
            const Mode v = modes.mode(i);
            r.gamma_out[i] = flux_sigma * detail::inelastic_average(tb, rule, v);
            for (const auto& d : offsets) {
                const Mode dest{v[0] + d[0], v[1] + d[1], v[2] + d[2]};
                if (!modes.contains(dest))
                    continue;
                const double g = flux_sigma * detail::dw_average(tb, rule, v, d);
                if (g > 0.0)
                    out.push_back({static_cast<std::uint32_t>(modes.index(dest)),
                                   static_cast<std::uint32_t>(i), g});
            }
        }
    };
    if (threads == 1) {
        work(0);
    }
    else {
        std::vector<std::thread> pool;
        for (unsigned id = 0; id < threads; ++id)
            pool.emplace_back(work, id);
        for (auto& th : pool)
            th.join();
    }
    std::vector<SparseRates::Triplet> all;
    for (auto& p : parts)
        all.insert(all.end(), p.begin(), p.end());
    r.gamma_in = SparseRates::from_triplets(n, std::move(all));
    return r;
}

/// Sums channels. The per-channel parts are kept for reporting.
inline RateMatrices assemble_rates(std::vector<ChannelRates> channels, std::size_t n)
{
    RateMatrices r = RateMatrices::zero(n);
    std::vector<SparseRates::Triplet> t;
    for (const auto& ch : channels) {
        if (ch.gamma_out.size() != n || ch.gamma_in.n != n)
            throw std::invalid_argument("assemble_rates: channel built on a different mode space");
        for (std::size_t i = 0; i < n; ++i)
            r.gamma_out[i] += ch.gamma_out[i];
        const auto part = ch.gamma_in.triplets();
        t.insert(t.end(), part.begin(), part.end());
    }
    r.gamma_in = SparseRates::from_triplets(n, std::move(t));
    r.channels = std::move(channels);
    return r;
}

inline RateMatrices assemble_rates(const ChannelRates& fl, const ChannelRates& sc)
{
    return assemble_rates(std::vector<ChannelRates>{fl, sc}, fl.gamma_out.size());
}

/// Replaces each out-rate by the sum of its in-box destinations, so nothing
/// leaks through the box boundary and the trace is conserved exactly.
inline ChannelRates close_box(ChannelRates ch)
{
    ch.gamma_out = ch.gamma_in.column_sums();
    return ch;
}

inline RateMatrices close_box(const RateMatrices& r)
{
    std::vector<ChannelRates> chans;
    for (const auto& ch : r.channels)
        chans.push_back(close_box(ch));
    if (chans.empty()) {
        RateMatrices out = r;
        out.gamma_out = out.gamma_in.column_sums();
        return out;
    }
    return assemble_rates(std::move(chans), r.n);
}

/// Fraction of each source's out-rate that lands inside the box.
struct CapturedFraction {
    double min = 1.0;
    double weighted_mean = 1.0; // weighted by out-rate
};

inline CapturedFraction captured_fraction(const ChannelRates& ch)
{
    CapturedFraction f;
    const auto sums = ch.gamma_in.column_sums();
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < sums.size(); ++i) {
        if (ch.gamma_out[i] <= 0.0)
            continue;
        f.min = std::min(f.min, sums[i] / ch.gamma_out[i]);
        num += sums[i];
        den += ch.gamma_out[i];
    }
    if (den > 0.0)
        f.weighted_mean = num / den;
    return f;
}

/// Audit export: dest_index,src_index,rate,channel.
inline void write_rates_csv(std::ostream& os, const RateMatrices& r)
{
    const auto old = os.precision(17);
    os << "dest_index,src_index,rate,channel\n";
    for (const auto& ch : r.channels)
        for (const auto& t : ch.gamma_in.triplets())
            os << t.dest << ',' << t.src << ',' << t.rate << ',' << channel_name(ch.channel) << '\n';
    os.precision(old);
}

} // namespace trapsim
