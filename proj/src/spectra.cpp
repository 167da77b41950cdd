#include "lightent/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

namespace lightent {

namespace {
constexpr double kPi = std::numbers::pi;

// mass-weighted quantile over bin centers
double mass_quantile(const SpectralDistribution& spec, double q) {
    const double target = q * spec.total_mass;
    double acc = 0.0;
    for (std::size_t b = 0; b < spec.bin_count(); ++b) {
        acc += spec.mass[b];
        if (acc >= target) return spec.bin_center(b);
    }
    return spec.bin_center(spec.bin_count() - 1);
}
}  // namespace

void SpectralDistribution::validate() const {
    if (bin_edges.size() != mass.size() + 1 || mass.empty())
        throw std::invalid_argument("SpectralDistribution: inconsistent bin arrays");
    for (std::size_t i = 0; i + 1 < bin_edges.size(); ++i)
        if (!(bin_edges[i] < bin_edges[i + 1]))
            throw std::invalid_argument("SpectralDistribution: bin edges must increase");
    double sum = 0.0;
    for (const double v : mass) {
        if (v < 0.0) throw std::invalid_argument("SpectralDistribution: negative mass");
        sum += v;
    }
    if (sum > 1.0 + 1e-9)
        throw std::invalid_argument("SpectralDistribution: total mass exceeds 1");
}

SpectralDistribution bin_spectrum(const AmplitudeState& state, const ModeSet& m,
                                  double bin_width) {
    if (state.c_modes.size() != m.entries.size())
        throw std::invalid_argument("bin_spectrum: state does not match the ModeSet");
    const double span = m.window_max - m.window_min;
    // distinct-frequency spacing: the lattice step in 1D, the mean gap otherwise
    const double mean_spacing =
        m.dimension == 1 ? m.lattice_spacing()
                         : span / static_cast<double>(std::max<std::size_t>(1, m.entries.size()));
    if (!(bin_width >= 2.0 * mean_spacing)) {
        std::ostringstream msg;
        msg << "bin_spectrum: bin_width " << bin_width << " under-resolves the modes; need >= "
            << 2.0 * mean_spacing;
        throw std::invalid_argument(msg.str());
    }

    SpectralDistribution spec;
    spec.kind = SpectrumKind::QuantumProbability;
    const auto n_bins = static_cast<std::size_t>(std::ceil(span / bin_width));
    spec.bin_edges.resize(n_bins + 1);
    for (std::size_t b = 0; b <= n_bins; ++b)
        spec.bin_edges[b] = m.window_min + bin_width * static_cast<double>(b);
    spec.mass.assign(n_bins, 0.0);

    for (std::size_t e = 0; e < m.entries.size(); ++e) {
        auto idx = static_cast<std::size_t>((m.entries[e].omega - m.window_min) / bin_width);
        if (idx >= n_bins) idx = n_bins - 1;
        spec.mass[idx] += std::norm(state.c_modes[e]);
    }
    for (const double v : spec.mass) spec.total_mass += v;
    spec.validate();
    return spec;
}

DecayFit fit_exponential(std::span<const double> times, std::span<const double> p_excited,
                         double t_min, double t_max) {
    if (times.size() != p_excited.size())
        throw std::invalid_argument("fit_exponential: series length mismatch");
    std::vector<double> t, lnp;
    double last_positive = t_min;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < t_min || times[i] > t_max) continue;
        if (!(p_excited[i] > 0.0)) {
            std::ostringstream msg;
            msg << "fit_exponential: nonpositive P_e at t = " << times[i]
                << "; trim the window to [" << t_min << ", " << last_positive << "]";
            throw std::invalid_argument(msg.str());
        }
        last_positive = times[i];
        t.push_back(times[i]);
        lnp.push_back(std::log(p_excited[i]));
    }
    if (t.size() < 10) {
        std::ostringstream msg;
        msg << "fit_exponential: only " << t.size() << " samples in [" << t_min << ", "
            << t_max << "]; need >= 10";
        throw std::invalid_argument(msg.str());
    }

    const auto n = static_cast<double>(t.size());
    double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        st += t[i];
        sy += lnp[i];
        stt += t[i] * t[i];
        sty += t[i] * lnp[i];
    }
    const double denom = n * stt - st * st;
    const double slope = (n * sty - st * sy) / denom;
    const double intercept = (sy - slope * st) / n;

    DecayFit fit;
    fit.rate = -slope;
    fit.amplitude = std::exp(intercept);
    fit.window_t_min = t_min;
    fit.window_t_max = t_max;
    fit.n_used = t.size();
    double ss = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double r = lnp[i] - (intercept + slope * t[i]);
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / n);
    return fit;
}

LorentzFit fit_lorentzian(const SpectralDistribution& spec) {
    spec.validate();
    std::size_t nonzero = 0;
    for (const double v : spec.mass)
        if (v > 0.0) ++nonzero;
    if (nonzero < 10)
        throw std::invalid_argument("fit_lorentzian: need >= 10 bins with nonzero mass");
    if (!(spec.total_mass > 0.0))
        throw std::invalid_argument("fit_lorentzian: empty spectrum");

    const std::size_t n = spec.bin_count();
    std::vector<double> x(n), y(n);
    for (std::size_t b = 0; b < n; ++b) {
        x[b] = spec.bin_center(b);
        y[b] = spec.mass[b];
    }

    // moment-based start: Lorentzian quartiles sit at center +- gamma
    double center = mass_quantile(spec, 0.5);
    double gamma = 0.5 * (mass_quantile(spec, 0.75) - mass_quantile(spec, 0.25));
    if (!(gamma > 0.0)) gamma = spec.bin_width(0);
    double amp = spec.total_mass * spec.bin_width(0);

    auto cost_of = [&](double a, double ctr, double g) {
        double ss = 0.0;
        for (std::size_t b = 0; b < n; ++b) {
            const double d = x[b] - ctr;
            const double r = y[b] - a * (g / kPi) / (d * d + g * g);
            ss += r * r;
        }
        return ss;
    };

    // Levenberg-Marquardt on (A, center, ln gamma)
    double mu = 1e-3;
    double cost = cost_of(amp, center, gamma);
    LorentzFit fit;
    const std::size_t max_iter = 200;
    for (std::size_t iter = 0; iter < max_iter; ++iter) {
        Eigen::Matrix3d jtj = Eigen::Matrix3d::Zero();
        Eigen::Vector3d jtr = Eigen::Vector3d::Zero();
        for (std::size_t b = 0; b < n; ++b) {
            const double d = x[b] - center;
            const double den = d * d + gamma * gamma;
            const double f = amp * (gamma / kPi) / den;
            const double r = y[b] - f;
            Eigen::Vector3d j;
            j(0) = f / amp;                                              // d f / d A
            j(1) = amp * (gamma / kPi) * 2.0 * d / (den * den);          // d f / d center
            j(2) = gamma * amp / kPi * (d * d - gamma * gamma) / (den * den);  // d f / d ln gamma
            jtj += j * j.transpose();
            jtr += j * r;
        }
        Eigen::Matrix3d damped = jtj;
        for (int k = 0; k < 3; ++k) damped(k, k) += mu * std::max(jtj(k, k), 1e-300);
        const Eigen::Vector3d step = damped.ldlt().solve(jtr);

        const double amp_try = amp + step(0);
        const double center_try = center + step(1);
        const double gamma_try = gamma * std::exp(std::clamp(step(2), -2.0, 2.0));
        const double cost_try = cost_of(amp_try, center_try, gamma_try);
        fit.iterations = iter + 1;
        if (std::isfinite(cost_try) && cost_try <= cost) {
            const double rel = (cost - cost_try) / std::max(cost, 1e-300);
            amp = amp_try;
            center = center_try;
            gamma = gamma_try;
            cost = cost_try;
            mu = std::max(mu / 3.0, 1e-12);
            if (rel < 1e-13) {
                fit.converged = true;
                break;
            }
        } else {
            mu *= 4.0;
            if (mu > 1e14) break;  // every trial step worsens the fit
        }
    }

    fit.center = center;
    fit.hwhm = gamma;
    fit.amplitude = amp;
    fit.residual = std::sqrt(cost / static_cast<double>(n));
    if (!fit.converged) {
        std::ostringstream msg;
        msg << "fit_lorentzian: no convergence after " << fit.iterations
            << " iterations; rms residual " << fit.residual;
        throw std::runtime_error(msg.str());
    }
    return fit;
}

}  // namespace lightent
