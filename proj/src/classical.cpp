#include "lightent/classical.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <fftw3.h>

namespace lightent {

namespace {

constexpr double kPi = std::numbers::pi;

double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 32) {
        double s = 0.0;
        for (const double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

inline double entropy_term(double p) { return p > 0.0 ? -p * std::log(p) : 0.0; }

// analytic derivatives of r(t) = r0 e^{(i omega0 - 1/2tau) t}
struct AnalyticDipole {
    double r0, omega0, tau;
    std::complex<double> pole() const { return {-0.5 / tau, omega0}; }
    double x(double t) const { return std::real(r0 * std::exp(pole() * t)); }
    double v(double t) const { return std::real(r0 * pole() * std::exp(pole() * t)); }
    double a(double t) const { return std::real(r0 * pole() * pole() * std::exp(pole() * t)); }
    double jerk(double t) const {
        return std::real(r0 * pole() * pole() * pole() * std::exp(pole() * t));
    }
};

}  // namespace

ClassicalTrajectory make_damped_trajectory(double r0, double omega0, double tau,
                                           double t_final, double dt) {
    if (!(omega0 > 0.0) || !(tau > 0.0))
        throw std::invalid_argument("make_damped_trajectory: omega0 and tau must be > 0");
    const double dt_max = 2.0 * kPi / (20.0 * omega0);
    if (!(dt > 0.0) || dt > dt_max) {
        std::ostringstream msg;
        msg << "make_damped_trajectory: dt = " << dt << " under-samples the carrier; need dt <= "
            << dt_max;
        throw std::invalid_argument(msg.str());
    }
    if (t_final < 10.0 * tau) {
        std::ostringstream msg;
        msg << "make_damped_trajectory: t_final = " << t_final << " too short; need >= "
            << 10.0 * tau << " (10 tau)";
        throw std::invalid_argument(msg.str());
    }

    ClassicalTrajectory traj;
    traj.r0 = r0;
    traj.omega0 = omega0;
    traj.tau = tau;
    traj.dt = dt;
    const auto n = static_cast<std::size_t>(std::floor(t_final / dt)) + 1;
    traj.times.resize(n);
    traj.displacement.resize(n);
    const std::complex<double> pole{-0.5 / tau, omega0};
    for (std::size_t i = 0; i < n; ++i) {
        const double t = dt * static_cast<double>(i);
        traj.times[i] = t;
        traj.displacement[i] = r0 * std::exp(pole * t);
    }
    return traj;
}

ClassicalTrajectory damped_trajectory(const PhysicalParams& p, double r0, double t_final,
                                      double dt) {
    return make_damped_trajectory(r0, p.omega0, tau_classical(p), t_final, dt);
}

PowerSeries larmor_power(const PhysicalParams& p, const ClassicalTrajectory& traj) {
    const std::size_t n = traj.times.size();
    if (n < 5) throw std::invalid_argument("larmor_power: need at least 5 samples");
    const double dt = traj.dt;
    const double e2 = p.charge_e * p.charge_e;
    const double prefactor = e2 / (6.0 * kPi * p.eps0 * p.c * p.c * p.c);

    PowerSeries out;
    out.times.reserve(n - 2);
    out.p_ray.reserve(n - 2);
    out.e_mech.reserve(n - 2);
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = std::real(traj.displacement[i]);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double a = (x[i + 1] - 2.0 * x[i] + x[i - 1]) / (dt * dt);
        const double v = (x[i + 1] - x[i - 1]) / (2.0 * dt);
        out.times.push_back(traj.times[i]);
        out.p_ray.push_back(prefactor * a * a);
        out.e_mech.push_back(0.5 * p.mass_m * (v * v + traj.omega0 * traj.omega0 * x[i] * x[i]));
    }
    for (std::size_t i = 0; i + 1 < out.p_ray.size(); ++i)
        out.radiated_total += 0.5 * (out.p_ray[i] + out.p_ray[i + 1]) * dt;
    out.mechanical_loss = out.e_mech.front() - out.e_mech.back();
    return out;
}

ForceSeries radiative_force(const PhysicalParams& p, const ClassicalTrajectory& traj) {
    const std::size_t n = traj.times.size();
    if (n < 5) throw std::invalid_argument("radiative_force: need at least 5 samples");
    const double dt = traj.dt;
    const double prefactor = p.charge_e * p.charge_e / (6.0 * kPi * p.eps0 * p.c * p.c * p.c);

    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = std::real(traj.displacement[i]);
    std::vector<double> accel(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i)
        accel[i] = (x[i + 1] - 2.0 * x[i] + x[i - 1]) / (dt * dt);

    ForceSeries out;
    out.times.reserve(n - 4);
    double pj = 0.0, pv = 0.0;
    for (std::size_t i = 2; i + 2 < n; ++i) {
        const double jerk = (accel[i + 1] - accel[i - 1]) / (2.0 * dt);
        const double v = (x[i + 1] - x[i - 1]) / (2.0 * dt);
        const double fj = prefactor * jerk;
        const double fv = -p.mass_m * v / traj.tau;
        out.times.push_back(traj.times[i]);
        out.f_jerk.push_back(fj);
        out.f_visc.push_back(fv);
        pj += fj * v;
        pv += fv * v;
    }
    const auto m_used = static_cast<double>(out.times.size());
    out.mean_power_jerk = pj / m_used;
    out.mean_power_visc = pv / m_used;
    return out;
}

std::vector<std::complex<double>> fourier_transform(std::span<const std::complex<double>> x) {
    if (x.empty()) throw std::invalid_argument("fourier_transform: empty input");
    std::vector<std::complex<double>> out(x.begin(), x.end());
    static std::mutex planner_mutex;  // the FFTW planner is not thread-safe
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(planner_mutex);
        plan = fftw_plan_dft_1d(static_cast<int>(out.size()),
                                reinterpret_cast<fftw_complex*>(out.data()),
                                reinterpret_cast<fftw_complex*>(out.data()), FFTW_FORWARD,
                                FFTW_ESTIMATE);
    }
    if (plan == nullptr) throw std::runtime_error("fourier_transform: planner failure");
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(planner_mutex);
        fftw_destroy_plan(plan);
    }
    return out;
}

SpectralDistribution classical_spectrum(const ClassicalTrajectory& traj, double bin_width,
                                        double window_widths) {
    const double coverage = traj.times.back();
    if (coverage < 10.0 * traj.tau) {
        std::ostringstream msg;
        msg << "classical_spectrum: trajectory covers " << coverage << "; need >= "
            << 10.0 * traj.tau << " for spectral resolution well below 1/tau";
        throw std::invalid_argument(msg.str());
    }
    const std::size_t n = traj.displacement.size();
    const double dw = 2.0 * kPi / (traj.dt * static_cast<double>(n));  // DFT spacing
    if (!(bin_width >= 2.0 * dw)) {
        std::ostringstream msg;
        msg << "classical_spectrum: bin_width " << bin_width
            << " under-resolves the transform; need >= " << 2.0 * dw;
        throw std::invalid_argument(msg.str());
    }

    const auto ft = fourier_transform(traj.displacement);
    std::vector<double> power(n);
    for (std::size_t j = 0; j < n; ++j) power[j] = std::norm(ft[j]);
    const double total = pairwise_sum(power);
    if (!(total > 0.0)) throw std::runtime_error("classical_spectrum: empty spectrum");

    const double half = window_widths / traj.tau;
    const double wmin = traj.omega0 - half;
    const double wmax = traj.omega0 + half;
    if (wmin <= 0.0)
        throw std::invalid_argument("classical_spectrum: window extends below zero frequency");

    // snap the bin width onto the transform comb so every bin holds the same
    // number of DFT samples; otherwise the bin masses alias at the ~20% level
    const double snapped = std::round(bin_width / dw) * dw;

    SpectralDistribution spec;
    spec.kind = SpectrumKind::ClassicalEnergy;
    const auto n_bins = static_cast<std::size_t>(std::ceil((wmax - wmin) / snapped));
    spec.bin_edges.resize(n_bins + 1);
    for (std::size_t b = 0; b <= n_bins; ++b)
        spec.bin_edges[b] = wmin + snapped * static_cast<double>(b);
    spec.mass.assign(n_bins, 0.0);

    for (std::size_t j = 0; j < n; ++j) {
        // DFT bin j maps to +omega for j <= n/2, negative beyond
        double omega = dw * static_cast<double>(j);
        if (j > n / 2) omega -= dw * static_cast<double>(n);
        if (omega <= wmin || omega >= spec.bin_edges.back()) continue;
        auto idx = static_cast<std::size_t>((omega - wmin) / snapped);
        if (idx >= n_bins) idx = n_bins - 1;
        spec.mass[idx] += power[j] / total;
    }
    for (const double v : spec.mass) spec.total_mass += v;
    spec.validate();
    return spec;
}

BoundaryTermCheck boundary_term_check(const ClassicalTrajectory& traj, double t_start) {
    const AnalyticDipole dip{traj.r0, traj.omega0, traj.tau};
    const double period = 2.0 * kPi / traj.omega0;
    const double t_end = t_start + period;

    BoundaryTermCheck out;
    out.boundary_term = dip.v(t_end) * dip.a(t_end) - dip.v(t_start) * dip.a(t_start);

    // Simpson rule on v * da/dt over one period
    const std::size_t n = 512;  // even
    const double h = period / static_cast<double>(n);
    double sum = dip.v(t_start) * dip.jerk(t_start) + dip.v(t_end) * dip.jerk(t_end);
    for (std::size_t i = 1; i < n; ++i) {
        const double t = t_start + h * static_cast<double>(i);
        sum += (i % 2 == 1 ? 4.0 : 2.0) * dip.v(t) * dip.jerk(t);
    }
    out.retained_term = sum * h / 3.0;
    out.ratio = std::abs(out.boundary_term) / std::max(std::abs(out.retained_term), 1e-300);
    return out;
}

EntropyReport classical_field_entropy(const SpectralDistribution& spec,
                                      const PhysicalParams& p, double tau, const ModeSet* m) {
    spec.validate();
    if (!(tau > 0.0)) throw std::invalid_argument("classical_field_entropy: tau must be > 0");
    const double gamma_cl = 1.0 / tau;  // linewidth correspondence: dw = 1/(2 tau)

    EntropyReport rep;
    rep.atom_term = 0.0;

    if (m != nullptr) {
        if (m->kind != ModeSetKind::Full)
            throw std::invalid_argument("classical_field_entropy: needs a Full ModeSet");
        // geometric split: coupling^2 / omega is flat in 1D and sin^2 theta in 3D
        std::vector<double> raw(m->entries.size(), 0.0);
        double z = 0.0;
        for (std::size_t e = 0; e < m->entries.size(); ++e) {
            const auto& mode = m->entries[e];
            // locate the spectrum bin holding this mode frequency
            if (mode.omega <= spec.bin_edges.front() || mode.omega >= spec.bin_edges.back())
                continue;
            const auto b = static_cast<std::size_t>(
                (mode.omega - spec.bin_edges.front()) /
                (spec.bin_edges[1] - spec.bin_edges[0]));
            const std::size_t bin = std::min(b, spec.mass.size() - 1);
            const double density = spec.mass[bin] / spec.bin_width(bin);
            const double geo = mode.coupling * mode.coupling / mode.omega;
            raw[e] = geo * density;
            z += static_cast<double>(mode.weight) * raw[e];
        }
        if (!(z > 0.0))
            throw std::runtime_error("classical_field_entropy: spectrum and modes do not overlap");
        const double scale = spec.total_mass / z;
        std::vector<double> terms(m->entries.size());
        for (std::size_t e = 0; e < m->entries.size(); ++e) {
            const double w = static_cast<double>(m->entries[e].weight);
            terms[e] = w * entropy_term(raw[e] * scale);
        }
        rep.s_exact = pairwise_sum(terms);
        rep.mode_count = m->mode_count();
        rep.dimension = m->dimension;
    } else {
        // uniform share over rho(omega) * bin_width modes per bin
        rep.dimension = p.dimension;
        const double volume = p.box_length * p.box_length * p.box_length;
        std::vector<double> terms(spec.bin_count());
        double modes_total = 0.0;
        for (std::size_t b = 0; b < spec.bin_count(); ++b) {
            const double omega = spec.bin_center(b);
            const double rho = p.dimension == 1
                                   ? p.box_length / (kPi * p.c)
                                   : volume * omega * omega / (kPi * kPi * std::pow(p.c, 3));
            const double n_modes = rho * spec.bin_width(b);
            modes_total += n_modes;
            if (spec.mass[b] > 0.0 && n_modes > 0.0) {
                const double share = spec.mass[b] / n_modes;
                terms[b] = -spec.mass[b] * std::log(share);
            }
        }
        rep.s_exact = pairwise_sum(terms);
        rep.mode_count = static_cast<std::size_t>(modes_total);
    }

    rep.field_mass = spec.total_mass;
    rep.truncation_mass = std::max(0.0, 1.0 - spec.total_mass);
    rep.truncation_entropy_bound =
        rep.truncation_mass * std::log(static_cast<double>(std::max<std::size_t>(2, rep.mode_count)));

    const double dw = line_hwhm(gamma_cl);
    const double w0 = p.omega0;
    const double length = p.box_length;
    const double volume = length * length * length;
    const bool is_3d = rep.dimension == 3;
    rep.s_uniform_3d = {std::log(volume * w0 * w0 * dw / (3.0 * kPi)), is_3d,
                      "3D continuum, uniform line of width dw"};
    rep.s_uniform_1d = {std::log(length * dw / (2.0 * kPi)), !is_3d,
                      "1D continuum, uniform line of width dw"};
    rep.s_real_space_1d = {std::log(2.0 * length * dw), !is_3d,
                           "1D, wave packet of length dx = 1/(2 dk)"};
    rep.s_timescale = {std::log(1.0 + length * gamma_cl), true, "tau_ps = L/c + tau_em"};
    // classical coherence volume V0 = 6 pi tau c^3 / omega0^2
    const double v0_cl = 6.0 * kPi * tau * std::pow(p.c, 3) / (w0 * w0);
    rep.s_volume_ratio = {is_3d ? std::log(volume / v0_cl) : rep.s_uniform_1d.value, true,
                          "phase-space cells V/V0, classical V0 = 6 pi tau c^3/omega0^2"};

    auto add_delta = [&](const char* name, const ClosedFormEntropy& cf) {
        if (cf.applicable) rep.deltas[name] = cf.value - rep.s_exact;
    };
    add_delta("s_uniform_3d", rep.s_uniform_3d);
    add_delta("s_uniform_1d", rep.s_uniform_1d);
    add_delta("s_real_space_1d", rep.s_real_space_1d);
    add_delta("s_timescale", rep.s_timescale);
    add_delta("s_volume_ratio", rep.s_volume_ratio);
    return rep;
}

}  // namespace lightent
