#include "lightent/modes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace lightent {

namespace {

constexpr double kPi = std::numbers::pi;

double checked_gamma(const PhysicalParams& p, double gamma_target) {
    const double gamma = gamma_target > 0.0 ? gamma_target : gamma_ww(p);
    if (!(gamma > 0.0))
        throw std::invalid_argument("enumerate: reference rate gamma must be > 0");
    if (gamma / p.omega0 > p.max_gamma_ratio) {
        std::ostringstream msg;
        msg << "enumerate: gamma/omega0 = " << gamma / p.omega0
            << " violates the weak-coupling guard " << p.max_gamma_ratio;
        throw std::invalid_argument(msg.str());
    }
    return gamma;
}

std::pair<double, double> window_around(const PhysicalParams& p, double gamma, double widths) {
    if (!(widths > 0.0))
        throw std::invalid_argument("enumerate: window_widths must be > 0");
    const double half = widths * gamma;
    const double lo = p.omega0 - half;
    const double hi = p.omega0 + half;
    if (lo <= 0.0) {
        std::ostringstream msg;
        msg << "enumerate: window [" << lo << ", " << hi
            << "] extends to nonpositive frequencies; reduce window_widths";
        throw std::invalid_argument(msg.str());
    }
    return {lo, hi};
}

}  // namespace

std::size_t ModeSet::mode_count() const {
    std::size_t n = 0;
    for (const auto& e : entries) n += static_cast<std::size_t>(e.weight);
    return n;
}

double ModeSet::lattice_spacing() const {
    return 2.0 * kPi / box_length;  // c = 1 units; omega step of the lattice
}

double ModeSet::coverage() const {
    const double hw = line_hwhm(gamma_ref);
    return (std::atan((window_max - omega0) / hw) - std::atan((window_min - omega0) / hw)) / kPi;
}

void ModeSet::validate() const {
    if (dimension != 1 && dimension != 3)
        throw std::invalid_argument("ModeSet: dimension must be 1 or 3");
    if (!(window_min < window_max))
        throw std::invalid_argument("ModeSet: empty frequency window");
    double prev = window_min;
    for (const auto& e : entries) {
        if (!(e.omega > window_min && e.omega < window_max))
            throw std::invalid_argument("ModeSet: entry outside the window");
        if (e.omega < prev)
            throw std::invalid_argument("ModeSet: entries not sorted by omega");
        if (!std::isfinite(e.coupling) || e.coupling < 0.0)
            throw std::invalid_argument("ModeSet: coupling must be finite and >= 0");
        if (e.weight < 1)
            throw std::invalid_argument("ModeSet: weight must be >= 1");
        prev = e.omega;
    }
}

ModeSet enumerate_1d(const PhysicalParams& p, const Enumerate1DOptions& opts) {
    p.validate();
    const double gamma = checked_gamma(p, opts.gamma_target);
    const double spacing = 2.0 * kPi * p.c / p.box_length;
    if (opts.require_resolved && spacing > gamma / 5.0) {
        std::ostringstream msg;
        msg << "enumerate_1d: mode spacing " << spacing << " exceeds gamma/5 = "
            << gamma / 5.0 << "; need L >= " << 10.0 * kPi * p.c / gamma
            << " (or disable require_resolved for small-cavity studies)";
        throw std::runtime_error(msg.str());
    }
    const auto [wmin, wmax] = window_around(p, gamma, opts.window_widths);

    // golden-rule calibration: 2 pi lambda^2 rho(omega0) = gamma with
    // rho = L / (pi c) counting both propagation directions
    const double rho = p.box_length / (kPi * p.c);
    const double lambda = std::sqrt(gamma / (2.0 * kPi * rho));

    ModeSet m;
    m.dimension = 1;
    m.box_length = p.box_length;
    m.omega0 = p.omega0;
    m.gamma_ref = gamma;
    m.window_min = wmin;
    m.window_max = wmax;

    const long n_lo = std::max(1L, static_cast<long>(std::floor(wmin / spacing)) + 1L);
    const long n_hi = static_cast<long>(std::ceil(wmax / spacing)) - 1L;
    for (long n = n_lo; n <= n_hi; ++n) {
        Mode mode;
        mode.omega = static_cast<double>(n) * spacing;
        mode.weight = 2;  // +k and -k carry identical couplings
        mode.coupling = lambda;
        m.entries.push_back(mode);
    }
    if (m.entries.empty()) {
        std::ostringstream msg;
        msg << "enumerate_1d: no lattice mode falls inside [" << wmin << ", " << wmax
            << "] at spacing " << spacing << "; need L >= " << 2.0 * kPi * p.c / (wmax - wmin);
        throw std::runtime_error(msg.str());
    }
    m.validate();
    return m;
}

ModeSet enumerate_3d(const PhysicalParams& p, const Enumerate3DOptions& opts) {
    p.validate();
    const double gamma = checked_gamma(p, 0.0);
    const auto [wmin, wmax] = window_around(p, gamma, opts.window_widths);
    const double step = 2.0 * kPi * p.c / p.box_length;  // lattice step in omega
    const double volume = p.box_length * p.box_length * p.box_length;

    // continuum estimate of the shell population, polarizations included
    const double kmin = wmin / p.c;
    const double kmax = wmax / p.c;
    const double cell = std::pow(2.0 * kPi / p.box_length, 3);
    const double estimate = (4.0 * kPi / 3.0) * (kmax * kmax * kmax - kmin * kmin * kmin) / cell * 2.0;
    if (estimate > static_cast<double>(opts.max_entries)) {
        std::ostringstream msg;
        msg << "enumerate_3d: estimated " << static_cast<std::size_t>(estimate)
            << " entries exceeds the cap " << opts.max_entries;
        throw std::runtime_error(msg.str());
    }
    if (estimate / 2.0 < static_cast<double>(opts.min_shell_points)) {
        std::ostringstream msg;
        msg << "enumerate_3d: shell holds only ~" << estimate / 2.0
            << " lattice points (< " << opts.min_shell_points
            << "); increase L or the window";
        throw std::runtime_error(msg.str());
    }

    ModeSet m;
    m.dimension = 3;
    m.box_length = p.box_length;
    m.omega0 = p.omega0;
    m.gamma_ref = gamma;
    m.window_min = wmin;
    m.window_max = wmax;
    m.entries.reserve(static_cast<std::size_t>(estimate * 1.05) + 16);

    const long nmax = static_cast<long>(std::floor(wmax / (p.c * step)));
    for (long nx = -nmax; nx <= nmax; ++nx) {
        for (long ny = -nmax; ny <= nmax; ++ny) {
            for (long nz = -nmax; nz <= nmax; ++nz) {
                const long n2 = nx * nx + ny * ny + nz * nz;
                if (n2 == 0) continue;
                const double omega = step * std::sqrt(static_cast<double>(n2)) * p.c;
                if (!(omega > wmin && omega < wmax)) continue;

                const double inv_k = 1.0 / std::sqrt(static_cast<double>(n2));
                const std::array<double, 3> khat{nx * inv_k, ny * inv_k, nz * inv_k};

                // transverse pair: cross the axis of smallest |khat| component
                // with khat (deterministic; never degenerate since that axis
                // cannot be parallel to khat)
                int axis = 0;
                double best = std::abs(khat[0]);
                for (int a = 1; a < 3; ++a) {
                    const double v = std::abs(khat[a]);
                    if (v < best) { best = v; axis = a; }
                }
                std::array<double, 3> e1{0, 0, 0};
                {
                    std::array<double, 3> u{0, 0, 0};
                    u[axis] = 1.0;
                    e1 = {u[1] * khat[2] - u[2] * khat[1],
                          u[2] * khat[0] - u[0] * khat[2],
                          u[0] * khat[1] - u[1] * khat[0]};
                    const double norm = std::sqrt(e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]);
                    for (auto& v : e1) v /= norm;
                }
                const std::array<double, 3> e2{khat[1] * e1[2] - khat[2] * e1[1],
                                               khat[2] * e1[0] - khat[0] * e1[2],
                                               khat[0] * e1[1] - khat[1] * e1[0]};

                const double amp = std::sqrt(p.hbar * omega / (2.0 * p.eps0 * volume)) / p.hbar;
                for (int s = 0; s < 2; ++s) {
                    const auto& u = (s == 0) ? e1 : e2;
                    Mode mode;
                    mode.omega = omega;
                    mode.weight = 1;
                    mode.coupling = std::abs(p.dipole_d * u[2]) * amp;  // dipole along z
                    mode.direction = khat;
                    mode.polarization = s;
                    m.entries.push_back(mode);
                }
            }
        }
    }
    if (m.entries.empty())
        throw std::runtime_error("enumerate_3d: empty shell; increase L or the window");

    std::sort(m.entries.begin(), m.entries.end(), [](const Mode& a, const Mode& b) {
        return std::tie(a.omega, a.direction[0], a.direction[1], a.direction[2], a.polarization) <
               std::tie(b.omega, b.direction[0], b.direction[1], b.direction[2], b.polarization);
    });
    m.validate();
    return m;
}

double density_of_states(const ModeSet& m, double omega) {
    if (!(omega >= m.window_min && omega <= m.window_max)) {
        std::ostringstream msg;
        msg << "density_of_states: omega = " << omega << " outside window ["
            << m.window_min << ", " << m.window_max << "]";
        throw std::domain_error(msg.str());
    }
    if (m.dimension == 1) return m.box_length / kPi;  // c = 1; both directions
    const double volume = m.box_length * m.box_length * m.box_length;
    return volume * omega * omega / (kPi * kPi);  // two polarizations included
}

std::vector<DensityBin> empirical_density(const ModeSet& m, std::size_t n_bins) {
    if (n_bins == 0) throw std::invalid_argument("empirical_density: n_bins must be > 0");
    const double width = (m.window_max - m.window_min) / static_cast<double>(n_bins);
    std::vector<DensityBin> bins(n_bins);
    for (std::size_t b = 0; b < n_bins; ++b) {
        bins[b].omega_low = m.window_min + width * static_cast<double>(b);
        bins[b].omega_high = bins[b].omega_low + width;
    }
    for (const auto& e : m.entries) {
        auto idx = static_cast<std::size_t>((e.omega - m.window_min) / width);
        if (idx >= n_bins) idx = n_bins - 1;
        bins[idx].density += static_cast<double>(e.weight);
    }
    for (auto& b : bins) b.density /= width;
    return bins;
}

ModeSet reduce_to_collective(const ModeSet& m, double bin_width) {
    if (m.kind != ModeSetKind::Full)
        throw std::invalid_argument("reduce_to_collective: input is already collective");
    if (!(bin_width > 0.0))
        throw std::invalid_argument("reduce_to_collective: bin_width must be > 0");
    const double span = m.window_max - m.window_min;
    const auto n_bins = static_cast<std::size_t>(std::ceil(span / bin_width));

    struct Acc {
        long weight = 0;
        double lam2 = 0.0;   // sum of w * lambda^2
        double wmean = 0.0;  // lambda^2-weighted omega accumulator
        double osum = 0.0;   // plain omega accumulator (fallback centroid)
    };
    std::vector<Acc> acc(n_bins);
    for (const auto& e : m.entries) {
        auto idx = static_cast<std::size_t>((e.omega - m.window_min) / bin_width);
        if (idx >= n_bins) idx = n_bins - 1;
        const double wl2 = e.weight * e.coupling * e.coupling;
        acc[idx].weight += e.weight;
        acc[idx].lam2 += wl2;
        acc[idx].wmean += wl2 * e.omega;
        acc[idx].osum += e.weight * e.omega;
    }

    ModeSet out = m;
    out.kind = ModeSetKind::CollectiveBins;
    out.entries.clear();
    for (const auto& a : acc) {
        if (a.weight == 0) continue;
        Mode mode;
        mode.weight = static_cast<int>(a.weight);
        mode.coupling = std::sqrt(a.lam2 / static_cast<double>(a.weight));
        mode.omega = a.lam2 > 0.0 ? a.wmean / a.lam2 : a.osum / static_cast<double>(a.weight);
        out.entries.push_back(mode);
    }
    out.validate();
    return out;
}

double mode_theta(const Mode& mode) {
    if (mode.polarization < 0) return 0.0;  // no angular structure stored
    const double dz = std::clamp(mode.direction[2], -1.0, 1.0);
    return std::acos(dz);
}

}  // namespace lightent
