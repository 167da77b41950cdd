#include "lightent/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>
#include <boost/numeric/odeint.hpp>

namespace lightent {

namespace {

using cvec = std::vector<std::complex<double>>;
constexpr std::complex<double> kMinusI{0.0, -1.0};

// ic0' = -i sum_e g_e exp(-i delta_e t) ic_e ; ic_e' = -i g_e exp(+i delta_e t) ic0
struct InteractionRhs {
    const std::vector<double>& detuning;
    const std::vector<double>& g;

    void operator()(const cvec& y, cvec& dydt, double t) const {
        std::complex<double> acc{0.0, 0.0};
        const std::size_t n = detuning.size();
        for (std::size_t e = 0; e < n; ++e) {
            const double ph = detuning[e] * t;
            const std::complex<double> rot{std::cos(ph), -std::sin(ph)};
            acc += g[e] * rot * y[e + 1];
            dydt[e + 1] = kMinusI * (g[e] * std::conj(rot) * y[0]);
        }
        dydt[0] = kMinusI * acc;
    }
};

// lab picture: the bare frequencies stay in the equations
struct LabRhs {
    double omega0;
    const std::vector<double>& omega;
    const std::vector<double>& g;

    void operator()(const cvec& y, cvec& dydt, double t) const {
        (void)t;
        std::complex<double> acc{0.0, 0.0};
        const std::size_t n = omega.size();
        for (std::size_t e = 0; e < n; ++e) {
            acc += g[e] * y[e + 1];
            dydt[e + 1] = kMinusI * (omega[e] * y[e + 1] + g[e] * y[0]);
        }
        dydt[0] = kMinusI * (omega0 * y[0] + acc);
    }
};

struct ModeArrays {
    std::vector<double> omega;
    std::vector<double> detuning;
    std::vector<double> g;  // collective coupling lambda * sqrt(weight)
};

ModeArrays collect(const ModeSet& m) {
    ModeArrays a;
    a.omega.reserve(m.entries.size());
    a.detuning.reserve(m.entries.size());
    a.g.reserve(m.entries.size());
    for (const auto& e : m.entries) {
        a.omega.push_back(e.omega);
        a.detuning.push_back(e.omega - m.omega0);
        a.g.push_back(e.coupling * std::sqrt(static_cast<double>(e.weight)));
    }
    return a;
}

EvolveResult integrate(const ModeSet& m, cvec y0, const std::vector<double>& times,
                       const IntegratorOptions& opts) {
    namespace ode = boost::numeric::odeint;
    if (times.empty()) throw std::invalid_argument("evolve: empty sample-time list");
    if (times.front() < 0.0) throw std::invalid_argument("evolve: sample times must be >= 0");
    if (!std::is_sorted(times.begin(), times.end()))
        throw std::invalid_argument("evolve: sample times must be nondecreasing");

    const ModeArrays arrays = collect(m);
    std::vector<double> grid;
    bool dropped_origin = false;
    if (times.front() > 0.0) {  // the initial state is defined at t = 0
        grid.reserve(times.size() + 1);
        grid.push_back(0.0);
        grid.insert(grid.end(), times.begin(), times.end());
        dropped_origin = true;
    } else {
        grid = times;
    }

    const double norm0 = [&] {
        double s = 0.0;
        for (const auto& c : y0) s += std::norm(c);
        return s;
    }();

    EvolveResult result;
    result.states.reserve(times.size());
    auto observer = [&](const cvec& y, double t) {
        AmplitudeState s;
        s.time = t;
        s.c0 = y[0];
        s.c_modes.assign(y.begin() + 1, y.end());
        s.frame = opts.frame;
        result.states.push_back(std::move(s));
        double norm = 0.0;
        for (const auto& c : y) norm += std::norm(c);
        result.max_norm_drift = std::max(result.max_norm_drift, std::abs(norm - norm0));
    };

    auto stepper = ode::make_controlled(opts.abs_tol, opts.rel_tol,
                                        ode::runge_kutta_dopri5<cvec>());
    const double span = grid.back() - grid.front();
    const double dt0 = span > 0.0 ? std::min(1.0, span / 100.0) : 1e-3;
    try {
        if (opts.frame == Frame::Interaction) {
            InteractionRhs rhs{arrays.detuning, arrays.g};
            ode::integrate_times(stepper, rhs, y0, grid.begin(), grid.end(), dt0, observer);
        } else {
            LabRhs rhs{m.omega0, arrays.omega, arrays.g};
            ode::integrate_times(stepper, rhs, y0, grid.begin(), grid.end(), dt0, observer);
        }
    } catch (const std::exception& err) {
        std::ostringstream msg;
        msg << "evolve: integration failed (" << err.what()
            << "); rel_tol = " << opts.rel_tol << ", modes = " << m.entries.size();
        throw std::runtime_error(msg.str());
    }

    if (dropped_origin) result.states.erase(result.states.begin());
    result.norm_flagged = result.max_norm_drift > opts.norm_drift_tol;
    return result;
}

}  // namespace

double AmplitudeState::norm() const {
    double s = std::norm(c0);
    for (const auto& c : c_modes) s += std::norm(c);
    return s;
}

AmplitudeState to_lab_frame(const AmplitudeState& s, const ModeSet& m) {
    if (s.frame == Frame::Lab) return s;
    if (s.c_modes.size() != m.entries.size())
        throw std::invalid_argument("to_lab_frame: state does not match the ModeSet");
    AmplitudeState out = s;
    out.frame = Frame::Lab;
    out.c0 = s.c0 * std::polar(1.0, -m.omega0 * s.time);
    for (std::size_t e = 0; e < s.c_modes.size(); ++e)
        out.c_modes[e] = s.c_modes[e] * std::polar(1.0, -m.entries[e].omega * s.time);
    return out;
}

AmplitudeState to_interaction_frame(const AmplitudeState& s, const ModeSet& m) {
    if (s.frame == Frame::Interaction) return s;
    if (s.c_modes.size() != m.entries.size())
        throw std::invalid_argument("to_interaction_frame: state does not match the ModeSet");
    AmplitudeState out = s;
    out.frame = Frame::Interaction;
    out.c0 = s.c0 * std::polar(1.0, m.omega0 * s.time);
    for (std::size_t e = 0; e < s.c_modes.size(); ++e)
        out.c_modes[e] = s.c_modes[e] * std::polar(1.0, m.entries[e].omega * s.time);
    return out;
}

EvolveResult evolve(const ModeSet& m, const std::vector<double>& times,
                    const IntegratorOptions& opts) {
    cvec y0(m.entries.size() + 1, {0.0, 0.0});
    y0[0] = {1.0, 0.0};
    return integrate(m, std::move(y0), times, opts);
}

EvolveResult evolve_from(const ModeSet& m, const AmplitudeState& initial,
                         const std::vector<double>& times, const IntegratorOptions& opts) {
    if (initial.c_modes.size() != m.entries.size())
        throw std::invalid_argument("evolve_from: initial state does not match the ModeSet");
    cvec y0(m.entries.size() + 1);
    y0[0] = initial.c0;
    std::copy(initial.c_modes.begin(), initial.c_modes.end(), y0.begin() + 1);
    return integrate(m, std::move(y0), times, opts);
}

std::vector<double> single_excitation_hamiltonian(const ModeSet& m) {
    const std::size_t n = m.entries.size() + 1;
    std::vector<double> h(n * n, 0.0);
    h[0] = m.omega0;
    for (std::size_t e = 0; e < m.entries.size(); ++e) {
        const auto& mode = m.entries[e];
        const double g = mode.coupling * std::sqrt(static_cast<double>(mode.weight));
        h[(e + 1) * n + (e + 1)] = mode.omega;
        h[e + 1] = g;
        h[(e + 1) * n] = g;
    }
    return h;
}

std::vector<AmplitudeState> evolve_oracle(const ModeSet& m, const std::vector<double>& times,
                                          const OracleOptions& opts) {
    if (m.entries.size() > opts.max_entries) {
        std::ostringstream msg;
        msg << "evolve_oracle: " << m.entries.size()
            << " entries exceeds the dense-diagonalization cap " << opts.max_entries;
        throw std::runtime_error(msg.str());
    }
    const auto n = static_cast<Eigen::Index>(m.entries.size() + 1);
    Eigen::MatrixXd h(n, n);
    {
        const auto flat = single_excitation_hamiltonian(m);
        for (Eigen::Index r = 0; r < n; ++r)
            for (Eigen::Index c = 0; c < n; ++c)
                h(r, c) = flat[static_cast<std::size_t>(r * n + c)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h);
    if (eig.info() != Eigen::Success)
        throw std::runtime_error("evolve_oracle: eigendecomposition failed");
    const Eigen::VectorXd& energies = eig.eigenvalues();
    const Eigen::MatrixXd& vectors = eig.eigenvectors();
    const Eigen::VectorXd overlap = vectors.row(0);  // <E_j|e,0>

    std::vector<AmplitudeState> states;
    states.reserve(times.size());
    Eigen::VectorXcd psi(n);
    for (const double t : times) {
        Eigen::VectorXcd phases(n);
        for (Eigen::Index j = 0; j < n; ++j)
            phases(j) = std::polar(overlap(j), -energies(j) * t);
        psi = vectors * phases;

        AmplitudeState s;
        s.time = t;
        s.frame = Frame::Lab;
        s.c0 = psi(0);
        s.c_modes.assign(psi.data() + 1, psi.data() + n);
        states.push_back(to_interaction_frame(s, m));
    }
    return states;
}

AmplitudeState asymptotic_amplitudes(const ModeSet& m) {
    if (!(m.gamma_ref > 0.0))
        throw std::invalid_argument("asymptotic_amplitudes: ModeSet lacks a reference rate");
    AmplitudeState s;
    s.time = std::numeric_limits<double>::infinity();
    s.c0 = {0.0, 0.0};
    s.frame = Frame::Interaction;
    s.c_modes.reserve(m.entries.size());
    const double half = line_hwhm(m.gamma_ref);
    for (const auto& e : m.entries) {
        const std::complex<double> denom{e.omega - m.omega0, half};
        s.c_modes.push_back(std::sqrt(static_cast<double>(e.weight)) * e.coupling / denom);
    }
    return s;
}

RecurrenceScan recurrence_scan(const ModeSet& m, double t_final, double threshold,
                               std::size_t n_samples, const IntegratorOptions& opts) {
    if (!(t_final > 0.0)) throw std::invalid_argument("recurrence_scan: t_final must be > 0");
    if (n_samples < 16) throw std::invalid_argument("recurrence_scan: need >= 16 samples");

    const auto times = uniform_times(0.0, t_final, n_samples);
    const EvolveResult run = evolve(m, times, opts);

    RecurrenceScan scan;
    scan.threshold = threshold;
    scan.sample_times = times;
    scan.sample_p_excited.reserve(run.states.size());
    for (const auto& s : run.states) scan.sample_p_excited.push_back(s.p_excited());

    const auto& pe = scan.sample_p_excited;
    std::size_t last_min = 0;  // latest turning point seen so far
    for (std::size_t i = 1; i + 1 < pe.size(); ++i) {
        if (pe[i] < pe[i - 1] && pe[i] <= pe[i + 1]) last_min = i;
        if (pe[i] > pe[i - 1] && pe[i] >= pe[i + 1] && pe[i] >= threshold) {
            scan.revival_times.push_back(times[i]);
            scan.revival_peaks.push_back(pe[i]);
            scan.onset_times.push_back(times[last_min]);
        }
    }
    return scan;
}

std::vector<double> uniform_times(double t0, double t1, std::size_t n) {
    if (n < 2 || !(t1 > t0)) throw std::invalid_argument("uniform_times: bad grid request");
    std::vector<double> t(n);
    const double dt = (t1 - t0) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) t[i] = t0 + dt * static_cast<double>(i);
    t.back() = t1;
    return t;
}

}  // namespace lightent
