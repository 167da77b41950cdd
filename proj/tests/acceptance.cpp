// Acceptance suite: runs every top-level claim end to end at its stated
// tolerance and prints one PASS/FAIL line per criterion. Exits nonzero if
// any criterion fails. argv[1] (optional) is the CLI binary, used for the
// byte-identical rerun check.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <sys/wait.h>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lightent/classical.hpp"
#include "lightent/dynamics.hpp"
#include "lightent/entropy.hpp"
#include "lightent/io.hpp"
#include "lightent/modes.hpp"
#include "lightent/params.hpp"
#include "lightent/spectra.hpp"

using namespace lightent;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

struct Criterion {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what + " FAILED";
        } else {
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

ModeSet standard_comb(double gamma, double widths, double box_length) {
    PhysicalParams p;
    p.box_length = box_length;
    Enumerate1DOptions opts;
    opts.gamma_target = gamma;
    opts.window_widths = widths;
    return enumerate_1d(p, opts);
}

// ---------------------------------------------------------------------------

Criterion criterion_decay(EvolveResult& run_out, double& gamma_out) {
    Criterion c;
    const auto t0 = std::chrono::steady_clock::now();

    const double gamma = 1e-3;
    gamma_out = gamma;
    const ModeSet m = standard_comb(gamma, 50.0, 1.5e5);  // spacing < gamma/20
    c.require(m.lattice_spacing() <= gamma / 20.0, "spacing<=Gamma/20");

    const auto times = uniform_times(0.0, 5.0 / gamma, 400);
    run_out = evolve(m, times);
    std::vector<double> t, pe;
    for (const auto& s : run_out.states) {
        t.push_back(s.time);
        pe.push_back(s.p_excited());
    }
    const DecayFit fit = fit_exponential(t, pe, 1.0 / gamma, 4.0 / gamma);
    const double rel = std::abs(fit.rate - gamma) / gamma;
    c.require(rel <= 0.05, "rate err " + fmt(rel) + " <= 5%");

    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.require(secs < 60.0, "runtime " + fmt(secs) + "s < 60s");
    return c;
}

Criterion criterion_line_shape() {
    Criterion c;
    const auto t0 = std::chrono::steady_clock::now();

    const double gamma = 1e-3;
    const ModeSet m = standard_comb(gamma, 50.0, 1.5e5);
    const SpectralDistribution spec = bin_spectrum(asymptotic_amplitudes(m), m, 0.1 * gamma);
    const LorentzFit fit = fit_lorentzian(spec);

    const double hwhm_err = std::abs(fit.hwhm - 0.5 * gamma) / (0.5 * gamma);
    const double center_err = std::abs(fit.center - m.omega0) / m.omega0;
    c.require(hwhm_err <= 0.10, "hwhm err " + fmt(hwhm_err) + " <= 10%");
    c.require(center_err <= 1e-3, "center err " + fmt(center_err) + " <= 0.1%");

    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.require(secs < 10.0, "runtime " + fmt(secs) + "s < 10s");
    return c;
}

Criterion criterion_entropy_scaling() {
    Criterion c;

    // 1D: successive doublings add ln 2; offset against the closed form is
    // constant in L
    const double gamma = 1e-3;
    std::vector<double> s1d, off1d;
    for (const double length : {4e4, 8e4, 1.6e5}) {
        const ModeSet m = standard_comb(gamma, 200.0, length);
        const EntropyReport rep = emission_entropy(asymptotic_amplitudes(m), m);
        s1d.push_back(rep.s_exact);
        off1d.push_back(rep.s_exact - rep.s_uniform_1d.value);
    }
    for (std::size_t i = 0; i + 1 < s1d.size(); ++i) {
        const double d = s1d[i + 1] - s1d[i];
        c.require(std::abs(d - std::log(2.0)) <= 0.02,
                  "1D diff " + fmt(d) + " = ln2 +- 0.02");
    }
    const double spread1d =
        *std::max_element(off1d.begin(), off1d.end()) -
        *std::min_element(off1d.begin(), off1d.end());
    c.require(spread1d <= 0.02, "1D offset spread " + fmt(spread1d) + " <= 0.02");

    // 3D shell mode at a linewidth whose Lorentzian core resolves the lattice
    PhysicalParams p3;
    p3.dimension = 3;
    p3.dipole_d = std::sqrt(3.0 * kPi * 4e-3);
    Enumerate3DOptions opts;
    opts.window_widths = 50.0;
    opts.max_entries = 8'000'000;
    std::vector<double> s3d, off3d;
    for (const double length : {260.0, 520.0}) {
        p3.box_length = length;
        const ModeSet m = enumerate_3d(p3, opts);
        const EntropyReport rep = emission_entropy(asymptotic_amplitudes(m), m);
        s3d.push_back(rep.s_exact);
        off3d.push_back(rep.s_exact - rep.s_uniform_3d.value);
    }
    const double d3 = s3d[1] - s3d[0];
    c.require(std::abs(d3 - 3.0 * std::log(2.0)) <= 0.05,
              "3D diff " + fmt(d3) + " = 3ln2 +- 0.05");
    c.require(std::abs(off3d[1] - off3d[0]) <= 0.02,
              "3D offset spread " + fmt(std::abs(off3d[1] - off3d[0])) + " <= 0.02");
    return c;
}

Criterion criterion_small_cavity() {
    Criterion c;

    PhysicalParams p;
    const double tau_em = 1000.0;
    p.box_length = p.c * tau_em;
    c.require(entropy_timescale(p, tau_em) == std::log(2.0), "ln 2 exactly at L = c tau_em");

    // dynamical run: comb tooth on the transition, L ~ c tau_em
    PhysicalParams pd;
    pd.box_length = 2.0 * kPi * 159.0;  // 999.03 = c tau_em to 0.1%
    Enumerate1DOptions opts;
    opts.gamma_target = 1e-3;
    opts.window_widths = 100.0;
    opts.require_resolved = false;
    const ModeSet m = enumerate_1d(pd, opts);

    const auto times = uniform_times(0.0, 2e4, 4001);
    const EvolveResult run = evolve(m, times);
    double mean = 0.0;
    for (std::size_t i = 1; i < times.size(); ++i)
        mean += 0.5 * (run.states[i].p_excited() + run.states[i - 1].p_excited()) *
                (times[i] - times[i - 1]);
    mean /= times.back();
    c.require(std::abs(mean - 0.5) <= 0.1, "mean P_e " + fmt(mean) + " = 0.5 +- 0.1");
    return c;
}

Criterion criterion_recurrence() {
    Criterion c;

    // small box, comb aligned, Gamma L/c = 4: the photon is emitted, comes
    // back after one round trip, and re-excites the atom
    PhysicalParams p;
    p.box_length = 2.0 * kPi * 637.0;
    Enumerate1DOptions opts;
    opts.gamma_target = 1e-3;
    opts.window_widths = 200.0;
    opts.require_resolved = false;
    const ModeSet m = enumerate_1d(p, opts);
    const double roundtrip = p.box_length / p.c;
    const RecurrenceScan scan = recurrence_scan(m, 2.5 * roundtrip, 0.1, 4000);
    if (scan.revival_times.empty()) {
        c.require(false, "revival found");
    } else {
        const double rel = std::abs(scan.onset_times.front() - roundtrip) / roundtrip;
        c.require(rel <= 0.10, "revival onset err " + fmt(rel) + " <= 10% of L/c");
    }

    // large box: no revival above 0.5 before 10/Gamma
    const double gamma = 1e-3;
    const ModeSet big = standard_comb(gamma, 50.0, 2.0 * kPi / (gamma * 0.1));
    const RecurrenceScan quietscan = recurrence_scan(big, 10.0 / gamma, 0.5, 2000);
    c.require(quietscan.revival_times.empty(), "no large-box revival before 10/Gamma");
    return c;
}

Criterion criterion_oracle(std::vector<AmplitudeState>& oracle_out) {
    Criterion c;

    // ~500 modes: 249 weight-2 entries at spacing Gamma/5 (the strict-interior
    // window rule drops the two boundary teeth of the nominal 250)
    const double gamma = 1e-3;
    const ModeSet m = standard_comb(gamma, 25.0, 2.0 * kPi / (gamma / 5.0));
    c.require(m.mode_count() >= 495 && m.mode_count() <= 505,
              "mode count " + std::to_string(m.mode_count()) + " ~ 500");

    IntegratorOptions tight;
    tight.rel_tol = 1e-10;
    tight.abs_tol = 1e-13;
    const auto times = uniform_times(0.0, 3.0 / gamma, 16);
    const EvolveResult run = evolve(m, times, tight);
    oracle_out = evolve_oracle(m, times);

    double worst = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        worst = std::max(worst, std::abs(run.states[i].c0 - oracle_out[i].c0));
        for (std::size_t e = 0; e < m.entries.size(); ++e)
            worst = std::max(worst,
                             std::abs(run.states[i].c_modes[e] - oracle_out[i].c_modes[e]));
    }
    c.require(worst <= 1e-6, "max amplitude deviation " + fmt(worst) + " <= 1e-6");

    // time reversal through the integrator
    const double T = 3.0 / gamma;
    AmplitudeState turned = to_lab_frame(run.states.back(), m);
    turned.c0 = std::conj(turned.c0);
    for (auto& v : turned.c_modes) v = std::conj(v);
    turned.time = 0.0;
    turned.frame = Frame::Interaction;
    const EvolveResult back = evolve_from(m, turned, {0.0, T}, tight);
    const AmplitudeState final_lab = to_lab_frame(back.states.back(), m);
    double err = std::abs(final_lab.c0 - std::complex<double>{1.0, 0.0});
    for (const auto& v : final_lab.c_modes) err = std::max(err, std::abs(v));
    c.require(err <= 1e-6, "time-reversal error " + fmt(err) + " <= 1e-6");
    return c;
}

Criterion criterion_unitarity(const EvolveResult& decay_run,
                              const std::vector<AmplitudeState>& oracle_states) {
    Criterion c;
    c.require(decay_run.max_norm_drift <= 1e-6,
              "integrator norm drift " + fmt(decay_run.max_norm_drift) + " <= 1e-6");
    double worst = 0.0;
    for (const auto& s : oracle_states) worst = std::max(worst, std::abs(s.norm() - 1.0));
    c.require(worst <= 1e-12, "oracle norm drift " + fmt(worst) + " <= 1e-12");
    return c;
}

Criterion criterion_classical_energy() {
    Criterion c;

    // omega0 tau = 1e4
    const double tau = 1e4;
    PhysicalParams p;
    p.charge_e = std::sqrt(6.0 * kPi * p.mass_m / (tau * p.omega0 * p.omega0));
    const ClassicalTrajectory traj = damped_trajectory(p, 1.0, 20.0 * tau, 2.0 * kPi / 80.0);
    const PowerSeries power = larmor_power(p, traj);
    const double rel = std::abs(power.radiated_total - power.mechanical_loss) /
                       power.mechanical_loss;
    c.require(rel <= 0.01, "energy balance err " + fmt(rel) + " <= 1%");

    const BoundaryTermCheck boundary = boundary_term_check(traj, 5.0 * tau);
    c.require(boundary.ratio < 0.01,
              "boundary/retained " + fmt(boundary.ratio) + " < 1%");
    return c;
}

Criterion criterion_correspondence() {
    Criterion c;

    const double gamma = 1e-3;
    const double tau = 1.0 / gamma;
    PhysicalParams p;
    p.box_length = 4e4;
    const ModeSet m = standard_comb(gamma, 50.0, p.box_length);
    const EntropyReport quantum = emission_entropy(asymptotic_amplitudes(m), m);

    const double t_spec = 4.0 * p.box_length;  // 160 tau, a multiple of L/c
    const ClassicalTrajectory traj =
        make_damped_trajectory(1.0, p.omega0, tau, t_spec, 2.0 * kPi / 20.0);
    const SpectralDistribution spec = classical_spectrum(traj, m.lattice_spacing());
    const EntropyReport classical = classical_field_entropy(spec, p, tau, &m);

    const double gap = std::abs(classical.s_exact - quantum.s_exact);
    c.require(gap <= 0.05, "|s_cl - s_q| = " + fmt(gap) + " <= 0.05");

    const double v0_quantum = v0_3d(p, 0.5 / tau);
    const double v0_classical = 6.0 * kPi * tau * std::pow(p.c, 3) / (p.omega0 * p.omega0);
    const double identity = std::abs(v0_quantum - v0_classical) / v0_classical;
    c.require(identity <= 1e-12, "V0 identity err " + fmt(identity) + " <= 1e-12");
    return c;
}

Criterion criterion_properties(const char* cli_path) {
    Criterion c;

    // diagonal-entropy properties
    std::mt19937 rng(4242);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    bool nonneg = true, perm = true;
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<double> pr(128);
        double sum = 0.0;
        for (auto& v : pr) { v = u(rng); sum += v; }
        for (auto& v : pr) v /= sum;
        const double s = diagonal_entropy(pr);
        nonneg = nonneg && s >= 0.0;
        std::vector<double> shuffled = pr;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        perm = perm && std::abs(diagonal_entropy(shuffled) - s) <= 1e-12;
    }
    c.require(nonneg, "nonnegativity");
    c.require(perm, "permutation invariance");

    std::vector<double> pa{0.2, 0.3, 0.5}, pb{0.1, 0.4, 0.25, 0.25}, prod;
    for (const double a : pa)
        for (const double b : pb) prod.push_back(a * b);
    const double add_err = std::abs(diagonal_entropy(prod) -
                                    (diagonal_entropy(pa) + diagonal_entropy(pb)));
    c.require(add_err <= 1e-12, "additivity err " + fmt(add_err) + " <= 1e-12");
    c.require(diagonal_entropy(std::vector<double>{1.0, 0.0}) == 0.0, "0 ln 0 = 0");

    // exact-model fit recovery
    std::vector<double> t, pe;
    for (int i = 0; i <= 100; ++i) {
        t.push_back(20.0 * i);
        pe.push_back(2.0 * std::exp(-1e-3 * t.back()));
    }
    const DecayFit dfit = fit_exponential(t, pe, 0.0, 2000.0);
    c.require(std::abs(dfit.rate - 1e-3) <= 1e-10,
              "exp rate recovery " + fmt(std::abs(dfit.rate - 1e-3)));

    SpectralDistribution synth;
    synth.kind = SpectrumKind::QuantumProbability;
    const double gamma0 = 5e-4;
    const std::size_t nbins = 600;
    synth.bin_edges.resize(nbins + 1);
    for (std::size_t b = 0; b <= nbins; ++b)
        synth.bin_edges[b] = 1.0 - 0.015 + 5e-5 * static_cast<double>(b);
    synth.mass.resize(nbins);
    for (std::size_t b = 0; b < nbins; ++b) {
        const double d = synth.bin_center(b) - 1.0;
        synth.mass[b] = 0.8 * (gamma0 / kPi) / (d * d + gamma0 * gamma0) * 5e-5;
    }
    for (const double v : synth.mass) synth.total_mass += v;
    const LorentzFit lfit = fit_lorentzian(synth);
    c.require(std::abs(lfit.center - 1.0) <= 1e-8 && std::abs(lfit.hwhm - gamma0) <= 1e-8,
              "lorentz recovery center/hwhm to 1e-8");

    // byte-identical reruns through the CLI
    if (cli_path != nullptr) {
        const fs::path base = fs::temp_directory_path() / "lightent_acceptance";
        fs::remove_all(base);
        fs::create_directories(base);
        const fs::path cfg_path = base / "decay.json";
        {
            std::ofstream cfg(cfg_path);
            cfg << R"({"params": {"box_length": 8000.0},
                       "numerics": {"gamma_target": 5e-3, "window_widths": 10.0,
                                    "n_samples": 150}})";
        }
        auto run_cli = [&](const std::string& out) {
            std::ostringstream cmd;
            cmd << '"' << cli_path << '"' << " decay --quiet --config " << cfg_path
                << " --out " << (base / out) << " > /dev/null 2>&1";
            return std::system(cmd.str().c_str());
        };
        const int rc1 = run_cli("run1");
        const int rc2 = run_cli("run2");
        c.require(rc1 == 0 && rc2 == 0, "CLI exit codes 0");
        auto slurp = [](const fs::path& path) {
            std::ifstream in(path, std::ios::binary);
            std::ostringstream ss;
            ss << in.rdbuf();
            return ss.str();
        };
        const bool same_csv =
            slurp(base / "run1" / "decay.csv") == slurp(base / "run2" / "decay.csv");
        const bool same_fit =
            slurp(base / "run1" / "fit.json") == slurp(base / "run2" / "fit.json");
        c.require(same_csv && !slurp(base / "run1" / "decay.csv").empty(),
                  "byte-identical decay.csv");
        c.require(same_fit, "byte-identical fit.json");

        // exit-code contract: 2 for usage/config problems, 1 for numerical
        auto exit_of = [&](const std::string& args) {
            std::ostringstream cmd;
            cmd << '"' << cli_path << '"' << ' ' << args << " > /dev/null 2>&1";
            const int rc = std::system(cmd.str().c_str());
            return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
        };
        c.require(exit_of("no-such-scenario") == 2, "unknown scenario exits 2");
        c.require(exit_of("decay --set params.omega0=-1 --out " +
                          (base / "bad").string()) == 2,
                  "invalid params exit 2");
        c.require(exit_of("entropy --quiet --set params.dimension=3"
                          " --set params.box_length=340"
                          " --set numerics.max_entries=10 --out " +
                          (base / "cap").string()) == 1,
                  "numerical failure exits 1");
    } else {
        c.require(false, "CLI path missing (pass the binary as argv[1])");
    }
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    const char* cli_path = argc > 1 ? argv[1] : nullptr;

    EvolveResult decay_run;
    std::vector<AmplitudeState> oracle_states;
    double gamma = 0.0;

    struct Entry {
        const char* name;
        std::function<Criterion()> fn;
    };
    const std::vector<Entry> criteria{
        {"exponential decay", [&] { return criterion_decay(decay_run, gamma); }},
        {"Lorentzian line", [] { return criterion_line_shape(); }},
        {"entropy volume scaling", [] { return criterion_entropy_scaling(); }},
        {"small-cavity ln 2", [] { return criterion_small_cavity(); }},
        {"recurrence", [] { return criterion_recurrence(); }},
        {"oracle equivalence", [&] { return criterion_oracle(oracle_states); }},
        {"unitarity", [&] { return criterion_unitarity(decay_run, oracle_states); }},
        {"classical energy balance", [] { return criterion_classical_energy(); }},
        {"quantum-classical correspondence", [] { return criterion_correspondence(); }},
        {"property suites", [&] { return criterion_properties(cli_path); }},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Criterion result;
        try {
            result = criteria[i].fn();
        } catch (const std::exception& e) {
            result.pass = false;
            result.detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%2zu] %s  %s — %s (%.1f s)\n", i + 1,
                    result.pass ? "PASS" : "FAIL", criteria[i].name, result.detail.c_str(),
                    secs);
        std::fflush(stdout);
        if (!result.pass) ++failures;
    }
    if (failures == 0) {
        std::printf("acceptance: all %zu criteria passed\n", criteria.size());
        return 0;
    }
    std::printf("acceptance: %d of %zu criteria FAILED\n", failures, criteria.size());
    return 1;
}
