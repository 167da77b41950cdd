#include "lightent/scenarios.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <iostream>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <thread>

#include "lightent/classical.hpp"
#include "lightent/dynamics.hpp"
#include "lightent/entropy.hpp"
#include "lightent/io.hpp"
#include "lightent/modes.hpp"
#include "lightent/spectra.hpp"

namespace lightent {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr const char* kToolVersion = "0.1.0";

double num(const nlohmann::json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number())
        throw ConfigError(std::string("numerics.") + key + " must be a number");
    return j.at(key).get<double>();
}

bool flag(const nlohmann::json& j, const char* key, bool fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_boolean())
        throw ConfigError(std::string("numerics.") + key + " must be a boolean");
    return j.at(key).get<bool>();
}

std::string iso_utc_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

nlohmann::json derived_constants(const PhysicalParams& p) {
    nlohmann::json d;
    const double gamma = gamma_ww(p);
    d["gamma_ww"] = gamma;
    if (gamma > 0.0) {
        d["delta_omega"] = line_hwhm(gamma);
        d["v0_3d"] = v0_3d(p, line_hwhm(gamma));
        d["tau_em"] = 1.0 / gamma;
    }
    d["effective_solid_angle"] = effective_solid_angle(p);
    if (p.charge_e > 0.0 && p.mass_m > 0.0) d["tau_classical"] = tau_classical(p);
    return d;
}

void write_manifest(const ScenarioConfig& cfg, const nlohmann::json& summary,
                    double seconds, const std::filesystem::path& dir) {
    nlohmann::json manifest;
    manifest["config"] = {{"scenario", cfg.scenario},
                          {"params", params_to_json(cfg.params)},
                          {"numerics", cfg.numerics},
                          {"sweep", cfg.sweep},
                          {"output_dir", cfg.output_dir.string()}};
    manifest["derived"] = derived_constants(cfg.params);
    manifest["summary"] = summary;
    manifest["tool"] = {{"name", "lightent"}, {"version", kToolVersion}};
    manifest["timing_seconds"] = seconds;
    manifest["generated_at"] = iso_utc_now();  // the only timestamp in any output
    save_json(manifest, dir / "manifest.json");
}

void note(const ScenarioConfig& cfg, const std::string& line) {
    if (!cfg.quiet) std::cout << line << '\n';
}

double resolved_gamma(const ScenarioConfig& cfg) {
    return num(cfg.numerics, "gamma_target", gamma_ww(cfg.params));
}

// ---------------------------------------------------------------- decay ---

nlohmann::json run_decay(const ScenarioConfig& cfg, const std::filesystem::path& dir) {
    // 1D: flat coupling calibrated to gamma_target. 3D: the full shell is
    // reduced to one collective mode per frequency bin, which is exact for
    // the atom amplitude; the rate is then the derived gamma_ww.
    double gamma = 0.0;
    ModeSet m;
    if (cfg.params.dimension == 1) {
        gamma = resolved_gamma(cfg);
        Enumerate1DOptions mopts;
        mopts.gamma_target = gamma;
        mopts.window_widths = num(cfg.numerics, "window_widths", 50.0);
        m = enumerate_1d(cfg.params, mopts);
    } else {
        if (cfg.numerics.contains("gamma_target"))
            throw ConfigError(
                "decay: in 3D the rate follows from dipole_d; gamma_target is a 1D knob");
        gamma = gamma_ww(cfg.params);
        Enumerate3DOptions mopts;
        mopts.window_widths = num(cfg.numerics, "window_widths", 50.0);
        mopts.max_entries = static_cast<std::size_t>(num(cfg.numerics, "max_entries", 6e6));
        const ModeSet full = enumerate_3d(cfg.params, mopts);
        m = reduce_to_collective(full, num(cfg.numerics, "bin_width_over_gamma", 0.05) * gamma);
    }
    note(cfg, "decay: " + std::to_string(m.entries.size()) + " dynamical modes, gamma = " +
                  format_double(gamma));

    const double t_final = num(cfg.numerics, "t_final_over_tau", 5.0) / gamma;
    const auto n_samples = static_cast<std::size_t>(num(cfg.numerics, "n_samples", 400));
    IntegratorOptions iopts;
    iopts.rel_tol = num(cfg.numerics, "rel_tol", 1e-9);
    const EvolveResult run = evolve(m, uniform_times(0.0, t_final, n_samples), iopts);

    write_time_series_csv(run.states, dir / "decay.csv");
    if (flag(cfg.numerics, "write_final_amplitudes", false))
        write_mode_amplitudes_csv(run.states.back(), m, dir / "final_amplitudes.csv");

    std::vector<double> t, pe;
    for (const auto& s : run.states) {
        t.push_back(s.time);
        pe.push_back(s.p_excited());
    }
    const double fit_lo = num(cfg.numerics, "fit_t_min_over_tau", 1.0) / gamma;
    const double fit_hi = num(cfg.numerics, "fit_t_max_over_tau", 4.0) / gamma;
    const DecayFit fit = fit_exponential(t, pe, fit_lo, fit_hi);
    save_json(decay_fit_to_json(fit), dir / "fit.json");

    return {{"fitted_rate", fit.rate},
            {"gamma_target", gamma},
            {"rate_rel_error", std::abs(fit.rate - gamma) / gamma},
            {"max_norm_drift", run.max_norm_drift},
            {"norm_flagged", run.norm_flagged},
            {"modes", m.mode_count()}};
}

// -------------------------------------------------------------- spectrum ---

nlohmann::json run_spectrum(const ScenarioConfig& cfg, const std::filesystem::path& dir) {
    if (cfg.params.dimension != 1)
        throw ConfigError("spectrum: a 1D parameter set is required (dimension = 1)");
    const double gamma = resolved_gamma(cfg);
    Enumerate1DOptions mopts;
    mopts.gamma_target = gamma;
    mopts.window_widths = num(cfg.numerics, "window_widths", 50.0);
    const ModeSet m = enumerate_1d(cfg.params, mopts);

    const AmplitudeState state = asymptotic_amplitudes(m);
    const double bin_width = num(cfg.numerics, "bin_width_over_gamma", 0.1) * gamma;
    const SpectralDistribution spec = bin_spectrum(state, m, bin_width);
    write_spectrum_csv(spec, dir / "spectrum.csv");
    if (flag(cfg.numerics, "write_mode_table", false))
        write_mode_table_csv(m, dir / "modes.csv");

    const LorentzFit fit = fit_lorentzian(spec);
    save_json(lorentz_fit_to_json(fit), dir / "lorentz_fit.json");
    note(cfg, "spectrum: center = " + format_double(fit.center) +
                  ", hwhm = " + format_double(fit.hwhm));

    return {{"center", fit.center},
            {"hwhm", fit.hwhm},
            {"expected_center", m.omega0},
            {"expected_hwhm", line_hwhm(gamma)},
            {"total_mass", spec.total_mass},
            {"coverage", m.coverage()}};
}

// --------------------------------------------------------------- entropy ---

ModeSet build_modeset(const ScenarioConfig& cfg, double gamma) {
    if (cfg.params.dimension == 1) {
        Enumerate1DOptions mopts;
        mopts.gamma_target = gamma;
        mopts.window_widths = num(cfg.numerics, "window_widths", 50.0);
        mopts.require_resolved = flag(cfg.numerics, "require_resolved", true);
        return enumerate_1d(cfg.params, mopts);
    }
    Enumerate3DOptions mopts;
    mopts.window_widths = num(cfg.numerics, "window_widths", 50.0);
    mopts.max_entries = static_cast<std::size_t>(num(cfg.numerics, "max_entries", 6e6));
    return enumerate_3d(cfg.params, mopts);
}

nlohmann::json run_entropy(const ScenarioConfig& cfg, const std::filesystem::path& dir) {
    const double gamma = resolved_gamma(cfg);
    const ModeSet m = build_modeset(cfg, gamma);
    note(cfg, "entropy: " + std::to_string(m.mode_count()) + " modes in " +
                  std::to_string(cfg.params.dimension) + "D");

    // the closed-form long-time amplitudes require a resolved line; coarse
    // (small-cavity) sets must take the state from an actual evolution
    const bool line_resolved =
        cfg.params.dimension == 3 || m.lattice_spacing() <= gamma / 5.0;
    const bool want_series = flag(cfg.numerics, "time_series", false);
    if (!line_resolved && !want_series)
        throw ConfigError(
            "entropy: the mode comb does not resolve the line, so the long-time "
            "amplitudes are invalid; enable numerics.time_series to evolve instead");

    EvolveResult run;
    if (want_series) {
        const double t_final = num(cfg.numerics, "t_final_over_tau", 10.0) / gamma;
        const auto n_samples = static_cast<std::size_t>(num(cfg.numerics, "n_samples", 200));
        run = evolve(m, uniform_times(0.0, t_final, n_samples));
    }

    const AmplitudeState state = line_resolved ? asymptotic_amplitudes(m) : run.states.back();
    const EntropyReport report = emission_entropy(state, m);

    nlohmann::json out = entropy_report_to_json(report);
    out["state"] = line_resolved ? "asymptotic"
                                 : "evolved to t = " + format_double(state.time);
    out["modeset"] = modeset_summary(m);

    const double dw = line_hwhm(gamma);
    const double r_diag = num(cfg.numerics, "wavepacket_r", 10.0 / dw);
    const WavepacketVolume vr = wavepacket_volume(cfg.params, r_diag, dw / cfg.params.c);
    out["wavepacket_volume"] = {{"r", r_diag}, {"value", vr.value}, {"in_far_field", vr.in_far_field}};

    const auto n_atoms = static_cast<int>(num(cfg.numerics, "n_atoms", 1));
    if (cfg.params.dimension == 3 && n_atoms >= 1) {
        const MultiAtomEntropy multi = entropy_multi_atom(n_atoms, cfg.params, dw);
        out["multi_atom"] = {{"n_atoms", n_atoms},
                             {"value", multi.value},
                             {"below_coherence_volume", multi.below_coherence_volume}};
    }

    if (want_series) {
        write_entropy_series_csv(entropy_time_series(run.states, m), dir / "entropy_series.csv");
        double mean_pe = 0.0;
        for (const auto& s : run.states) mean_pe += s.p_excited();
        mean_pe /= static_cast<double>(run.states.size());
        out["time_series"] = {{"t_final", run.states.back().time},
                              {"mean_p_excited", mean_pe},
                              {"coarse_grained_bipartition_entropy", bipartition_entropy(mean_pe)}};
    }

    save_json(out, dir / "entropy.json");
    return {{"s_exact", report.s_exact},
            {"s_uniform", cfg.params.dimension == 3 ? report.s_uniform_3d.value
                                                  : report.s_uniform_1d.value},
            {"truncation_mass", report.truncation_mass},
            {"modes", m.mode_count()}};
}

// ------------------------------------------------------------ recurrence ---

nlohmann::json run_recurrence(const ScenarioConfig& cfg, const std::filesystem::path& dir) {
    if (cfg.params.dimension != 1)
        throw ConfigError("recurrence: a 1D parameter set is required (dimension = 1)");
    const double gamma = resolved_gamma(cfg);
    const double roundtrip = cfg.params.box_length / cfg.params.c;
    if (roundtrip >= 10.0 / gamma)
        throw ConfigError("recurrence: box too large; need L/c < 10/gamma for a revival scan");

    Enumerate1DOptions mopts;
    mopts.gamma_target = gamma;
    mopts.window_widths = num(cfg.numerics, "window_widths", 500.0);
    mopts.require_resolved = false;  // small cavities are the point here
    const ModeSet m = enumerate_1d(cfg.params, mopts);

    const double t_final = num(cfg.numerics, "t_final_over_roundtrip", 3.0) * roundtrip;
    const double threshold = num(cfg.numerics, "revival_threshold", 0.1);
    const auto n_samples = static_cast<std::size_t>(num(cfg.numerics, "n_samples", 4000));
    const RecurrenceScan scan = recurrence_scan(m, t_final, threshold, n_samples);

    {
        const std::string cols[] = {"t", "p_excited"};
        CsvWriter csv(dir / "pe_series.csv", cols);
        for (std::size_t i = 0; i < scan.sample_times.size(); ++i) {
            const double row[] = {scan.sample_times[i], scan.sample_p_excited[i]};
            csv.write_row(row);
        }
    }
    nlohmann::json revivals = nlohmann::json::array();
    for (std::size_t i = 0; i < scan.revival_times.size(); ++i)
        revivals.push_back({{"t_peak", scan.revival_times[i]},
                            {"p_excited", scan.revival_peaks[i]},
                            {"t_onset", scan.onset_times[i]}});
    nlohmann::json out{{"revivals", revivals},
                       {"threshold", threshold},
                       {"roundtrip_time", roundtrip},
                       {"modes", m.mode_count()}};
    save_json(out, dir / "revivals.json");
    note(cfg, "recurrence: " + std::to_string(scan.revival_times.size()) + " revivals found");

    nlohmann::json summary{{"n_revivals", scan.revival_times.size()},
                           {"roundtrip_time", roundtrip}};
    if (!scan.revival_times.empty()) {
        summary["first_revival_onset"] = scan.onset_times.front();
        summary["first_revival_peak"] = scan.revival_times.front();
    }
    return summary;
}

// ---------------------------------------------------------- scaling sweep ---

nlohmann::json run_scaling_sweep(const ScenarioConfig& cfg, const std::filesystem::path& dir) {
    const double gamma = resolved_gamma(cfg);
    const auto n_doublings = static_cast<std::size_t>(num(cfg.numerics, "n_doublings", 2));
    if (n_doublings < 1) throw ConfigError("scaling-sweep: n_doublings must be >= 1");

    std::vector<double> lengths, s_exact, s_uniform;
    for (std::size_t j = 0; j <= n_doublings; ++j) {
        ScenarioConfig point = cfg;
        point.params.box_length = cfg.params.box_length * std::pow(2.0, static_cast<double>(j));
        const ModeSet m = build_modeset(point, gamma);
        const EntropyReport rep = emission_entropy(asymptotic_amplitudes(m), m);
        lengths.push_back(point.params.box_length);
        s_exact.push_back(rep.s_exact);
        s_uniform.push_back(cfg.params.dimension == 3 ? rep.s_uniform_3d.value
                                                    : rep.s_uniform_1d.value);
        note(cfg, "scaling-sweep: L = " + format_double(lengths.back()) +
                      ", s_exact = " + format_double(rep.s_exact));
    }

    {
        const std::string cols[] = {"L", "s_exact", "s_uniform", "offset"};
        CsvWriter csv(dir / "entropy_vs_L.csv", cols);
        for (std::size_t j = 0; j < lengths.size(); ++j) {
            const double row[] = {lengths[j], s_exact[j], s_uniform[j], s_exact[j] - s_uniform[j]};
            csv.write_row(row);
        }
    }

    const double expected = static_cast<double>(cfg.params.dimension) * std::log(2.0);
    nlohmann::json diffs = nlohmann::json::array();
    double max_diff_error = 0.0;
    for (std::size_t j = 0; j + 1 < s_exact.size(); ++j) {
        const double d = s_exact[j + 1] - s_exact[j];
        diffs.push_back(d);
        max_diff_error = std::max(max_diff_error, std::abs(d - expected));
    }
    double offset_spread = 0.0;
    for (std::size_t j = 0; j < s_exact.size(); ++j)
        for (std::size_t k = j + 1; k < s_exact.size(); ++k)
            offset_spread = std::max(offset_spread, std::abs((s_exact[j] - s_uniform[j]) -
                                                             (s_exact[k] - s_uniform[k])));
    nlohmann::json out{{"lengths", lengths},
                       {"s_exact", s_exact},
                       {"s_uniform", s_uniform},
                       {"doubling_differences", diffs},
                       {"expected_difference", expected},
                       {"max_difference_error", max_diff_error},
                       {"offset_spread", offset_spread}};
    save_json(out, dir / "scaling.json");
    return out;
}

// -------------------------------------------------------------- classical ---

nlohmann::json run_classical(const ScenarioConfig& cfg, const std::filesystem::path& dir) {
    const PhysicalParams& p = cfg.params;
    const double tau = tau_classical(p);
    const double r0 = num(cfg.numerics, "r0", 1.0);
    const double dt = 2.0 * kPi / (p.omega0 * num(cfg.numerics, "samples_per_cycle", 40.0));
    const double t_final = num(cfg.numerics, "t_final_over_tau", 20.0) * tau;

    const ClassicalTrajectory traj = make_damped_trajectory(r0, p.omega0, tau, t_final, dt);
    const PowerSeries power = larmor_power(p, traj);
    const BoundaryTermCheck boundary =
        boundary_term_check(traj, num(cfg.numerics, "boundary_check_at_tau", 5.0) * tau);

    const std::size_t max_rows = 20000;
    const std::size_t stride = std::max<std::size_t>(1, traj.times.size() / max_rows);
    write_trajectory_csv(traj, dir / "trajectory.csv", stride);
    write_power_csv(power, dir / "power.csv", stride);

    // a longer, coarser trajectory for spectral resolution well below 1/tau
    const double t_spec = num(cfg.numerics, "spectrum_t_final_over_tau", 150.0) * tau;
    const double dt_spec = 2.0 * kPi / (p.omega0 * 20.0);
    const ClassicalTrajectory traj_spec = make_damped_trajectory(r0, p.omega0, tau, t_spec, dt_spec);
    const double bin_width = num(cfg.numerics, "bin_width_over_gamma", 0.1) / tau;
    const SpectralDistribution spec =
        classical_spectrum(traj_spec, bin_width, num(cfg.numerics, "window_widths", 50.0));
    write_spectrum_csv(spec, dir / "spectrum.csv");
    const LorentzFit fit = fit_lorentzian(spec);
    save_json(lorentz_fit_to_json(fit), dir / "lorentz_fit.json");

    const EntropyReport entropy = classical_field_entropy(spec, p, tau);
    save_json(entropy_report_to_json(entropy), dir / "classical_entropy.json");

    const double balance = std::abs(power.radiated_total - power.mechanical_loss) /
                           std::max(power.mechanical_loss, 1e-300);
    note(cfg, "classical: energy balance rel error = " + format_double(balance));
    return {{"tau", tau},
            {"radiated_total", power.radiated_total},
            {"mechanical_loss", power.mechanical_loss},
            {"energy_balance_rel_error", balance},
            {"boundary_term_ratio", boundary.ratio},
            {"hwhm", fit.hwhm},
            {"expected_hwhm", 0.5 / tau},
            {"center", fit.center},
            {"s_exact", entropy.s_exact}};
}

// --------------------------------------------------------- correspondence ---

nlohmann::json run_correspondence(const ScenarioConfig& cfg, const std::filesystem::path& dir) {
    if (cfg.params.dimension != 1)
        throw ConfigError("correspondence: a 1D parameter set is required (dimension = 1)");
    const double gamma = resolved_gamma(cfg);
    const double tau = 1.0 / gamma;  // matched widths: Gamma = 1/tau

    Enumerate1DOptions mopts;
    mopts.gamma_target = gamma;
    mopts.window_widths = num(cfg.numerics, "window_widths", 50.0);
    const ModeSet m = enumerate_1d(cfg.params, mopts);
    const EntropyReport quantum = emission_entropy(asymptotic_amplitudes(m), m);

    // record length a multiple of the round trip and bins on the mode comb:
    // each lattice tooth then reads a clean local average of the transform
    const double dt = 2.0 * kPi / (cfg.params.omega0 * 20.0);
    const double roundtrip = cfg.params.box_length / cfg.params.c;
    const double t_raw = num(cfg.numerics, "spectrum_t_final_over_tau", 150.0) * tau;
    const double t_spec = std::max(1.0, std::ceil(t_raw / roundtrip)) * roundtrip;
    const ClassicalTrajectory traj =
        make_damped_trajectory(num(cfg.numerics, "r0", 1.0), cfg.params.omega0, tau, t_spec, dt);
    const SpectralDistribution spec = classical_spectrum(
        traj, m.lattice_spacing(), num(cfg.numerics, "window_widths", 50.0));
    const EntropyReport classical = classical_field_entropy(spec, cfg.params, tau, &m);

    const double v0_quantum = v0_3d(cfg.params, 0.5 / tau);
    const double v0_classical =
        6.0 * kPi * tau * std::pow(cfg.params.c, 3) / (cfg.params.omega0 * cfg.params.omega0);
    const double identity_rel_err = std::abs(v0_quantum - v0_classical) / v0_classical;

    nlohmann::json out{{"gamma", gamma},
                       {"tau", tau},
                       {"s_quantum", quantum.s_exact},
                       {"s_classical", classical.s_exact},
                       {"difference", classical.s_exact - quantum.s_exact},
                       {"v0_quantum", v0_quantum},
                       {"v0_classical", v0_classical},
                       {"v0_identity_rel_error", identity_rel_err},
                       {"modes", m.mode_count()}};
    save_json(out, dir / "correspondence.json");
    note(cfg, "correspondence: |s_cl - s_q| = " +
                  format_double(std::abs(classical.s_exact - quantum.s_exact)));
    return out;
}

void check_numerics_keys(const ScenarioConfig& cfg) {
    static const std::map<std::string, std::vector<std::string>> allowed{
        {"decay",
         {"gamma_target", "window_widths", "t_final_over_tau", "n_samples", "rel_tol",
          "fit_t_min_over_tau", "fit_t_max_over_tau", "write_final_amplitudes",
          "bin_width_over_gamma", "max_entries"}},
        {"spectrum",
         {"gamma_target", "window_widths", "bin_width_over_gamma", "write_mode_table"}},
        {"entropy",
         {"gamma_target", "window_widths", "require_resolved", "max_entries", "n_atoms",
          "wavepacket_r", "time_series", "t_final_over_tau", "n_samples"}},
        {"recurrence",
         {"gamma_target", "window_widths", "t_final_over_roundtrip", "revival_threshold",
          "n_samples"}},
        {"scaling-sweep",
         {"gamma_target", "window_widths", "n_doublings", "require_resolved", "max_entries"}},
        {"classical",
         {"r0", "samples_per_cycle", "t_final_over_tau", "boundary_check_at_tau",
          "spectrum_t_final_over_tau", "bin_width_over_gamma", "window_widths"}},
        {"correspondence",
         {"gamma_target", "window_widths", "r0", "spectrum_t_final_over_tau"}},
    };
    const auto it = allowed.find(cfg.scenario);
    if (it == allowed.end()) return;
    for (const auto& [key, value] : cfg.numerics.items()) {
        if (std::find(it->second.begin(), it->second.end(), key) == it->second.end()) {
            std::ostringstream msg;
            msg << "numerics." << key << " is not used by scenario '" << cfg.scenario
                << "'; valid keys:";
            for (const auto& k : it->second) msg << ' ' << k;
            throw ConfigError(msg.str());
        }
    }
}

nlohmann::json run_point(const ScenarioConfig& cfg, const std::filesystem::path& dir) {
    check_numerics_keys(cfg);
    std::filesystem::create_directories(dir);
    if (cfg.scenario == "decay") return run_decay(cfg, dir);
    if (cfg.scenario == "spectrum") return run_spectrum(cfg, dir);
    if (cfg.scenario == "entropy") return run_entropy(cfg, dir);
    if (cfg.scenario == "recurrence") return run_recurrence(cfg, dir);
    if (cfg.scenario == "scaling-sweep") return run_scaling_sweep(cfg, dir);
    if (cfg.scenario == "classical") return run_classical(cfg, dir);
    if (cfg.scenario == "correspondence") return run_correspondence(cfg, dir);
    std::ostringstream msg;
    msg << "unknown scenario '" << cfg.scenario << "'; valid:";
    for (const auto& name : scenario_names()) msg << ' ' << name;
    throw ConfigError(msg.str());
}

void apply_json_override(ScenarioConfig& cfg, const std::string& key, const nlohmann::json& value) {
    if (key.rfind("params.", 0) == 0) {
        nlohmann::json p = params_to_json(cfg.params);
        const std::string field = key.substr(7);
        if (!p.contains(field)) throw ConfigError("unknown params key '" + field + "'");
        p[field] = value;
        cfg.params = params_from_json(p);
        return;
    }
    if (key.rfind("numerics.", 0) == 0) {
        cfg.numerics[key.substr(9)] = value;
        return;
    }
    throw ConfigError("override key '" + key + "' must start with params. or numerics.");
}

}  // namespace

const std::vector<std::string>& scenario_names() {
    static const std::vector<std::string> names{"decay",      "spectrum",      "entropy",
                                                "recurrence", "scaling-sweep", "classical",
                                                "correspondence"};
    return names;
}

ScenarioConfig make_scenario_config(const std::string& scenario, const nlohmann::json& doc,
                                    const std::vector<std::string>& overrides) {
    ScenarioConfig cfg;
    cfg.scenario = scenario;
    if (std::find(scenario_names().begin(), scenario_names().end(), scenario) ==
        scenario_names().end()) {
        std::ostringstream msg;
        msg << "unknown scenario '" << scenario << "'; valid:";
        for (const auto& name : scenario_names()) msg << ' ' << name;
        throw ConfigError(msg.str());
    }
    if (!doc.is_object()) throw ConfigError("config document must be a JSON object");
    try {
        if (doc.contains("params")) cfg.params = params_from_json(doc.at("params"));
        if (doc.contains("numerics")) {
            if (!doc.at("numerics").is_object())
                throw ConfigError("config field 'numerics' must be an object");
            cfg.numerics = doc.at("numerics");
        }
        if (doc.contains("sweep")) {
            if (!doc.at("sweep").is_array())
                throw ConfigError("config field 'sweep' must be an array of override objects");
            for (const auto& entry : doc.at("sweep")) {
                if (!entry.is_object())
                    throw ConfigError("each sweep entry must be a {key: value} object");
                cfg.sweep.push_back(entry);
            }
        }
        if (doc.contains("output_dir"))
            cfg.output_dir = doc.at("output_dir").get<std::string>();
        if (doc.contains("scenario") && doc.at("scenario").get<std::string>() != scenario)
            throw ConfigError("config names scenario '" +
                              doc.at("scenario").get<std::string>() +
                              "' but '" + scenario + "' was requested");
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config validation error: ") + e.what());
    }
    for (const auto& text : overrides) {
        const auto eq = text.find('=');
        if (eq == std::string::npos)
            throw ConfigError("override '" + text + "' is not of the form key=value");
        apply_override(cfg, text.substr(0, eq), text.substr(eq + 1));
    }
    return cfg;
}

void apply_override(ScenarioConfig& cfg, const std::string& key, const std::string& value_text) {
    nlohmann::json value;
    try {
        value = nlohmann::json::parse(value_text);
    } catch (const nlohmann::json::exception&) {
        value = value_text;  // keep as string
    }
    try {
        apply_json_override(cfg, key, value);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("override '") + key + "': " + e.what());
    }
}

int run_scenario(const ScenarioConfig& cfg) {
    const auto t_start = std::chrono::steady_clock::now();
    std::filesystem::create_directories(cfg.output_dir);
    auto elapsed = [&t_start] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    };

    if (cfg.sweep.empty()) {
        const nlohmann::json summary = run_point(cfg, cfg.output_dir);
        write_manifest(cfg, summary, elapsed(), cfg.output_dir);
        return 0;
    }

    // sweep points run independently; output ordering is fixed by index
    const std::size_t n_points = cfg.sweep.size();
    std::vector<nlohmann::json> summaries(n_points);
    std::vector<std::string> errors(n_points);
    std::vector<char> config_error(n_points, 0);
    std::atomic<std::size_t> next{0};
    const auto n_workers = static_cast<std::size_t>(
        std::clamp(cfg.jobs, 1, static_cast<int>(std::thread::hardware_concurrency())));

    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < n_points; i = next.fetch_add(1)) {
            try {
                ScenarioConfig point = cfg;
                point.sweep.clear();
                for (const auto& [key, value] : cfg.sweep[i].items())
                    apply_json_override(point, key, value);
                char name[32];
                std::snprintf(name, sizeof(name), "point_%03zu", i);
                const auto dir = cfg.output_dir / name;
                const auto p_start = std::chrono::steady_clock::now();
                summaries[i] = run_point(point, dir);
                const double secs = std::chrono::duration<double>(
                                        std::chrono::steady_clock::now() - p_start)
                                        .count();
                write_manifest(point, summaries[i], secs, dir);
            } catch (const ConfigError& e) {
                errors[i] = e.what();
                config_error[i] = 1;
            } catch (const std::invalid_argument& e) {
                errors[i] = e.what();
                config_error[i] = 1;
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < n_workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    for (std::size_t i = 0; i < n_points; ++i) {
        if (errors[i].empty()) continue;
        const std::string what =
            "sweep point " + std::to_string(i) + " failed: " + errors[i];
        if (config_error[i]) throw ConfigError(what);
        throw std::runtime_error(what);
    }

    // aggregated table: swept keys then the union of numeric summary fields
    std::vector<std::string> key_cols, value_cols;
    for (const auto& entry : cfg.sweep)
        for (const auto& [key, value] : entry.items())
            if (std::find(key_cols.begin(), key_cols.end(), key) == key_cols.end())
                key_cols.push_back(key);
    std::sort(key_cols.begin(), key_cols.end());
    for (const auto& summary : summaries)
        for (const auto& [key, value] : summary.items())
            if (value.is_number() &&
                std::find(value_cols.begin(), value_cols.end(), key) == value_cols.end())
                value_cols.push_back(key);
    std::sort(value_cols.begin(), value_cols.end());

    std::vector<std::string> cols{"point"};
    cols.insert(cols.end(), key_cols.begin(), key_cols.end());
    cols.insert(cols.end(), value_cols.begin(), value_cols.end());
    CsvWriter csv(cfg.output_dir / "sweep_results.csv", cols);
    for (std::size_t i = 0; i < n_points; ++i) {
        std::vector<double> row{static_cast<double>(i)};
        for (const auto& key : key_cols) {
            const auto it = cfg.sweep[i].find(key);
            row.push_back(it != cfg.sweep[i].end() && it->is_number()
                              ? it->get<double>()
                              : std::numeric_limits<double>::quiet_NaN());
        }
        for (const auto& key : value_cols) {
            const auto it = summaries[i].find(key);
            row.push_back(it != summaries[i].end() && it->is_number()
                              ? it->get<double>()
                              : std::numeric_limits<double>::quiet_NaN());
        }
        csv.write_row(row);
    }

    nlohmann::json sweep_summary{{"n_points", n_points}};
    write_manifest(cfg, sweep_summary, elapsed(), cfg.output_dir);
    return 0;
}

}  // namespace lightent
