#include "lightent/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <system_error>

namespace lightent {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::span<const std::string> columns)
    : out_(path, std::ios::binary), n_columns_(columns.size()) {
    if (!out_) throw std::runtime_error("CsvWriter: cannot open " + path.string());
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i > 0) out_ << ',';
        out_ << columns[i];
    }
    out_ << '\n';
}

void CsvWriter::write_row(std::span<const double> values) {
    if (values.size() != n_columns_)
        throw std::invalid_argument("CsvWriter: row width does not match the header");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) out_ << ',';
        out_ << format_double(values[i]);
    }
    out_ << '\n';
}

PhysicalParams params_from_json(const nlohmann::json& j) {
    static const char* known[] = {"omega0", "dipole_d", "charge_e",       "mass_m",
                                  "box_length", "dimension", "max_gamma_ratio"};
    for (const auto& item : j.items()) {
        const std::string& key = item.key();
        if (std::find_if(std::begin(known), std::end(known),
                         [&key](const char* k) { return key == k; }) == std::end(known))
            throw std::invalid_argument("params: unknown key '" + key + "'");
    }
    PhysicalParams p;
    if (j.contains("omega0")) p.omega0 = j.at("omega0").get<double>();
    if (j.contains("dipole_d")) p.dipole_d = j.at("dipole_d").get<double>();
    if (j.contains("charge_e")) p.charge_e = j.at("charge_e").get<double>();
    if (j.contains("mass_m")) p.mass_m = j.at("mass_m").get<double>();
    if (j.contains("box_length")) p.box_length = j.at("box_length").get<double>();
    if (j.contains("dimension")) p.dimension = j.at("dimension").get<int>();
    if (j.contains("max_gamma_ratio")) p.max_gamma_ratio = j.at("max_gamma_ratio").get<double>();
    p.validate();
    return p;
}

nlohmann::json params_to_json(const PhysicalParams& p) {
    return {{"omega0", p.omega0},       {"dipole_d", p.dipole_d},
            {"charge_e", p.charge_e},   {"mass_m", p.mass_m},
            {"box_length", p.box_length}, {"dimension", p.dimension},
            {"max_gamma_ratio", p.max_gamma_ratio}};
}

nlohmann::json modeset_summary(const ModeSet& m, std::size_t rho_samples) {
    nlohmann::json rho = nlohmann::json::array();
    for (std::size_t i = 0; i < rho_samples; ++i) {
        const double omega = m.window_min + (m.window_max - m.window_min) *
                                                (static_cast<double>(i) + 0.5) /
                                                static_cast<double>(rho_samples);
        rho.push_back({{"omega", omega}, {"analytic", density_of_states(m, omega)}});
    }
    nlohmann::json summary{{"dimension", m.dimension},
                           {"box_length", m.box_length},
                           {"omega0", m.omega0},
                           {"gamma_ref", m.gamma_ref},
                           {"kind", m.kind == ModeSetKind::Full ? "full" : "collective_bins"},
                           {"window", {{"min", m.window_min}, {"max", m.window_max}}},
                           {"n_entries", m.entries.size()},
                           {"n_modes", m.mode_count()},
                           {"lattice_spacing", m.lattice_spacing()},
                           {"coverage", m.coverage()},
                           {"density_of_states", rho}};
    if (m.dimension == 3 && m.kind == ModeSetKind::Full && !m.entries.empty()) {
        // discrete angular measure of the shell; 2/3 in the continuum limit
        double sin2 = 0.0, weight = 0.0;
        for (const auto& e : m.entries) {
            sin2 += e.weight * (1.0 - e.direction[2] * e.direction[2]);
            weight += e.weight;
        }
        summary["mean_sin2_theta"] = sin2 / weight;
        summary["mean_sin2_theta_continuum"] = 2.0 / 3.0;
    }
    return summary;
}

void write_mode_table_csv(const ModeSet& m, const std::filesystem::path& path) {
    const std::string cols[] = {"omega", "weight", "coupling", "theta"};
    CsvWriter csv(path, cols);
    for (const auto& e : m.entries) {
        const double row[] = {e.omega, static_cast<double>(e.weight), e.coupling, mode_theta(e)};
        csv.write_row(row);
    }
}

void write_time_series_csv(const std::vector<AmplitudeState>& states,
                           const std::filesystem::path& path) {
    const std::string cols[] = {"t", "re_c0", "im_c0", "p_excited", "norm"};
    CsvWriter csv(path, cols);
    for (const auto& s : states) {
        const double row[] = {s.time, s.c0.real(), s.c0.imag(), s.p_excited(), s.norm()};
        csv.write_row(row);
    }
}

void write_mode_amplitudes_csv(const AmplitudeState& state, const ModeSet& m,
                               const std::filesystem::path& path) {
    if (state.c_modes.size() != m.entries.size())
        throw std::invalid_argument("write_mode_amplitudes_csv: state/ModeSet mismatch");
    const std::string cols[] = {"omega", "re_c", "im_c", "prob"};
    CsvWriter csv(path, cols);
    for (std::size_t e = 0; e < m.entries.size(); ++e) {
        const auto& c = state.c_modes[e];
        const double row[] = {m.entries[e].omega, c.real(), c.imag(), std::norm(c)};
        csv.write_row(row);
    }
}

void write_spectrum_csv(const SpectralDistribution& spec, const std::filesystem::path& path) {
    const std::string cols[] = {"omega_low", "omega_high", "mass"};
    CsvWriter csv(path, cols);
    for (std::size_t b = 0; b < spec.bin_count(); ++b) {
        const double row[] = {spec.bin_edges[b], spec.bin_edges[b + 1], spec.mass[b]};
        csv.write_row(row);
    }
}

void write_entropy_series_csv(const std::vector<EntropySeriesPoint>& series,
                              const std::filesystem::path& path) {
    const std::string cols[] = {"t", "s_exact", "atom_term", "truncation_mass"};
    CsvWriter csv(path, cols);
    for (const auto& pt : series) {
        const double row[] = {pt.time, pt.s_exact, pt.atom_term, pt.truncation_mass};
        csv.write_row(row);
    }
}

void write_trajectory_csv(const ClassicalTrajectory& traj, const std::filesystem::path& path,
                          std::size_t stride) {
    if (stride == 0) stride = 1;
    const std::string cols[] = {"t", "re_r", "im_r"};
    CsvWriter csv(path, cols);
    for (std::size_t i = 0; i < traj.times.size(); i += stride) {
        const double row[] = {traj.times[i], traj.displacement[i].real(),
                              traj.displacement[i].imag()};
        csv.write_row(row);
    }
}

void write_power_csv(const PowerSeries& power, const std::filesystem::path& path,
                     std::size_t stride) {
    if (stride == 0) stride = 1;
    const std::string cols[] = {"t", "p_ray", "e_mech"};
    CsvWriter csv(path, cols);
    for (std::size_t i = 0; i < power.times.size(); i += stride) {
        const double row[] = {power.times[i], power.p_ray[i], power.e_mech[i]};
        csv.write_row(row);
    }
}

nlohmann::json decay_fit_to_json(const DecayFit& fit) {
    return {{"rate", fit.rate},
            {"amplitude", fit.amplitude},
            {"residual", fit.residual},
            {"window", {{"t_min", fit.window_t_min}, {"t_max", fit.window_t_max}}},
            {"n_used", fit.n_used}};
}

nlohmann::json lorentz_fit_to_json(const LorentzFit& fit) {
    return {{"center", fit.center},     {"hwhm", fit.hwhm},
            {"amplitude", fit.amplitude}, {"residual", fit.residual},
            {"iterations", fit.iterations}, {"converged", fit.converged}};
}

namespace {
nlohmann::json closed_form_to_json(const ClosedFormEntropy& cf) {
    nlohmann::json j{{"applicable", cf.applicable}, {"regime", cf.regime}};
    if (std::isfinite(cf.value))
        j["value"] = cf.value;
    else
        j["value"] = nullptr;
    return j;
}
}  // namespace

nlohmann::json entropy_report_to_json(const EntropyReport& rep) {
    return {{"s_exact", rep.s_exact},
            {"atom_term", rep.atom_term},
            {"field_mass", rep.field_mass},
            {"truncation_mass", rep.truncation_mass},
            {"truncation_entropy_bound", rep.truncation_entropy_bound},
            {"mode_count", rep.mode_count},
            {"dimension", rep.dimension},
            {"s_uniform_3d", closed_form_to_json(rep.s_uniform_3d)},
            {"s_uniform_1d", closed_form_to_json(rep.s_uniform_1d)},
            {"s_real_space_1d", closed_form_to_json(rep.s_real_space_1d)},
            {"s_timescale", closed_form_to_json(rep.s_timescale)},
            {"s_volume_ratio", closed_form_to_json(rep.s_volume_ratio)},
            {"deltas", rep.deltas}};
}

void save_json(const nlohmann::json& j, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_json: cannot open " + path.string());
    out << j.dump(2) << '\n';
}

}  // namespace lightent
