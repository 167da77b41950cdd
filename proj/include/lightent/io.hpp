// io.hpp - CSV and JSON serialization of the library's results.
//
// CSV: '.' decimal separator, '\n' newlines, one header row, shortest
// round-trip float formatting; byte-identical across reruns. JSON: pretty
// printed with sorted keys.

#pragma once

#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "lightent/classical.hpp"
#include "lightent/dynamics.hpp"
#include "lightent/entropy.hpp"
#include "lightent/modes.hpp"
#include "lightent/params.hpp"
#include "lightent/spectra.hpp"

namespace lightent {

// Shortest round-trip decimal representation, locale-independent.
std::string format_double(double v);

class CsvWriter {
  public:
    CsvWriter(const std::filesystem::path& path, std::span<const std::string> columns);
    void write_row(std::span<const double> values);

  private:
    std::ofstream out_;
    std::size_t n_columns_;
};

// params <-> JSON (keys: omega0, dipole_d, charge_e, mass_m, box_length,
// dimension, max_gamma_ratio)
PhysicalParams params_from_json(const nlohmann::json& j);
nlohmann::json params_to_json(const PhysicalParams& p);

nlohmann::json modeset_summary(const ModeSet& m, std::size_t rho_samples = 5);
void write_mode_table_csv(const ModeSet& m, const std::filesystem::path& path);

void write_time_series_csv(const std::vector<AmplitudeState>& states,
                           const std::filesystem::path& path);
void write_mode_amplitudes_csv(const AmplitudeState& state, const ModeSet& m,
                               const std::filesystem::path& path);
void write_spectrum_csv(const SpectralDistribution& spec, const std::filesystem::path& path);
void write_entropy_series_csv(const std::vector<EntropySeriesPoint>& series,
                              const std::filesystem::path& path);
void write_trajectory_csv(const ClassicalTrajectory& traj, const std::filesystem::path& path,
                          std::size_t stride = 1);
void write_power_csv(const PowerSeries& power, const std::filesystem::path& path,
                     std::size_t stride = 1);

nlohmann::json decay_fit_to_json(const DecayFit& fit);
nlohmann::json lorentz_fit_to_json(const LorentzFit& fit);
nlohmann::json entropy_report_to_json(const EntropyReport& rep);

void save_json(const nlohmann::json& j, const std::filesystem::path& path);

}  // namespace lightent
