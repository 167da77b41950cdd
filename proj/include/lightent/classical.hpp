// classical.hpp - the classical damped dipole: trajectory, Larmor power,
// radiation-reaction force, emission spectrum, and the classical field
// entropy over cavity modes.
//
// Convention: the physical displacement is Re r(t); cycle-average factors of
// 1/2 that this introduces are applied explicitly where energies appear.

#pragma once

#include <complex>
#include <span>
#include <vector>

#include "lightent/entropy.hpp"
#include "lightent/spectra.hpp"

namespace lightent {

struct ClassicalTrajectory {
    std::vector<double> times;  // uniform spacing dt
    std::vector<std::complex<double>> displacement;  // r0 e^{-t/2tau} e^{i omega0 t}
    double r0 = 0.0;
    double omega0 = 0.0;
    double tau = 0.0;
    double dt = 0.0;
};

// Analytic samples of the radiatively damped oscillator. Requires
// dt <= 2 pi / (20 omega0) and t_final >= 10 tau.
ClassicalTrajectory make_damped_trajectory(double r0, double omega0, double tau,
                                           double t_final, double dt);

// Same, with tau taken from the params via the radiation-reaction time.
ClassicalTrajectory damped_trajectory(const PhysicalParams& p, double r0, double t_final,
                                      double dt);

struct PowerSeries {
    std::vector<double> times;   // interior samples (centered differences)
    std::vector<double> p_ray;   // Larmor power e^2 a^2 / (6 pi eps0 c^3)
    std::vector<double> e_mech;  // m (v^2 + omega0^2 x^2) / 2
    double radiated_total = 0.0;       // trapezoid integral of p_ray
    double mechanical_loss = 0.0;      // e_mech front - back
};

// Radiated power from the numerically differentiated dipole d = e Re r,
// using centered second differences. Needs at least 5 samples.
PowerSeries larmor_power(const PhysicalParams& p, const ClassicalTrajectory& traj);

struct ForceSeries {
    std::vector<double> times;
    std::vector<double> f_jerk;  // (e^2 / 6 pi eps0 c^3) da/dt
    std::vector<double> f_visc;  // -m v / tau
    double mean_power_jerk = 0.0;  // time average of f_jerk * v
    double mean_power_visc = 0.0;
};

// Both forms of the radiation-reaction force along the trajectory; in the
// near-harmonic regime their extracted powers agree.
ForceSeries radiative_force(const PhysicalParams& p, const ClassicalTrajectory& traj);

// Unnormalized DFT X_j = sum_i x_i exp(-2 pi i i j / n).
std::vector<std::complex<double>> fourier_transform(std::span<const std::complex<double>> x);

// |FT|^2 of the trajectory, normalized against the full transform so the
// in-window mass mirrors the quantum window truncation, then binned over
// omega0 +- window_widths / tau.
SpectralDistribution classical_spectrum(const ClassicalTrajectory& traj, double bin_width,
                                        double window_widths = 50.0);

struct BoundaryTermCheck {
    double boundary_term = 0.0;  // [v a] across one period
    double retained_term = 0.0;  // integral of v da/dt over the period
    double ratio = 0.0;          // |boundary| / |retained|
};

// Audits the almost-periodic approximation that drops [v a] over one cycle,
// from the analytic derivatives of the trajectory.
BoundaryTermCheck boundary_term_check(const ClassicalTrajectory& traj, double t_start);

// Classical field entropy: the spectral energy fractions distributed over
// cavity modes. With a ModeSet the fractions are split per mode using the
// geometric weight coupling^2/omega (flat in 1D, sin^2 theta in 3D); without
// one, each bin is shared uniformly over rho(omega) * bin_width modes of the
// analytic density of states.
EntropyReport classical_field_entropy(const SpectralDistribution& spec,
                                      const PhysicalParams& p, double tau,
                                      const ModeSet* m = nullptr);

}  // namespace lightent
