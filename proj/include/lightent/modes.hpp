// modes.hpp - discretized cavity field modes with periodic boundary
// conditions k = (2 pi / L) n, their couplings, and the density of states.
//
// The dipole axis is z by convention. 1D sets fold the two propagation
// directions of each frequency into one entry with weight 2 (identical
// couplings), which is exact for every observable built from collective
// amplitudes.

#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "lightent/params.hpp"

namespace lightent {

// One enumerated field mode, or a fold of `weight` identical-coupling modes.
struct Mode {
    double omega = 0.0;                        // c * |k|
    int weight = 1;                            // identical modes folded here
    double coupling = 0.0;                     // per-mode |lambda_{k,s}|
    std::array<double, 3> direction{0, 0, 0};  // unit k-hat (3D only)
    int polarization = -1;                     // 0/1 in 3D, -1 otherwise
};

enum class ModeSetKind {
    Full,            // entries are physical modes (possibly exact-degenerate folds)
    CollectiveBins,  // entries are frequency bins with rms couplings; only the
                     // collective dynamics of c0 is exact for these
};

struct ModeSet {
    int dimension = 1;
    double box_length = 0.0;
    double omega0 = 0.0;
    double gamma_ref = 0.0;  // rate used for window sizing and 1D calibration
    double window_min = 0.0;
    double window_max = 0.0;
    ModeSetKind kind = ModeSetKind::Full;
    std::vector<Mode> entries;  // sorted by omega, deterministic tiebreak

    std::size_t mode_count() const;  // sum of weights
    double lattice_spacing() const;  // 2 pi c / L
    double coverage() const;         // Lorentzian line mass inside the window
    void validate() const;
};

struct Enumerate1DOptions {
    double window_widths = 50.0;   // W: window is omega0 +- W * gamma
    double gamma_target = 0.0;     // golden-rule rate to calibrate to; 0 -> gamma_ww(p)
    bool require_resolved = true;  // enforce spacing <= gamma/5; disable for
                                   // small-cavity (recurrence) studies
};

// 1D lattice omega_n = n * 2 pi c / L, n >= 1, both directions folded
// (weight 2). The frequency-flat coupling lambda is calibrated so that the
// golden rule 2 pi lambda^2 rho(omega0) equals gamma_target exactly.
ModeSet enumerate_1d(const PhysicalParams& p, const Enumerate1DOptions& opts = {});

struct Enumerate3DOptions {
    double window_widths = 50.0;
    std::size_t max_entries = 6'000'000;  // refusal cap on (k, s) entries
    std::size_t min_shell_points = 1000;  // resolution floor for the shell
};

// All lattice k with omega0 - W*gamma < c|k| < omega0 + W*gamma, two
// transverse polarizations each, couplings |d.u| sqrt(omega / 2 V).
ModeSet enumerate_3d(const PhysicalParams& p, const Enumerate3DOptions& opts = {});

// Analytic density of states at omega (must lie inside the window):
// L/(pi c) in 1D, V omega^2 / (pi^2 c^3) in 3D (two polarizations included).
double density_of_states(const ModeSet& m, double omega);

// Histogram estimate of the density of states from the enumerated entries,
// for cross-checking against the analytic form.
struct DensityBin {
    double omega_low = 0.0;
    double omega_high = 0.0;
    double density = 0.0;  // modes per unit angular frequency
};
std::vector<DensityBin> empirical_density(const ModeSet& m, std::size_t n_bins);

// Frequency-binned collective reduction: each bin becomes one entry with
// weight = folded mode count and coupling = rms lambda, so the collective
// coupling sqrt(sum lambda^2) is preserved. Exact for c0 dynamics.
ModeSet reduce_to_collective(const ModeSet& m, double bin_width);

// Angle between a mode direction and the dipole axis (z).
double mode_theta(const Mode& mode);

}  // namespace lightent
