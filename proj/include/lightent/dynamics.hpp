// dynamics.hpp - single-excitation dynamics of the atom-field state:
// adaptive integration of the coupled amplitude equations, an exact
// diagonalization oracle, the long-time asymptotic amplitudes, and the
// finite-cavity recurrence scan.

#pragma once

#include <complex>
#include <vector>

#include "lightent/modes.hpp"

namespace lightent {

enum class Frame { Lab, Interaction };

// Amplitudes of |e,0> (c0) and of each ModeSet entry's collective mode at a
// given time. For a weight-w entry the per-mode probability is |c|^2 / w.
struct AmplitudeState {
    double time = 0.0;
    std::complex<double> c0{1.0, 0.0};
    std::vector<std::complex<double>> c_modes;
    Frame frame = Frame::Interaction;

    double p_excited() const { return std::norm(c0); }
    double norm() const;  // |c0|^2 + sum |c_e|^2
};

// Phase conversions between pictures; moduli are unchanged.
AmplitudeState to_lab_frame(const AmplitudeState& s, const ModeSet& m);
AmplitudeState to_interaction_frame(const AmplitudeState& s, const ModeSet& m);

struct IntegratorOptions {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    double norm_drift_tol = 1e-6;  // beyond this the result is flagged, not rejected
    Frame frame = Frame::Interaction;
};

struct EvolveResult {
    std::vector<AmplitudeState> states;  // one per requested sample time
    double max_norm_drift = 0.0;
    bool norm_flagged = false;
};

// Integrates from the bare excited state (c0 = 1, field vacuum), sampling at
// `times` (nondecreasing, first >= 0). No renormalization is applied; norm
// drift is reported as a diagnostic.
EvolveResult evolve(const ModeSet& m, const std::vector<double>& times,
                    const IntegratorOptions& opts = {});

// Same integrator from an arbitrary initial state at t = 0 (recurrence and
// time-reversal studies).
EvolveResult evolve_from(const ModeSet& m, const AmplitudeState& initial,
                         const std::vector<double>& times,
                         const IntegratorOptions& opts = {});

struct OracleOptions {
    std::size_t max_entries = 5000;  // dense diagonalization cost cap
};

// Dense (N+1)x(N+1) single-excitation Hamiltonian: diagonal (omega0,
// omega_e), first row/column the collective couplings lambda sqrt(w).
// Returned row-major as a flat vector (Eigen stays an implementation detail).
std::vector<double> single_excitation_hamiltonian(const ModeSet& m);

// Exact evolution |psi(t)> = V exp(-i E t) V^T |e,0> via eigendecomposition;
// unitary by construction. States are returned in the interaction frame.
std::vector<AmplitudeState> evolve_oracle(const ModeSet& m, const std::vector<double>& times,
                                          const OracleOptions& opts = {});

// Long-time amplitudes c_e = sqrt(w) lambda / ((omega_e - omega0) + i Gamma/2)
// with Gamma = gamma_ref; c0 = 0. The total sum is ~1 up to window truncation.
AmplitudeState asymptotic_amplitudes(const ModeSet& m);

struct RecurrenceScan {
    std::vector<double> revival_times;   // local maxima of |c0|^2 above threshold
    std::vector<double> revival_peaks;   // |c0|^2 at those times
    std::vector<double> onset_times;     // preceding turning points (re-absorption
                                         // starts at the light round trip; the
                                         // maximum lags it by ~2/Gamma)
    double threshold = 0.1;
    std::vector<double> sample_times;    // the scanned series, for export
    std::vector<double> sample_p_excited;
};

// Evolves the bare excited state to t_final and reports revivals of the
// excited-state population. An empty list is a valid outcome (no revival).
RecurrenceScan recurrence_scan(const ModeSet& m, double t_final, double threshold = 0.1,
                               std::size_t n_samples = 4000,
                               const IntegratorOptions& opts = {});

// Uniform sample grid helper, n points spanning [t0, t1] inclusive.
std::vector<double> uniform_times(double t0, double t1, std::size_t n);

}  // namespace lightent
