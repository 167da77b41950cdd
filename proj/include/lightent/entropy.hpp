// entropy.hpp - diagonal entropy of the emitted field, exactly from the
// per-mode probabilities, together with every closed-form approximation of
// it and their discrepancies.
//
// Entropies are in nats (k_B = 1). delta_omega always means the line HWHM,
// Gamma/2.

#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "lightent/dynamics.hpp"

namespace lightent {

// -sum p ln p with 0 ln 0 = 0. Requires p >= 0 and sum p <= 1 + 1e-9;
// a deficit from 1 is interpreted as truncated probability elsewhere.
// Fixed-order pairwise summation keeps the result reproducible.
double diagonal_entropy(std::span<const double> probs);

// A closed-form estimate plus whether its derivation regime applies to the
// ModeSet at hand (wrong dimension, small box, ...).
struct ClosedFormEntropy {
    double value = 0.0;
    bool applicable = false;
    std::string regime;  // short description of the validity condition
};

struct EntropyReport {
    double s_exact = 0.0;           // diagonal entropy incl. the atom term
    double atom_term = 0.0;         // -|c0|^2 ln |c0|^2
    double field_mass = 0.0;        // sum of per-mode probabilities
    double truncation_mass = 0.0;   // probability missing from the window
    double truncation_entropy_bound = 0.0;  // mass * ln(total modes)
    std::size_t mode_count = 0;
    int dimension = 1;

    ClosedFormEntropy s_uniform_3d;     // ln(V omega0^2 dw / 3 pi c^3)
    ClosedFormEntropy s_uniform_1d;     // ln(L dw / 2 pi c)
    ClosedFormEntropy s_real_space_1d;  // ln(L / dx), dx = 1/(2 dk)
    ClosedFormEntropy s_timescale;      // ln(tau_ps / tau_em)
    ClosedFormEntropy s_volume_ratio;   // ln(V / V0) in the set's dimension

    std::map<std::string, double> deltas;  // closed form minus s_exact
};

// Exact diagonal entropy of a state over a Full ModeSet plus all closed
// forms evaluated from the set's parameters.
EntropyReport emission_entropy(const AmplitudeState& state, const ModeSet& m);

struct EntropySeriesPoint {
    double time = 0.0;
    double s_exact = 0.0;
    double atom_term = 0.0;
    double truncation_mass = 0.0;
};

std::vector<EntropySeriesPoint> entropy_time_series(const std::vector<AmplitudeState>& states,
                                                    const ModeSet& m);

// ln(tau_ps / tau_em) with tau_ps = L/c + tau_em.
double entropy_timescale(const PhysicalParams& p, double tau_em);

struct MultiAtomEntropy {
    double value = 0.0;
    bool below_coherence_volume = false;  // V < V0: formula leaves its regime
};

// N ln(V / V0) for N noninteracting emitters, V = L^3.
MultiAtomEntropy entropy_multi_atom(int n_atoms, const PhysicalParams& p, double delta_omega);

// Binary (atom/field bipartition) entropy -p ln p - (1-p) ln(1-p).
double bipartition_entropy(double p_excited);

}  // namespace lightent
