// params.hpp - physical constants, unit scheme, and closed-form derived
// quantities of the emission problem.
//
// Unit scheme: hbar = c = eps0 = 1 with the transition frequency omega0 as
// the frequency scale. The fixed constants are kept as named fields so the
// derivation formulas read like their dimensional counterparts.

#pragma once

#include <cmath>
#include <numbers>

namespace lightent {

struct PhysicalParams {
    double omega0 = 1.0;     // transition / oscillator angular frequency
    double dipole_d = default_dipole();  // |<e|d|g>|; sets the quantum rate
    double charge_e = default_charge();  // classical electron charge; sets tau
    double mass_m = 1.0;     // classical electron mass
    double box_length = 1.5e5;  // cavity edge L, in units of c/omega0
    int dimension = 1;       // 1 or 3

    // fixed to one by the unit scheme
    double hbar = 1.0;
    double c = 1.0;
    double eps0 = 1.0;

    // weak-coupling guard: reject Gamma/omega0 above this unless raised
    double max_gamma_ratio = 0.1;

    // defaults put both the quantum and the classical rate at 1e-3 * omega0
    static double default_dipole() { return std::sqrt(3.0 * std::numbers::pi * 1e-3); }
    static double default_charge() { return std::sqrt(6.0 * std::numbers::pi * 1e-3); }

    void validate() const;  // throws std::invalid_argument on violation
};

// Spontaneous decay rate Gamma = d^2 omega0^3 / (3 pi hbar eps0 c^3).
double gamma_ww(const PhysicalParams& p);

// Radiative damping time, 1/tau = e^2 omega0^2 / (6 pi m eps0 c^3).
// Throws std::domain_error for zero charge or zero mass.
double tau_classical(const PhysicalParams& p);

// Coherence volume V0 = 3 pi c^3 / (omega0^2 delta_omega); delta_omega is the
// line half width at half maximum.
double v0_3d(const PhysicalParams& p, double delta_omega);

// Weighted k-space shell measure: integral of k0^2 sin^3(theta) over the
// sphere = 8 pi omega0^2 / (3 c^2).
double effective_solid_angle(const PhysicalParams& p);

// Wave-packet volume V_r = (8 pi / 3) r^2 / (2 delta_k). Only meaningful in
// the far field r >> c/delta_omega = 1/delta_k; outside that regime the
// result is returned with in_far_field = false rather than failing.
struct WavepacketVolume {
    double value = 0.0;
    bool in_far_field = true;
};
WavepacketVolume wavepacket_volume(const PhysicalParams& p, double r, double delta_k);

// Phase-space exploration time tau_ps = L/c + tau_em.
double phase_space_time(const PhysicalParams& p, double tau_em);

// Line half width at half maximum, delta_omega = Gamma/2.
inline double line_hwhm(double gamma) { return 0.5 * gamma; }

}  // namespace lightent
