#include "lightent/params.hpp"

#include <sstream>
#include <stdexcept>

namespace lightent {

namespace {
constexpr double kPi = std::numbers::pi;
}

void PhysicalParams::validate() const {
    if (!(omega0 > 0.0))
        throw std::invalid_argument("PhysicalParams: omega0 must be > 0");
    if (!(box_length > 0.0))
        throw std::invalid_argument("PhysicalParams: box_length must be > 0");
    if (dipole_d < 0.0)
        throw std::invalid_argument("PhysicalParams: dipole_d must be >= 0");
    if (mass_m < 0.0)
        throw std::invalid_argument("PhysicalParams: mass_m must be >= 0");
    if (dimension != 1 && dimension != 3)
        throw std::invalid_argument("PhysicalParams: dimension must be 1 or 3");
    const double ratio = gamma_ww(*this) / omega0;
    if (ratio > max_gamma_ratio) {
        std::ostringstream msg;
        msg << "PhysicalParams: Gamma/omega0 = " << ratio
            << " exceeds the weak-coupling guard " << max_gamma_ratio
            << " (raise max_gamma_ratio to override)";
        throw std::invalid_argument(msg.str());
    }
}

double gamma_ww(const PhysicalParams& p) {
    return p.dipole_d * p.dipole_d * p.omega0 * p.omega0 * p.omega0 /
           (3.0 * kPi * p.hbar * p.eps0 * p.c * p.c * p.c);
}

double tau_classical(const PhysicalParams& p) {
    if (p.charge_e == 0.0)
        throw std::domain_error("tau_classical: zero charge gives infinite tau");
    if (p.mass_m == 0.0)
        throw std::domain_error("tau_classical: zero mass gives undefined tau");
    const double inv_tau = p.charge_e * p.charge_e * p.omega0 * p.omega0 /
                           (6.0 * kPi * p.mass_m * p.eps0 * p.c * p.c * p.c);
    return 1.0 / inv_tau;
}

double v0_3d(const PhysicalParams& p, double delta_omega) {
    if (!(delta_omega > 0.0))
        throw std::domain_error("v0_3d: delta_omega must be > 0");
    return 3.0 * kPi * p.c * p.c * p.c / (p.omega0 * p.omega0 * delta_omega);
}

double effective_solid_angle(const PhysicalParams& p) {
    return 8.0 * kPi * p.omega0 * p.omega0 / (3.0 * p.c * p.c);
}

WavepacketVolume wavepacket_volume(const PhysicalParams& p, double r, double delta_k) {
    if (!(delta_k > 0.0))
        throw std::domain_error("wavepacket_volume: delta_k must be > 0");
    (void)p;
    WavepacketVolume out;
    out.value = (8.0 * kPi / 3.0) * r * r / (2.0 * delta_k);
    out.in_far_field = r * delta_k > 1.0;
    return out;
}

double phase_space_time(const PhysicalParams& p, double tau_em) {
    if (!(tau_em > 0.0))
        throw std::domain_error("phase_space_time: tau_em must be > 0");
    return p.box_length / p.c + tau_em;
}

}  // namespace lightent
