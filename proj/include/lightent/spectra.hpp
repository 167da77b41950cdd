// spectra.hpp - binned frequency distributions and fits of the two
// functional forms the emission problem produces: exponential decay of the
// excited-state population and the Lorentzian line.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lightent/dynamics.hpp"

namespace lightent {

enum class SpectrumKind { QuantumProbability, ClassicalEnergy };

struct SpectralDistribution {
    std::vector<double> bin_edges;  // strictly increasing; size = mass.size() + 1
    std::vector<double> mass;       // probability or energy fraction per bin
    double total_mass = 0.0;
    SpectrumKind kind = SpectrumKind::QuantumProbability;

    std::size_t bin_count() const { return mass.size(); }
    double bin_center(std::size_t b) const { return 0.5 * (bin_edges[b] + bin_edges[b + 1]); }
    double bin_width(std::size_t b) const { return bin_edges[b + 1] - bin_edges[b]; }
    void validate() const;
};

// Bins the per-mode probabilities |c_e|^2 of a state over uniform bins
// covering the ModeSet window. bin_width must be at least twice the mean
// frequency spacing of the entries so bins are populated.
SpectralDistribution bin_spectrum(const AmplitudeState& state, const ModeSet& m,
                                  double bin_width);

struct DecayFit {
    double rate = 0.0;       // -slope of the ln P_e fit
    double amplitude = 0.0;  // exp(intercept)
    double residual = 0.0;   // rms residual in log space
    double window_t_min = 0.0;
    double window_t_max = 0.0;
    std::size_t n_used = 0;
};

// Least-squares line fit of ln P_e against t over [t_min, t_max]. Requires
// >= 10 samples in the window, all strictly positive.
DecayFit fit_exponential(std::span<const double> times, std::span<const double> p_excited,
                         double t_min, double t_max);

struct LorentzFit {
    double center = 0.0;     // fitted line center
    double hwhm = 0.0;       // fitted half width at half maximum
    double amplitude = 0.0;  // fitted area scale
    double residual = 0.0;   // rms residual of the mass-per-bin fit
    std::size_t iterations = 0;
    bool converged = false;
};

// Nonlinear least squares of mass-per-bin against
// A (gamma/pi) / ((omega - center)^2 + gamma^2), initialized from the
// mass-weighted median and half the inter-quartile range. Linear space,
// uniform weights. Requires >= 10 bins with nonzero mass.
LorentzFit fit_lorentzian(const SpectralDistribution& spec);

}  // namespace lightent
