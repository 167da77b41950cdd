#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "lightent/spectra.hpp"

using namespace lightent;
namespace {
constexpr double kPi = std::numbers::pi;

ModeSet comb(double gamma, double widths, double spacing_fraction) {
    PhysicalParams p;
    p.box_length = 2.0 * kPi / (gamma * spacing_fraction);
    Enumerate1DOptions opts;
    opts.gamma_target = gamma;
    opts.window_widths = widths;
    return enumerate_1d(p, opts);
}

double lorentzian(double omega, double center, double hwhm) {
    const double d = omega - center;
    return (hwhm / kPi) / (d * d + hwhm * hwhm);
}
}  // namespace

TEST_CASE("bin_spectrum: empty at t=0, single mode occupies one bin") {
    const ModeSet m = comb(1e-3, 50.0, 0.05);
    AmplitudeState vacuum;
    vacuum.c0 = {1.0, 0.0};
    vacuum.c_modes.assign(m.entries.size(), {0.0, 0.0});
    const SpectralDistribution empty = bin_spectrum(vacuum, m, 1e-4);
    CHECK(empty.total_mass == 0.0);

    AmplitudeState one = vacuum;
    one.c0 = {0.0, 0.0};
    one.c_modes[m.entries.size() / 2] = {1.0, 0.0};
    const SpectralDistribution single = bin_spectrum(one, m, 1e-4);
    CHECK(single.total_mass == doctest::Approx(1.0).epsilon(1e-15));
    double biggest = 0.0;
    for (const double v : single.mass) biggest = std::max(biggest, v);
    CHECK(biggest == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("asymptotic line shape is Lorentzian bin by bin near the center") {
    const double gamma = 1e-3;
    const ModeSet m = comb(gamma, 50.0, 0.05);
    const AmplitudeState asym = asymptotic_amplitudes(m);
    // integer bins-per-spacing keeps the per-bin mode count exact
    const double bin_width = 4.0 * m.lattice_spacing();
    const SpectralDistribution spec = bin_spectrum(asym, m, bin_width);
    for (std::size_t b = 0; b < spec.bin_count(); ++b) {
        const double center = spec.bin_center(b);
        if (std::abs(center - m.omega0) > 3.0 * gamma) continue;
        const double expected = lorentzian(center, m.omega0, line_hwhm(gamma)) * bin_width;
        CHECK(spec.mass[b] == doctest::Approx(expected).epsilon(0.05));
    }
}

TEST_CASE("bin_spectrum conserves the emitted probability") {
    const double gamma = 2e-3;
    const ModeSet m = comb(gamma, 30.0, 0.1);
    const EvolveResult run = evolve(m, {0.0, 2.0 / gamma});
    const AmplitudeState& s = run.states.back();
    const SpectralDistribution spec = bin_spectrum(s, m, 4.0 * m.lattice_spacing());
    CHECK(spec.total_mass == doctest::Approx(1.0 - s.p_excited()).epsilon(1e-9));
}

TEST_CASE("bin under-resolution is rejected with the minimal width") {
    const ModeSet m = comb(1e-3, 50.0, 0.05);
    const AmplitudeState asym = asymptotic_amplitudes(m);
    CHECK_THROWS_AS(bin_spectrum(asym, m, 0.1 * m.lattice_spacing()), std::invalid_argument);
}

TEST_CASE("fit_exponential recovers exact models") {
    std::vector<double> t, pe;
    for (int i = 0; i <= 200; ++i) {
        t.push_back(10.0 * i);
        pe.push_back(std::exp(-1e-3 * t.back()));
    }
    const DecayFit fit = fit_exponential(t, pe, 100.0, 1900.0);
    CHECK(fit.rate == doctest::Approx(1e-3).epsilon(1e-10));
    CHECK(fit.amplitude == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(fit.residual <= 1e-12);

    std::vector<double> ones(t.size(), 1.0);
    const DecayFit flat = fit_exponential(t, ones, 100.0, 1900.0);
    CHECK(std::abs(flat.rate) <= 1e-12);
}

TEST_CASE("fit_exponential window validation") {
    std::vector<double> t{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
    std::vector<double> pe(t.size(), 0.5);
    pe[6] = 0.0;
    CHECK_THROWS_AS(fit_exponential(t, pe, 0.0, 11.0), std::invalid_argument);
    std::vector<double> few{1, 2, 3};
    std::vector<double> fewp{0.9, 0.8, 0.7};
    CHECK_THROWS_AS(fit_exponential(few, fewp, 0.0, 4.0), std::invalid_argument);
}

TEST_CASE("fit_lorentzian recovers a synthetic line to 0.1%") {
    const double gamma = 5e-4, center = 1.0;
    SpectralDistribution spec;
    spec.kind = SpectrumKind::QuantumProbability;
    const double lo = center - 0.025, width = 5e-5;
    const std::size_t n = 1000;
    spec.bin_edges.resize(n + 1);
    for (std::size_t b = 0; b <= n; ++b) spec.bin_edges[b] = lo + width * b;
    spec.mass.resize(n);
    for (std::size_t b = 0; b < n; ++b)
        spec.mass[b] = 0.9 * lorentzian(spec.bin_center(b), center, gamma) * width;
    for (const double v : spec.mass) spec.total_mass += v;

    const LorentzFit fit = fit_lorentzian(spec);
    CHECK(fit.converged);
    CHECK(fit.center == doctest::Approx(center).epsilon(1e-5));
    CHECK(fit.hwhm == doctest::Approx(gamma).epsilon(1e-3));

    // scale equivariance: a global factor moves only the amplitude
    SpectralDistribution scaled = spec;
    for (auto& v : scaled.mass) v *= 0.3;
    scaled.total_mass *= 0.3;
    const LorentzFit fit2 = fit_lorentzian(scaled);
    CHECK(fit2.center == doctest::Approx(fit.center).epsilon(1e-9));
    CHECK(fit2.hwhm == doctest::Approx(fit.hwhm).epsilon(1e-9));
    CHECK(fit2.amplitude == doctest::Approx(0.3 * fit.amplitude).epsilon(1e-6));
}

TEST_CASE("asymptotic spectrum fit recovers the line parameters") {
    const double gamma = 1e-3;
    const ModeSet m = comb(gamma, 50.0, 0.05);
    const SpectralDistribution spec = bin_spectrum(asymptotic_amplitudes(m), m, 0.1 * gamma);
    const LorentzFit fit = fit_lorentzian(spec);
    CHECK(fit.hwhm == doctest::Approx(line_hwhm(gamma)).epsilon(0.10));
    CHECK(fit.center == doctest::Approx(m.omega0).epsilon(1e-3));
}

TEST_CASE("decay fits from the integrator and the oracle agree within 1%") {
    const double gamma = 1e-2;
    const ModeSet m = comb(gamma, 10.0, 0.2);
    const auto times = uniform_times(0.0, 4.0 / gamma, 60);
    const EvolveResult run = evolve(m, times);
    const auto oracle_states = evolve_oracle(m, times);
    std::vector<double> pe_ode, pe_oracle;
    for (std::size_t i = 0; i < times.size(); ++i) {
        pe_ode.push_back(run.states[i].p_excited());
        pe_oracle.push_back(oracle_states[i].p_excited());
    }
    const DecayFit f1 = fit_exponential(times, pe_ode, 1.0 / gamma, 4.0 / gamma);
    const DecayFit f2 = fit_exponential(times, pe_oracle, 1.0 / gamma, 4.0 / gamma);
    CHECK(f1.rate == doctest::Approx(f2.rate).epsilon(0.01));
}

TEST_CASE("fit_lorentzian requires enough populated bins") {
    SpectralDistribution spec;
    spec.bin_edges = {0.0, 1.0, 2.0, 3.0};
    spec.mass = {0.1, 0.5, 0.1};
    spec.total_mass = 0.7;
    CHECK_THROWS_AS(fit_lorentzian(spec), std::invalid_argument);
}
