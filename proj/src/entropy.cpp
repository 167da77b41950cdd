#include "lightent/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace lightent {

namespace {

constexpr double kPi = std::numbers::pi;

double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 32) {
        double s = 0.0;
        for (const double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

inline double entropy_term(double p) { return p > 0.0 ? -p * std::log(p) : 0.0; }

}  // namespace

double diagonal_entropy(std::span<const double> probs) {
    std::vector<double> terms(probs.size());
    std::vector<double> copy(probs.begin(), probs.end());
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] < 0.0)
            throw std::domain_error("diagonal_entropy: negative probability");
        terms[i] = entropy_term(probs[i]);
    }
    const double total = pairwise_sum(copy);
    if (total > 1.0 + 1e-9) {
        std::ostringstream msg;
        msg << "diagonal_entropy: probabilities sum to " << total << " > 1";
        throw std::domain_error(msg.str());
    }
    return pairwise_sum(terms);
}

EntropyReport emission_entropy(const AmplitudeState& state, const ModeSet& m) {
    if (m.kind != ModeSetKind::Full)
        throw std::invalid_argument(
            "emission_entropy: collective-bin sets do not carry per-mode probabilities");
    if (state.c_modes.size() != m.entries.size())
        throw std::invalid_argument("emission_entropy: state does not match the ModeSet");

    EntropyReport rep;
    rep.dimension = m.dimension;
    rep.mode_count = m.mode_count();

    const double p0 = std::norm(state.c0);
    rep.atom_term = entropy_term(p0);

    std::vector<double> terms(m.entries.size() + 1);
    std::vector<double> masses(m.entries.size());
    for (std::size_t e = 0; e < m.entries.size(); ++e) {
        const double w = static_cast<double>(m.entries[e].weight);
        const double per_mode = std::norm(state.c_modes[e]) / w;
        if (per_mode > 1.0 + 1e-9)
            throw std::domain_error(
                "emission_entropy: per-mode probability exceeds 1; the state is not "
                "normalized (long-time amplitudes are invalid on under-resolved sets)");
        terms[e] = w * entropy_term(per_mode);
        masses[e] = std::norm(state.c_modes[e]);
    }
    terms.back() = rep.atom_term;
    rep.s_exact = pairwise_sum(terms);
    rep.field_mass = pairwise_sum(masses);
    if (p0 + rep.field_mass > 1.0 + 1e-6)
        throw std::domain_error("emission_entropy: state probabilities sum to " +
                                std::to_string(p0 + rep.field_mass) + " > 1");
    rep.truncation_mass = std::max(0.0, 1.0 - p0 - rep.field_mass);
    rep.truncation_entropy_bound =
        rep.truncation_mass * std::log(static_cast<double>(std::max<std::size_t>(2, rep.mode_count)));

    // closed forms from the set's own scales; c = 1 in this unit scheme
    const double gamma = m.gamma_ref;
    const double dw = line_hwhm(gamma);
    const double w0 = m.omega0;
    const double length = m.box_length;
    const double volume = length * length * length;
    const bool is_3d = m.dimension == 3;
    const bool big_box = gamma > 0.0 && length > 10.0 / gamma;

    if (gamma > 0.0) {
        rep.s_uniform_3d = {std::log(volume * w0 * w0 * dw / (3.0 * kPi)), is_3d,
                          "3D continuum, uniform line of width dw"};
        rep.s_uniform_1d = {std::log(length * dw / (2.0 * kPi)), !is_3d,
                          "1D continuum, uniform line of width dw"};
        rep.s_real_space_1d = {std::log(2.0 * length * dw), !is_3d,
                               "1D, wave packet of length dx = 1/(2 dk)"};
        rep.s_timescale = {std::log(1.0 + length * gamma), true,
                           big_box ? "tau_ps = L/c + tau_em" : "small box: c0 not negligible"};
        rep.s_volume_ratio = {is_3d ? rep.s_uniform_3d.value : rep.s_uniform_1d.value, true,
                              "phase-space cells V/V0"};
    }

    auto add_delta = [&](const char* name, const ClosedFormEntropy& cf) {
        if (cf.applicable) rep.deltas[name] = cf.value - rep.s_exact;
    };
    add_delta("s_uniform_3d", rep.s_uniform_3d);
    add_delta("s_uniform_1d", rep.s_uniform_1d);
    add_delta("s_real_space_1d", rep.s_real_space_1d);
    add_delta("s_timescale", rep.s_timescale);
    add_delta("s_volume_ratio", rep.s_volume_ratio);
    return rep;
}

std::vector<EntropySeriesPoint> entropy_time_series(const std::vector<AmplitudeState>& states,
                                                    const ModeSet& m) {
    if (m.kind != ModeSetKind::Full)
        throw std::invalid_argument("entropy_time_series: needs a Full ModeSet");
    std::vector<EntropySeriesPoint> out;
    out.reserve(states.size());
    std::vector<double> terms(m.entries.size() + 1);
    for (const auto& s : states) {
        if (s.c_modes.size() != m.entries.size())
            throw std::invalid_argument("entropy_time_series: state does not match the ModeSet");
        const double p0 = std::norm(s.c0);
        double mass = 0.0;
        for (std::size_t e = 0; e < m.entries.size(); ++e) {
            const double w = static_cast<double>(m.entries[e].weight);
            const double per_mode = std::norm(s.c_modes[e]) / w;
            terms[e] = w * entropy_term(per_mode);
            mass += std::norm(s.c_modes[e]);
        }
        terms.back() = entropy_term(p0);
        EntropySeriesPoint pt;
        pt.time = s.time;
        pt.atom_term = terms.back();
        pt.s_exact = pairwise_sum(terms);
        pt.truncation_mass = std::max(0.0, 1.0 - p0 - mass);
        out.push_back(pt);
    }
    return out;
}

double entropy_timescale(const PhysicalParams& p, double tau_em) {
    return std::log(phase_space_time(p, tau_em) / tau_em);
}

MultiAtomEntropy entropy_multi_atom(int n_atoms, const PhysicalParams& p, double delta_omega) {
    if (n_atoms < 0) throw std::invalid_argument("entropy_multi_atom: n_atoms must be >= 0");
    const double volume = p.box_length * p.box_length * p.box_length;
    const double v0 = v0_3d(p, delta_omega);
    MultiAtomEntropy out;
    out.value = static_cast<double>(n_atoms) * std::log(volume / v0);
    out.below_coherence_volume = volume < v0;
    return out;
}

double bipartition_entropy(double p_excited) {
    if (p_excited < 0.0 || p_excited > 1.0)
        throw std::domain_error("bipartition_entropy: p outside [0, 1]");
    return entropy_term(p_excited) + entropy_term(1.0 - p_excited);
}

}  // namespace lightent
