#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <random>
#include <stdexcept>

#include "lightent/modes.hpp"

using namespace lightent;
namespace {
constexpr double kPi = std::numbers::pi;

PhysicalParams params_1d(double box_length) {
    PhysicalParams p;
    p.box_length = box_length;
    return p;
}
}  // namespace

TEST_CASE("1D lattice spacing is 2 pi c / L") {
    const double L = 2.0 * kPi * 1e6;
    Enumerate1DOptions opts;
    opts.gamma_target = 1e-3;
    const ModeSet m = enumerate_1d(params_1d(L), opts);
    CHECK(m.lattice_spacing() == doctest::Approx(1e-6).epsilon(1e-15));
    // consecutive entries differ by exactly one lattice step
    for (std::size_t i = 0; i + 1 < m.entries.size(); ++i)
        CHECK(m.entries[i + 1].omega - m.entries[i].omega ==
              doctest::Approx(m.lattice_spacing()).epsilon(1e-9));
}

TEST_CASE("1D mode count matches the window arithmetic") {
    // W = 20, gamma = 1e-3, spacing = 1e-4: about 2 W gamma / spacing = 400
    // frequencies, two directions each
    const double gamma = 1e-3, W = 20.0;
    const double L = 2.0 * kPi / 1e-4;
    Enumerate1DOptions opts;
    opts.gamma_target = gamma;
    opts.window_widths = W;
    const ModeSet m = enumerate_1d(params_1d(L), opts);

    // independent strict-interior count over the lattice
    const double spacing = 2.0 * kPi / L;
    const long n_lo = static_cast<long>(std::floor((1.0 - W * gamma) / spacing)) + 1;
    const long n_hi = static_cast<long>(std::ceil((1.0 + W * gamma) / spacing)) - 1;
    const auto expected_entries = static_cast<std::size_t>(n_hi - n_lo + 1);
    CHECK(m.entries.size() == expected_entries);
    CHECK(m.mode_count() == 2 * expected_entries);
    CHECK(std::llabs(static_cast<long long>(m.mode_count()) - 800) <= 4);
    for (const auto& e : m.entries) CHECK(e.weight == 2);
}

TEST_CASE("1D golden-rule calibration is exact") {
    Enumerate1DOptions opts;
    opts.gamma_target = 1e-3;
    const ModeSet m = enumerate_1d(params_1d(1.5e5), opts);
    const double lambda = m.entries.front().coupling;
    for (const auto& e : m.entries) CHECK(e.coupling == lambda);  // flat coupling
    const double rho = density_of_states(m, m.omega0);
    CHECK(2.0 * kPi * lambda * lambda * rho == doctest::Approx(1e-3).epsilon(1e-14));
}

TEST_CASE("1D under-resolved lattice is rejected with the minimal L") {
    Enumerate1DOptions opts;
    opts.gamma_target = 1e-3;
    try {
        enumerate_1d(params_1d(200.0), opts);
        FAIL("expected a resolution error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("need L >=") != std::string::npos);
    }
    // small-cavity studies can disable the guard
    opts.require_resolved = false;
    opts.window_widths = 500.0;
    const ModeSet m = enumerate_1d(params_1d(200.0), opts);
    CHECK(m.mode_count() > 0);
}

TEST_CASE("1D enumeration is reproducible bit for bit") {
    Enumerate1DOptions opts;
    opts.gamma_target = 1e-3;
    const ModeSet a = enumerate_1d(params_1d(1.5e5), opts);
    const ModeSet b = enumerate_1d(params_1d(1.5e5), opts);
    REQUIRE(a.entries.size() == b.entries.size());
    CHECK(std::memcmp(a.entries.data(), b.entries.data(),
                      a.entries.size() * sizeof(Mode)) == 0);
}

TEST_CASE("3D shell population matches the continuum estimate within 2%") {
    PhysicalParams p;
    p.dimension = 3;
    p.box_length = 150.0;
    const ModeSet m = enumerate_3d(p);
    const double gamma = gamma_ww(p);
    const double kmin = (1.0 - 50.0 * gamma) / p.c;
    const double kmax = (1.0 + 50.0 * gamma) / p.c;
    const double cell = std::pow(2.0 * kPi / p.box_length, 3);
    const double estimate =
        (4.0 * kPi / 3.0) * (kmax * kmax * kmax - kmin * kmin * kmin) / cell * 2.0;
    CHECK(std::abs(static_cast<double>(m.mode_count()) - estimate) / estimate < 0.02);
}

TEST_CASE("3D polarization couplings: completeness and axial zeros") {
    PhysicalParams p;
    p.dimension = 3;
    p.box_length = 150.0;
    const ModeSet m = enumerate_3d(p);
    const double volume = std::pow(p.box_length, 3);

    // entries sharing one k are adjacent after sorting (pol 0 then 1)
    std::mt19937 rng(12345);
    std::uniform_int_distribution<std::size_t> pick(0, m.entries.size() / 2 - 1);
    std::size_t checked = 0;
    for (int trial = 0; trial < 400 && checked < 100; ++trial) {
        const std::size_t i = 2 * pick(rng);
        const auto& a = m.entries[i];
        const auto& b = m.entries[i + 1];
        REQUIRE(a.direction == b.direction);
        REQUIRE(a.polarization == 0);
        REQUIRE(b.polarization == 1);
        const double sum = a.coupling * a.coupling + b.coupling * b.coupling;
        const double sin2 = 1.0 - a.direction[2] * a.direction[2];
        const double expected = p.dipole_d * p.dipole_d * (a.omega / (2.0 * volume)) * sin2;
        CHECK(sum == doctest::Approx(expected).epsilon(1e-12));
        ++checked;
    }
    CHECK(checked == 100);

    // k parallel to the dipole axis: both couplings vanish identically
    bool found_axial = false;
    for (const auto& e : m.entries) {
        if (std::abs(e.direction[2]) == 1.0) {
            found_axial = true;
            CHECK(e.coupling == 0.0);
        }
    }
    CHECK(found_axial);
}

TEST_CASE("3D coupling depends on k only through omega and sin^2 theta") {
    PhysicalParams p;
    p.dimension = 3;
    p.box_length = 150.0;
    const ModeSet m = enumerate_3d(p);
    // (1,2,3)-type directions related by permuting x,y and sign flips keep
    // both omega and |z|: summed couplings must agree exactly
    double ref = -1.0, ref_omega = 0.0, ref_z = 0.0;
    std::size_t matches = 0;
    for (std::size_t i = 0; i + 1 < m.entries.size(); i += 2) {
        const auto& a = m.entries[i];
        const double sum = a.coupling * a.coupling +
                           m.entries[i + 1].coupling * m.entries[i + 1].coupling;
        if (ref < 0.0) {
            ref = sum;
            ref_omega = a.omega;
            ref_z = std::abs(a.direction[2]);
            continue;
        }
        if (a.omega == ref_omega && std::abs(a.direction[2]) == ref_z) {
            CHECK(sum == doctest::Approx(ref).epsilon(1e-12));
            ++matches;
        }
    }
    CHECK(matches > 10);
}

TEST_CASE("density of states: analytic values, domain, and L scaling") {
    Enumerate1DOptions opts;
    opts.gamma_target = 1e-3;
    const double L = 2.0 * kPi * 1e6;
    const ModeSet m1 = enumerate_1d(params_1d(L), opts);
    CHECK(density_of_states(m1, 1.0) == doctest::Approx(L / kPi).epsilon(1e-15));
    CHECK(density_of_states(m1, 1.0) == doctest::Approx(2e6).epsilon(1e-9));
    CHECK_THROWS_AS(density_of_states(m1, 2.0), std::domain_error);

    ModeSet m3;  // analytic-only probe; entries are not needed
    m3.dimension = 3;
    m3.box_length = 100.0;
    m3.window_min = 0.9;
    m3.window_max = 1.1;
    ModeSet m3b = m3;
    m3b.box_length = 200.0;
    CHECK(density_of_states(m3b, 1.0) ==
          doctest::Approx(8.0 * density_of_states(m3, 1.0)).epsilon(1e-12));
    ModeSet m1b = m3;
    m1b.dimension = 1;
    ModeSet m1c = m3b;
    m1c.dimension = 1;
    CHECK(density_of_states(m1c, 1.0) ==
          doctest::Approx(2.0 * density_of_states(m1b, 1.0)).epsilon(1e-12));
}

TEST_CASE("empirical density histogram tracks the analytic form within 5%") {
    Enumerate1DOptions opts;
    opts.gamma_target = 1e-3;
    const ModeSet m1 = enumerate_1d(params_1d(1.5e5), opts);
    for (const auto& bin : empirical_density(m1, 20)) {
        CHECK(bin.density ==
              doctest::Approx(density_of_states(m1, 0.5 * (bin.omega_low + bin.omega_high)))
                  .epsilon(0.05));
    }

    // 3D lattice-shell counts carry number-theoretic fluctuations; the box
    // must be large enough for per-bin counts to settle below 5%
    PhysicalParams p3;
    p3.dimension = 3;
    p3.box_length = 350.0;
    const ModeSet m3 = enumerate_3d(p3);
    for (const auto& bin : empirical_density(m3, 6)) {
        CHECK(bin.density ==
              doctest::Approx(density_of_states(m3, 0.5 * (bin.omega_low + bin.omega_high)))
                  .epsilon(0.05));
    }
}

TEST_CASE("collective reduction preserves weights and total coupling strength") {
    PhysicalParams p;
    p.dimension = 3;
    p.box_length = 150.0;
    const ModeSet full = enumerate_3d(p);
    const ModeSet coll = reduce_to_collective(full, gamma_ww(p) / 10.0);

    CHECK(coll.kind == ModeSetKind::CollectiveBins);
    CHECK(coll.mode_count() == full.mode_count());
    CHECK(coll.entries.size() < full.entries.size());

    double g2_full = 0.0, g2_coll = 0.0;
    for (const auto& e : full.entries) g2_full += e.weight * e.coupling * e.coupling;
    for (const auto& e : coll.entries) g2_coll += e.weight * e.coupling * e.coupling;
    CHECK(g2_coll == doctest::Approx(g2_full).epsilon(1e-12));

    CHECK_THROWS_AS(reduce_to_collective(coll, 1e-4), std::invalid_argument);
}

TEST_CASE("randomized 1D sets keep their construction invariants") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> gamma_draw(5e-4, 2e-2);
    std::uniform_real_distribution<double> widths_draw(10.0, 80.0);
    std::uniform_real_distribution<double> slack_draw(1.0, 8.0);
    for (int trial = 0; trial < 20; ++trial) {
        const double gamma = gamma_draw(rng);
        // keep the window inside (0, 2 omega0)
        const double widths = std::min(widths_draw(rng), 0.8 / gamma);
        // always at least the required resolution, sometimes much finer
        const double spacing = gamma / (5.0 * slack_draw(rng));
        PhysicalParams p;
        p.box_length = 2.0 * kPi / spacing;
        Enumerate1DOptions opts;
        opts.gamma_target = gamma;
        opts.window_widths = widths;
        const ModeSet m = enumerate_1d(p, opts);

        CHECK_NOTHROW(m.validate());
        const double lambda = m.entries.front().coupling;
        CHECK(2.0 * kPi * lambda * lambda * density_of_states(m, m.omega0) ==
              doctest::Approx(gamma).epsilon(1e-12));
        CHECK(m.coverage() > 1.0 - 2.0 / (kPi * widths));
        CHECK(m.coverage() < 1.0);
    }
}

TEST_CASE("3D caps: entry budget and empty shells are refused") {
    PhysicalParams p;
    p.dimension = 3;
    p.box_length = 150.0;
    Enumerate3DOptions opts;
    opts.max_entries = 100;
    CHECK_THROWS_AS(enumerate_3d(p, opts), std::runtime_error);

    PhysicalParams tiny = p;
    tiny.box_length = 10.0;  // far below the resolution floor
    CHECK_THROWS_AS(enumerate_3d(tiny), std::runtime_error);
}
