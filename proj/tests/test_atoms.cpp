#include "doctest.h"

#include <cmath>
#include <complex>
#include <iomanip>
#include <limits>
#include <sstream>

#include "cqt/atoms.hpp"
#include "cqt/constants.hpp"
#include "cqt/errors.hpp"

using namespace cqt;

namespace {

void check_rel(double actual, double expected, double tol) {
  REQUIRE(expected != 0.0);
  CHECK(actual / expected == doctest::Approx(1.0).epsilon(tol).scale(0.0));
}

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << std::scientific << v;
  return os.str();
}

AtomSpec make_spec(double ec, double ej, double el = 0.0, double n_g = 0.0,
                   double phi_ext = 0.0) {
  AtomSpec s;
  s.ec = ec;
  s.ej = ej;
  s.el = el;
  s.n_g = n_g;
  s.phi_ext = phi_ext;
  return s;
}

std::vector<double> levels(const AtomSpec& s, int k) {
  const auto op = s.el == 0.0 ? charge_basis_hamiltonian(s) : fock_basis_hamiltonian(s);
  return spectrum(op, k);
}

} // namespace

TEST_SUITE_BEGIN("unit.atoms");

TEST_CASE("lc quantization: frequency, impedance, zero-point scales") {
  const auto p = lc_quantize(1e-9, 1e-11);
  check_rel(p.omega0, 1e10, 1e-12);
  check_rel(p.omega0 / (2.0 * pi), 1.5915494309e9, 1e-9);
  CHECK(p.z0 == doctest::Approx(10.0).epsilon(1e-12));
  check_rel(p.phi_zpf * p.q_zpf, hbar / 2.0, 1e-12);
  check_rel(p.phi_zpf, std::sqrt(hbar * 10.0 / 2.0), 1e-12);

  // A high-impedance mode crosses the resistance quantum.
  const auto high = lc_quantize(1e-6, 1e-15);
  check_rel(high.z0, 31622.776601683792, 1e-12);
  CHECK(high.z0 > r_quantum);
  check_rel(p.q_zpf, std::sqrt(hbar / 20.0), 1e-12);

  CHECK_THROWS_AS(lc_quantize(0.0, 1e-11), std::invalid_argument);
  CHECK_THROWS_AS(lc_quantize(1e-9, -1e-11), std::invalid_argument);
}

TEST_CASE("thermal variances: zero-point and classical limits") {
  const double l = 2e-9, c = 5e-12;
  const auto p = lc_quantize(l, c);

  const auto vac = thermal_variances(l, c, 0.0);
  check_rel(vac.phi2, hbar * p.z0 / 2.0, 1e-14);
  check_rel(vac.q2, hbar / (2.0 * p.z0), 1e-14);

  // k_B T = 100 hbar w0: equipartition <phi^2> = k_B T L, <q^2> = k_B T C.
  const double t_hot = 100.0 * hbar * p.omega0 / k_boltzmann;
  const auto hot = thermal_variances(l, c, t_hot);
  check_rel(hot.phi2, k_boltzmann * t_hot * l, 1e-4);
  check_rel(hot.q2, k_boltzmann * t_hot * c, 1e-4);

  // The conjugate variances are tied by the impedance at any temperature.
  check_rel(hot.q2, hot.phi2 / (p.z0 * p.z0), 1e-12);

  CHECK_THROWS_AS(thermal_variances(l, c, -1.0), std::invalid_argument);
}

TEST_CASE("charge basis: free rotor, charge qubit splitting, transmon anharmonicity") {
  const double ec = h_planck * 0.25e9;

  SUBCASE("ej = 0 gives the charging parabola") {
    const auto op = charge_basis_hamiltonian(make_spec(ec, 0.0));
    const auto e = spectrum(op, 4);
    CHECK(std::abs(e[0]) <= 1e-10 * ec);
    check_rel(e[1], 4.0 * ec, 1e-11);
    check_rel(e[2], 4.0 * ec, 1e-11);
    check_rel(e[3], 16.0 * ec, 1e-11);
  }

  SUBCASE("degeneracy point splitting equals ej deep in the charge regime") {
    const double ej = 0.1 * ec;
    const auto e = levels(make_spec(ec, ej, 0.0, 0.5), 2);
    check_rel(e[1] - e[0], ej, 1e-2);
  }

  SUBCASE("transmon anharmonicity approaches -ec") {
    const auto e = levels(make_spec(ec, 50.0 * ec), 3);
    const double anharm = (e[2] - e[1]) - (e[1] - e[0]);
    check_rel(anharm, -ec, 0.2);
    // omega_ge itself is near sqrt(8 ej ec) - ec.
    check_rel(e[1] - e[0], std::sqrt(8.0 * 50.0 * ec * ec) - ec, 2e-2);
  }

  SUBCASE("matrix structure and validation") {
    const auto op = charge_basis_hamiltonian(make_spec(ec, ec, 0.0, 0.3), 5);
    CHECK(op.data.rows() == 11);
    CHECK((op.data - op.data.adjoint()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(std::get<ChargeBasis>(op.basis).n_cut == 5);
    check_rel(op.data(5, 5).real(), 4.0 * ec * 0.3 * 0.3, 1e-12);
    check_rel(op.data(5, 6).real(), -ec / 2.0, 1e-12);

    CHECK_THROWS_AS(charge_basis_hamiltonian(make_spec(ec, ec, ec)), std::invalid_argument);
    CHECK_THROWS_AS(charge_basis_hamiltonian(make_spec(ec, ec), 0), std::invalid_argument);
    CHECK_THROWS_AS(charge_basis_hamiltonian(make_spec(-ec, ec)), std::invalid_argument);
  }

  SUBCASE("spectrum is periodic and even in the offset charge") {
    const double ej = 5.0 * ec;
    const auto a = levels(make_spec(ec, ej, 0.0, 0.2), 3);
    const auto b = levels(make_spec(ec, ej, 0.0, 1.2), 3);
    const auto c = levels(make_spec(ec, ej, 0.0, -0.2), 3);
    const auto d = levels(make_spec(ec, ej, 0.0, 0.5 + 0.13), 3);
    const auto e = levels(make_spec(ec, ej, 0.0, 0.5 - 0.13), 3);
    for (int i = 0; i < 3; ++i) {
      CHECK(std::abs(a[i] - b[i]) <= 1e-10 * ej);
      CHECK(std::abs(a[i] - c[i]) <= 1e-12 * ej);
      CHECK(std::abs(d[i] - e[i]) <= 1e-12 * ej);
    }
  }

  SUBCASE("phi_ext is a gauge phase for the compact rotor") {
    const auto a = levels(make_spec(ec, 3.0 * ec, 0.0, 0.1, 0.0), 3);
    const auto b = levels(make_spec(ec, 3.0 * ec, 0.0, 0.1, 1.7), 3);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-13 * ec);
  }

  SUBCASE("convergence flag tracks the truncation") {
    CHECK(charge_basis_hamiltonian(make_spec(ec, 50.0 * ec)).converged);
    CHECK_FALSE(charge_basis_hamiltonian(make_spec(ec, 50.0 * ec), 2).converged);

    // Doubling the default truncation moves no reported level by > 1e-9 rel.
    const auto e30 = spectrum(charge_basis_hamiltonian(make_spec(ec, 50.0 * ec), 30), 5);
    const auto e60 = spectrum(charge_basis_hamiltonian(make_spec(ec, 50.0 * ec), 60), 5);
    for (int i = 0; i < 5; ++i)
      CHECK(std::abs(e30[i] - e60[i]) <= 1e-9 * (50.0 * ec));
  }
}

TEST_CASE("fock basis: harmonic limit, flux periodicity, convergence") {
  const double el = h_planck * 0.5e9;
  const double ec = h_planck * 2.5e9;
  const double ej = h_planck * 9.0e9;

  SUBCASE("ej = 0 reproduces the bare LC ladder") {
    const auto op = fock_basis_hamiltonian(make_spec(ec, 0.0, el), 20);
    const auto e = spectrum(op, 6);
    const double hw = std::sqrt(8.0 * el * ec);
    for (int i = 0; i < 6; ++i) check_rel(e[i], hw * (i + 0.5), 1e-12);
    // Characteristic impedance matches the L, C it encodes.
    const double l = phi0_reduced * phi0_reduced / el;
    const double c = e_charge * e_charge / (2.0 * ec);
    check_rel(std::get<FockBasis>(op.basis).z_char, std::sqrt(l / c), 1e-12);
  }

  SUBCASE("spectrum is 2pi-periodic and even in phi_ext") {
    const auto a = levels(make_spec(ec, ej, el, 0.0, 0.8), 4);
    const auto b = levels(make_spec(ec, ej, el, 0.0, 0.8 + 2.0 * pi), 4);
    const auto c = levels(make_spec(ec, ej, el, 0.0, -0.8), 4);
    for (int i = 0; i < 4; ++i) {
      CHECK(std::abs(a[i] - b[i]) <= 1e-10 * ej);
      CHECK(std::abs(a[i] - c[i]) <= 1e-10 * ej);
    }
  }

  SUBCASE("offset charge is silent for the extended phase") {
    const auto a = levels(make_spec(ec, ej, el, 0.0, 1.1), 3);
    AtomSpec s = make_spec(ec, ej, el, 0.37, 1.1);
    const auto b = levels(s, 3);
    for (int i = 0; i < 3; ++i) CHECK(a[i] == b[i]);
  }

  SUBCASE("heavy-junction plasma frequency from the quadratic expansion") {
    // ej >> el, ec at phi_ext = 0: the well at phi = 0 has stiffness ej + el,
    // so omega_ge ~ sqrt(8 (ej + el) ec) to a few percent.  The shunt is kept
    // within an order of magnitude of ej so the bare-LC basis converges.
    const double ec_p = h_planck * 0.3e9, el_p = h_planck * 5e9, ej_p = h_planck * 100e9;
    const auto e = levels(make_spec(ec_p, ej_p, el_p), 2);
    check_rel(e[1] - e[0], std::sqrt(8.0 * (ej_p + el_p) * ec_p), 6e-2);
  }

  SUBCASE("validation and the convergence flag") {
    CHECK_THROWS_AS(fock_basis_hamiltonian(make_spec(ec, ej, 0.0)), std::invalid_argument);
    CHECK_THROWS_AS(fock_basis_hamiltonian(make_spec(ec, ej, el), 3), std::invalid_argument);
    // This deep-junction atom needs more than the default basis size for the
    // 1e-9 ground-level criterion; 100 states suffice.
    CHECK_FALSE(fock_basis_hamiltonian(make_spec(ec, ej, el), 60).converged);
    CHECK(fock_basis_hamiltonian(make_spec(ec, ej, el), 100).converged);
    CHECK_FALSE(fock_basis_hamiltonian(make_spec(ec, ej, el), 4).converged);
    // A gentle cosine on a stiff shunt converges at the default size.
    CHECK(fock_basis_hamiltonian(make_spec(ec, 0.2 * el, el)).converged);
  }
}

TEST_CASE("spectrum extraction guards") {
  OperatorMatrix op;
  op.basis = ChargeBasis{0};
  op.data = Eigen::MatrixXcd::Constant(1, 1, 2.5);
  const auto e = spectrum(op, 1);
  CHECK(e[0] == doctest::Approx(2.5));
  CHECK_THROWS_AS(spectrum(op, 2), std::invalid_argument);
  CHECK_THROWS_AS(spectrum(op, 0), std::invalid_argument);
}

TEST_CASE("squid reduction to a single effective junction") {
  const double e0 = h_planck * 5e9;

  SUBCASE("symmetric loop") {
    const auto zero = squid_reduce(e0, e0, 0.0);
    check_rel(zero.ej_eff, 2.0 * e0, 1e-14);
    CHECK(zero.phase_offset == 0.0);
    CHECK(zero.d == 0.0);

    // Half a flux quantum fully frustrates a symmetric loop.
    const auto frustrated = squid_reduce(e0, e0, flux_quantum / 2.0);
    CHECK(std::abs(frustrated.ej_eff) <= 1e-12 * e0);
  }

  SUBCASE("asymmetry keeps the loop alive at full frustration") {
    const auto r = squid_reduce(e0, 3.0 * e0, flux_quantum / 2.0);
    check_rel(r.ej_eff, 2.0 * e0, 1e-12);
    check_rel(r.d, 0.5, 1e-14);
    check_rel(r.phase_offset, pi / 2.0, 1e-12);

    const auto q = squid_reduce(e0, 2.0 * e0, flux_quantum / 4.0);
    check_rel(q.ej_eff, std::sqrt(5.0) * e0, 1e-12);
  }

  SUBCASE("amplitude and phase match the complex sum of the two arms") {
    const std::pair<double, double> pairs[] = {{1.0, 1.0}, {1.0, 3.0}, {2.0, 0.7}};
    for (const auto& [r1, r2] : pairs) {
      const double e1 = r1 * e0, e2 = r2 * e0;
      for (int i = 0; i < 100; ++i) {
        const double flux = flux_quantum * (i / 100.0 * 2.0 - 1.0);
        const double x = flux / (2.0 * phi0_reduced);
        const std::complex<double> amp =
            e1 * std::exp(std::complex<double>(0.0, -x)) +
            e2 * std::exp(std::complex<double>(0.0, x));
        const auto red = squid_reduce(e1, e2, flux);
        CHECK(std::abs(red.ej_eff - std::abs(amp)) <= 1e-10 * (e1 + e2));
        if (std::abs(amp) > 1e-6 * (e1 + e2)) {
          // Compare phases on the circle.
          const double diff = std::remainder(red.phase_offset - std::arg(amp), 2.0 * pi);
          CHECK(std::abs(diff) <= 1e-10);
        }
      }
    }
  }

  CHECK_THROWS_AS(squid_reduce(0.0, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(squid_reduce(-e0, e0, 0.0), std::invalid_argument);
}

TEST_CASE("junction array reduction") {
  const double ej = h_planck * 20e9;

  SUBCASE("single junction is the identity case") {
    const auto r = array_reduce(ej, 1);
    check_rel(r.potential(0.7), -ej * std::cos(0.7), 1e-14);
    check_rel(r.l_eff, phi0_reduced * phi0_reduced / ej, 1e-14);
    CHECK_FALSE(r.phase_slip_factor.has_value());
  }

  SUBCASE("large arrays are quadratic up to the quartic bound") {
    for (const int m : {10, 100}) {
      const auto r = array_reduce(ej, m);
      check_rel(r.l_eff, m * phi0_reduced * phi0_reduced / ej, 1e-14);
      for (int i = 0; i <= 40; ++i) {
        const double phi = -1.0 + 2.0 * i / 40.0;
        const double quad = -m * ej + ej * phi * phi / (2.0 * m);
        const double bound = ej * std::pow(phi, 4) / (24.0 * m * m * m);
        // The remainder equals the bound to leading order, so allow the
        // rounding of the O(m ej) cancellation on top of it.
        CHECK(std::abs(r.potential(phi) - quad) <= bound + 1e-13 * m * ej);
      }
    }
  }

  SUBCASE("phase-slip suppression factor") {
    const double ec = ej / 50.0;
    const auto r = array_reduce(ej, 10, ec);
    REQUIRE(r.phase_slip_factor.has_value());
    check_rel(*r.phase_slip_factor, std::exp(-20.0), 1e-12);
    CHECK(*r.phase_slip_factor < 1e-8);
  }

  CHECK_THROWS_AS(array_reduce(ej, 0), std::invalid_argument);
  CHECK_THROWS_AS(array_reduce(-ej, 3), std::invalid_argument);
  CHECK_THROWS_AS(array_reduce(ej, 3, -1.0), std::invalid_argument);
}

TEST_CASE("transition sensitivities: sweet spots and charge dispersion") {
  SUBCASE("fluxonium flux sweet spots") {
    const double ec = h_planck * 2.5e9, ej = h_planck * 9e9, el = h_planck * 0.5e9;
    for (const double phi : {0.0, pi}) {
      const auto s = make_spec(ec, ej, el, 0.0, phi);
      const auto e = levels(s, 2);
      const double omega_ge = (e[1] - e[0]) / hbar;
      const double sens = sensitivity(s, AtomParameter::phi_ext, {0, 1});
      CHECK(std::abs(sens) <= 1e-8 * omega_ge);
    }
    // Off the sweet spot the slope is macroscopic.
    const auto s = make_spec(ec, ej, el, 0.0, pi / 2.0);
    const auto e = levels(s, 2);
    CHECK(std::abs(sensitivity(s, AtomParameter::phi_ext, {0, 1})) >
          1e-2 * (e[1] - e[0]) / hbar);
  }

  SUBCASE("charge qubit sweet spot at half-integer n_g") {
    const double ec = h_planck * 5e9;
    const auto s = make_spec(ec, 0.3 * ec, 0.0, 0.5);
    const auto e = levels(s, 2);
    const double omega_ge = (e[1] - e[0]) / hbar;
    CHECK(std::abs(sensitivity(s, AtomParameter::n_g, {0, 1})) <= 1e-8 * omega_ge);
  }

  SUBCASE("transmon charge dispersion falls with ej/ec") {
    const double ec = h_planck * 0.25e9;
    double prev = std::numeric_limits<double>::infinity();
    for (const double ratio : {10.0, 20.0, 50.0}) {
      const auto s = make_spec(ec, ratio * ec, 0.0, 0.25);
      const double sens = std::abs(sensitivity(s, AtomParameter::n_g, {0, 1}));
      CHECK(sens < prev);
      prev = sens;
    }
  }

  SUBCASE("level pair validation") {
    const auto s = make_spec(h_planck * 1e9, h_planck * 1e9);
    CHECK_THROWS_AS(sensitivity(s, AtomParameter::n_g, {1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(sensitivity(s, AtomParameter::n_g, {-1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(sensitivity(s, AtomParameter::n_g, {0, 61}), std::invalid_argument);
  }
}

TEST_CASE("dephasing-rate combination of sensitivities and spectral densities") {
  const double ec = h_planck * 2.5e9, ej = h_planck * 9e9, el = h_planck * 0.5e9;
  const auto flux_atom = make_spec(ec, ej, el);
  const double omega = 2.0 * pi * 1e9;

  NoiseSensitivities sens;
  sens.d_omega_d_phi_ext = 3e8;
  sens.d_omega_d_ng = 4e8;

  SUBCASE("inductively shunted atom mixes charge and flux noise") {
    const double s_qq = 1e-50, s_pp = 1e-30;
    const double rate = dephasing_rate(flux_atom, sens, omega, s_qq, s_pp);
    const double w = hbar * omega / el;
    check_rel(rate, sens.d_omega_d_phi_ext * sens.d_omega_d_phi_ext * (w * w * s_qq + s_pp),
              1e-14);

    // Doubling el quarters the charge-noise contribution.
    auto stiffer = flux_atom;
    stiffer.el *= 2.0;
    const double charge_only = dephasing_rate(flux_atom, sens, omega, s_qq, 0.0);
    const double charge_stiff = dephasing_rate(stiffer, sens, omega, s_qq, 0.0);
    check_rel(charge_stiff, charge_only / 4.0, 1e-12);

    CHECK_THROWS_AS(dephasing_rate(flux_atom, sens, omega, s_qq, std::nullopt),
                    std::invalid_argument);
  }

  SUBCASE("charge-only atom uses the n_g slope") {
    const auto cpb = make_spec(ec, 0.1 * ec);
    const double rate = dephasing_rate(cpb, sens, omega, 2e-50, std::nullopt);
    check_rel(rate, sens.d_omega_d_ng * sens.d_omega_d_ng * 2e-50, 1e-14);
    CHECK_THROWS_AS(dephasing_rate(cpb, sens, omega, std::nullopt, std::nullopt),
                    std::invalid_argument);
  }

  SUBCASE("zero sensitivity means zero rate") {
    CHECK(dephasing_rate(flux_atom, NoiseSensitivities{}, omega, 1e-50, 1e-30) == 0.0);
  }
}

TEST_CASE("regime classification against the catalog") {
  const double ec = h_planck * 1e9;
  CHECK(classify_regime(make_spec(ec, 0.1 * ec)).label == "cooper-pair box");
  CHECK(classify_regime(make_spec(ec, 1.2 * ec)).label == "quantronium");
  CHECK(classify_regime(make_spec(ec, 50.0 * ec)).label == "transmon");

  const auto fluxonium = classify_regime(make_spec(ec, 3.6 * ec, 0.2 * ec));
  CHECK(fluxonium.label == "fluxonium");
  REQUIRE(fluxonium.el_ratio.has_value());
  check_rel(*fluxonium.el_ratio, 0.2 / 3.4, 1e-12);

  // E_L comparable to E_J with a large ej/ec: the flux qubit cell.
  const auto fq = classify_regime(make_spec(ec, 50.0 * ec, 45.0 * ec));
  CHECK(fq.label == "flux qubit");

  const auto pq = classify_regime(make_spec(ec, 1e4 * ec, 5e3 * ec));
  CHECK(pq.label == "phase qubit");

  // el >= ej caps the ratio at infinity and still lands in the shunted column.
  const auto deep = classify_regime(make_spec(ec, 10.0 * ec, 20.0 * ec));
  CHECK(std::isinf(*deep.el_ratio));
  CHECK(deep.label == "flux qubit");

  CHECK_FALSE(classify_regime(make_spec(ec, 0.1 * ec)).el_ratio.has_value());
}

TEST_CASE("three-wave mixing point of the asymmetric loop") {
  SUBCASE("a quartic-free flux exists for moderate asymmetry") {
    const auto pt = three_wave_mixing_search(1.0, 2.0);
    REQUIRE(pt.has_value());
    CHECK(pt->loop_flux > 0.0);
    CHECK(pt->loop_flux < 2.0 * pi);
    CHECK(pt->c2 > 0.0);
    CHECK(std::abs(pt->c4) <= 1e-10 * 3.0);
    CHECK(std::abs(pt->c3) > 1e-3);

    // The reported well is a genuine stationary point.
    const double u = pt->loop_flux, p = pt->phi_min;
    const double grad = -std::sin(u - p) + 2.0 * std::sin(p / 2.0);
    CHECK(std::abs(grad) <= 1e-9 * 3.0);
  }

  SUBCASE("too dominant a big junction leaves c4 pinned negative") {
    CHECK_FALSE(three_wave_mixing_search(1.0, 20.0).has_value());
  }

  CHECK_THROWS_AS(three_wave_mixing_search(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(three_wave_mixing_search(1.0, -1.0), std::invalid_argument);
}

TEST_CASE("atom extraction from a single-island circuit") {
  SUBCASE("transmon netlist") {
    const auto g = parse_netlist("C1 1 0 7.745e-14\nJ1 1 0 f=12.5G\n");
    const auto s = atom_spec_from_graph(g);
    check_rel(s.ec, e_charge * e_charge / (2.0 * 7.745e-14), 1e-12);
    check_rel(s.ej, h_planck * 12.5e9, 1e-12);
    CHECK(s.el == 0.0);
    CHECK(s.n_g == 0.0);
    CHECK(s.phi_ext == 0.0);
    check_rel(s.ej / s.ec, 50.0, 2e-3);
  }

  SUBCASE("capacitor charge offset becomes n_g") {
    const auto g = parse_netlist(
        "C1 1 0 3.87e-15 offset=1.602176634e-19\nJ1 1 0 f=0.5G\n");
    const auto s = atom_spec_from_graph(g);
    check_rel(std::abs(s.n_g), 0.5, 1e-12);
  }

  SUBCASE("junction flux offset becomes phi_ext with branch orientation") {
    const double off = 0.3 * phi0_reduced;
    const auto a = atom_spec_from_graph(
        parse_netlist("C1 1 0 1e-14\nJ1 1 0 f=5G offset=" + num(off) + "\n"));
    const auto b = atom_spec_from_graph(
        parse_netlist("C1 1 0 1e-14\nJ1 0 1 f=5G offset=" + num(off) + "\n"));
    CHECK(a.phi_ext == doctest::Approx(-0.3).epsilon(1e-6));
    CHECK(b.phi_ext == doctest::Approx(0.3).epsilon(1e-6));
  }

  SUBCASE("fluxonium netlist populates el") {
    const auto g = parse_netlist("C1 1 0 7.745e-15\nL1 1 0 3.27e-7\nJ1 1 0 f=9G\n");
    const auto s = atom_spec_from_graph(g);
    check_rel(s.el, phi0_reduced * phi0_reduced / 3.27e-7, 1e-12);
    check_rel(s.ej, h_planck * 9e9, 1e-12);
  }

  SUBCASE("two junctions fold through the squid reduction") {
    const double o1 = 0.4 * phi0_reduced;
    const auto g = parse_netlist("C1 1 0 5e-14\nJ1 1 0 f=5G offset=" + num(o1) +
                                 "\nJ2 1 0 f=7G\n");
    const auto s = atom_spec_from_graph(g);
    const auto red = squid_reduce(h_planck * 5e9, h_planck * 7e9, o1);
    check_rel(s.ej, red.ej_eff, 1e-9);
    CHECK(s.phi_ext ==
          doctest::Approx(red.phase_offset - o1 / (2.0 * phi0_reduced)).epsilon(1e-9));

    // The reduced atom reproduces the full two-junction potential: fold both
    // cosines by hand at a few phases and compare.
    for (const double psi : {0.0, 0.7, 2.1, -1.3}) {
      const double direct = -h_planck * 5e9 * std::cos(psi + o1 / phi0_reduced) -
                            h_planck * 7e9 * std::cos(psi);
      const double reduced = -s.ej * std::cos(psi - s.phi_ext);
      CHECK(std::abs(direct - reduced) <= 1e-10 * h_planck * 12e9);
    }
  }

  SUBCASE("rejections") {
    CHECK_THROWS_AS(atom_spec_from_graph(parse_netlist(
                        "C1 1 0 1e-14\nC2 2 0 1e-14\nJ1 1 0 f=5G\nJ2 2 0 f=5G\n")),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        atom_spec_from_graph(parse_netlist(
            "C1 1 0 1e-14\nJ1 1 0 f=5G\nJ2 1 0 f=5G\nJ3 1 0 f=5G\n")),
        std::invalid_argument);
  }

  SUBCASE("pure LC island has no junction") {
    const auto s = atom_spec_from_graph(parse_netlist("C1 1 0 1e-11\nL1 1 0 1e-9\n"));
    CHECK(s.ej == 0.0);
    check_rel(s.el, phi0_reduced * phi0_reduced / 1e-9, 1e-12);
  }
}

TEST_SUITE_END();
