#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "cqt/netlist.hpp"

// Artificial atoms: a single Josephson degree of freedom with
// H = 4 E_C (q - n_g)^2 - E_J cos(phi) + (E_L/2)(phi - phi_ext)^2
// quantized either in the charge basis (E_L = 0, compact phase) or in the
// Fock basis of the shunted-LC mode (E_L > 0, extended phase; the well is
// re-centered so the external flux moves into the cosine, a parity-equivalent
// frame with the same spectrum).

namespace cqt {

struct OscillatorParams {
  double omega0 = 0.0;  // rad/s, 1/sqrt(LC)
  double z0 = 0.0;      // ohms, sqrt(L/C)
  double phi_zpf = 0.0; // Wb, sqrt(hbar z0 / 2)
  double q_zpf = 0.0;   // C, sqrt(hbar / 2 z0); phi_zpf * q_zpf = hbar/2
};
OscillatorParams lc_quantize(double l_henry, double c_farad);

struct ThermalVariances {
  double phi2 = 0.0; // Wb^2, (hbar Z0/2) coth(beta hbar w0/2)
  double q2 = 0.0;   // C^2, (hbar/2 Z0) coth(beta hbar w0/2)
};
// T = 0 means the zero-point limit (coth -> 1).
ThermalVariances thermal_variances(double l_henry, double c_farad, double t_kelvin);

struct AtomSpec {
  double ec = 0.0;      // J, e^2 / 2 C_sigma
  double ej = 0.0;      // J
  double el = 0.0;      // J, phi0^2 / L; zero = no shunt inductor
  double n_g = 0.0;     // offset charge in units of 2e
  double phi_ext = 0.0; // reduced external flux, radians
};

struct ChargeBasis {
  int n_cut = 0; // states n = -n_cut .. n_cut
};
struct FockBasis {
  int n_max = 0;        // dimension
  double z_char = 0.0;  // ohms, sqrt(L/C_sigma) of the shunted mode
};

struct OperatorMatrix {
  std::variant<ChargeBasis, FockBasis> basis;
  Eigen::MatrixXcd data; // joules, Hermitian to 1e-12 relative
  // Ground level moves by <= 1e-9 relative when the truncation grows by 10.
  bool converged = true;
};

// Diagonal 4 E_C (n - n_g)^2, first off-diagonals -E_J/2.  A constant
// phase on the hopping is a gauge transform, so phi_ext does not enter.
// Requires el = 0 (otherwise the phase is extended: use the Fock basis).
OperatorMatrix charge_basis_hamiltonian(const AtomSpec& spec, int n_cut = 30);

// H = sqrt(8 E_L E_C)(n + 1/2) - E_J cos(phi_op - phi_ext) with
// phi_op = (2E_C/E_L)^(1/4) (c + c'); the cosine is applied spectrally.
// Requires el > 0.  n_g is dropped: for an extended phase the offset charge
// is removed by a momentum-shift unitary and cannot affect the spectrum.
OperatorMatrix fock_basis_hamiltonian(const AtomSpec& spec, int n_max = 60);

// k lowest eigenvalues, ascending, joules.
std::vector<double> spectrum(const OperatorMatrix& op, int k);

struct SquidReduction {
  double ej_eff = 0.0;       // J, E_Jsum sqrt(cos^2 x + d^2 sin^2 x), x = flux/2phi0
  double phase_offset = 0.0; // rad, atan2(d sin x, cos x)
  double d = 0.0;            // (E_J2 - E_J1) / E_Jsum
};
SquidReduction squid_reduce(double ej1, double ej2, double flux_ext_weber);

struct ArrayReduction {
  std::function<double(double)> potential; // J as a function of the total reduced phase
  double l_eff = 0.0;                      // H, M phi0^2 / E_J
  // exp(-sqrt(8 E_J/E_C)) when the per-junction E_C is supplied; must be
  // << 1 for the array reduction to hold (phase-slip suppression).
  std::optional<double> phase_slip_factor;
};
ArrayReduction array_reduce(double ej, int m, std::optional<double> ec = std::nullopt);

enum class AtomParameter { phi_ext, n_g };

// d(omega_transition)/d(parameter) in rad/s per unit, by central differences
// with automatic step halving until two estimates agree to 1e-6 relative
// (plus a 1e-9 * omega floor so sweet spots terminate).  The basis follows
// el: charge for el = 0, Fock otherwise; the truncation starts at the
// default and grows until the convergence flag holds.
double sensitivity(const AtomSpec& spec, AtomParameter parameter,
                   std::pair<int, int> level_pair);

struct NoiseSensitivities {
  double d_omega_d_phi_ext = 0.0; // rad/s per radian
  double d_omega_d_ng = 0.0;      // rad/s per unit n_g
};

// Proportionality (not absolute rate):
//   el > 0: [d w/d phi_ext]^2 ((hbar w / E_L)^2 S_qq[w] + S_phiphi[w])
//   el = 0: [d w/d n_g]^2 S_qq[w]
// Throws when the needed spectral densities are missing.
double dephasing_rate(const AtomSpec& spec, const NoiseSensitivities& sens, double omega,
                      std::optional<double> s_qq, std::optional<double> s_phiphi);

struct RegimeReport {
  double ej_over_ec = 0.0;
  // E_L/(E_J - E_L); absent when E_L = 0 (the "0" column of the catalog).
  std::optional<double> el_ratio;
  std::string label; // nearest named cell, no sharp thresholds claimed
};
RegimeReport classify_regime(const AtomSpec& spec);

// Asymmetric loop with a small junction against two larger series junctions:
// U(phi) = -ej_small cos(u - phi) - 2 ej_big cos(phi/2), u the reduced loop
// flux.  Searches u in (0, 2pi) for a quartic-free point of the well.
// Exploratory utility; returns the first u where the Taylor coefficient c4
// of U about its minimum crosses zero with c3 still sizable.
struct ThreeWaveMixingPoint {
  double loop_flux = 0.0;     // reduced, radians
  double phi_min = 0.0;       // well position, radians
  double c2 = 0.0, c3 = 0.0, c4 = 0.0; // J, Taylor coefficients at the well
};
std::optional<ThreeWaveMixingPoint> three_wave_mixing_search(double ej_small, double ej_big);

// Reduce a validated single-island circuit (one non-ground node) to an
// AtomSpec: E_C from the island capacitance, E_L from the shunt inductance,
// n_g from capacitor charge offsets, and up to two junctions folded into an
// effective (E_J, phi_ext) via the SQUID reduction.
AtomSpec atom_spec_from_graph(const CircuitGraph& g);

} // namespace cqt
