#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cqt/netlist.hpp"

// Dissipation as linear response.  Sign convention is the electrical-
// engineering one, j = -i with e^{j omega t} time dependence, so the
// Drude-cutoff resistor reads y(omega) = (1/R) / (1 - i omega/omega_c) and an
// inductor admits i/(L omega).  Passivity: Re Y >= 0; reality:
// Y(-omega) = conj(Y(omega)).

namespace cqt {

struct AdmittanceModel {
  std::function<std::complex<double>(double)> y;
  std::complex<double> operator()(double omega) const { return y(omega); }
};

// 1/R rolled off at omega_c; omega_c = +infinity gives the flat conductance.
AdmittanceModel ohmic_admittance(double r_ohm, double omega_c);
// Linear interpolation of (omega, Y) samples, conjugate-extended to
// negative frequencies and clamped outside the sampled range.  Throws on
// passivity violations in the samples.
AdmittanceModel tabulated_admittance(std::vector<std::pair<double, std::complex<double>>> samples);

struct ImpedanceModel {
  std::function<std::complex<double>(double)> z;
  std::complex<double> operator()(double omega) const { return z(omega); }
};

ImpedanceModel impedance_of(const AdmittanceModel& y); // Z = 1/Y
// L, C and the admittance y in parallel, evaluated in the cancellation-free
// form Z = omega / (omega y + i C (omega0^2 - omega^2)).
ImpedanceModel damped_lc_impedance(double l_henry, double c_farad, AdmittanceModel y);

// ---- Caldeira-Leggett discretization ----------------------------------

struct BathOscillator {
  double omega_m = 0.0; // rad/s, = m * delta_omega
  double y_m = 0.0;     // S, (2 delta_omega / pi omega_m) Re Y(omega_m)
  double c_m = 0.0;     // F, y_m / omega_m
  double l_m = 0.0;     // H, 1 / (y_m omega_m)
};

struct BathDiscretization {
  std::vector<BathOscillator> oscillators; // zero-weight lines skipped
  std::optional<double> l0;                // H, zero-frequency inductive response
  double delta_omega = 0.0;                // rad/s comb spacing
};

BathDiscretization discretize(const AdmittanceModel& y, double delta_omega, double omega_max);

// Y evaluated at omega + i eta from the comb; converges to the smooth input
// for eta of a few comb spacings.
std::complex<double> reconstruct(const BathDiscretization& bath, double omega, double eta);

// Append the comb to a circuit: for each oscillator an internal node holding
// C_m to ground and L_m to `node` (plus L0 straight to ground), so the
// coupling is the shared node flux.  Branch and node names get `prefix`.
void append_bath(CircuitGraph& g, const BathDiscretization& bath, const std::string& node,
                 const std::string& prefix = "bath");

// ---- Fluctuation spectral densities ------------------------------------

// Classical (symmetric) Nyquist current noise 2 k_B T Re Y, A^2/Hz.
double nyquist_current_psd(const AdmittanceModel& y, double t_kelvin, double omega);
// Johnson voltage dual 2 k_B T Re Z, V^2/Hz.
double johnson_voltage_psd(const ImpedanceModel& z, double t_kelvin, double omega);

struct QuantumPsd {
  double s_vv = 0.0;     // V^2/Hz, hbar omega [coth(beta hbar omega/2) + 1] Re Z
  double s_phiphi = 0.0; // Wb^2/Hz, s_vv / omega^2
};
// Asymmetric-in-frequency quantum noise of a passive impedance; t_kelvin = 0
// takes the zero-temperature limit (coth -> sign).
QuantumPsd quantum_psd(const ImpedanceModel& z, double t_kelvin, double omega);

// ---- Damped LC variances ------------------------------------------------

struct DampedLCParams {
  double theta = 0.0;                  // k_B T / (hbar omega0)
  double kappa = 0.0;                  // 1 / (2 R C omega0)
  std::complex<double> lambda_plus;    // (kappa + sqrt(kappa^2-1)) / (2 pi theta)
  std::complex<double> lambda_minus;   // (kappa - sqrt(kappa^2-1)) / (2 pi theta)
  double lambda_c = 0.0;               // (omega_c/omega0 - 2 kappa) / (2 pi theta)
  double delta = 0.0;                  // C^2, exact excess <Q^2> - <Phi^2>/Z0^2
};

struct LCVariances {
  double phi2 = 0.0; // Wb^2
  double q2 = 0.0;   // C^2
};

// Oracle path: adaptive quadrature of the coth-weighted Re Z_total kernel
// over [0, Omega] with Omega = max(50 omega0, 20 omega_c, 50 k_B T/hbar),
// plus the u = 1/omega tail.  Throws NumericsError on non-convergence.
LCVariances damped_lc_variance_quadrature(double l_henry, double c_farad, double r_ohm,
                                          double omega_c, double t_kelvin);

struct ClosedVariances {
  double phi2 = 0.0;
  double q2 = 0.0;
  DampedLCParams params;
};

// Matsubara closed form: exact partial fractions over the roots of
// x^3 + W x^2 + (1 + 2 kappa W) x + W, W = omega_c/omega0, valid for every
// kappa (complex-conjugate roots for kappa < 1 yield a real result; the
// imaginary residue is checked against 1e-8).
ClosedVariances damped_lc_variance_closed(double l_henry, double c_farad, double r_ohm,
                                          double omega_c, double t_kelvin);

// ---- Special functions ---------------------------------------------------

// Digamma by upward recurrence to |z| > 8 plus the asymptotic series;
// |error| < 1e-12 on the tested domain.  Real overload throws
// std::invalid_argument at the non-positive-integer poles.
std::complex<double> digamma(std::complex<double> z);
double digamma(double x);

} // namespace cqt
