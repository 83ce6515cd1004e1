#pragma once

#include <complex>
#include <vector>

// Driven, damped linear cavity in the rotating-wave approximation: first
// moments of the quantum Langevin equation
//   da/dt = -i(omega_a - omega_d) a - (gamma_a/2) a + sqrt(gamma_a) a_in
// in the drive frame, plus the input-output bookkeeping
//   sqrt(gamma_a) a = a_in - zeta a_out.

namespace cqt {

struct CavityParams {
  double omega_a = 0.0; // rad/s
  double gamma_a = 0.0; // 1/s, energy decay rate
  int zeta = +1;        // +1 series damping, -1 parallel
  double z_a = 0.0;     // ohms, characteristic impedance (zero-point scaling)
};

struct DriveSpec {
  std::complex<double> amplitude; // sqrt(photons/s), frame-defining phase
  double omega_d = 0.0;           // rad/s
  double thermal_n = 0.0;         // mean photon number per unit bandwidth
};

// <a> in the drive frame: sqrt(gamma_a) amplitude / (i(omega_a-omega_d) + gamma_a/2).
// Enforces the under-damped RWA window gamma_a/omega_a < 0.1.
std::complex<double> steady_state(const CavityParams& cavity, const DriveSpec& drive);

// a_out = zeta (a_in - sqrt(gamma_a) a).  With the steady-state amplitude of a
// lossless single-port cavity this is a unit-modulus reflection.
std::complex<double> input_output(std::complex<double> a_in, std::complex<double> a,
                                  const CavityParams& cavity);

// Exact exponential solution of the linear Langevin first moment:
// a(t) = a_ss + exp(-(i delta + gamma_a/2) t) (a0 - a_ss), ring-up constant 2/gamma_a.
std::vector<std::complex<double>> transient(const CavityParams& cavity, const DriveSpec& drive,
                                            std::complex<double> a0,
                                            const std::vector<double>& t_grid);

// Bose-Einstein occupation 1/(exp(hbar w / kT) - 1); T = 0 gives the limits
// 0 (w > 0) and -1 (w < 0); satisfies N(-w) = -N(w) - 1.  Throws at w = 0.
double thermal_occupation(double omega, double t_kelvin);

// gamma_a = omega_a z_a / r_shunt, the loaded linewidth of a mode of
// characteristic impedance z_a damped by a parallel resistance; the loaded
// quality factor is then Q = omega_a/gamma_a = r_shunt/z_a.
double damping_rate_from_shunt(double omega_a, double z_a, double r_shunt);

} // namespace cqt
