#include "cqt/inout.hpp"

#include <cmath>
#include <stdexcept>

#include "cqt/constants.hpp"

namespace cqt {

namespace {

void validate_cavity(const CavityParams& c) {
  if (!(c.omega_a > 0.0) || !std::isfinite(c.omega_a))
    throw std::invalid_argument("omega_a must be positive");
  if (!(c.gamma_a > 0.0) || !std::isfinite(c.gamma_a))
    throw std::invalid_argument("gamma_a must be positive");
  if (c.gamma_a / c.omega_a >= 0.1)
    throw std::invalid_argument("gamma_a/omega_a must stay below 0.1 for the RWA");
  if (c.zeta != 1 && c.zeta != -1) throw std::invalid_argument("zeta must be +1 or -1");
  if (!(c.z_a > 0.0) || !std::isfinite(c.z_a))
    throw std::invalid_argument("z_a must be positive");
}

void validate_drive(const DriveSpec& d) {
  if (!(d.omega_d > 0.0) || !std::isfinite(d.omega_d))
    throw std::invalid_argument("omega_d must be positive");
  if (d.thermal_n < 0.0 || !std::isfinite(d.thermal_n))
    throw std::invalid_argument("thermal_n must be >= 0");
  if (!std::isfinite(d.amplitude.real()) || !std::isfinite(d.amplitude.imag()))
    throw std::invalid_argument("amplitude must be finite");
}

} // namespace

std::complex<double> steady_state(const CavityParams& cavity, const DriveSpec& drive) {
  validate_cavity(cavity);
  validate_drive(drive);
  const std::complex<double> pole(cavity.gamma_a / 2.0, cavity.omega_a - drive.omega_d);
  return std::sqrt(cavity.gamma_a) * drive.amplitude / pole;
}

std::complex<double> input_output(std::complex<double> a_in, std::complex<double> a,
                                  const CavityParams& cavity) {
  validate_cavity(cavity);
  return double(cavity.zeta) * (a_in - std::sqrt(cavity.gamma_a) * a);
}

std::vector<std::complex<double>> transient(const CavityParams& cavity, const DriveSpec& drive,
                                            std::complex<double> a0,
                                            const std::vector<double>& t_grid) {
  const std::complex<double> a_ss = steady_state(cavity, drive); // validates both
  const std::complex<double> pole(cavity.gamma_a / 2.0, cavity.omega_a - drive.omega_d);
  std::vector<std::complex<double>> out;
  out.reserve(t_grid.size());
  for (const double t : t_grid) {
    if (!std::isfinite(t)) throw std::invalid_argument("time grid must be finite");
    out.push_back(a_ss + std::exp(-pole * t) * (a0 - a_ss));
  }
  return out;
}

double thermal_occupation(double omega, double t_kelvin) {
  if (omega == 0.0 || !std::isfinite(omega))
    throw std::invalid_argument("thermal occupation needs a finite nonzero frequency");
  if (t_kelvin < 0.0 || std::isnan(t_kelvin))
    throw std::invalid_argument("temperature must be >= 0");
  if (t_kelvin == 0.0) return omega > 0.0 ? 0.0 : -1.0;
  return 1.0 / std::expm1(hbar * omega / (k_boltzmann * t_kelvin));
}

double damping_rate_from_shunt(double omega_a, double z_a, double r_shunt) {
  if (!(omega_a > 0.0) || !(z_a > 0.0) || !(r_shunt > 0.0))
    throw std::invalid_argument("omega_a, z_a and r_shunt must be positive");
  return omega_a * z_a / r_shunt;
}

} // namespace cqt
