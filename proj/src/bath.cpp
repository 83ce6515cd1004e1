#include "cqt/bath.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cqt/constants.hpp"
#include "cqt/errors.hpp"
#include "cqt/quadrature.hpp"

namespace cqt {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

// x coth x, series near 0, ->x for large x; even, finite everywhere.
double xcothx(double x) {
  const double ax = std::abs(x);
  if (ax < 1e-4) return 1.0 + x * x / 3.0;
  if (ax > 20.0) return ax;
  return x / std::tanh(x);
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || std::isnan(v)) throw std::invalid_argument(std::string(what) + " must be positive");
}

void require_finite_positive(double v, const char* what) {
  require_positive(v, what);
  if (std::isinf(v)) throw std::invalid_argument(std::string(what) + " must be finite");
}

} // namespace

AdmittanceModel ohmic_admittance(double r_ohm, double omega_c) {
  require_positive(r_ohm, "resistance");
  require_positive(omega_c, "cutoff frequency");
  return {[r_ohm, omega_c](double omega) -> std::complex<double> {
    if (std::isinf(omega_c)) return 1.0 / r_ohm;
    return (1.0 / r_ohm) / (1.0 - kI * (omega / omega_c));
  }};
}

AdmittanceModel tabulated_admittance(std::vector<std::pair<double, std::complex<double>>> samples) {
  if (samples.empty()) throw std::invalid_argument("tabulated admittance needs at least one sample");
  std::sort(samples.begin(), samples.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& [w, y] = samples[i];
    if (!(w >= 0.0) || std::isinf(w)) throw std::invalid_argument("sample frequencies must be finite and >= 0");
    if (i > 0 && !(w > samples[i - 1].first)) throw std::invalid_argument("duplicate sample frequency");
    if (y.real() < -1e-12 * std::abs(y)) throw std::invalid_argument("tabulated admittance violates passivity (Re Y < 0)");
  }
  return {[samples = std::move(samples)](double omega) -> std::complex<double> {
    const bool neg = omega < 0.0;
    const double w = std::abs(omega);
    std::complex<double> y;
    if (w <= samples.front().first) {
      y = samples.front().second;
    } else if (w >= samples.back().first) {
      y = samples.back().second;
    } else {
      auto hi = std::upper_bound(samples.begin(), samples.end(), w,
                                 [](double v, const auto& s) { return v < s.first; });
      auto lo = hi - 1;
      const double t = (w - lo->first) / (hi->first - lo->first);
      y = lo->second + t * (hi->second - lo->second);
    }
    return neg ? std::conj(y) : y;
  }};
}

ImpedanceModel impedance_of(const AdmittanceModel& y) {
  return {[y](double omega) { return 1.0 / y(omega); }};
}

ImpedanceModel damped_lc_impedance(double l_henry, double c_farad, AdmittanceModel y) {
  require_positive(l_henry, "inductance");
  require_positive(c_farad, "capacitance");
  const double w0_sq = 1.0 / (l_henry * c_farad);
  return {[c_farad, w0_sq, y = std::move(y)](double omega) {
    const std::complex<double> gt = omega * y(omega) + kI * c_farad * (w0_sq - omega * omega);
    return omega / gt;
  }};
}

BathDiscretization discretize(const AdmittanceModel& y, double delta_omega, double omega_max) {
  require_finite_positive(delta_omega, "comb spacing");
  require_finite_positive(omega_max, "frequency ceiling");
  BathDiscretization bath;
  bath.delta_omega = delta_omega;
  const int count = static_cast<int>(std::floor(omega_max / delta_omega * (1.0 + 1e-12)));
  for (int m = 1; m <= count; ++m) {
    const double omega_m = m * delta_omega;
    const std::complex<double> yv = y(omega_m);
    double rey = yv.real();
    if (rey < -1e-12 * std::abs(yv))
      throw std::invalid_argument("admittance violates passivity (Re Y < 0) at omega = " + std::to_string(omega_m));
    if (rey <= 0.0) continue;
    BathOscillator osc;
    osc.omega_m = omega_m;
    osc.y_m = (2.0 * delta_omega / (pi * omega_m)) * rey;
    osc.c_m = osc.y_m / omega_m;
    osc.l_m = 1.0 / (osc.y_m * omega_m);
    bath.oscillators.push_back(osc);
  }
  // Zero-frequency inductive response: L0 = 1 / lim_{w->0} Re[-i w Y(w)].
  // Probe at two tiny frequencies; a genuine 1/(i L w) pole gives the same
  // positive real value at both, anything else fails the checks.
  const double wp = delta_omega * 1e-6;
  const std::complex<double> s1 = -kI * wp * y(wp);
  const std::complex<double> s2 = -kI * (wp / 2.0) * y(wp / 2.0);
  if (s1.real() > 0.0 && std::abs(s1.imag()) <= 1e-6 * s1.real() && std::abs(s2) > 0.0) {
    const double ratio = std::abs(s1) / std::abs(s2);
    if (ratio > 0.99 && ratio < 1.01) bath.l0 = 1.0 / s1.real();
  }
  return bath;
}

std::complex<double> reconstruct(const BathDiscretization& bath, double omega, double eta) {
  if (!(eta > 0.0)) throw std::invalid_argument("reconstruction requires eta > 0");
  const std::complex<double> s{omega, eta};
  std::complex<double> y = 0.0;
  if (bath.l0) y += kI / (*bath.l0 * s);
  for (const auto& osc : bath.oscillators)
    y += kI * s / (osc.l_m * (s * s - osc.omega_m * osc.omega_m));
  return y;
}

void append_bath(CircuitGraph& g, const BathDiscretization& bath, const std::string& node,
                 const std::string& prefix) {
  if (!g.nodes.count(node)) throw std::invalid_argument("unknown coupling node '" + node + "'");
  if (bath.l0) {
    Branch b;
    b.name = prefix + "_L0";
    b.kind = ElementKind::inductor;
    b.node_a = node;
    b.node_b = g.ground;
    b.value = *bath.l0;
    g.add_branch(b);
  }
  int idx = 0;
  for (const auto& osc : bath.oscillators) {
    ++idx;
    const std::string internal = prefix + "_n" + std::to_string(idx);
    if (g.nodes.count(internal))
      throw std::invalid_argument("bath node name collision: '" + internal + "'");
    Branch ind;
    ind.name = prefix + "_L" + std::to_string(idx);
    ind.kind = ElementKind::inductor;
    ind.node_a = node;
    ind.node_b = internal;
    ind.value = osc.l_m;
    g.add_branch(ind);
    Branch cap;
    cap.name = prefix + "_C" + std::to_string(idx);
    cap.kind = ElementKind::capacitor;
    cap.node_a = internal;
    cap.node_b = g.ground;
    cap.value = osc.c_m;
    g.add_branch(cap);
  }
}

double nyquist_current_psd(const AdmittanceModel& y, double t_kelvin, double omega) {
  if (t_kelvin < 0.0) throw std::invalid_argument("temperature must be >= 0");
  return 2.0 * k_boltzmann * t_kelvin * y(omega).real();
}

double johnson_voltage_psd(const ImpedanceModel& z, double t_kelvin, double omega) {
  if (t_kelvin < 0.0) throw std::invalid_argument("temperature must be >= 0");
  return 2.0 * k_boltzmann * t_kelvin * z(omega).real();
}

QuantumPsd quantum_psd(const ImpedanceModel& z, double t_kelvin, double omega) {
  if (t_kelvin < 0.0) throw std::invalid_argument("temperature must be >= 0");
  const double rez = z(omega).real();
  QuantumPsd psd;
  if (t_kelvin == 0.0) {
    psd.s_vv = omega > 0.0 ? 2.0 * hbar * omega * rez : 0.0;
  } else if (omega == 0.0) {
    psd.s_vv = 2.0 * k_boltzmann * t_kelvin * rez;
  } else {
    // hbar w [coth(b hbar w/2) + 1] = -2 hbar w / expm1(-b hbar w): one
    // transcendental call, detailed balance exact to rounding at any b w.
    const double x = hbar * omega / (k_boltzmann * t_kelvin);
    psd.s_vv = -2.0 * hbar * omega / std::expm1(-x) * rez;
  }
  if (omega != 0.0)
    psd.s_phiphi = psd.s_vv / (omega * omega);
  else
    psd.s_phiphi = psd.s_vv > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  return psd;
}

// ---- Damped LC variances ------------------------------------------------

namespace {

void check_damped_lc_args(double l, double c, double r, double omega_c, double t) {
  require_positive(l, "inductance");
  require_positive(c, "capacitance");
  require_positive(r, "resistance");
  require_finite_positive(omega_c, "cutoff frequency");
  if (t < 0.0 || std::isnan(t)) throw std::invalid_argument("temperature must be >= 0");
}

DampedLCParams make_params(double omega0, double r, double c, double omega_c, double t_kelvin) {
  DampedLCParams p;
  p.theta = k_boltzmann * t_kelvin / (hbar * omega0);
  p.kappa = 1.0 / (2.0 * r * c * omega0);
  const std::complex<double> sq = std::sqrt(std::complex<double>(p.kappa * p.kappa - 1.0));
  const double w_ratio = omega_c / omega0;
  if (p.theta > 0.0) {
    p.lambda_plus = (p.kappa + sq) / (2.0 * pi * p.theta);
    p.lambda_minus = (p.kappa - sq) / (2.0 * pi * p.theta);
    p.lambda_c = (w_ratio - 2.0 * p.kappa) / (2.0 * pi * p.theta);
  } else {
    const double inf = std::numeric_limits<double>::infinity();
    p.lambda_plus = p.lambda_minus = inf;
    p.lambda_c = inf;
  }
  return p;
}

} // namespace

LCVariances damped_lc_variance_quadrature(double l_henry, double c_farad, double r_ohm,
                                          double omega_c, double t_kelvin) {
  check_damped_lc_args(l_henry, c_farad, r_ohm, omega_c, t_kelvin);
  const double omega0 = 1.0 / std::sqrt(l_henry * c_farad);
  const double w0_sq = omega0 * omega0;
  const auto y = ohmic_admittance(r_ohm, omega_c);
  const auto gt2 = [&](double w) {
    const std::complex<double> g = w * y(w) + kI * c_farad * (w0_sq - w * w);
    return std::norm(g);
  };
  const double beta_hbar = t_kelvin > 0.0 ? hbar / (k_boltzmann * t_kelvin) : 0.0;
  // <Phi^2> = (hbar/pi) Int_0^inf coth(b hbar w/2) w Re y / |gt|^2 dw, and
  // <Q^2> carries an extra C^2 w^2; x coth x keeps both kernels finite at 0.
  const auto fphi = [&](double w) {
    const double rey = y(w).real();
    if (t_kelvin == 0.0) return rey * w / gt2(w);
    return (2.0 / beta_hbar) * xcothx(beta_hbar * w / 2.0) * rey / gt2(w);
  };
  const auto fq = [&](double w) { return c_farad * c_farad * w * w * fphi(w); };

  const double kap = std::max(1.0, 1.0 / (2.0 * r_ohm * c_farad * omega0));
  const double cap_omega = std::max({50.0 * omega0, 20.0 * omega_c,
                                     t_kelvin > 0.0 ? 50.0 / beta_hbar : 0.0});
  std::vector<double> pts = {0.0, cap_omega, omega_c, omega0 / (2.0 * kap), 2.0 * kap * omega0};
  for (double f : {0.5, 0.9, 0.99, 1.0, 1.01, 1.1, 2.0}) pts.push_back(f * omega0);
  std::erase_if(pts, [&](double p) { return p > cap_omega; });
  pts.push_back(cap_omega);

  const double rel_tol = 1e-7;
  LCVariances out;
  out.phi2 = integrate_adaptive(fphi, pts, rel_tol).value;
  out.q2 = integrate_adaptive(fq, pts, rel_tol).value;
  // w > cap_omega tail through u = 1/w.
  const std::vector<double> tail = {0.0, 1.0 / cap_omega};
  out.phi2 += integrate_adaptive([&](double u) { return fphi(1.0 / u) / (u * u); }, tail, rel_tol).value;
  out.q2 += integrate_adaptive([&](double u) { return fq(1.0 / u) / (u * u); }, tail, rel_tol).value;
  out.phi2 *= hbar / pi;
  out.q2 *= hbar / pi;
  return out;
}

ClosedVariances damped_lc_variance_closed(double l_henry, double c_farad, double r_ohm,
                                          double omega_c, double t_kelvin) {
  check_damped_lc_args(l_henry, c_farad, r_ohm, omega_c, t_kelvin);
  const double omega0 = 1.0 / std::sqrt(l_henry * c_farad);
  const double z0 = std::sqrt(l_henry / c_farad);
  ClosedVariances out;
  out.params = make_params(omega0, r_ohm, c_farad, omega_c, t_kelvin);
  const double kappa = out.params.kappa;
  const double w_ratio = omega_c / omega0;

  // Matsubara poles: -b_i are the roots of x^3 + W x^2 + (1+2kW) x + W.
  const double c2 = w_ratio, c1 = 1.0 + 2.0 * kappa * w_ratio, c0 = w_ratio;
  Eigen::Matrix3d companion;
  companion << 0, 0, -c0,
               1, 0, -c1,
               0, 1, -c2;
  const Eigen::EigenSolver<Eigen::Matrix3d> solver(companion);
  std::complex<double> b[3];
  for (int i = 0; i < 3; ++i) b[i] = -solver.eigenvalues()(i);

  std::complex<double> sum_phi = 0.0, sum_q = 0.0;
  for (int i = 0; i < 3; ++i) {
    std::complex<double> den = 1.0;
    for (int j = 0; j < 3; ++j)
      if (j != i) den *= b[j] - b[i];
    const std::complex<double> a_i = (w_ratio - b[i]) / den;
    const std::complex<double> b_i = (w_ratio - c1 * b[i]) / den;
    std::complex<double> kernel;
    if (t_kelvin == 0.0)
      kernel = -std::log(b[i]) / pi; // Re b_i > 0: principal branch is the right one
    else
      kernel = -digamma(1.0 + b[i] / (2.0 * pi * out.params.theta)) / pi;
    sum_phi += a_i * kernel;
    sum_q += b_i * kernel;
  }
  if (t_kelvin > 0.0) {
    sum_phi += out.params.theta;
    sum_q += out.params.theta;
  }
  const double scale = std::max(std::max(std::abs(sum_phi.real()), std::abs(sum_q.real())), 1e-300);
  if (std::abs(sum_phi.imag()) > 1e-8 * scale || std::abs(sum_q.imag()) > 1e-8 * scale)
    throw NumericsError("damped LC closed form lost reality (degenerate cubic roots?)");

  out.phi2 = hbar * z0 * sum_phi.real();
  out.q2 = (hbar / z0) * sum_q.real();
  out.params.delta = out.q2 - out.phi2 / (z0 * z0);
  return out;
}

// ---- Special functions ---------------------------------------------------

std::complex<double> digamma(std::complex<double> z) {
  if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real()))
    throw std::invalid_argument("digamma pole at non-positive integer");
  std::complex<double> acc = 0.0;
  while (z.real() < 8.0) {
    acc -= 1.0 / z;
    z += 1.0;
  }
  // Asymptotic series ln z - 1/2z - sum B_2k / (2k z^2k).
  static constexpr double b2k[] = {1.0 / 6.0,    -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0,
                                   5.0 / 66.0, -691.0 / 2730.0, 7.0 / 6.0, -3617.0 / 510.0};
  const std::complex<double> inv = 1.0 / z;
  const std::complex<double> inv2 = inv * inv;
  std::complex<double> res = std::log(z) - 0.5 * inv;
  std::complex<double> p = inv2;
  for (int k = 0; k < 8; ++k) {
    res -= b2k[k] / (2.0 * (k + 1)) * p;
    p *= inv2;
  }
  return acc + res;
}

double digamma(double x) {
  if (x <= 0.0 && x == std::floor(x))
    throw std::invalid_argument("digamma pole at non-positive integer");
  return digamma(std::complex<double>(x, 0.0)).real();
}

} // namespace cqt
