#include "cqt/atoms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cqt/constants.hpp"
#include "cqt/errors.hpp"
#include "cqt/hamlag.hpp"

namespace cqt {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string(what) + " must be positive");
}

void validate_spec(const AtomSpec& s) {
  require_positive(s.ec, "ec");
  if (s.ej < 0.0 || !std::isfinite(s.ej)) throw std::invalid_argument("ej must be >= 0");
  if (s.el < 0.0 || !std::isfinite(s.el)) throw std::invalid_argument("el must be >= 0");
  if (!std::isfinite(s.n_g) || !std::isfinite(s.phi_ext))
    throw std::invalid_argument("n_g and phi_ext must be finite");
}

void assert_hermitian(const Eigen::MatrixXcd& h) {
  const double scale = std::max(h.cwiseAbs().maxCoeff(), 1e-300);
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw NumericsError("operator matrix lost hermiticity");
}

Eigen::MatrixXcd build_charge(const AtomSpec& spec, int n_cut) {
  const int dim = 2 * n_cut + 1;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const double n = i - n_cut;
    h(i, i) = 4.0 * spec.ec * (n - spec.n_g) * (n - spec.n_g);
    if (i + 1 < dim) {
      h(i, i + 1) = -spec.ej / 2.0;
      h(i + 1, i) = -spec.ej / 2.0;
    }
  }
  return h;
}

Eigen::MatrixXcd build_fock(const AtomSpec& spec, int n_max) {
  const double phase_zpf = std::pow(2.0 * spec.ec / spec.el, 0.25);
  const double hw = std::sqrt(8.0 * spec.el * spec.ec);
  Eigen::MatrixXd phi_op = Eigen::MatrixXd::Zero(n_max, n_max);
  for (int i = 0; i + 1 < n_max; ++i) {
    phi_op(i, i + 1) = phase_zpf * std::sqrt(i + 1.0);
    phi_op(i + 1, i) = phi_op(i, i + 1);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(phi_op);
  if (es.info() != Eigen::Success) throw NumericsError("phase-operator diagonalization failed");
  const Eigen::VectorXd cosd = (es.eigenvalues().array() - spec.phi_ext).cos();
  Eigen::MatrixXd h = -spec.ej *
      (es.eigenvectors() * cosd.asDiagonal() * es.eigenvectors().transpose());
  for (int i = 0; i < n_max; ++i) h(i, i) += hw * (i + 0.5);
  h = 0.5 * (h + h.transpose()).eval();
  return h.cast<std::complex<double>>();
}

double ground_level(const Eigen::MatrixXcd& h) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericsError("eigensolver failed");
  return es.eigenvalues()(0);
}

bool ground_converged(const AtomSpec& spec, const Eigen::MatrixXcd& h, bool charge, int size) {
  const double e0 = ground_level(h);
  const double e0_big = ground_level(charge ? build_charge(spec, size + 10)
                                            : build_fock(spec, size + 10));
  const double scale = std::max(std::abs(e0_big), spec.ec + spec.ej + spec.el);
  return std::abs(e0 - e0_big) <= 1e-9 * scale;
}

} // namespace

OscillatorParams lc_quantize(double l_henry, double c_farad) {
  require_positive(l_henry, "inductance");
  require_positive(c_farad, "capacitance");
  OscillatorParams p;
  p.omega0 = 1.0 / std::sqrt(l_henry * c_farad);
  p.z0 = std::sqrt(l_henry / c_farad);
  p.phi_zpf = std::sqrt(hbar * p.z0 / 2.0);
  p.q_zpf = std::sqrt(hbar / (2.0 * p.z0));
  return p;
}

ThermalVariances thermal_variances(double l_henry, double c_farad, double t_kelvin) {
  const auto p = lc_quantize(l_henry, c_farad);
  if (t_kelvin < 0.0 || std::isnan(t_kelvin))
    throw std::invalid_argument("temperature must be >= 0");
  double coth = 1.0;
  if (t_kelvin > 0.0)
    coth = 1.0 / std::tanh(hbar * p.omega0 / (2.0 * k_boltzmann * t_kelvin));
  return {hbar * p.z0 / 2.0 * coth, hbar / (2.0 * p.z0) * coth};
}

OperatorMatrix charge_basis_hamiltonian(const AtomSpec& spec, int n_cut) {
  validate_spec(spec);
  if (spec.el != 0.0)
    throw std::invalid_argument("charge basis requires el = 0 (use the Fock basis)");
  if (n_cut < 1) throw std::invalid_argument("n_cut must be >= 1");
  OperatorMatrix op;
  op.basis = ChargeBasis{n_cut};
  op.data = build_charge(spec, n_cut);
  assert_hermitian(op.data);
  op.converged = ground_converged(spec, op.data, true, n_cut);
  return op;
}

OperatorMatrix fock_basis_hamiltonian(const AtomSpec& spec, int n_max) {
  validate_spec(spec);
  if (spec.el <= 0.0)
    throw std::invalid_argument("Fock basis requires el > 0 (use the charge basis)");
  if (n_max < 4) throw std::invalid_argument("n_max must be >= 4");
  const double l = phi0_reduced * phi0_reduced / spec.el;
  const double c = e_charge * e_charge / (2.0 * spec.ec);
  OperatorMatrix op;
  op.basis = FockBasis{n_max, std::sqrt(l / c)};
  op.data = build_fock(spec, n_max);
  assert_hermitian(op.data);
  op.converged = ground_converged(spec, op.data, false, n_max);
  return op;
}

std::vector<double> spectrum(const OperatorMatrix& op, int k) {
  const int dim = static_cast<int>(op.data.rows());
  if (k < 1 || k > dim) throw std::invalid_argument("spectrum: k must be in [1, dimension]");
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(op.data, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericsError("eigensolver failed on the operator matrix");
  std::vector<double> out(k);
  for (int i = 0; i < k; ++i) out[i] = es.eigenvalues()(i);
  return out;
}

SquidReduction squid_reduce(double ej1, double ej2, double flux_ext_weber) {
  if (ej1 < 0.0 || ej2 < 0.0 || ej1 + ej2 <= 0.0)
    throw std::invalid_argument("junction energies must be >= 0 and not both zero");
  const double x = flux_ext_weber / (2.0 * phi0_reduced);
  SquidReduction r;
  r.d = (ej2 - ej1) / (ej1 + ej2);
  // |cos x| sqrt(1 + d^2 tan^2 x) in its pole-free form.
  r.ej_eff = (ej1 + ej2) * std::hypot(std::cos(x), r.d * std::sin(x));
  r.phase_offset = std::atan2(r.d * std::sin(x), std::cos(x));
  return r;
}

ArrayReduction array_reduce(double ej, int m, std::optional<double> ec) {
  require_positive(ej, "ej");
  if (m < 1) throw std::invalid_argument("array size must be >= 1");
  ArrayReduction r;
  r.potential = [ej, m](double phi) { return -m * ej * std::cos(phi / m); };
  r.l_eff = m * phi0_reduced * phi0_reduced / ej;
  if (ec) {
    require_positive(*ec, "ec");
    r.phase_slip_factor = std::exp(-std::sqrt(8.0 * ej / *ec));
  }
  return r;
}

double sensitivity(const AtomSpec& spec, AtomParameter parameter,
                   std::pair<int, int> level_pair) {
  validate_spec(spec);
  const bool charge = spec.el == 0.0;
  const int default_size = charge ? 30 : 60;
  const int dim = charge ? 2 * default_size + 1 : default_size;
  const auto [lo, hi] = level_pair;
  if (lo < 0 || hi <= lo || hi >= dim) throw std::invalid_argument("bad level pair");

  // Grow the truncation until the convergence flag holds; the finite
  // differences then all run at that size.
  int size = default_size;
  for (;;) {
    const auto op = charge ? charge_basis_hamiltonian(spec, size) : fock_basis_hamiltonian(spec, size);
    if (op.converged) break;
    size += size / 2;
    if (size > 2000) throw NumericsError("spectrum not converged at any tractable truncation");
  }

  const auto omega_of = [&](double value) {
    AtomSpec s = spec;
    (parameter == AtomParameter::phi_ext ? s.phi_ext : s.n_g) = value;
    const Eigen::MatrixXcd h = charge ? build_charge(s, size) : build_fock(s, size);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericsError("eigensolver failed during sweep");
    return (es.eigenvalues()(hi) - es.eigenvalues()(lo)) / hbar;
  };

  const double p0 = parameter == AtomParameter::phi_ext ? spec.phi_ext : spec.n_g;
  const double omega0 = omega_of(p0);
  double h = 1e-2;
  double d_prev = (omega_of(p0 + h) - omega_of(p0 - h)) / (2.0 * h);
  for (int iter = 0; iter < 20; ++iter) {
    h /= 2.0;
    const double d = (omega_of(p0 + h) - omega_of(p0 - h)) / (2.0 * h);
    if (std::abs(d - d_prev) <= 1e-6 * std::abs(d) + 1e-9 * std::abs(omega0))
      return (4.0 * d - d_prev) / 3.0; // Richardson-extrapolated value
    d_prev = d;
  }
  throw NumericsError("sensitivity finite difference did not converge");
}

double dephasing_rate(const AtomSpec& spec, const NoiseSensitivities& sens, double omega,
                      std::optional<double> s_qq, std::optional<double> s_phiphi) {
  validate_spec(spec);
  if (!std::isfinite(omega)) throw std::invalid_argument("omega must be finite");
  if (spec.el > 0.0) {
    if (!s_qq || !s_phiphi)
      throw std::invalid_argument("el > 0 dephasing needs both S_qq and S_phiphi");
    const double w = hbar * omega / spec.el;
    return sens.d_omega_d_phi_ext * sens.d_omega_d_phi_ext * (w * w * *s_qq + *s_phiphi);
  }
  if (!s_qq) throw std::invalid_argument("charge dephasing needs S_qq");
  return sens.d_omega_d_ng * sens.d_omega_d_ng * *s_qq;
}

RegimeReport classify_regime(const AtomSpec& spec) {
  validate_spec(spec);
  RegimeReport rep;
  rep.ej_over_ec = spec.ej / spec.ec;
  struct Cell {
    double x, y;
    const char* label;
  };
  // Log-scale anchors for the catalog rows (<<1, ~1, >>1, >>>1) and columns.
  const double x = std::log10(std::clamp(rep.ej_over_ec, 1e-3, 1e6));
  const Cell* best = nullptr;
  double best_d2 = 0.0;
  const auto consider = [&](const Cell& c, double y) {
    const double dx = x - c.x, dy = y - c.y;
    const double d2 = dx * dx + dy * dy;
    if (!best || d2 < best_d2) {
      best = &c;
      best_d2 = d2;
    }
  };
  if (spec.el == 0.0) {
    static constexpr Cell kColumnZero[] = {
        {-1.0, 0.0, "cooper-pair box"}, {0.0, 0.0, "quantronium"}, {1.7, 0.0, "transmon"}};
    for (const Cell& c : kColumnZero) consider(c, 0.0);
  } else {
    const double ratio = spec.ej > spec.el
                             ? spec.el / (spec.ej - spec.el)
                             : std::numeric_limits<double>::infinity();
    rep.el_ratio = ratio;
    const double y = std::log10(std::clamp(ratio, 1e-3, 1e3));
    static constexpr Cell kShunted[] = {
        {0.0, -1.0, "fluxonium"}, {1.7, 1.0, "flux qubit"}, {4.0, 0.0, "phase qubit"}};
    for (const Cell& c : kShunted) consider(c, y);
  }
  rep.label = best->label;
  return rep;
}

namespace {

struct WellCoeffs {
  double phi_min, c2, c3, c4;
};

// U(phi) = -es cos(u - phi) - 2 eb cos(phi/2); Taylor about the global well.
WellCoeffs analyze_well(double es, double eb, double u) {
  const auto upot = [&](double p) { return -es * std::cos(u - p) - 2.0 * eb * std::cos(p / 2.0); };
  const auto du1 = [&](double p) { return -es * std::sin(u - p) + eb * std::sin(p / 2.0); };
  const auto du2 = [&](double p) { return es * std::cos(u - p) + 0.5 * eb * std::cos(p / 2.0); };
  double best = -2.0 * pi, best_v = upot(best);
  for (int i = 1; i < 800; ++i) {
    const double p = -2.0 * pi + 4.0 * pi * i / 800.0;
    if (upot(p) < best_v) {
      best_v = upot(p);
      best = p;
    }
  }
  double p = best;
  for (int it = 0; it < 60; ++it) {
    const double curv = du2(p);
    if (curv <= 0.0) break;
    const double step = du1(p) / curv;
    p -= step;
    if (std::abs(step) < 1e-14) break;
  }
  WellCoeffs w;
  w.phi_min = p;
  w.c2 = (es * std::cos(u - p) + 0.5 * eb * std::cos(p / 2.0)) / 2.0;
  w.c3 = (es * std::sin(u - p) - 0.25 * eb * std::sin(p / 2.0)) / 6.0;
  w.c4 = (-es * std::cos(u - p) - 0.125 * eb * std::cos(p / 2.0)) / 24.0;
  return w;
}

} // namespace

std::optional<ThreeWaveMixingPoint> three_wave_mixing_search(double ej_small, double ej_big) {
  require_positive(ej_small, "ej_small");
  require_positive(ej_big, "ej_big");
  const int n = 400;
  WellCoeffs prev = analyze_well(ej_small, ej_big, 0.0);
  for (int i = 1; i <= n; ++i) {
    const double u = 2.0 * pi * i / n;
    const WellCoeffs cur = analyze_well(ej_small, ej_big, u);
    if (prev.c4 * cur.c4 < 0.0) {
      double lo = 2.0 * pi * (i - 1) / n, hi = u, f_lo = prev.c4;
      for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = analyze_well(ej_small, ej_big, mid).c4;
        if (f_lo * f_mid <= 0.0) {
          hi = mid;
        } else {
          lo = mid;
          f_lo = f_mid;
        }
      }
      const double u_star = 0.5 * (lo + hi);
      const WellCoeffs w = analyze_well(ej_small, ej_big, u_star);
      if (w.c2 > 0.0 && std::abs(w.c3) > 1e-6 * (ej_small + ej_big))
        return ThreeWaveMixingPoint{u_star, w.phi_min, w.c2, w.c3, w.c4};
    }
    prev = cur;
  }
  return std::nullopt;
}

AtomSpec atom_spec_from_graph(const CircuitGraph& g) {
  const auto report = validate(g);
  if (!report.ok()) throw std::invalid_argument("invalid circuit: " + report.to_string());
  const auto islands = g.non_ground_nodes();
  if (islands.size() != 1)
    throw std::invalid_argument("atom extraction requires a single non-ground node");
  const std::string& island = islands.front();

  const auto mats = build_matrices(g); // junctions kept nonlinear
  const auto model = build_hamiltonian(g, mats.tree);
  AtomSpec spec;
  spec.ec = e_charge * e_charge / (2.0 * mats.cap(0, 0));
  spec.el = phi0_reduced * phi0_reduced * mats.inv_ind(0, 0);
  spec.n_g = model.offset_charges(0) / (2.0 * e_charge);

  std::vector<const Branch*> juncs;
  for (const auto& b : g.branches)
    if (b.kind == ElementKind::josephson) juncs.push_back(&b);
  if (juncs.size() > 2)
    throw std::invalid_argument("atom extraction supports at most two junctions");
  // Orient each junction island -> ground; cos is even, so flipping a branch
  // just flips the sign of its flux offset.
  const auto oriented_offset = [&](const Branch* b) {
    return (b->node_a == island ? 1.0 : -1.0) * b->offset;
  };
  if (juncs.size() == 1) {
    spec.ej = juncs[0]->value;
    spec.phi_ext = -oriented_offset(juncs[0]) / phi0_reduced;
  } else if (juncs.size() == 2) {
    const double o1 = oriented_offset(juncs[0]);
    const double o2 = oriented_offset(juncs[1]);
    const auto red = squid_reduce(juncs[0]->value, juncs[1]->value, o1 - o2);
    spec.ej = red.ej_eff;
    spec.phi_ext = red.phase_offset - (o1 + o2) / (2.0 * phi0_reduced);
  }
  return spec;
}

} // namespace cqt
