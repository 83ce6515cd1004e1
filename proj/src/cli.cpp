#include "cqt/cli.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"

#include "cqt/atoms.hpp"
#include "cqt/bath.hpp"
#include "cqt/constants.hpp"
#include "cqt/errors.hpp"
#include "cqt/hamlag.hpp"
#include "cqt/inout.hpp"
#include "cqt/netlist.hpp"

namespace cqt {

namespace {

std::string fmt12(double v) {
  if (v == 0.0) v = 0.0; // normalize -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// Minimal ordered JSON writer; emitted keys and node names are plain
// identifiers, so no string escaping is needed.
class JsonWriter {
 public:
  explicit JsonWriter(std::ostream& os) : os_(os) {}
  void begin_object() { prefix(); os_ << '{'; first_.push_back(true); }
  void end_object() { os_ << '}'; first_.pop_back(); }
  void begin_array() { prefix(); os_ << '['; first_.push_back(true); }
  void end_array() { os_ << ']'; first_.pop_back(); }
  void key(std::string_view k) {
    item_sep();
    os_ << '"' << k << "\":";
    pending_value_ = true;
  }
  void number(double v) { prefix(); os_ << fmt12(v); }
  void integer(long v) { prefix(); os_ << v; }
  void string(std::string_view s) { prefix(); os_ << '"' << s << '"'; }
  void boolean(bool b) { prefix(); os_ << (b ? "true" : "false"); }
  void null() { prefix(); os_ << "null"; }

 private:
  void item_sep() {
    if (!first_.empty()) {
      if (!first_.back()) os_ << ',';
      first_.back() = false;
    }
  }
  void prefix() {
    if (pending_value_) {
      pending_value_ = false;
      return;
    }
    item_sep();
  }
  std::ostream& os_;
  std::vector<bool> first_;
  bool pending_value_ = false;
};

void write_matrix(JsonWriter& j, const Eigen::MatrixXd& m) {
  j.begin_array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    j.begin_array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) j.number(m(r, c));
    j.end_array();
  }
  j.end_array();
}

void write_vector(JsonWriter& j, const Eigen::VectorXd& v) {
  j.begin_array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.number(v(i));
  j.end_array();
}

CircuitGraph load_graph(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot open netlist file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  auto g = parse_netlist(ss.str());
  const auto report = validate(g);
  if (!report.ok()) throw std::invalid_argument(report.to_string());
  return g;
}

// Sink selection: -o writes a file, otherwise the provided stream.
class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) {
    if (path.empty()) {
      os_ = &fallback;
    } else {
      file_.open(path);
      if (!file_) throw std::invalid_argument("cannot open output file: " + path);
      os_ = &file_;
    }
  }
  std::ostream& stream() { return *os_; }

 private:
  std::ofstream file_;
  std::ostream* os_ = nullptr;
};

double quantity(const std::string& text, const char* what) {
  try {
    return parse_suffixed_number(text);
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string("cannot parse ") + what + ": " + text);
  }
}

void write_csv_row(std::ostream& os, const std::vector<double>& row) {
  for (size_t i = 0; i < row.size(); ++i) {
    if (i) os << ',';
    os << fmt12(row[i]);
  }
  os << '\n';
}

// ---------------------------------------------------------------- quantize

int cmd_quantize(const std::string& net_path, const std::string& out_path,
                 std::ostream& fallback) {
  const auto g = load_graph(net_path);
  const auto mats = build_matrices(g);
  const auto model = build_hamiltonian(g, mats.tree);
  const auto lin = build_matrices(g, true); // junctions as small-signal inductors
  const auto modes = normal_modes(lin);

  Output sink(out_path, fallback);
  JsonWriter j(sink.stream());
  j.begin_object();
  j.key("ground");
  j.string(g.ground);
  j.key("nodes");
  j.begin_array();
  for (const auto& n : model.node_order) j.string(n);
  j.end_array();
  j.key("cap_farad");
  write_matrix(j, mats.cap);
  j.key("inv_ind_per_henry");
  write_matrix(j, mats.inv_ind);
  j.key("inv_cap_per_farad");
  write_matrix(j, model.inv_cap);
  j.key("linear_flux_ampere");
  write_vector(j, model.linear_flux);
  j.key("offset_charges_coulomb");
  write_vector(j, model.offset_charges);
  j.key("constant_joule");
  j.number(model.constant);
  j.key("josephson");
  j.begin_array();
  for (const auto& term : model.josephson_terms) {
    j.begin_object();
    j.key("branch");
    j.string(term.branch);
    j.key("ej_hz");
    j.number(term.ej / h_planck);
    j.key("offset_weber");
    j.number(term.offset);
    j.key("incidence");
    write_vector(j, term.incidence);
    j.end_object();
  }
  j.end_array();
  j.key("modes");
  j.begin_array();
  for (Eigen::Index m = 0; m < modes.frequencies.size(); ++m) {
    Eigen::VectorXd v = modes.mode_vectors.col(m);
    // Deterministic sign: largest-magnitude component positive.
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    if (v(imax) < 0.0) v = -v;
    const double omega = modes.frequencies(m);
    j.begin_object();
    j.key("f_hz");
    j.number(omega / (2.0 * pi));
    j.key("vector_per_sqrt_farad");
    write_vector(j, v);
    j.key("impedance_ohm");
    if (omega > 0.0) {
      // v_n^2 / omega is the mode impedance seen from node n.
      j.begin_array();
      for (Eigen::Index n = 0; n < v.size(); ++n) j.number(v(n) * v(n) / omega);
      j.end_array();
    } else {
      j.null();
    }
    j.end_object();
  }
  j.end_array();
  j.end_object();
  sink.stream() << '\n';
  return 0;
}

// ---------------------------------------------------------------- spectrum

struct BuiltSpectrum {
  OperatorMatrix op;
  int size = 0;
};

BuiltSpectrum build_escalated(const AtomSpec& spec, std::optional<int> pinned) {
  const bool charge = spec.el == 0.0;
  int size = pinned.value_or(charge ? 30 : 60);
  for (;;) {
    auto op = charge ? charge_basis_hamiltonian(spec, size) : fock_basis_hamiltonian(spec, size);
    if (op.converged || pinned) return {std::move(op), size};
    size += size / 2;
    if (size > 2000) throw NumericsError("spectrum not converged at any tractable truncation");
  }
}

void write_atom_block(JsonWriter& j, const AtomSpec& spec) {
  j.key("atom");
  j.begin_object();
  j.key("ec_hz");
  j.number(spec.ec / h_planck);
  j.key("ej_hz");
  j.number(spec.ej / h_planck);
  j.key("el_hz");
  j.number(spec.el / h_planck);
  j.key("n_g");
  j.number(spec.n_g);
  j.key("phi_ext_rad");
  j.number(spec.phi_ext);
  j.end_object();
}

int cmd_spectrum(const std::string& net_path, int levels, std::optional<int> n_cut,
                 std::optional<int> n_max, const std::string& out_path,
                 std::ostream& fallback) {
  const auto g = load_graph(net_path);
  const auto spec = atom_spec_from_graph(g);
  const bool charge = spec.el == 0.0;
  if (charge && n_max)
    throw std::invalid_argument("--n-max applies to the Fock basis; this atom has no inductor");
  if (!charge && n_cut)
    throw std::invalid_argument("--n-cut applies to the charge basis; this atom has an inductor");
  const auto built = build_escalated(spec, charge ? n_cut : n_max);
  const int dim = static_cast<int>(built.op.data.rows());
  if (levels < 1 || levels > dim)
    throw std::invalid_argument("--levels must be in [1, basis dimension]");
  const auto e = spectrum(built.op, levels);
  const auto regime = classify_regime(spec);

  Output sink(out_path, fallback);
  JsonWriter j(sink.stream());
  j.begin_object();
  write_atom_block(j, spec);
  j.key("basis");
  j.begin_object();
  if (charge) {
    j.key("kind");
    j.string("charge");
    j.key("n_cut");
    j.integer(built.size);
  } else {
    j.key("kind");
    j.string("fock");
    j.key("n_max");
    j.integer(built.size);
    j.key("z_char_ohm");
    j.number(std::get<FockBasis>(built.op.basis).z_char);
  }
  j.end_object();
  j.key("converged");
  j.boolean(built.op.converged);
  j.key("levels_hz");
  j.begin_array();
  for (const double v : e) j.number(v / h_planck);
  j.end_array();
  j.key("transitions_hz");
  j.begin_array();
  for (size_t i = 1; i < e.size(); ++i) j.number((e[i] - e[i - 1]) / h_planck);
  j.end_array();
  j.key("regime");
  j.begin_object();
  j.key("ej_over_ec");
  j.number(regime.ej_over_ec);
  j.key("el_ratio");
  if (regime.el_ratio && std::isfinite(*regime.el_ratio))
    j.number(*regime.el_ratio);
  else
    j.null();
  j.key("label");
  j.string(regime.label);
  j.end_object();
  j.end_object();
  sink.stream() << '\n';
  return 0;
}

// ------------------------------------------------------------------- sweep

int cmd_sweep(const std::string& net_path, const std::string& param, double from, double to,
              int points, int levels, const std::string& out_path, std::ostream& fallback) {
  const auto g = load_graph(net_path);
  const AtomSpec base = atom_spec_from_graph(g);
  const AtomParameter p =
      param == "phi_ext" ? AtomParameter::phi_ext : AtomParameter::n_g;
  if (points < 1) throw std::invalid_argument("--points must be >= 1");
  if (levels < 2) throw std::invalid_argument("--levels must be >= 2");

  Output sink(out_path, fallback);
  std::ostream& os = sink.stream();
  os << "param_value";
  for (int i = 0; i < levels; ++i) os << ",E" << i << "_hz";
  os << ",d_omega_ge_dparam_hz\n";

  for (int i = 0; i < points; ++i) {
    const double value =
        points == 1 ? from : from + (to - from) * i / double(points - 1);
    AtomSpec spec = base;
    (p == AtomParameter::phi_ext ? spec.phi_ext : spec.n_g) = value;
    const auto built = build_escalated(spec, std::nullopt);
    if (levels > static_cast<int>(built.op.data.rows()))
      throw std::invalid_argument("--levels exceeds the basis dimension");
    const auto e = spectrum(built.op, levels);
    const double sens = sensitivity(spec, p, {0, 1}) / (2.0 * pi);
    std::vector<double> row;
    row.push_back(value);
    for (const double v : e) row.push_back(v / h_planck);
    row.push_back(sens);
    write_csv_row(os, row);
  }
  return 0;
}

// -------------------------------------------------------------------- bath

int cmd_bath(double r, double wc, double delta_omega, double omega_max,
             const std::string& out_path, std::ostream& fallback) {
  const auto y = ohmic_admittance(r, wc);
  const auto b = discretize(y, delta_omega, omega_max);

  Output sink(out_path, fallback);
  JsonWriter j(sink.stream());
  j.begin_object();
  j.key("delta_omega_rad_s");
  j.number(b.delta_omega);
  j.key("omega_max_rad_s");
  j.number(omega_max);
  j.key("l0_henry");
  if (b.l0)
    j.number(*b.l0);
  else
    j.null();
  j.key("oscillators");
  j.begin_array();
  for (const auto& o : b.oscillators) {
    j.begin_object();
    j.key("f_hz");
    j.number(o.omega_m / (2.0 * pi));
    j.key("y_m_siemens");
    j.number(o.y_m);
    j.key("c_farad");
    j.number(o.c_m);
    j.key("l_henry");
    j.number(o.l_m);
    j.end_object();
  }
  j.end_array();
  j.end_object();
  sink.stream() << '\n';
  return 0;
}

// --------------------------------------------------------------------- fdt

int cmd_fdt(double r, double wc, double t_kelvin, double from, double to, int points,
            const std::string& out_path, std::ostream& fallback) {
  if (points < 1) throw std::invalid_argument("--points must be >= 1");
  const auto z = impedance_of(ohmic_admittance(r, wc));

  Output sink(out_path, fallback);
  std::ostream& os = sink.stream();
  os << "omega_rad_s,re_z_ohm,s_vv,s_phiphi\n";
  for (int i = 0; i < points; ++i) {
    const double omega =
        points == 1 ? from : from + (to - from) * i / double(points - 1);
    const auto psd = quantum_psd(z, t_kelvin, omega);
    write_csv_row(os, {omega, z(omega).real(), psd.s_vv, psd.s_phiphi});
  }
  return 0;
}

// ---------------------------------------------------------------- variance

int cmd_variance(double l, double c, double r, double t_kelvin, double wc_ratio,
                 const std::string& out_path, std::ostream& fallback) {
  const double omega0 = 1.0 / std::sqrt(l * c);
  const double omega_c = wc_ratio * omega0;
  const auto closed = damped_lc_variance_closed(l, c, r, omega_c, t_kelvin);
  const auto quad = damped_lc_variance_quadrature(l, c, r, omega_c, t_kelvin);

  Output sink(out_path, fallback);
  std::ostream& os = sink.stream();
  os << "theta,kappa,phi2_closed_wb2,q2_closed_c2,phi2_quadrature_wb2,q2_quadrature_c2\n";
  write_csv_row(os, {closed.params.theta, closed.params.kappa, closed.phi2, closed.q2,
                     quad.phi2, quad.q2});
  return 0;
}

// ----------------------------------------------------------------- scatter

int cmd_scatter(double omega_a, double gamma_a, int zeta, double z_a, double amp_re,
                double amp_im, double from, double to, int points,
                const std::string& out_path, std::ostream& fallback) {
  if (points < 1) throw std::invalid_argument("--points must be >= 1");
  CavityParams cav;
  cav.omega_a = omega_a;
  cav.gamma_a = gamma_a;
  cav.zeta = zeta;
  cav.z_a = z_a;
  const std::complex<double> a_in(amp_re, amp_im);

  Output sink(out_path, fallback);
  std::ostream& os = sink.stream();
  os << "detuning_rad_s,re_a,im_a,re_aout,im_aout\n";
  for (int i = 0; i < points; ++i) {
    const double detuning =
        points == 1 ? from : from + (to - from) * i / double(points - 1);
    DriveSpec drive;
    drive.amplitude = a_in;
    drive.omega_d = omega_a + detuning;
    const auto a = steady_state(cav, drive);
    const auto a_out = input_output(a_in, a, cav);
    write_csv_row(os, {detuning, a.real(), a.imag(), a_out.real(), a_out.imag()});
  }
  return 0;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"circuit quantization toolkit: netlists to Hamiltonians, spectra and noise"};
  app.name("cqt");
  app.require_subcommand(1);

  unsigned long long seed = 0;
  app.add_option("--seed", seed,
                 "reserved for future stochastic operations; currently unused");

  // quantize
  std::string q_net, q_out;
  auto* quantize = app.add_subcommand(
      "quantize", "netlist -> Hamiltonian coefficients and normal modes (JSON)");
  quantize->add_option("netlist", q_net, "netlist file")->required();
  quantize->add_option("-o,--output", q_out, "write to a file instead of stdout");

  // spectrum
  std::string sp_net, sp_out;
  int sp_levels = 4;
  std::optional<int> sp_ncut, sp_nmax;
  auto* spectrum_cmd = app.add_subcommand(
      "spectrum", "single-island netlist -> atom energy levels (JSON, Hz)");
  spectrum_cmd->add_option("netlist", sp_net, "netlist file")->required();
  spectrum_cmd->add_option("--levels", sp_levels, "number of levels to report (default 4)");
  spectrum_cmd->add_option("--n-cut", sp_ncut,
                           "pin the charge-basis cutoff (disables auto-escalation)");
  spectrum_cmd->add_option("--n-max", sp_nmax,
                           "pin the Fock-basis size (disables auto-escalation)");
  spectrum_cmd->add_option("-o,--output", sp_out, "write to a file instead of stdout");

  // sweep
  std::string sw_net, sw_param, sw_out;
  double sw_from = 0.0, sw_to = 0.0;
  int sw_points = 0, sw_levels = 3;
  auto* sweep = app.add_subcommand(
      "sweep", "sweep phi_ext or n_g of a single-island netlist (CSV)");
  sweep->add_option("netlist", sw_net, "netlist file")->required();
  sweep->add_option("--param", sw_param, "swept parameter")
      ->required()
      ->check(CLI::IsMember({"phi_ext", "n_g"}));
  sweep->add_option("--from", sw_from, "first parameter value")->required();
  sweep->add_option("--to", sw_to, "last parameter value")->required();
  sweep->add_option("--points", sw_points, "grid size")->required();
  sweep->add_option("--levels", sw_levels, "energy columns (default 3)");
  sweep->add_option("-o,--output", sw_out, "write to a file instead of stdout");

  // bath
  std::string b_r, b_wc, b_dw, b_wmax, b_out;
  auto* bath = app.add_subcommand(
      "bath", "Caldeira-Leggett comb of an ohmic admittance (JSON)");
  bath->add_option("--R", b_r, "resistance, ohm")->required();
  bath->add_option("--wc", b_wc, "Drude cutoff, rad/s (default: none)");
  bath->add_option("--delta-omega", b_dw, "comb spacing, rad/s")->required();
  bath->add_option("--omega-max", b_wmax, "comb extent, rad/s")->required();
  bath->add_option("-o,--output", b_out, "write to a file instead of stdout");

  // fdt
  std::string f_r, f_wc, f_t, f_from, f_to, f_out;
  int f_points = 0;
  auto* fdt = app.add_subcommand(
      "fdt", "quantum voltage/flux spectral densities of an ohmic impedance (CSV)");
  fdt->add_option("--R", f_r, "resistance, ohm")->required();
  fdt->add_option("--wc", f_wc, "Drude cutoff, rad/s (default: none)");
  fdt->add_option("--T", f_t, "temperature, kelvin")->required();
  fdt->add_option("--from", f_from, "first angular frequency, rad/s")->required();
  fdt->add_option("--to", f_to, "last angular frequency, rad/s")->required();
  fdt->add_option("--points", f_points, "grid size")->required();
  fdt->add_option("-o,--output", f_out, "write to a file instead of stdout");

  // variance
  std::string v_l, v_c, v_r, v_t, v_ratio, v_out;
  auto* variance = app.add_subcommand(
      "variance", "damped-LC flux/charge variances, closed form vs quadrature (CSV)");
  variance->add_option("--L", v_l, "inductance, henry")->required();
  variance->add_option("--C", v_c, "capacitance, farad")->required();
  variance->add_option("--R", v_r, "shunt resistance, ohm")->required();
  variance->add_option("--T", v_t, "temperature, kelvin")->required();
  variance->add_option("--wc-ratio", v_ratio, "omega_c / omega_0")->required();
  variance->add_option("-o,--output", v_out, "write to a file instead of stdout");

  // scatter
  std::string sc_wa, sc_ga, sc_za, sc_from, sc_to, sc_out;
  int sc_zeta = 1, sc_points = 0;
  double sc_amp_re = 1.0, sc_amp_im = 0.0;
  auto* scatter = app.add_subcommand(
      "scatter", "driven-cavity reflection across a detuning grid (CSV)");
  scatter->add_option("--omega-a", sc_wa, "cavity frequency, rad/s")->required();
  scatter->add_option("--gamma-a", sc_ga, "energy decay rate, 1/s")->required();
  scatter->add_option("--zeta", sc_zeta, "damping type +1 series / -1 parallel");
  scatter->add_option("--z-a", sc_za, "characteristic impedance, ohm (default 50)");
  scatter->add_option("--amp-re", sc_amp_re, "drive amplitude, real part");
  scatter->add_option("--amp-im", sc_amp_im, "drive amplitude, imaginary part");
  scatter->add_option("--from", sc_from, "first detuning, rad/s")->required();
  scatter->add_option("--to", sc_to, "last detuning, rad/s")->required();
  scatter->add_option("--points", sc_points, "grid size")->required();
  scatter->add_option("-o,--output", sc_out, "write to a file instead of stdout");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const CLI::App* target = &app;
    while (!target->get_subcommands().empty()) target = target->get_subcommands().front();
    out << target->help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return 1;
  }

  try {
    if (quantize->parsed()) return cmd_quantize(q_net, q_out, out);
    if (spectrum_cmd->parsed())
      return cmd_spectrum(sp_net, sp_levels, sp_ncut, sp_nmax, sp_out, out);
    if (sweep->parsed())
      return cmd_sweep(sw_net, sw_param, sw_from, sw_to, sw_points, sw_levels, sw_out, out);
    if (bath->parsed())
      return cmd_bath(quantity(b_r, "--R"),
                      b_wc.empty() ? std::numeric_limits<double>::infinity()
                                   : quantity(b_wc, "--wc"),
                      quantity(b_dw, "--delta-omega"), quantity(b_wmax, "--omega-max"),
                      b_out, out);
    if (fdt->parsed())
      return cmd_fdt(quantity(f_r, "--R"),
                     f_wc.empty() ? std::numeric_limits<double>::infinity()
                                  : quantity(f_wc, "--wc"),
                     quantity(f_t, "--T"), quantity(f_from, "--from"),
                     quantity(f_to, "--to"), f_points, f_out, out);
    if (variance->parsed())
      return cmd_variance(quantity(v_l, "--L"), quantity(v_c, "--C"), quantity(v_r, "--R"),
                          quantity(v_t, "--T"), quantity(v_ratio, "--wc-ratio"), v_out, out);
    if (scatter->parsed())
      return cmd_scatter(quantity(sc_wa, "--omega-a"), quantity(sc_ga, "--gamma-a"), sc_zeta,
                         sc_za.empty() ? 50.0 : quantity(sc_za, "--z-a"), sc_amp_re,
                         sc_amp_im, quantity(sc_from, "--from"), quantity(sc_to, "--to"),
                         sc_points, sc_out, out);
  } catch (const NumericsError& e) {
    err << "numerical error: " << e.what() << '\n';
    return 3;
  } catch (const cqt::ParseError& e) {
    err << "netlist error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

} // namespace cqt
