#include "cqt/hamlag.hpp"

#include <cmath>
#include <map>

#include "cqt/constants.hpp"
#include "cqt/errors.hpp"

namespace cqt {

namespace {

std::map<std::string, int> index_map(const std::vector<std::string>& order) {
  std::map<std::string, int> idx;
  for (int i = 0; i < static_cast<int>(order.size()); ++i) idx[order[i]] = i;
  return idx;
}

// Stamp a two-terminal quadratic coefficient into the reduced matrix.
void stamp(Eigen::MatrixXd& m, int ia, int ib, double value) {
  if (ia >= 0) m(ia, ia) += value;
  if (ib >= 0) m(ib, ib) += value;
  if (ia >= 0 && ib >= 0) {
    m(ia, ib) -= value;
    m(ib, ia) -= value;
  }
}

void require_valid(const CircuitGraph& g, const char* who) {
  const ValidationReport report = validate(g);
  if (!report.ok())
    throw std::invalid_argument(std::string(who) + ": graph failed validation:\n" +
                                report.to_string());
}

// omega_max of the linearized model via the similarity trick: the eigenvalues
// of L^T A L, inv_cap = L L^T, equal those of inv_cap * A.
double max_mode_frequency(const HamiltonianModel& m) {
  const int n = m.dof();
  Eigen::MatrixXd a = m.quad_flux;
  for (const JosephsonTerm& j : m.josephson_terms)
    a += (j.ej / (phi0_reduced * phi0_reduced)) * j.incidence * j.incidence.transpose();
  const Eigen::MatrixXd l = Eigen::LLT<Eigen::MatrixXd>(m.inv_cap).matrixL();
  const Eigen::MatrixXd sym = l.transpose() * a * l;
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sym).eigenvalues();
  const double top = ev(n - 1);
  return top > 0.0 ? std::sqrt(top) : 0.0;
}

} // namespace

double HamiltonianModel::kinetic(const Eigen::VectorXd& q) const {
  const Eigen::VectorXd dq = q - offset_charges;
  return 0.5 * dq.dot(inv_cap * dq);
}

double HamiltonianModel::potential(const Eigen::VectorXd& phi) const {
  double u = 0.5 * phi.dot(quad_flux * phi) + linear_flux.dot(phi) + constant;
  for (const JosephsonTerm& j : josephson_terms)
    u -= j.ej * std::cos((j.incidence.dot(phi) + j.offset) / phi0_reduced);
  return u;
}

double HamiltonianModel::energy(const Eigen::VectorXd& phi, const Eigen::VectorXd& q) const {
  return kinetic(q) + potential(phi);
}

Eigen::VectorXd HamiltonianModel::flux_velocity(const Eigen::VectorXd& q) const {
  return inv_cap * (q - offset_charges);
}

Eigen::VectorXd HamiltonianModel::potential_gradient(const Eigen::VectorXd& phi) const {
  Eigen::VectorXd grad = quad_flux * phi + linear_flux;
  for (const JosephsonTerm& j : josephson_terms)
    grad += (j.ej / phi0_reduced) * std::sin((j.incidence.dot(phi) + j.offset) / phi0_reduced) *
            j.incidence;
  return grad;
}

CircuitMatrices build_matrices(const CircuitGraph& g, bool linearize_josephson) {
  require_valid(g, "build_matrices");
  CircuitMatrices out;
  out.node_order = g.non_ground_nodes();
  out.tree = spanning_tree(g);
  const int n = static_cast<int>(out.node_order.size());
  out.cap = Eigen::MatrixXd::Zero(n, n);
  out.inv_ind = Eigen::MatrixXd::Zero(n, n);
  const auto idx = index_map(out.node_order);
  auto of = [&](const std::string& node) {
    const auto it = idx.find(node);
    return it == idx.end() ? -1 : it->second;
  };
  for (const Branch& b : g.branches) {
    const int ia = of(b.node_a), ib = of(b.node_b);
    switch (b.kind) {
      case ElementKind::capacitor: stamp(out.cap, ia, ib, b.value); break;
      case ElementKind::inductor: stamp(out.inv_ind, ia, ib, 1.0 / b.value); break;
      case ElementKind::josephson:
        if (linearize_josephson) // L_J = phi0^2 / E_J
          stamp(out.inv_ind, ia, ib, b.value / (phi0_reduced * phi0_reduced));
        break;
    }
  }
  return out;
}

HamiltonianModel build_hamiltonian(const CircuitGraph& g, const SpanningTree& tree) {
  require_valid(g, "build_hamiltonian");
  if (tree.tree_branches.size() + 1 != g.nodes.size())
    throw std::invalid_argument("build_hamiltonian: tree does not span the graph");

  const CircuitMatrices mats = build_matrices(g);
  const int n = static_cast<int>(mats.node_order.size());

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mats.cap);
  const double lo = es.eigenvalues()(0), hi = es.eigenvalues()(n - 1);
  if (!(lo > 0.0) || hi / lo > 1e12)
    throw NumericsError("build_hamiltonian: capacitance matrix ill-conditioned (cond > 1e12)");

  HamiltonianModel m;
  m.node_order = mats.node_order;
  m.quad_flux = mats.inv_ind;
  m.inv_cap = mats.cap.llt().solve(Eigen::MatrixXd::Identity(n, n));
  m.inv_cap = 0.5 * (m.inv_cap + m.inv_cap.transpose().eval()); // symmetrize roundoff
  m.linear_flux = Eigen::VectorXd::Zero(n);
  m.offset_charges = Eigen::VectorXd::Zero(n);

  const auto idx = index_map(m.node_order);
  auto of = [&](const std::string& node) {
    const auto it = idx.find(node);
    return it == idx.end() ? -1 : it->second;
  };
  for (const Branch& b : g.branches) {
    const int ia = of(b.node_a), ib = of(b.node_b);
    switch (b.kind) {
      case ElementKind::capacitor:
        if (ia >= 0) m.offset_charges(ia) += b.offset;
        if (ib >= 0) m.offset_charges(ib) -= b.offset;
        break;
      case ElementKind::inductor:
        if (b.offset != 0.0) {
          if (ia >= 0) m.linear_flux(ia) += b.offset / b.value;
          if (ib >= 0) m.linear_flux(ib) -= b.offset / b.value;
          m.constant += b.offset * b.offset / (2.0 * b.value);
        }
        break;
      case ElementKind::josephson: {
        JosephsonTerm j;
        j.branch = b.name;
        j.ej = b.value;
        j.offset = b.offset;
        j.incidence = Eigen::VectorXd::Zero(n);
        if (ia >= 0) j.incidence(ia) = 1.0;
        if (ib >= 0) j.incidence(ib) = -1.0;
        m.josephson_terms.push_back(std::move(j));
        break;
      }
    }
  }
  return m;
}

NormalModes normal_modes(const CircuitMatrices& mats) {
  const int n = static_cast<int>(mats.node_order.size());
  NormalModes out;
  const Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(mats.inv_ind, mats.cap);
  if (es.info() != Eigen::Success)
    throw NumericsError("normal_modes: generalized eigensolve failed");
  out.mode_vectors = es.eigenvectors(); // B-orthonormal: v^T cap v = 1
  out.frequencies = Eigen::VectorXd::Zero(n);
  const double top = es.eigenvalues()(n - 1);
  const double tol = 1e-12 * std::max(top, 0.0);
  out.count = 0;
  for (int i = 0; i < n; ++i) {
    const double ev = es.eigenvalues()(i);
    if (ev > tol) {
      out.frequencies(i) = std::sqrt(ev);
      ++out.count;
    }
  }
  return out;
}

Trajectory simulate_classical(const HamiltonianModel& model, const Eigen::VectorXd& phi0,
                              const Eigen::VectorXd& q0, double dt, int steps,
                              int record_every) {
  if (dt <= 0.0 || steps < 1 || record_every < 1)
    throw std::invalid_argument("simulate_classical: dt, steps, record_every must be positive");
  const double omega_max = max_mode_frequency(model);
  if (dt * omega_max >= 0.1)
    throw std::invalid_argument("simulate_classical: dt * omega_max >= 0.1; reduce the step");

  Trajectory traj;
  Eigen::VectorXd phi = phi0, q = q0;
  const double e0 = model.energy(phi, q);
  const double escale = e0 != 0.0 ? std::abs(e0) : 1.0;
  auto record = [&](double t) {
    traj.t.push_back(t);
    traj.phi.push_back(phi);
    traj.q.push_back(q);
    const double e = model.energy(phi, q);
    traj.energy.push_back(e);
    traj.energy_drift = std::max(traj.energy_drift, std::abs(e - e0) / escale);
  };
  record(0.0);
  for (int k = 1; k <= steps; ++k) {
    q -= 0.5 * dt * model.potential_gradient(phi); // kick
    phi += dt * model.flux_velocity(q);            // drift
    q -= 0.5 * dt * model.potential_gradient(phi); // kick
    if (k % record_every == 0 || k == steps) record(k * dt);
  }
  const double periods = steps * dt * omega_max / (2.0 * pi);
  if (traj.energy_drift > 1e-6 * std::max(1.0, periods))
    throw NumericsError("simulate_classical: energy drift " + std::to_string(traj.energy_drift) +
                        " exceeds 1e-6 per period; reduce dt");
  return traj;
}

} // namespace cqt
