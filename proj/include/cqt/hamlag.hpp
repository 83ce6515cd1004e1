#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cqt/netlist.hpp"

// Method-of-nodes assembly: node fluxes are the positions, node charges the
// conjugate momenta, with the gauge fixed by the capacitive spanning tree.
// All matrices live on the non-ground nodes in lexicographic order; the
// ground row/column of the full P x P forms (which have zero row sums) is
// eliminated.

namespace cqt {

struct CircuitMatrices {
  std::vector<std::string> node_order; // non-ground nodes, lexicographic
  Eigen::MatrixXd cap;                 // farad, symmetric positive definite
  Eigen::MatrixXd inv_ind;             // 1/henry, symmetric positive semidefinite
  SpanningTree tree;                   // capacitive gauge tree
};

// One Josephson branch: potential -ej * cos((incidence . phi + offset)/phi0).
struct JosephsonTerm {
  std::string branch;
  double ej = 0.0;           // J
  Eigen::VectorXd incidence; // +1 at node_a, -1 at node_b, 0 elsewhere
  double offset = 0.0;       // Wb
};

// H(phi, q) = 1/2 (q - q_off)^T inv_cap (q - q_off) + 1/2 phi^T quad_flux phi
//           + linear_flux . phi - sum_J ej cos((incidence . phi + offset)/phi0)
//           + constant
struct HamiltonianModel {
  std::vector<std::string> node_order;
  Eigen::MatrixXd inv_cap;               // 1/farad
  Eigen::MatrixXd quad_flux;             // 1/henry (= inv_ind)
  Eigen::VectorXd linear_flux;           // ampere, from inductor flux offsets
  std::vector<JosephsonTerm> josephson_terms;
  Eigen::VectorXd offset_charges;        // coulomb, from capacitor charge offsets
  double constant = 0.0;                 // J, sum of offset^2/2L

  int dof() const { return static_cast<int>(node_order.size()); }
  double kinetic(const Eigen::VectorXd& q) const;
  double potential(const Eigen::VectorXd& phi) const;
  double energy(const Eigen::VectorXd& phi, const Eigen::VectorXd& q) const;
  // Hamilton's equations: dphi/dt = dH/dq, dq/dt = -dH/dphi.
  Eigen::VectorXd flux_velocity(const Eigen::VectorXd& q) const;
  Eigen::VectorXd potential_gradient(const Eigen::VectorXd& phi) const;
};

struct NormalModes {
  Eigen::VectorXd frequencies;  // rad/s, ascending; zero modes reported as 0
  Eigen::MatrixXd mode_vectors; // columns, cap-orthonormal (v^T C v = 1)
  int count = 0;                // modes above the zero tolerance
};

struct Trajectory {
  std::vector<double> t;
  std::vector<Eigen::VectorXd> phi;
  std::vector<Eigen::VectorXd> q;
  std::vector<double> energy;
  double energy_drift = 0.0; // max |E - E0| / |E0|
};

// Stamp the reduced matrices.  With linearize_josephson each junction also
// stamps inv_ind as an inductor L_J = phi0^2 / E_J (its small-signal value).
CircuitMatrices build_matrices(const CircuitGraph& g, bool linearize_josephson = false);

// Requires the tree of build_matrices' graph; throws NumericsError when cap
// is ill-conditioned (condition number > 1e12).
HamiltonianModel build_hamiltonian(const CircuitGraph& g, const SpanningTree& tree);

// Generalized symmetric problem inv_ind v = omega^2 cap v; eigenvalues below
// 1e-12 x largest count as zero modes.
NormalModes normal_modes(const CircuitMatrices& mats);

// Leapfrog (kick-drift-kick) integration of Hamilton's equations.  Requires
// dt * omega_max < 0.1 (omega_max from the linearized modes); throws
// NumericsError if the relative energy drift exceeds 1e-6 per period.
Trajectory simulate_classical(const HamiltonianModel& model, const Eigen::VectorXd& phi0,
                              const Eigen::VectorXd& q0, double dt, int steps,
                              int record_every = 1);

} // namespace cqt
