#pragma once

#include <array>
#include <complex>

#include <Eigen/Dense>

#include "scenario.hpp"

namespace bellkcbs {

// Normalized state vector (dimension 2, 3 or 6 here; 6 = qubit (x) qutrit
// with index 3*q + t).
struct Ket {
  Eigen::VectorXcd amplitudes;
};

struct HermitianOperator {
  Eigen::MatrixXcd matrix;
};

// Eigenprojectors of a +-1-valued observable: (1 +- B)/2.  Closed form — the
// engine never diagonalizes anything numerically.
struct ProjectorPair {
  Eigen::MatrixXcd plus;
  Eigen::MatrixXcd minus;

  const Eigen::MatrixXcd& for_outcome(int o) const { return o > 0 ? plus : minus; }
};

ProjectorPair projectors(const HermitianOperator& observable);

// Alice's settings: A_0 = sigma_z, A_1 = sigma_x.
HermitianOperator alice_observable(int x);

// Unit vectors of the pentagon configuration,
//   |v_j> = (cos(4 pi j / 5), sin(4 pi j / 5), sqrt(cos(pi/5))) / sqrt(1 + cos(pi/5)),
// with <v_j|v_{j+1 mod 5}> = 0.
Ket kcbs_vector(int j);

// B_j = (-1)^j (1 - 2 |v_j><v_j|); adjacent B's commute.
HermitianOperator bob_observable(int j);

// |Psi(phi)> = cos(phi) |u> + sin(phi) |v> with
//   |u> = (cos(theta_u)|0> + sin(theta_u)|1>) (x) |2>,
//   |v> = (cos(theta_v)|0> + sin(theta_v)|1>) (x) |0>.
Ket state_psi(double phi, double theta_u, double theta_v);

// <state|op|state>; throws ErrorKind::numeric if the imaginary part of the
// form exceeds 1e-10 (the operator was not Hermitian enough to call this).
double expectation(const Ket& state, const Eigen::MatrixXcd& op);

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

// The full two-qubit-by-qutrit model with all operators and the state cached.
struct QuantumModel {
  double phi = 0.0;
  double theta_u = 0.0;
  double theta_v = 0.0;
  std::array<HermitianOperator, 2> alice;
  std::array<ProjectorPair, 2> alice_projectors;
  std::array<Ket, 5> vectors;
  std::array<HermitianOperator, 5> bob;
  std::array<ProjectorPair, 5> bob_projectors;
  Ket psi;
};

inline constexpr double kDefaultThetaU = 2.868;
inline constexpr double kDefaultThetaV = 1.449;

QuantumModel make_model(double phi, double theta_u = kDefaultThetaU,
                        double theta_v = kDefaultThetaV);

// Born-rule tables p(a, b|x, ctx) = <Psi| P^A_a (x) prod_j P^{B_yj}_bj |Psi>
// for every joint context.  Pair contexts must commute within 1e-10
// (ErrorKind::domain otherwise).
Behavior quantum_behavior(const QuantumModel& model, const Scenario& scenario);

// Same Born rule for an arbitrary 6-dimensional state and an arbitrary
// assignment of Bob observables to the five settings (used for relabeling
// checks and mixed-state constructions).
Behavior behavior_for_state(const Ket& state, const Scenario& scenario,
                            const std::array<HermitianOperator, 2>& alice,
                            const std::array<HermitianOperator, 5>& bob);

}  // namespace bellkcbs
