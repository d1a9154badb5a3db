#include "quantum.hpp"

#include <cmath>
#include <numbers>

#include "error.hpp"

namespace bellkcbs {
namespace {

constexpr double kPi = std::numbers::pi;

void require_setting(int value, int limit, const char* who) {
  if (value < 0 || value >= limit) {
    fail(ErrorKind::invalid_argument,
         std::string(who) + " label " + std::to_string(value) + " out of range");
  }
}

}  // namespace

ProjectorPair projectors(const HermitianOperator& observable) {
  const auto n = observable.matrix.rows();
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  return {0.5 * (id + observable.matrix), 0.5 * (id - observable.matrix)};
}

HermitianOperator alice_observable(int x) {
  require_setting(x, 2, "Alice setting");
  Eigen::MatrixXcd m(2, 2);
  if (x == 0) {
    m << 1, 0, 0, -1;  // sigma_z
  } else {
    m << 0, 1, 1, 0;  // sigma_x
  }
  return {m};
}

Ket kcbs_vector(int j) {
  require_setting(j, 5, "Bob setting");
  const double c = std::cos(kPi / 5.0);
  const double norm = 1.0 / std::sqrt(1.0 + c);
  const double angle = 4.0 * kPi * j / 5.0;
  Eigen::VectorXcd v(3);
  v << norm * std::cos(angle), norm * std::sin(angle), norm * std::sqrt(c);
  return {v};
}

HermitianOperator bob_observable(int j) {
  const Ket v = kcbs_vector(j);
  const double sign = (j % 2 == 0) ? 1.0 : -1.0;
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(3, 3);
  return {sign * (id - 2.0 * (v.amplitudes * v.amplitudes.adjoint()))};
}

Ket state_psi(double phi, double theta_u, double theta_v) {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(6);
  const double cu = std::cos(theta_u), su = std::sin(theta_u);
  const double cv = std::cos(theta_v), sv = std::sin(theta_v);
  const double cp = std::cos(phi), sp = std::sin(phi);
  // qubit-major index 3*q + t; |u> lives on qutrit |2>, |v> on qutrit |0>.
  psi(2) = cp * cu;
  psi(5) = cp * su;
  psi(0) = sp * cv;
  psi(3) = sp * sv;
  return {psi};
}

double expectation(const Ket& state, const Eigen::MatrixXcd& op) {
  if (op.rows() != state.amplitudes.size() || op.cols() != state.amplitudes.size()) {
    fail(ErrorKind::invalid_argument, "operator/state dimension mismatch");
  }
  const std::complex<double> value = state.amplitudes.adjoint() * op * state.amplitudes;
  if (std::abs(value.imag()) > 1e-10) {
    fail(ErrorKind::numeric, "expectation value has imaginary part " +
                                 std::to_string(value.imag()));
  }
  return value.real();
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

QuantumModel make_model(double phi, double theta_u, double theta_v) {
  QuantumModel m;
  m.phi = phi;
  m.theta_u = theta_u;
  m.theta_v = theta_v;
  for (int x = 0; x < 2; ++x) {
    m.alice[x] = alice_observable(x);
    m.alice_projectors[x] = projectors(m.alice[x]);
  }
  for (int j = 0; j < 5; ++j) {
    m.vectors[j] = kcbs_vector(j);
    m.bob[j] = bob_observable(j);
    m.bob_projectors[j] = projectors(m.bob[j]);
  }
  m.psi = state_psi(phi, theta_u, theta_v);
  return m;
}

Behavior behavior_for_state(const Ket& state, const Scenario& scenario,
                            const std::array<HermitianOperator, 2>& alice,
                            const std::array<HermitianOperator, 5>& bob) {
  if (state.amplitudes.size() != 6) {
    fail(ErrorKind::invalid_argument, "joint state must be 6-dimensional");
  }
  std::array<ProjectorPair, 2> alice_proj;
  std::array<ProjectorPair, 5> bob_proj;
  for (int x = 0; x < 2; ++x) alice_proj[x] = projectors(alice[x]);
  for (int j = 0; j < 5; ++j) bob_proj[j] = projectors(bob[j]);

  Behavior behavior;
  for (const auto& jc : scenario.joint_contexts) {
    const auto& [x, ctx] = jc;
    require_setting(x, 2, "Alice setting");
    for (std::size_t i = 0; i + 1 < ctx.size(); ++i) {
      for (std::size_t k = i + 1; k < ctx.size(); ++k) {
        const Eigen::MatrixXcd comm = bob.at(ctx[i]).matrix * bob.at(ctx[k]).matrix -
                                      bob.at(ctx[k]).matrix * bob.at(ctx[i]).matrix;
        if (comm.norm() > 1e-10) {
          fail(ErrorKind::domain, "context contains non-commuting measurements B" +
                                      std::to_string(ctx[i]) + ", B" + std::to_string(ctx[k]));
        }
      }
    }
    std::vector<double> table(table_size(ctx));
    const std::size_t cells = table.size() / 2;
    for (std::size_t idx = 0; idx < table.size(); ++idx) {
      const int a = (idx / cells) ? +1 : -1;
      Eigen::MatrixXcd bob_op = Eigen::MatrixXcd::Identity(3, 3);
      for (std::size_t pos = 0; pos < ctx.size(); ++pos) {
        const int b = ((idx >> (ctx.size() - 1 - pos)) & 1u) ? +1 : -1;
        bob_op = bob_op * bob_proj.at(static_cast<std::size_t>(ctx[pos])).for_outcome(b);
      }
      table[idx] = expectation(state, kron(alice_proj[static_cast<std::size_t>(x)].for_outcome(a),
                                           bob_op));
    }
    behavior.tables.emplace(jc, std::move(table));
  }
  validate_behavior(behavior);
  return behavior;
}

Behavior quantum_behavior(const QuantumModel& model, const Scenario& scenario) {
  return behavior_for_state(model.psi, scenario, model.alice, model.bob);
}

}  // namespace bellkcbs
