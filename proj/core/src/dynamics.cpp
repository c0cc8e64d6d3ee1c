#include "nvem/dynamics.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/SparseCholesky>

#include "nvem/errors.hpp"

namespace nvem {

double LoadSchedule::operator()(double t) const {
  switch (kind) {
    case Kind::Constant: return 1.0;
    case Kind::RampCutoff: return t <= t_c ? a * t + b : 0.0;
    case Kind::Harmonic: return std::cos(omega * t);
  }
  return 0.0;
}

LoadSchedule LoadSchedule::constant() { return {}; }

LoadSchedule LoadSchedule::ramp_cutoff(double a, double b, double t_c) {
  LoadSchedule s;
  s.kind = Kind::RampCutoff;
  s.a = a;
  s.b = b;
  s.t_c = t_c;
  return s;
}

LoadSchedule LoadSchedule::harmonic(double omega) {
  LoadSchedule s;
  s.kind = Kind::Harmonic;
  s.omega = omega;
  return s;
}

Trajectory integrate(const ReducedSystem& reduced, const Eigen::SparseMatrix<double>& M_full,
                     const Eigen::SparseMatrix<double>& C_full, const LoadHistory& loads,
                     const DynamicsConfig& config) {
  if (!(config.dt > 0.0)) throw std::invalid_argument("integrate: dt must be positive");
  if (!(config.alpha >= -1.0 / 3.0 && config.alpha <= 0.0))
    throw std::invalid_argument("integrate: alpha must lie in [-1/3, 0]");

  const double alpha = config.alpha;
  const double beta = config.beta();
  const double gamma = config.gamma();
  const double dt = config.dt;
  const int n_steps = static_cast<int>(std::llround(config.t_end / dt));

  const Eigen::SparseMatrix<double>& K = reduced.K;
  const Eigen::SparseMatrix<double> M = reduced.reduce_matrix(M_full);
  const Eigen::SparseMatrix<double> C = reduced.reduce_matrix(C_full);

  auto force_at = [&](double t) -> Eigen::VectorXd {
    return reduced.reduce_vector(loads.at(t)) + reduced.bc_correction;
  };

  const auto nfree = reduced.free_dofs.size();
  Eigen::VectorXd d = config.d0.size() ? reduced.reduce_vector(config.d0)
                                       : Eigen::VectorXd::Zero(nfree);
  Eigen::VectorXd v = config.v0.size() ? reduced.reduce_vector(config.v0)
                                       : Eigen::VectorXd::Zero(nfree);

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> mass_solver(M);
  if (mass_solver.info() != Eigen::Success)
    throw NumericalError("integrate: mass matrix factorization failed");
  Eigen::VectorXd a = mass_solver.solve(force_at(0.0) - C * v - K * d);

  const Eigen::SparseMatrix<double> K_eff =
      M + (1.0 + alpha) * (gamma * dt * C + beta * dt * dt * K);
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(K_eff);
  if (solver.info() != Eigen::Success)
    throw NumericalError("integrate: effective matrix factorization failed");

  Trajectory traj;
  traj.probes.reserve(config.probe_nodes.size());
  for (int node : config.probe_nodes) {
    ProbeSeries ps;
    ps.node = node;
    traj.probes.push_back(std::move(ps));
  }

  auto record = [&](double t, const Eigen::VectorXd& dr, const Eigen::VectorXd& vr,
                    const Eigen::VectorXd& ar) {
    const Eigen::VectorXd d_full = reduced.expand(dr);
    for (ProbeSeries& ps : traj.probes) {
      ps.t.push_back(t);
      ps.u1.push_back(d_full(2 * ps.node));
      ps.u2.push_back(d_full(2 * ps.node + 1));
    }
    if (config.store_trajectory) {
      traj.t.push_back(t);
      traj.d.push_back(d_full);
      // Velocities/accelerations vanish on the (static) constrained dofs.
      Eigen::VectorXd vz = Eigen::VectorXd::Zero(reduced.full_size);
      Eigen::VectorXd az = Eigen::VectorXd::Zero(reduced.full_size);
      for (size_t i = 0; i < reduced.free_dofs.size(); ++i) {
        vz(reduced.free_dofs[i]) = vr(i);
        az(reduced.free_dofs[i]) = ar(i);
      }
      traj.v.push_back(std::move(vz));
      traj.a.push_back(std::move(az));
    } else {
      traj.t.push_back(t);
    }
  };

  record(0.0, d, v, a);
  Eigen::VectorXd f_prev = force_at(0.0);

  for (int n = 0; n < n_steps; ++n) {
    const double t_next = (n + 1) * dt;
    const Eigen::VectorXd f_next = force_at(t_next);

    const Eigen::VectorXd d_pred = d + dt * v + dt * dt * (0.5 - beta) * a;
    const Eigen::VectorXd v_pred = v + dt * (1.0 - gamma) * a;

    const Eigen::VectorXd rhs = (1.0 + alpha) * f_next - alpha * f_prev -
                                (1.0 + alpha) * (C * v_pred + K * d_pred) +
                                alpha * (C * v + K * d);
    const Eigen::VectorXd a_next = solver.solve(rhs);

    d = d_pred + beta * dt * dt * a_next;
    v = v_pred + gamma * dt * a_next;
    a = a_next;
    f_prev = f_next;
    record(t_next, d, v, a);
  }
  return traj;
}

double lowest_frequency_estimate(const CantileverBeam& beam) {
  const double k1 = 1.875104;
  return k1 * k1 / (2.0 * M_PI) *
         std::sqrt(beam.young * beam.inertia() /
                   (beam.density * beam.section_area() * std::pow(beam.length, 4)));
}

double admissible_time_step(double lowest_frequency_hz) {
  return (1.0 / lowest_frequency_hz) / 30.0;
}

}  // namespace nvem
