#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "nvem/assembly.hpp"

namespace nvem {

/// Scalar load schedule f(t). Constant: 1. RampCutoff: a t + b for t <= t_c,
/// 0 after. Harmonic: cos(omega t).
struct LoadSchedule {
  enum class Kind { Constant, RampCutoff, Harmonic };
  Kind kind = Kind::Constant;
  double a = 0.0, b = 1.0, t_c = 0.0;
  double omega = 0.0;

  double operator()(double t) const;

  static LoadSchedule constant();
  static LoadSchedule ramp_cutoff(double a, double b, double t_c);
  static LoadSchedule harmonic(double omega);
};

/// F(t) = F_static + f(t) * F_scheduled, both assembled full-size vectors.
/// F_static carries the always-on loads (gravity).
struct LoadHistory {
  Eigen::VectorXd F_scheduled;
  LoadSchedule schedule;
  Eigen::VectorXd F_static;

  Eigen::VectorXd at(double t) const { return F_static + schedule(t) * F_scheduled; }
};

struct DynamicsConfig {
  double alpha = -0.1;  // in [-1/3, 0]; 0 recovers the trapezoidal rule
  double dt = 0.0;
  double t_end = 0.0;
  Eigen::VectorXd d0, v0;        // full-size; empty means zero
  std::vector<int> probe_nodes;  // nodal (u1, u2) histories to record
  bool store_trajectory = false;

  double beta() const { return 0.25 * (1.0 - alpha) * (1.0 - alpha); }
  double gamma() const { return 0.5 * (1.0 - 2.0 * alpha); }
};

struct ProbeSeries {
  int node = -1;
  std::vector<double> t, u1, u2;
};

struct Trajectory {
  std::vector<double> t;
  std::vector<Eigen::VectorXd> d, v, a;  // full-size; filled when store_trajectory
  std::vector<ProbeSeries> probes;
};

/// HHT-alpha time integration of M dd + C dv + K d = F(t) on the reduced
/// system. `reduced` supplies K and the constraint maps; M and C are reduced
/// with the same maps. The initial acceleration solves the t=0 balance, the
/// effective matrix is factorized once, and the forcing is evaluated at
/// t_{n+1+alpha} as (1+alpha) F(t_{n+1}) - alpha F(t_n).
Trajectory integrate(const ReducedSystem& reduced, const Eigen::SparseMatrix<double>& M_full,
                     const Eigen::SparseMatrix<double>& C_full, const LoadHistory& loads,
                     const DynamicsConfig& config);

struct CantileverBeam {
  double young = 0.0;
  double density = 0.0;
  double length = 0.0;
  double height = 0.0;

  double inertia() const { return height * height * height / 12.0; }  // unit thickness
  double section_area() const { return height; }
};

/// First natural frequency (Hz) of a prismatic Euler-Bernoulli cantilever:
/// f1 = (1.875104^2 / 2 pi) sqrt(E I / (rho A L^4)).
double lowest_frequency_estimate(const CantileverBeam& beam);

/// Admissible-step rule: the first natural period must span at least 30 steps.
double admissible_time_step(double lowest_frequency_hz);

}  // namespace nvem
