#pragma once

#include <functional>

#include <Eigen/Core>

#include "nvem/mesh.hpp"

namespace nvem {

/// Closed-form reference fields. Strain is Voigt (e11, e22, 2 e12); pressure
/// follows the p = -lambda tr(eps) convention used throughout.
struct ExactSolution {
  std::function<Vec2(const Vec2&)> displacement;
  std::function<Eigen::Vector3d(const Vec2&)> strain;
  std::function<double(const Vec2&)> pressure;
  std::function<Eigen::Vector3d(const Vec2&)> stress;  // for Neumann data and residual checks
  std::function<Vec2(const Vec2&)> body;               // b with div(sigma) + b = 0
};

/// Linear patch-test field u = (x1, x1 + x2); constant strain (1, 1, 1).
ExactSolution patch_test_field(double lambda);

/// Stokes colliding flow on (0,2)^2 in the incompressible-elasticity reading;
/// lambda, mu are the Lame parameters of the elasticity model (pressure scales
/// with the Stokes mu, the stress handle is the Stokes stress -p I + 2 mu eps).
ExactSolution colliding_flow_exact(double mu = 1.0);

/// Timoshenko-Goodier cantilever under a parabolic end load, plane strain
/// form via E/(1-nu^2) and nu/(1-nu). Domain (0,L) x (-D/2, D/2).
ExactSolution timoshenko_beam_exact(double P, double L, double D, double young, double nu);

double kappa_plane_stress(double nu);  // (3 - nu) / (1 + nu)
double kappa_plane_strain(double nu);  // 3 - 4 nu

/// Kirsch infinite plate with a circular hole under far-field sigma_11 = T.
/// kappa must match the plane condition; lambda feeds the pressure handle.
/// Displacement evaluation requires r >= r0.
ExactSolution plate_hole_exact(double T, double r0, double young, double nu, double kappa,
                               bool plane_stress, double lambda);

}  // namespace nvem
