#pragma once

#include <optional>

#include <Eigen/Core>

namespace nvem {

enum class PlaneCondition { Strain, Stress, LameDirect };

/// Voigt-ordered (e11, e22, 2 e12) 3x3 constitutive matrix.
using ConstitutiveMatrix = Eigen::Matrix3d;

/// Isotropic linear-elastic material. Either (E_Y, nu) with a plane condition,
/// or direct Lame parameters (lambda, mu) for the Stokes-limit runs.
struct MaterialModel {
  double young = 0.0;
  double poisson = 0.0;
  PlaneCondition condition = PlaneCondition::Strain;
  std::optional<double> lambda_direct;
  std::optional<double> mu_direct;
  double density = 0.0;
  double thickness = 1.0;

  static MaterialModel isotropic(double young, double poisson, PlaneCondition condition,
                                 double density = 0.0, double thickness = 1.0);
  static MaterialModel lame(double lambda, double mu, double density = 0.0,
                            double thickness = 1.0);

  double mu() const;      // shear modulus
  double lambda() const;  // first Lame parameter (3D form)

  /// Lambda entering the stabilization cap: the plane-stress effective
  /// 2*lambda*mu/(lambda+2mu) under plane stress, lambda otherwise.
  double lambda_effective() const;

  void validate() const;
};

ConstitutiveMatrix constitutive_matrix(const MaterialModel& m);

struct ModifiedLame {
  double lambda_t = 0.0;  // min(lambda_effective, 25 mu)
  double mu_t = 0.0;
  double young_t = 0.0;  // mu_t (3 lambda_t + 2 mu_t) / (lambda_t + mu_t)
  double nu_t = 0.0;     // lambda_t / (2 (lambda_t + mu_t))
};

ModifiedLame modified_lame(const MaterialModel& m);

/// Capped-lambda constitutive matrix used by the stabilization recipes;
/// equals constitutive_matrix(m) whenever the cap is inactive.
ConstitutiveMatrix modified_dtilde(const MaterialModel& m);

enum class DmuVariant { Full, ShearOnly };

/// diag(2mu, 2mu, mu) or diag(0, 0, mu).
ConstitutiveMatrix dmu(const MaterialModel& m, DmuVariant variant);

}  // namespace nvem
