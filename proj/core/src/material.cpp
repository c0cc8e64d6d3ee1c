#include "nvem/material.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nvem/errors.hpp"

namespace nvem {

MaterialModel MaterialModel::isotropic(double young, double poisson, PlaneCondition condition,
                                       double density, double thickness) {
  MaterialModel m;
  m.young = young;
  m.poisson = poisson;
  m.condition = condition;
  m.density = density;
  m.thickness = thickness;
  m.validate();
  return m;
}

MaterialModel MaterialModel::lame(double lambda, double mu, double density, double thickness) {
  MaterialModel m;
  m.condition = PlaneCondition::LameDirect;
  m.lambda_direct = lambda;
  m.mu_direct = mu;
  // Equivalent (E_Y, nu) for reporting and validation.
  m.young = mu * (3.0 * lambda + 2.0 * mu) / (lambda + mu);
  m.poisson = lambda / (2.0 * (lambda + mu));
  m.density = density;
  m.thickness = thickness;
  m.validate();
  return m;
}

double MaterialModel::mu() const {
  if (mu_direct) return *mu_direct;
  return young / (2.0 * (1.0 + poisson));
}

double MaterialModel::lambda() const {
  if (lambda_direct) return *lambda_direct;
  return young * poisson / ((1.0 + poisson) * (1.0 - 2.0 * poisson));
}

double MaterialModel::lambda_effective() const {
  const double l = lambda(), m = mu();
  if (condition == PlaneCondition::Stress) return 2.0 * l * m / (l + 2.0 * m);
  return l;
}

void MaterialModel::validate() const {
  if (!(young > 0.0)) throw std::invalid_argument("material: Young's modulus must be positive");
  if (!(poisson > -1.0 && poisson < 0.5))
    throw NumericalError("material: Poisson's ratio must lie in (-1, 0.5); nu = 0.5 is singular");
  if (lambda_direct.has_value() != mu_direct.has_value())
    throw std::invalid_argument("material: lambda and mu must be given together");
  if (mu_direct && !(*mu_direct > 0.0))
    throw std::invalid_argument("material: mu must be positive");
  if (thickness <= 0.0) throw std::invalid_argument("material: thickness must be positive");
}

namespace {

ConstitutiveMatrix lame_form(double lambda, double mu) {
  ConstitutiveMatrix d;
  d << lambda + 2.0 * mu, lambda, 0.0,  //
      lambda, lambda + 2.0 * mu, 0.0,   //
      0.0, 0.0, mu;
  return d;
}

}  // namespace

ConstitutiveMatrix constitutive_matrix(const MaterialModel& m) {
  m.validate();
  switch (m.condition) {
    case PlaneCondition::Strain: {
      const double c = m.young / ((1.0 + m.poisson) * (1.0 - 2.0 * m.poisson));
      ConstitutiveMatrix d;
      d << c * (1.0 - m.poisson), c * m.poisson, 0.0,  //
          c * m.poisson, c * (1.0 - m.poisson), 0.0,   //
          0.0, 0.0, c * (1.0 - 2.0 * m.poisson) / 2.0;
      return d;
    }
    case PlaneCondition::Stress: {
      const double c = m.young / (1.0 - m.poisson * m.poisson);
      ConstitutiveMatrix d;
      d << c, c * m.poisson, 0.0,  //
          c * m.poisson, c, 0.0,   //
          0.0, 0.0, c * (1.0 - m.poisson) / 2.0;
      return d;
    }
    case PlaneCondition::LameDirect:
      return lame_form(*m.lambda_direct, *m.mu_direct);
  }
  throw std::logic_error("unreachable");
}

ModifiedLame modified_lame(const MaterialModel& m) {
  ModifiedLame out;
  out.mu_t = m.mu();
  out.lambda_t = std::min(m.lambda_effective(), 25.0 * out.mu_t);
  out.young_t = out.mu_t * (3.0 * out.lambda_t + 2.0 * out.mu_t) / (out.lambda_t + out.mu_t);
  out.nu_t = out.lambda_t / (2.0 * (out.lambda_t + out.mu_t));
  return out;
}

ConstitutiveMatrix modified_dtilde(const MaterialModel& m) {
  const ModifiedLame mod = modified_lame(m);
  return lame_form(mod.lambda_t, mod.mu_t);
}

ConstitutiveMatrix dmu(const MaterialModel& m, DmuVariant variant) {
  const double mu = m.mu();
  ConstitutiveMatrix d = ConstitutiveMatrix::Zero();
  if (variant == DmuVariant::Full) {
    d(0, 0) = 2.0 * mu;
    d(1, 1) = 2.0 * mu;
  }
  d(2, 2) = mu;
  return d;
}

}  // namespace nvem
