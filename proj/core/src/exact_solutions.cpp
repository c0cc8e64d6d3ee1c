#include "nvem/exact_solutions.hpp"

#include <cmath>
#include <stdexcept>

namespace nvem {

ExactSolution patch_test_field(double lambda) {
  ExactSolution s;
  s.displacement = [](const Vec2& x) { return Vec2(x.x(), x.x() + x.y()); };
  s.strain = [](const Vec2&) { return Eigen::Vector3d(1.0, 1.0, 1.0); };
  s.pressure = [lambda](const Vec2&) { return -2.0 * lambda; };
  s.body = [](const Vec2&) { return Vec2::Zero(); };
  return s;
}

ExactSolution colliding_flow_exact(double mu) {
  ExactSolution s;
  s.displacement = [](const Vec2& p) {
    const double x = p.x() - 1.0, y = p.y() - 1.0;
    return Vec2(20.0 * x * y * y * y, 5.0 * x * x * x * x - 5.0 * y * y * y * y);
  };
  s.strain = [](const Vec2& p) {
    const double x = p.x() - 1.0, y = p.y() - 1.0;
    const double e11 = 20.0 * y * y * y;
    const double g12 = 60.0 * x * y * y + 20.0 * x * x * x;
    return Eigen::Vector3d(e11, -e11, g12);  // divergence-free by construction
  };
  s.pressure = [](const Vec2& p) {
    const double x = p.x() - 1.0, y = p.y() - 1.0;
    return 60.0 * x * x * y - 20.0 * y * y * y;
  };
  s.stress = [s, mu](const Vec2& p) {
    const Eigen::Vector3d e = s.strain(p);
    const double pr = s.pressure(p);
    return Eigen::Vector3d(2.0 * mu * e(0) - pr, 2.0 * mu * e(1) - pr, mu * e(2));
  };
  s.body = [](const Vec2&) { return Vec2::Zero(); };
  return s;
}

ExactSolution timoshenko_beam_exact(double P, double L, double D, double young, double nu) {
  const double Ebar = young / (1.0 - nu * nu);
  const double nubar = nu / (1.0 - nu);
  const double I = D * D * D / 12.0;
  const double c = P / (6.0 * Ebar * I);
  // p = -lambda tr(eps) = -(E nu / ((1+nu)(1-nu))) e11, finite as nu -> 1/2.
  const double p_coeff = young * nu / ((1.0 + nu) * (1.0 - nu));

  ExactSolution s;
  s.displacement = [=](const Vec2& p) {
    const double x = p.x(), y = p.y();
    const double u1 =
        -c * y * ((6.0 * L - 3.0 * x) * x + (2.0 + nubar) * y * y - 1.5 * D * D * (1.0 + nubar));
    const double u2 = c * (3.0 * nubar * y * y * (L - x) + (3.0 * L - x) * x * x);
    return Vec2(u1, u2);
  };
  s.strain = [=](const Vec2& p) {
    const double x = p.x(), y = p.y();
    const double e11 = -P * y * (L - x) / (Ebar * I);
    const double g12 = P * (1.0 + nubar) * (0.25 * D * D - y * y) / (Ebar * I);
    return Eigen::Vector3d(e11, -nubar * e11, g12);
  };
  s.pressure = [=](const Vec2& p) {
    const double e11 = -P * p.y() * (L - p.x()) / (Ebar * I);
    return -p_coeff * e11;
  };
  s.stress = [=](const Vec2& p) {
    const double x = p.x(), y = p.y();
    return Eigen::Vector3d(-P * y * (L - x) / I, 0.0,
                           P * (0.25 * D * D - y * y) / (2.0 * I));
  };
  s.body = [](const Vec2&) { return Vec2::Zero(); };
  return s;
}

double kappa_plane_stress(double nu) { return (3.0 - nu) / (1.0 + nu); }
double kappa_plane_strain(double nu) { return 3.0 - 4.0 * nu; }

ExactSolution plate_hole_exact(double T, double r0, double young, double nu, double kappa,
                               bool plane_stress, double lambda) {
  const double G = young / (2.0 * (1.0 + nu));

  auto stress = [=](const Vec2& p) {
    const double r2 = p.squaredNorm();
    const double th = std::atan2(p.y(), p.x());
    const double a2 = r0 * r0 / r2;
    const double a4 = a2 * a2;
    const double c2 = std::cos(2.0 * th), c4 = std::cos(4.0 * th);
    const double s2 = std::sin(2.0 * th), s4 = std::sin(4.0 * th);
    return Eigen::Vector3d(
        T * (1.0 - a2 * (1.5 * c2 + c4) + 1.5 * a4 * c4),
        -T * (a2 * (0.5 * c2 - c4) + 1.5 * a4 * c4),
        -T * (a2 * (0.5 * s2 + s4) - 1.5 * a4 * s4));
  };

  ExactSolution s;
  s.displacement = [=](const Vec2& p) {
    const double r = p.norm();
    if (r < r0 * (1.0 - 1e-9))
      throw std::domain_error("plate_hole_exact: point lies inside the hole");
    const double th = std::atan2(p.y(), p.x());
    const double c1 = std::cos(th), c3 = std::cos(3.0 * th);
    const double s1 = std::sin(th), s3 = std::sin(3.0 * th);
    const double q = r0 * r0 / r;
    const double q3 = q * q * q / (r0 * r0);  // r0^4 / r^3
    const double u1 =
        T / (4.0 * G) * (0.5 * (kappa + 1.0) * r * c1 + q * ((1.0 + kappa) * c1 + c3) - q3 * c3);
    const double u2 =
        T / (4.0 * G) * (0.5 * (kappa - 3.0) * r * s1 + q * ((1.0 - kappa) * s1 + s3) - q3 * s3);
    return Vec2(u1, u2);
  };
  s.stress = stress;
  s.strain = [=](const Vec2& p) {
    const Eigen::Vector3d sig = stress(p);
    if (plane_stress) {
      return Eigen::Vector3d((sig(0) - nu * sig(1)) / young, (sig(1) - nu * sig(0)) / young,
                             sig(2) / G);
    }
    const double a = (1.0 - nu * nu) / young, b = nu * (1.0 + nu) / young;
    return Eigen::Vector3d(a * sig(0) - b * sig(1), a * sig(1) - b * sig(0), sig(2) / G);
  };
  s.pressure = [=](const Vec2& p) {
    const Eigen::Vector3d sig = stress(p);
    const double tr = plane_stress ? (1.0 - nu) / young * (sig(0) + sig(1))
                                   : (1.0 + nu) * (1.0 - 2.0 * nu) / young * (sig(0) + sig(1));
    return -lambda * tr;
  };
  s.body = [](const Vec2&) { return Vec2::Zero(); };
  return s;
}

}  // namespace nvem
