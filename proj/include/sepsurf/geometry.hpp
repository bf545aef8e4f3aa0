#pragma once

// Gaussian curvature of implicit surfaces and the (u, v, w) change of
// variables for separable ones.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <optional>

#include "sepsurf/errors.hpp"
#include "sepsurf/surface.hpp"

namespace sepsurf {

/// |grad F| at or below this is a singular point.
inline constexpr double kRegularityEpsilon = 1e-9;

/// Value, gradient and Hessian of a trivariate implicit function at a point.
struct ImplicitJet2 {
  double F = 0.0;
  Eigen::Vector3d grad = Eigen::Vector3d::Zero();
  Eigen::Matrix3d hess = Eigen::Matrix3d::Zero();
};

struct RigidMotion {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();
};

/// Per-axis jets (f, g, h) at p.
inline std::array<Jet3, 3> axis_jets(const SeparableSurface& s, const SurfacePoint& p) {
  return {s.f().jet(p.x), s.g().jet(p.y), s.h().jet(p.z)};
}

inline ImplicitJet2 implicit_jet(const SeparableSurface& s, const SurfacePoint& p) {
  auto j = axis_jets(s, p);
  ImplicitJet2 out;
  out.F = j[0].v + j[1].v + j[2].v;
  out.grad = {j[0].d1, j[1].d1, j[2].d1};
  out.hess.diagonal() << j[0].d2, j[1].d2, j[2].d2;
  return out;
}

/// K |grad F|^4 = grad^T cof(Hess F) grad, written out as the six 2x2
/// determinants of the cofactor expansion. Valid for any symmetric Hessian.
inline double gauss_curvature_implicit(const ImplicitJet2& jet) {
  const double Fx = jet.grad(0), Fy = jet.grad(1), Fz = jet.grad(2);
  const double g2 = Fx * Fx + Fy * Fy + Fz * Fz;
  if (std::sqrt(g2) <= kRegularityEpsilon) throw SingularPointError("gradient vanishes");

  const auto& H = jet.hess;
  const double Fxx = H(0, 0), Fyy = H(1, 1), Fzz = H(2, 2);
  const double Fxy = H(0, 1), Fxz = H(0, 2), Fyz = H(1, 2);
  auto det2 = [](double a, double b, double c, double d) { return a * d - b * c; };

  const double num = Fx * Fx * det2(Fyy, Fyz, Fyz, Fzz)      //
                     + Fy * Fy * det2(Fzz, Fxz, Fxz, Fxx)    //
                     + Fz * Fz * det2(Fxx, Fxy, Fxy, Fyy)    //
                     - 2.0 * Fx * Fy * det2(Fxy, Fyz, Fxz, Fzz)  //
                     - 2.0 * Fy * Fz * det2(Fyz, Fxz, Fxy, Fxx)  //
                     - 2.0 * Fx * Fz * det2(Fxz, Fxy, Fyz, Fyy);
  return num / (g2 * g2);
}

/// K = (f'^2 g'' h'' + g'^2 f'' h'' + h'^2 f'' g'') / (f'^2 + g'^2 + h'^2)^2.
inline double gauss_curvature_separable(const SeparableSurface& s, const SurfacePoint& p) {
  auto [a, b, c] = axis_jets(s, p);
  const double X = a.d1 * a.d1, Y = b.d1 * b.d1, Z = c.d1 * c.d1;
  const double g2 = X + Y + Z;
  if (std::sqrt(g2) <= kRegularityEpsilon) throw SingularPointError("gradient vanishes");
  const double num = X * b.d2 * c.d2 + Y * a.d2 * c.d2 + Z * a.d2 * b.d2;
  return num / (g2 * g2);
}

/// Change-of-variables data at a surface point: u = f(x), X(u) = f'(x)^2,
/// X'(u) = 2 f''(x), and kappa = (X/X')'(u) = 1 - f' f''' / (2 f''^2).
struct UVWState {
  double u = 0.0, v = 0.0, w = 0.0;
  double X = 0.0, Y = 0.0, Z = 0.0;
  double dX = 0.0, dY = 0.0, dZ = 0.0;
  /// Absent where the second derivative vanishes.
  std::array<std::optional<double>, 3> kappa;

  std::array<double, 3> squares() const { return {X, Y, Z}; }
  std::array<double, 3> slopes() const { return {dX, dY, dZ}; }
};

inline std::optional<double> branch_kappa(const Jet3& j) {
  if (std::abs(j.d2) <= 1e-12 * (1.0 + std::abs(j.d1))) return std::nullopt;
  return 1.0 - j.d1 * j.d3 / (2.0 * j.d2 * j.d2);
}

inline UVWState uvw_state(const SeparableSurface& s, const SurfacePoint& p) {
  auto j = axis_jets(s, p);
  UVWState st;
  st.u = j[0].v;
  st.v = j[1].v;
  st.w = j[2].v;
  st.X = j[0].d1 * j[0].d1;
  st.Y = j[1].d1 * j[1].d1;
  st.Z = j[2].d1 * j[2].d1;
  st.dX = 2.0 * j[0].d2;
  st.dY = 2.0 * j[1].d2;
  st.dZ = 2.0 * j[2].d2;
  for (int i = 0; i < 3; ++i) st.kappa[static_cast<std::size_t>(i)] = branch_kappa(j[static_cast<std::size_t>(i)]);
  return st;
}

/// (X Y' Z' + Y X' Z' + Z X' Y' - 4K (X+Y+Z)^2) / max(1, (X+Y+Z)^2)
inline double k2_residual(const UVWState& st, double K) {
  const double sum = st.X + st.Y + st.Z;
  const double lhs = st.X * st.dY * st.dZ + st.Y * st.dX * st.dZ + st.Z * st.dX * st.dY;
  return (lhs - 4.0 * K * sum * sum) / std::max(1.0, sum * sum);
}

/// Jet of G = F o T at T^{-1}(p), where T(q) = R q + t.
inline ImplicitJet2 transform_jet(const ImplicitJet2& jet, const RigidMotion& motion) {
  const Eigen::Matrix3d& R = motion.rotation;
  if ((R.transpose() * R - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > 1e-12)
    throw InvalidParameter("rotation is not orthogonal");
  ImplicitJet2 out;
  out.F = jet.F;
  out.grad = R.transpose() * jet.grad;
  out.hess = R.transpose() * jet.hess * R;
  return out;
}

}  // namespace sepsurf
