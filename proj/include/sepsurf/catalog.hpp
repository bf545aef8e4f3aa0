#pragma once

// Named surfaces and random admissible family instances used by the
// verification suites, the CLI presets, and the tests.

#include <array>
#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "sepsurf/families.hpp"
#include "sepsurf/verify.hpp"

namespace sepsurf {

struct CatalogEntry {
  std::string name;
  FamilySpec spec;
  Label expected;
  std::optional<double> K;  // exact constant curvature, when it has one
  std::optional<double> k;  // generating family parameter of conical-power
};

inline constexpr std::array<std::string_view, 7> kFamilyTags{
    "right-cylinder",   "translation",  "rotational-parabolic", "rotational-cgc",
    "generalized-cone", "exp-cylinder", "conical-power"};

namespace detail {

inline Func1D fn(std::string_view src, const char* var) { return Func1D::parse(src, var); }

inline RotationalParabolic sphere(double r) { return {0.0, 0.0, 0.0, fn(format_number(r * r) + " - z^2", "z")}; }

}  // namespace detail

/// Example 1-3 surfaces and a few named extras.
inline std::optional<CatalogEntry> preset(std::string_view name) {
  using detail::fn;
  if (name == "paper-fig1-left")
    return CatalogEntry{"paper-fig1-left", GeneralizedCone{2.0, {1, 1, 1}, {0, 0, 0}}, Label::GeneralizedCone, 0.0, 0.0};
  if (name == "paper-fig1-middle")
    return CatalogEntry{"paper-fig1-middle", ExpCylinder{{1, 1, 1}, {-1, 1, 1}}, Label::ExpCylinder, 0.0, 1.0};
  if (name == "paper-fig1-right")
    return CatalogEntry{"paper-fig1-right", ConicalPower{}, Label::ConicalPower, 0.0, 2.0};
  if (name == "unit-sphere")
    return CatalogEntry{"unit-sphere", detail::sphere(1.0), Label::RotationalCGC, 1.0, std::nullopt};
  return std::nullopt;
}

inline const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"paper-fig1-left", "paper-fig1-middle", "paper-fig1-right",
                                              "unit-sphere"};
  return names;
}

/// cosh(z)^2 = x^2 + y^2: minimal, not of constant curvature.
inline SeparableSurface catenoid_surface() {
  return SeparableSurface::from_strings("x^2", "y^2", "-cosh(z)^2");
}

inline Box catenoid_box() {
  Box b;
  b.lo = {-2.0, -2.0, -1.0};
  b.hi = {2.0, 2.0, 1.0};
  return b;
}

/// Fixed surfaces of constant curvature covering every family.
inline std::vector<CatalogEntry> default_catalog() {
  using detail::fn;
  std::vector<CatalogEntry> c;
  for (const char* name : {"paper-fig1-left", "paper-fig1-middle", "paper-fig1-right"}) c.push_back(*preset(name));
  for (double r : {0.5, 1.0, 2.0})
    c.push_back({"sphere-r" + detail::format_number(r), detail::sphere(r), Label::RotationalCGC, 1.0 / (r * r), std::nullopt});
  // (x+0.2)^2 + (y-0.3)^2 + (z-0.2)^2 = 1.03
  c.push_back({"offset-sphere", RotationalParabolic{0.4, -0.6, 0.1, fn("1 - (z - 0.2)^2", "z")}, Label::RotationalCGC,
               1.0 / 1.03, std::nullopt});
  c.push_back({"rotational-cone", RotationalParabolic{0.5, 0.0, 0.0625, fn("(1.5*z + 0.3)^2", "z")},
               Label::RotationalFlat, 0.0, std::nullopt});
  c.push_back({"circular-cylinder", RightCylinder{fn("x^2", "x"), fn("y^2", "y"), -1.0, 2}, Label::RightCylinder, 0.0,
               std::nullopt});
  c.push_back({"parabolic-cylinder", RightCylinder{fn("y^2", "y"), fn("-z", "z"), 0.0, 0}, Label::RightCylinder, 0.0,
               std::nullopt});
  c.push_back({"translation-square", Translation{1.0, fn("y^2", "y")}, Label::Translation, 0.0, std::nullopt});
  c.push_back({"translation-sine", Translation{-0.7, fn("sin(2*y)", "y")}, Label::Translation, 0.0, std::nullopt});
  c.push_back({"generalized-cone", GeneralizedCone{-0.5, {1.0, -1.0, 2.0}, {0.5, 1.5, -0.5}}, Label::GeneralizedCone,
               0.0, 0.0});
  c.push_back({"exp-cylinder", ExpCylinder{{1.0, -0.5, 2.0}, {1.0, 2.0, -3.0}}, Label::ExpCylinder, 0.0, 1.0});
  c.push_back({"conical-power-k-0.5", ConicalPower{-0.5, {1.0, 1.0, 1.0}, {0.0, 0.0, 0.0}, {1.0, 1.0, -2.0}, {0, 0, 0}},
               Label::ConicalPower, 0.0, -0.5});
  c.push_back({"conical-power-k3", ConicalPower{3.0, {1.0, -2.0, 1.0}, {0.2, 0.0, -0.3}, {1.0, -2.0, 1.0}, {0, 0, 0}},
               Label::ConicalPower, 0.0, 3.0});
  c.push_back({"cgc-sphere-band", RotationalCGC{1.0, 1.0, 0.0}, Label::RotationalCGC, 1.0, std::nullopt});
  c.push_back({"cgc-spindle", RotationalCGC{1.0, 0.5, 0.0}, Label::RotationalCGC, 1.0, std::nullopt});
  c.push_back({"cgc-hyperbolic", RotationalCGC{-1.0, 0.5, 0.0}, Label::RotationalCGC, -1.0, std::nullopt});
  return c;
}

// ---------------------------------------------------------------------------
// Random admissible instances

namespace detail {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Magnitude in [lo, hi] with a random sign.
inline double signed_uniform(std::mt19937_64& rng, double lo, double hi) {
  double v = uniform(rng, lo, hi);
  return uniform(rng, 0.0, 1.0) < 0.5 ? -v : v;
}

inline Vec3 nonzero3(std::mt19937_64& rng) {
  return {signed_uniform(rng, 0.5, 2.0), signed_uniform(rng, 0.5, 2.0), signed_uniform(rng, 0.5, 2.0)};
}

inline Vec3 offsets3(std::mt19937_64& rng) {
  return {uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0)};
}

/// Pair of coefficients whose sum stays away from zero.
inline std::pair<double, double> balanced_pair(std::mt19937_64& rng) {
  for (;;) {
    double a = signed_uniform(rng, 0.5, 2.0), b = signed_uniform(rng, 0.5, 2.0);
    if (std::abs(a + b) >= 0.2) return {a, b};
  }
}

inline std::string num(double v) { return "(" + format_number(v) + ")"; }

}  // namespace detail

/// Random conical-power parameter in [-3, 3], away from k = 0, k = 1 and the
/// even-exponent values k = (2n-1)/(2n).
inline double random_conical_k(std::mt19937_64& rng) {
  for (;;) {
    double k = detail::uniform(rng, -3.0, 3.0);
    if (std::abs(k) < 0.1 || std::abs(k - 1.0) < 0.1) continue;
    bool near_even = false;
    for (int n = 1; n <= 4; ++n) near_even = near_even || std::abs(k - (2.0 * n - 1.0) / (2.0 * n)) < 0.02;
    if (!near_even) return k;
  }
}

/// Random admissible instance of a family tag with its expected label.
inline CatalogEntry random_instance(std::string_view tag, std::mt19937_64& rng) {
  using detail::fn;
  using detail::num;
  using detail::signed_uniform;
  using detail::uniform;
  const std::string name = "random-" + std::string(tag);

  if (tag == "right-cylinder") {
    const int absent = static_cast<int>(uniform(rng, 0.0, 3.0)) % 3;
    std::array<const char*, 2> vars{};
    std::size_t next = 0;
    for (int i = 0; i < 3; ++i) {
      if (i != absent) vars[next++] = detail::kAxisNames[static_cast<std::size_t>(i)];
    }
    const std::string s = vars[0], t = vars[1];
    const double alpha = uniform(rng, 0.5, 2.0), beta = uniform(rng, 0.5, 2.0);
    RightCylinder rc;
    rc.absent_axis = absent;
    if (uniform(rng, 0.0, 1.0) < 0.5) {  // ellipse
      rc.f = fn(num(alpha) + "*" + s + "^2", vars[0]);
      rc.g = fn(num(beta) + "*" + t + "^2", vars[1]);
      rc.a = -1.0;
    } else {  // graph of a cubic
      rc.f = fn(num(alpha) + "*" + s + "^3 + " + s, vars[0]);
      rc.g = fn("-" + num(beta) + "*" + t, vars[1]);
      rc.a = uniform(rng, -0.2, 0.2);
    }
    return {name, rc, Label::RightCylinder, 0.0, std::nullopt};
  }
  if (tag == "translation") {
    static constexpr std::array<const char*, 5> kShapes{"y^2", "sin(y)", "exp(y)", "cosh(y)", "y^3"};
    const auto pick = static_cast<std::size_t>(uniform(rng, 0.0, 5.0)) % kShapes.size();
    const double c = signed_uniform(rng, 0.5, 2.0);
    return {name, Translation{signed_uniform(rng, 0.5, 2.0), fn(num(c) + "*" + kShapes[pick], "y")},
            Label::Translation, 0.0, std::nullopt};
  }
  if (tag == "rotational-parabolic") {
    const double a = uniform(rng, -1.0, 1.0), b = uniform(rng, -1.0, 1.0);
    if (uniform(rng, 0.0, 1.0) < 0.5) {
      // cone: (x + a/2)^2 + (y + b/2)^2 = (m z + n)^2
      const double m = signed_uniform(rng, 0.5, 2.0), n = uniform(rng, -0.5, 0.5);
      return {name, RotationalParabolic{a, b, 0.25 * (a * a + b * b), fn("(" + num(m) + "*z + " + num(n) + ")^2", "z")},
              Label::RotationalFlat, 0.0, std::nullopt};
    }
    // sphere of radius^2 = R2 - c + (a^2 + b^2)/4 centred at z0
    const double R2 = uniform(rng, 0.5, 2.0), z0 = uniform(rng, -0.3, 0.3), c = uniform(rng, -0.2, 0.2);
    const double rho2 = R2 - c + 0.25 * (a * a + b * b);
    return {name, RotationalParabolic{a, b, c, fn(num(R2) + " - (z - " + num(z0) + ")^2", "z")},
            Label::RotationalCGC, 1.0 / rho2, std::nullopt};
  }
  if (tag == "rotational-cgc") {
    const double K = signed_uniform(rng, 0.5, 2.0);
    const double r0 = uniform(rng, 0.4, 1.0) / std::sqrt(std::abs(K));
    const double dr0 = uniform(rng, -0.3, 0.3);
    return {name, RotationalCGC{K, r0, dr0}, Label::RotationalCGC, K, std::nullopt};
  }
  if (tag == "generalized-cone") {
    double p = 0.0;
    do {
      p = uniform(rng, -3.0, 3.0);
    } while (std::abs(p) < 0.1 || std::abs(p - 1.0) < 0.1);
    return {name, GeneralizedCone{p, detail::nonzero3(rng), detail::offsets3(rng)}, Label::GeneralizedCone, 0.0, 0.0};
  }
  if (tag == "exp-cylinder") {
    auto [n1, n2] = detail::balanced_pair(rng);
    // n3 = -(n1 + n2) puts the origin on the surface
    return {name, ExpCylinder{detail::nonzero3(rng), {n1, n2, -(n1 + n2)}}, Label::ExpCylinder, 0.0, 1.0};
  }
  if (tag == "conical-power") {
    ConicalPower cp;
    cp.k = random_conical_k(rng);
    cp.m = detail::nonzero3(rng);
    cp.n = detail::offsets3(rng);
    auto [c1, c2] = detail::balanced_pair(rng);
    // base point (1, 1, 1) on every chart lies on the surface
    cp.coeff = {c1, c2, -(c1 + c2)};
    return {name, cp, Label::ConicalPower, 0.0, cp.k};
  }
  throw InvalidParameter("unknown family '" + std::string(tag) + "'");
}

}  // namespace sepsurf
