#pragma once

// Constructors for every separable surface family with constant Gaussian
// curvature, plus their JSON form.
//
//   right-cylinder        f(s) + g(t) + a = 0, one coordinate absent
//   translation           z = a x + g(y)
//   rotational-parabolic  x^2 + y^2 + a x + b y + c = h(z)
//   rotational-cgc        x^2 + y^2 = r(z)^2, profile of constant curvature K
//   generalized-cone      m3 z + n3 = (m1 x + n1)^p (m2 y + n2)^q,  p + q = 1
//   exp-cylinder          n1 e^{m1 x} + n2 e^{m2 y} + n3 e^{m3 z} = 0
//   conical-power         sum_i c_i (m_i t_i + n_i)^{1/(1-k)} = 0

#include <array>
#include <cmath>
#include <memory>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "sepsurf/errors.hpp"
#include "sepsurf/expr.hpp"
#include "sepsurf/surface.hpp"
#include "sepsurf/tabulated.hpp"

namespace sepsurf {

using Vec3 = std::array<double, 3>;

struct RightCylinder {
  Func1D f;             // first present coordinate
  Func1D g;             // second present coordinate
  double a = 0.0;
  int absent_axis = 2;  // 0, 1, 2 for x, y, z
};

struct Translation {
  double a = 1.0;
  Func1D g;
};

struct RotationalParabolic {
  double a = 0.0, b = 0.0, c = 0.0;
  Func1D h;
};

struct RotationalCGC {
  double K = 1.0;
  double r0 = 1.0;
  double dr0 = 0.0;
  double arc_span = 0.0;  // <= 0: automatic
  double step = 0.0;      // <= 0: 1e-3 * arc_span
};

struct GeneralizedCone {
  double p = 2.0;
  Vec3 m{1.0, 1.0, 1.0};
  Vec3 n{0.0, 0.0, 0.0};

  double q() const { return 1.0 - p; }
};

struct ExpCylinder {
  Vec3 m{1.0, 1.0, 1.0};
  Vec3 n{-1.0, 1.0, 1.0};
};

struct ConicalPower {
  double k = 2.0;
  Vec3 m{1.0, 1.0, 1.0};
  Vec3 n{0.0, 0.0, 0.0};
  Vec3 coeff{1.0, 1.0, 1.0};
  /// Sign of m t + n on the chart used for each coordinate; 0 picks
  /// automatically. Negative charts need an integer exponent.
  std::array<int, 3> chart{0, 0, 0};

  double exponent() const { return 1.0 / (1.0 - k); }
};

using FamilySpec = std::variant<RightCylinder, Translation, RotationalParabolic, RotationalCGC,
                                GeneralizedCone, ExpCylinder, ConicalPower>;

class EmptyZeroSet : public InvalidParameter {
 public:
  using InvalidParameter::InvalidParameter;
};

/// Zero set reduces to the apex (even-integer exponent, same-sign terms).
class DegeneratePointSet : public InvalidParameter {
 public:
  using InvalidParameter::InvalidParameter;
};

inline const char* family_tag(const FamilySpec& spec) {
  static constexpr std::array<const char*, 7> kTags{
      "right-cylinder",   "translation",  "rotational-parabolic", "rotational-cgc",
      "generalized-cone", "exp-cylinder", "conical-power"};
  return kTags.at(spec.index());
}

// ---------------------------------------------------------------------------
// Rotational profile of constant curvature

struct ProfileNode {
  double s = 0.0;   // arclength
  double r = 0.0;   // distance to the axis
  double dr = 0.0;  // dr/ds
  double z = 0.0;
};

struct RotationalProfile {
  std::vector<ProfileNode> nodes;  // increasing z
  std::shared_ptr<const TabulatedFunc1D> h;  // h(z) = -r(z)^2
  bool truncated = false;
};

/// Profiles stop where the meridian turns vertical or reaches the axis.
inline constexpr double kMaxProfileSlope = 0.95;
inline constexpr double kMinProfileRadiusFraction = 0.05;

inline double default_arc_span(double K) {
  return K > 0.0 ? std::numbers::pi / std::sqrt(K) : 6.0 / std::sqrt(-K);
}

namespace detail {

struct ProfileState {
  double r, dr, z;
};

inline ProfileState profile_rhs(const ProfileState& y, double K) {
  return {y.dr, -K * y.r, std::sqrt(std::max(0.0, 1.0 - y.dr * y.dr))};
}

inline ProfileState rk4_step(const ProfileState& y, double K, double h) {
  auto axpy = [](const ProfileState& a, double t, const ProfileState& k) {
    return ProfileState{a.r + t * k.r, a.dr + t * k.dr, a.z + t * k.z};
  };
  ProfileState k1 = profile_rhs(y, K);
  ProfileState k2 = profile_rhs(axpy(y, 0.5 * h, k1), K);
  ProfileState k3 = profile_rhs(axpy(y, 0.5 * h, k2), K);
  ProfileState k4 = profile_rhs(axpy(y, h, k3), K);
  return {y.r + h / 6.0 * (k1.r + 2.0 * k2.r + 2.0 * k3.r + k4.r),
          y.dr + h / 6.0 * (k1.dr + 2.0 * k2.dr + 2.0 * k3.dr + k4.dr),
          y.z + h / 6.0 * (k1.z + 2.0 * k2.z + 2.0 * k3.z + k4.z)};
}

/// Jet of h(z) = -r(z)^2 from the arclength state, using
/// r'' = -K r and dz/ds = sqrt(1 - r'^2).
inline Jet3 profile_h_jet(const ProfileNode& n, double K) {
  const double rs = n.dr;
  const double rss = -K * n.r;
  const double rsss = -K * rs;
  const double zs = std::sqrt(1.0 - rs * rs);
  const double rz = rs / zs;
  const double rzz = rss / std::pow(zs, 4);
  const double rzzz = rsss / std::pow(zs, 5) + 4.0 * rss * rss * rs / std::pow(zs, 7);
  return {-n.r * n.r, -2.0 * n.r * rz, -2.0 * (rz * rz + n.r * rzz),
          -2.0 * (3.0 * rz * rzz + n.r * rzzz)};
}

}  // namespace detail

/// Integrates r'' = -K r, z' = sqrt(1 - r'^2) in arclength over
/// [-arc_span/2, arc_span/2] with classical RK4 and tabulates h(z) = -r(z)^2.
inline RotationalProfile rotational_profile(double K, double r0, double dr0, double arc_span,
                                            double step) {
  if (!(K != 0.0) || !std::isfinite(K)) throw InvalidParameter("rotational-cgc needs K != 0");
  if (!(r0 > 0.0)) throw InvalidParameter("rotational-cgc needs r0 > 0");
  if (!(std::abs(dr0) < kMaxProfileSlope))
    throw InvalidParameter("rotational-cgc needs |dr0| < " + std::to_string(kMaxProfileSlope));
  if (!(arc_span > 0.0) || !(step > 0.0) || step > 1e-3 * arc_span * (1.0 + 1e-12))
    throw InvalidParameter("rotational profile needs 0 < step <= 1e-3 * arc_span");

  const auto valid = [&](const detail::ProfileState& y) {
    return std::isfinite(y.r) && std::isfinite(y.dr) && std::abs(y.dr) < kMaxProfileSlope &&
           y.r > kMinProfileRadiusFraction * r0;
  };

  RotationalProfile out;
  const auto steps = static_cast<long>(std::floor(0.5 * arc_span / step + 1e-9));
  std::vector<ProfileNode> forward, backward;
  for (double dir : {1.0, -1.0}) {
    auto& dst = dir > 0 ? forward : backward;
    detail::ProfileState y{r0, dr0, 0.0};
    for (long i = 1; i <= steps; ++i) {
      detail::ProfileState next = detail::rk4_step(y, K, dir * step);
      if (!valid(next)) {
        out.truncated = true;
        break;
      }
      y = next;
      dst.push_back({dir * static_cast<double>(i) * step, y.r, y.dr, y.z});
    }
  }
  out.nodes.assign(backward.rbegin(), backward.rend());
  out.nodes.push_back({0.0, r0, dr0, 0.0});
  out.nodes.insert(out.nodes.end(), forward.begin(), forward.end());
  if (out.nodes.size() < 3) throw InvalidParameter("rotational profile is invalid immediately");

  std::vector<double> zs;
  std::vector<Jet3> jets;
  zs.reserve(out.nodes.size());
  jets.reserve(out.nodes.size());
  for (const auto& n : out.nodes) {
    zs.push_back(n.z);
    jets.push_back(detail::profile_h_jet(n, K));
  }
  out.h = std::make_shared<const TabulatedFunc1D>(std::move(zs), std::move(jets));
  return out;
}

inline RotationalProfile rotational_profile(const RotationalCGC& spec) {
  double span = spec.arc_span > 0.0 ? spec.arc_span : default_arc_span(spec.K);
  double step = spec.step > 0.0 ? spec.step : 1e-3 * span;
  return rotational_profile(spec.K, spec.r0, spec.dr0, span, step);
}

// ---------------------------------------------------------------------------
// Surface construction

namespace detail {

inline Ast affine(double m, double n) { return constant(m) * variable() + constant(n); }

/// Interval of t where sign * (m t + n) > 0.
inline Interval chart_interval(double m, double n, int sign) {
  const double root = -n / m;
  if (sign * m > 0.0) return {root, std::numeric_limits<double>::infinity()};
  return {-std::numeric_limits<double>::infinity(), root};
}

inline void require_nonzero(const Vec3& v, const char* what) {
  for (double x : v) {
    if (!(x != 0.0) || !std::isfinite(x)) throw InvalidParameter(std::string(what) + " must be finite and nonzero");
  }
}

inline void require_finite(const Vec3& v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) throw InvalidParameter(std::string(what) + " must be finite");
  }
}

inline constexpr std::array<const char*, 3> kAxisNames{"x", "y", "z"};

inline bool is_odd_integer(double p) {
  return is_integer_exponent(p) && std::fmod(std::abs(p), 2.0) == 1.0;
}

}  // namespace detail

/// Resolved charts for a conical-power spec (each entry +1 or -1).
inline std::array<int, 3> conical_charts(const ConicalPower& spec) {
  const double alpha = spec.exponent();
  std::array<int, 3> chart{};
  bool any_auto = false;
  for (std::size_t i = 0; i < 3; ++i) {
    chart[i] = spec.chart[i] == 0 ? 1 : (spec.chart[i] > 0 ? 1 : -1);
    any_auto = any_auto || spec.chart[i] == 0;
  }
  auto signs_mixed = [&](const std::array<int, 3>& ch) {
    int pos = 0, neg = 0;
    for (std::size_t i = 0; i < 3; ++i) {
      double s = spec.coeff[i] * ((ch[i] < 0 && detail::is_odd_integer(alpha)) ? -1.0 : 1.0);
      (s > 0 ? pos : neg)++;
    }
    return pos > 0 && neg > 0;
  };
  if (any_auto && !signs_mixed(chart) && detail::is_odd_integer(alpha)) {
    // flip the last automatically chosen chart
    for (std::size_t i = 3; i-- > 0;) {
      if (spec.chart[i] == 0) {
        chart[i] = -1;
        break;
      }
    }
  }
  return chart;
}

/// True for the even-integer exponents (k = (2n-1)/(2n)) whose terms all
/// share one sign, where the zero set collapses to the apex.
inline bool is_degenerate(const ConicalPower& spec) {
  const double alpha = spec.exponent();
  if (!detail::is_integer_exponent(alpha) || detail::is_odd_integer(alpha)) return false;
  return (spec.coeff[0] > 0) == (spec.coeff[1] > 0) && (spec.coeff[1] > 0) == (spec.coeff[2] > 0);
}

inline SeparableSurface build_surface(const RightCylinder& spec) {
  if (spec.absent_axis < 0 || spec.absent_axis > 2) throw InvalidParameter("absent_axis must be 0, 1 or 2");
  if (!std::isfinite(spec.a)) throw InvalidParameter("a must be finite");
  if (spec.f.is_constant() && spec.g.is_constant())
    throw InvalidParameter("right cylinder needs a nonconstant curve");
  std::array<Univariate, 3> fns;
  std::size_t next = 0;
  const std::array<const Func1D*, 2> present{&spec.f, &spec.g};
  for (std::size_t axis = 0; axis < 3; ++axis) {
    if (static_cast<int>(axis) == spec.absent_axis) {
      fns[axis] = Func1D(constant(spec.a), {}, detail::kAxisNames[axis]);
    } else {
      fns[axis] = *present[next++];
    }
  }
  return {fns[0], fns[1], fns[2]};
}

inline SeparableSurface build_surface(const Translation& spec) {
  if (!(spec.a != 0.0) || !std::isfinite(spec.a)) throw InvalidParameter("translation needs a != 0");
  return {Func1D(constant(spec.a) * variable(), {}, "x"), spec.g, Func1D(-variable(), {}, "z")};
}

inline SeparableSurface build_surface(const RotationalParabolic& spec) {
  if (!std::isfinite(spec.a) || !std::isfinite(spec.b) || !std::isfinite(spec.c))
    throw InvalidParameter("rotational-parabolic coefficients must be finite");
  Ast sq = pow(variable(), constant(2.0));
  return {Func1D(sq + constant(spec.a) * variable(), {}, "x"),
          Func1D(sq + constant(spec.b) * variable(), {}, "y"),
          Func1D(constant(spec.c) - spec.h.ast(), spec.h.domain(), "z")};
}

inline SeparableSurface build_surface(const RotationalCGC& spec) {
  RotationalProfile profile = rotational_profile(spec);
  Ast sq = pow(variable(), constant(2.0));
  return {Func1D(sq, {}, "x"), Func1D(sq, {}, "y"), Univariate(profile.h)};
}

inline SeparableSurface build_surface(const GeneralizedCone& spec) {
  if (!std::isfinite(spec.p) || spec.p == 0.0 || spec.p == 1.0)
    throw InvalidParameter("generalized-cone needs p not in {0, 1}");
  detail::require_nonzero(spec.m, "m");
  detail::require_finite(spec.n, "n");
  // f = -a log(m1 x + n1) with (a, b, c) = (p, q, -1)
  const Vec3 weight{spec.p, spec.q(), -1.0};
  std::array<Univariate, 3> fns;
  for (std::size_t i = 0; i < 3; ++i) {
    Ast t = detail::affine(spec.m[i], spec.n[i]);
    fns[i] = Func1D(constant(-weight[i]) * unary(Op::Log, t), detail::chart_interval(spec.m[i], spec.n[i], 1),
                    detail::kAxisNames[i]);
  }
  return {fns[0], fns[1], fns[2]};
}

inline SeparableSurface build_surface(const ExpCylinder& spec) {
  detail::require_nonzero(spec.m, "m");
  detail::require_nonzero(spec.n, "n");
  if ((spec.n[0] > 0) == (spec.n[1] > 0) && (spec.n[1] > 0) == (spec.n[2] > 0))
    throw EmptyZeroSet("exp-cylinder coefficients n all share one sign: empty zero set");
  std::array<Univariate, 3> fns;
  for (std::size_t i = 0; i < 3; ++i) {
    fns[i] = Func1D(constant(spec.n[i]) * unary(Op::Exp, constant(spec.m[i]) * variable()), {},
                    detail::kAxisNames[i]);
  }
  return {fns[0], fns[1], fns[2]};
}

inline SeparableSurface build_surface(const ConicalPower& spec) {
  if (!std::isfinite(spec.k) || spec.k == 0.0 || spec.k == 1.0)
    throw InvalidParameter("conical-power needs k not in {0, 1}");
  detail::require_nonzero(spec.m, "m");
  detail::require_finite(spec.n, "n");
  detail::require_nonzero(spec.coeff, "coeff");
  const double alpha = spec.exponent();
  if (is_degenerate(spec))
    throw DegeneratePointSet("conical-power with even exponent and same-sign terms represents only a point");
  const auto chart = conical_charts(spec);
  int pos = 0, neg = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    if (chart[i] < 0 && !detail::is_integer_exponent(alpha))
      throw InvalidParameter("negative chart needs an integer exponent 1/(1-k)");
    double s = spec.coeff[i] * ((chart[i] < 0 && detail::is_odd_integer(alpha)) ? -1.0 : 1.0);
    (s > 0 ? pos : neg)++;
  }
  if (pos == 0 || neg == 0) throw EmptyZeroSet("conical-power terms all share one sign: empty zero set");
  std::array<Univariate, 3> fns;
  for (std::size_t i = 0; i < 3; ++i) {
    Ast term = pow(detail::affine(spec.m[i], spec.n[i]), constant(alpha));
    fns[i] = Func1D(constant(spec.coeff[i]) * term, detail::chart_interval(spec.m[i], spec.n[i], chart[i]),
                    detail::kAxisNames[i]);
  }
  return {fns[0], fns[1], fns[2]};
}

inline SeparableSurface build_surface(const FamilySpec& spec) {
  return std::visit([](const auto& s) { return build_surface(s); }, spec);
}

// ---------------------------------------------------------------------------
// Default sampling regions

namespace detail {

/// Map base values B = m t + n in [lo, hi] on a chart back to a t-range.
inline std::pair<double, double> base_range(double m, double n, int chart, double lo, double hi) {
  double b0 = chart * lo, b1 = chart * hi;
  double t0 = (b0 - n) / m, t1 = (b1 - n) / m;
  return {std::min(t0, t1), std::max(t0, t1)};
}

inline Box clip_to_domains(Box box, const SeparableSurface& s) {
  for (std::size_t i = 0; i < 3; ++i) {
    Interval d = s.fn(static_cast<int>(i)).domain();
    double inset = 1e-6 * std::max(1.0, box.hi[i] - box.lo[i]);
    if (box.lo[i] <= d.lo) box.lo[i] = d.lo + inset;
    if (box.hi[i] >= d.hi) box.hi[i] = d.hi - inset;
  }
  return box;
}

}  // namespace detail

inline Box admissible_box(const GeneralizedCone& spec) {
  Box b;
  for (std::size_t i = 0; i < 3; ++i) {
    auto [lo, hi] = detail::base_range(spec.m[i], spec.n[i], 1, 0.5, 2.0);
    b.lo[i] = lo;
    b.hi[i] = hi;
  }
  return b;
}

inline Box admissible_box(const ConicalPower& spec) {
  const auto chart = conical_charts(spec);
  Box b;
  for (std::size_t i = 0; i < 3; ++i) {
    auto [lo, hi] = detail::base_range(spec.m[i], spec.n[i], chart[i], 0.5, 2.0);
    b.lo[i] = lo;
    b.hi[i] = hi;
  }
  return b;
}

inline Box admissible_box(const ExpCylinder&) { return Box{}; }

inline Box admissible_box(const RightCylinder& spec) {
  Box b;
  for (std::size_t i = 0; i < 3; ++i) {
    double half = static_cast<int>(i) == spec.absent_axis ? 1.0 : 1.5;
    b.lo[i] = -half;
    b.hi[i] = half;
  }
  return detail::clip_to_domains(b, build_surface(spec));
}

inline Box admissible_box(const Translation& spec) {
  Box b;
  double zlo = std::numeric_limits<double>::infinity(), zhi = -zlo;
  for (int i = 0; i <= 32; ++i) {
    double y = -1.0 + i / 16.0;
    double gy = 0.0;
    try {
      gy = spec.g.value(y);
    } catch (const DomainError&) {
      continue;
    }
    for (double x : {-1.0, 1.0}) {
      double z = spec.a * x + gy;
      zlo = std::min(zlo, z);
      zhi = std::max(zhi, z);
    }
  }
  if (zlo < zhi) {
    double pad = 0.05 * (zhi - zlo);
    b.lo[2] = zlo - pad;
    b.hi[2] = zhi + pad;
  }
  return detail::clip_to_domains(b, build_surface(spec));
}

inline Box admissible_box(const RotationalParabolic& spec) {
  SeparableSurface s = build_surface(spec);
  Box b;
  b = detail::clip_to_domains(b, s);
  // (x + a/2)^2 + (y + b/2)^2 = h(z) - c + (a^2 + b^2)/4
  double rho2 = 0.0;
  for (int i = 0; i <= 64; ++i) {
    double z = b.lo[2] + (b.hi[2] - b.lo[2]) * i / 64.0;
    try {
      rho2 = std::max(rho2, spec.h.value(z) - spec.c + 0.25 * (spec.a * spec.a + spec.b * spec.b));
    } catch (const DomainError&) {
    }
  }
  if (rho2 > 0.0) {
    double R = 1.1 * std::sqrt(rho2);
    b.lo[0] = -0.5 * spec.a - R;
    b.hi[0] = -0.5 * spec.a + R;
    b.lo[1] = -0.5 * spec.b - R;
    b.hi[1] = -0.5 * spec.b + R;
  }
  return b;
}

inline Box admissible_box(const RotationalCGC& spec) {
  RotationalProfile profile = rotational_profile(spec);
  double rmax = 0.0;
  for (const auto& n : profile.nodes) rmax = std::max(rmax, n.r);
  Box b;
  b.lo = {-1.05 * rmax, -1.05 * rmax, profile.nodes.front().z};
  b.hi = {1.05 * rmax, 1.05 * rmax, profile.nodes.back().z};
  return b;
}

inline Box admissible_box(const FamilySpec& spec) {
  return std::visit([](const auto& s) { return admissible_box(s); }, spec);
}

// ---------------------------------------------------------------------------
// JSON: {"family": "<tag>", "params": {...}}

namespace detail {

using json = nlohmann::ordered_json;

inline json interval_to_json(const Interval& d) {
  json out = json::array();
  out.push_back(std::isfinite(d.lo) ? json(d.lo) : json(nullptr));
  out.push_back(std::isfinite(d.hi) ? json(d.hi) : json(nullptr));
  return out;
}

inline json func_to_json(const Func1D& f) {
  const Interval& d = f.domain();
  if (std::isinf(d.lo) && std::isinf(d.hi)) return f.str();
  return json{{"expr", f.str()}, {"domain", interval_to_json(d)}};
}

inline Func1D func_from_json(const json& j, const std::string& var) {
  if (j.is_string()) return Func1D::parse(j.get<std::string>(), var);
  if (!j.is_object() || !j.contains("expr")) throw InvalidParameter("function must be a string or {\"expr\", \"domain\"}");
  Interval d;
  if (j.contains("domain")) {
    const json& dj = j.at("domain");
    if (!dj.is_array() || dj.size() != 2) throw InvalidParameter("domain must be [lo, hi]");
    if (!dj[0].is_null()) d.lo = dj[0].get<double>();
    if (!dj[1].is_null()) d.hi = dj[1].get<double>();
  }
  return Func1D::parse(j.at("expr").get<std::string>(), var, d);
}

inline Vec3 vec3_from_json(const json& j, const char* key) {
  const json& v = j.at(key);
  if (!v.is_array() || v.size() != 3) throw InvalidParameter(std::string(key) + " must be an array of 3 numbers");
  return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

inline int axis_from_name(const std::string& name) {
  for (std::size_t i = 0; i < 3; ++i) {
    if (name == kAxisNames[i]) return static_cast<int>(i);
  }
  throw InvalidParameter("plane must be one of \"x\", \"y\", \"z\"");
}

inline void reject_unknown_keys(const json& params, std::initializer_list<const char*> allowed) {
  for (auto it = params.begin(); it != params.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) throw InvalidParameter("unknown parameter '" + it.key() + "'");
  }
}

}  // namespace detail

inline nlohmann::ordered_json to_json(const FamilySpec& spec) {
  using detail::json;
  json params = std::visit(
      [](const auto& s) -> json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, RightCylinder>) {
          return {{"f", detail::func_to_json(s.f)},
                  {"g", detail::func_to_json(s.g)},
                  {"a", s.a},
                  {"plane", detail::kAxisNames.at(static_cast<std::size_t>(s.absent_axis))}};
        } else if constexpr (std::is_same_v<T, Translation>) {
          return {{"a", s.a}, {"g", detail::func_to_json(s.g)}};
        } else if constexpr (std::is_same_v<T, RotationalParabolic>) {
          return {{"a", s.a}, {"b", s.b}, {"c", s.c}, {"h", detail::func_to_json(s.h)}};
        } else if constexpr (std::is_same_v<T, RotationalCGC>) {
          return {{"K", s.K}, {"r0", s.r0}, {"dr0", s.dr0}, {"arc_span", s.arc_span}, {"step", s.step}};
        } else if constexpr (std::is_same_v<T, GeneralizedCone>) {
          return {{"p", s.p}, {"q", s.q()}, {"m", s.m}, {"n", s.n}};
        } else if constexpr (std::is_same_v<T, ExpCylinder>) {
          return {{"m", s.m}, {"n", s.n}};
        } else {
          return {{"k", s.k}, {"m", s.m}, {"n", s.n}, {"coeff", s.coeff}, {"chart", s.chart}};
        }
      },
      spec);
  return {{"family", family_tag(spec)}, {"params", std::move(params)}};
}

inline FamilySpec family_from_json(const nlohmann::ordered_json& doc) {
  using detail::json;
  if (!doc.is_object() || !doc.contains("family")) throw InvalidParameter("spec needs a \"family\" field");
  const std::string tag = doc.at("family").get<std::string>();
  const json params = doc.value("params", json::object());
  if (!params.is_object()) throw InvalidParameter("\"params\" must be an object");
  try {
    if (tag == "right-cylinder") {
      detail::reject_unknown_keys(params, {"f", "g", "a", "plane"});
      RightCylinder s;
      s.absent_axis = detail::axis_from_name(params.value("plane", std::string("z")));
      std::array<std::string, 2> vars;
      std::size_t next = 0;
      for (std::size_t i = 0; i < 3; ++i) {
        if (static_cast<int>(i) != s.absent_axis) vars[next++] = detail::kAxisNames[i];
      }
      s.f = detail::func_from_json(params.at("f"), vars[0]);
      s.g = detail::func_from_json(params.at("g"), vars[1]);
      s.a = params.value("a", 0.0);
      return s;
    }
    if (tag == "translation") {
      detail::reject_unknown_keys(params, {"a", "g"});
      return Translation{params.at("a").get<double>(), detail::func_from_json(params.at("g"), "y")};
    }
    if (tag == "rotational-parabolic") {
      detail::reject_unknown_keys(params, {"a", "b", "c", "h"});
      return RotationalParabolic{params.value("a", 0.0), params.value("b", 0.0), params.value("c", 0.0),
                                 detail::func_from_json(params.at("h"), "z")};
    }
    if (tag == "rotational-cgc") {
      detail::reject_unknown_keys(params, {"K", "r0", "dr0", "arc_span", "step"});
      return RotationalCGC{params.at("K").get<double>(), params.value("r0", 1.0), params.value("dr0", 0.0),
                           params.value("arc_span", 0.0), params.value("step", 0.0)};
    }
    if (tag == "generalized-cone") {
      detail::reject_unknown_keys(params, {"p", "q", "m", "n"});
      GeneralizedCone s;
      s.p = params.at("p").get<double>();
      if (params.contains("q") && params.at("q").get<double>() != s.q())
        throw InvalidParameter("generalized-cone needs p + q = 1");
      if (params.contains("m")) s.m = detail::vec3_from_json(params, "m");
      if (params.contains("n")) s.n = detail::vec3_from_json(params, "n");
      return s;
    }
    if (tag == "exp-cylinder") {
      detail::reject_unknown_keys(params, {"m", "n"});
      ExpCylinder s;
      if (params.contains("m")) s.m = detail::vec3_from_json(params, "m");
      if (params.contains("n")) s.n = detail::vec3_from_json(params, "n");
      return s;
    }
    if (tag == "conical-power") {
      detail::reject_unknown_keys(params, {"k", "m", "n", "coeff", "chart"});
      ConicalPower s;
      s.k = params.at("k").get<double>();
      if (params.contains("m")) s.m = detail::vec3_from_json(params, "m");
      if (params.contains("n")) s.n = detail::vec3_from_json(params, "n");
      if (params.contains("coeff")) s.coeff = detail::vec3_from_json(params, "coeff");
      if (params.contains("chart")) {
        const json& c = params.at("chart");
        if (!c.is_array() || c.size() != 3) throw InvalidParameter("chart must be an array of 3 integers");
        for (std::size_t i = 0; i < 3; ++i) s.chart[i] = c[i].get<int>();
      }
      return s;
    }
  } catch (const json::exception& e) {
    throw InvalidParameter(std::string("malformed ") + tag + " params: " + e.what());
  }
  throw InvalidParameter("unknown family '" + tag + "'");
}

}  // namespace sepsurf
