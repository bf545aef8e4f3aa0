#pragma once

// Constant-curvature tests, structure evidence, and the decision procedure
// placing a separable surface in the flat (K = 0) or rotational (K != 0)
// classification.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "sepsurf/errors.hpp"
#include "sepsurf/geometry.hpp"
#include "sepsurf/surface.hpp"

namespace sepsurf {

inline constexpr std::size_t kMinClassifyPoints = 32;

struct Tolerances {
  double constancy = 1e-8;
  double structure = 1e-7;
  double kappa = 1e-6;
};

/// Tabulated profiles only reach ~1e-5 accuracy in h''.
inline Tolerances default_tolerances(const SeparableSurface& s) {
  Tolerances t;
  if (s.has_tabulated()) t.constancy = 1e-4;
  return t;
}

struct ConstancyReport {
  std::size_t n_samples = 0;
  double K_mean = 0.0;
  double K_max_dev = 0.0;
  bool is_constant = false;
  bool is_zero = false;
  double tol = 0.0;
};

/// Per-axis maxima over the samples; index 0, 1, 2 for X, Y, Z.
struct StructureEvidence {
  std::size_t n_samples = 0;
  std::array<double, 3> max_square{};    // max |X|: X vanishes -> right cylinder
  std::array<double, 3> max_slope{};     // max |X'|: X constant -> linear function
  std::array<double, 3> slope_spread{};  // max X' - min X': X linear in u
  std::array<double, 3> pair_gap{};      // max |X'-Y'|, |X'-Z'|, |Y'-Z'|: rotational
  std::array<bool, 3> vanishing{};
  std::array<bool, 3> constant{};
  std::array<bool, 3> linear{};
  std::array<bool, 3> pair_equal{};
  std::optional<double> kappa_estimate;
  double kappa_agreement = 0.0;  // max |kappa - median|
  std::size_t kappa_count = 0;
};

/// Pair order used by pair_gap: (X,Y), (X,Z), (Y,Z).
inline constexpr std::array<std::array<int, 2>, 3> kAxisPairs{{{0, 1}, {0, 2}, {1, 2}}};

enum class Label {
  RightCylinder,
  Translation,
  RotationalFlat,
  GeneralizedCone,
  ExpCylinder,
  ConicalPower,
  RotationalCGC,
  NotConstantCurvature,
  ContradictionTheorem1,
  ContradictionTheorem2,
};

inline const char* label_name(Label l) {
  switch (l) {
    case Label::RightCylinder: return "right-cylinder";
    case Label::Translation: return "translation";
    case Label::RotationalFlat: return "rotational-flat";
    case Label::GeneralizedCone: return "generalized-cone";
    case Label::ExpCylinder: return "exp-cylinder";
    case Label::ConicalPower: return "conical-power";
    case Label::RotationalCGC: return "rotational-cgc";
    case Label::NotConstantCurvature: return "not-constant-curvature";
    case Label::ContradictionTheorem1: return "contradiction-with-theorem-1";
    case Label::ContradictionTheorem2: return "contradiction-with-theorem-2";
  }
  return "?";
}

inline bool is_contradiction(Label l) {
  return l == Label::ContradictionTheorem1 || l == Label::ContradictionTheorem2;
}

struct ClassificationResult {
  Label label = Label::NotConstantCurvature;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  StructureEvidence evidence;
  ConstancyReport report;
  Tolerances tolerances;
};

// ---------------------------------------------------------------------------

namespace detail {

inline const char* axis_name(int axis) { return axis == 0 ? "x" : (axis == 1 ? "y" : "z"); }

/// Regular points and their curvature.
inline std::pair<std::vector<SurfacePoint>, std::vector<double>> regular_points(
    const SeparableSurface& s, const std::vector<SurfacePoint>& points) {
  std::pair<std::vector<SurfacePoint>, std::vector<double>> out;
  for (const auto& p : points) {
    try {
      double K = gauss_curvature_separable(s, p);
      out.first.push_back(p);
      out.second.push_back(K);
    } catch (const SingularPointError&) {
    } catch (const DomainError&) {
    }
  }
  return out;
}

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace detail

inline ConstancyReport constancy_from_values(const std::vector<double>& Ks, double tol) {
  ConstancyReport r;
  r.tol = tol;
  r.n_samples = Ks.size();
  if (Ks.empty()) return r;
  double sum = 0.0;
  for (double K : Ks) sum += K;
  r.K_mean = sum / static_cast<double>(Ks.size());
  for (double K : Ks) r.K_max_dev = std::max(r.K_max_dev, std::abs(K - r.K_mean));
  r.is_constant = r.K_max_dev <= tol * (1.0 + std::abs(r.K_mean));
  r.is_zero = r.is_constant && std::abs(r.K_mean) <= tol;
  return r;
}

/// K at every regular point; singular points are dropped.
inline ConstancyReport check_constant_K(const SeparableSurface& s, const std::vector<SurfacePoint>& points,
                                        double tol = 1e-8) {
  auto [regular, Ks] = detail::regular_points(s, points);
  if (Ks.size() < kMinClassifyPoints)
    throw TooFewPoints("need at least " + std::to_string(kMinClassifyPoints) + " regular points, got " +
                       std::to_string(Ks.size()));
  return constancy_from_values(Ks, tol);
}

inline StructureEvidence estimate_structure(const SeparableSurface& s, const std::vector<SurfacePoint>& points,
                                            const Tolerances& tols = {}) {
  StructureEvidence ev;
  std::array<double, 3> slope_min, slope_max;
  slope_min.fill(std::numeric_limits<double>::infinity());
  slope_max.fill(-std::numeric_limits<double>::infinity());
  std::vector<double> kappas;
  for (const auto& p : points) {
    UVWState st;
    try {
      st = uvw_state(s, p);
    } catch (const DomainError&) {
      continue;
    }
    ++ev.n_samples;
    const auto sq = st.squares();
    const auto sl = st.slopes();
    for (std::size_t i = 0; i < 3; ++i) {
      ev.max_square[i] = std::max(ev.max_square[i], std::abs(sq[i]));
      ev.max_slope[i] = std::max(ev.max_slope[i], std::abs(sl[i]));
      slope_min[i] = std::min(slope_min[i], sl[i]);
      slope_max[i] = std::max(slope_max[i], sl[i]);
      if (st.kappa[i]) kappas.push_back(*st.kappa[i]);
    }
    for (std::size_t k = 0; k < 3; ++k) {
      const auto a = static_cast<std::size_t>(kAxisPairs[k][0]);
      const auto b = static_cast<std::size_t>(kAxisPairs[k][1]);
      ev.pair_gap[k] = std::max(ev.pair_gap[k], std::abs(sl[a] - sl[b]));
    }
  }
  if (ev.n_samples < kMinClassifyPoints)
    throw TooFewPoints("need at least " + std::to_string(kMinClassifyPoints) + " evaluable points, got " +
                       std::to_string(ev.n_samples));
  for (std::size_t i = 0; i < 3; ++i) {
    ev.slope_spread[i] = slope_max[i] - slope_min[i];
    ev.vanishing[i] = ev.max_square[i] <= tols.structure;
    ev.constant[i] = ev.max_slope[i] <= tols.structure;
    ev.linear[i] = ev.slope_spread[i] <= tols.structure;
    ev.pair_equal[i] = ev.pair_gap[i] <= tols.structure;
  }
  ev.kappa_count = kappas.size();
  if (!kappas.empty()) {
    const double med = detail::median(kappas);
    ev.kappa_estimate = med;
    for (double k : kappas) ev.kappa_agreement = std::max(ev.kappa_agreement, std::abs(k - med));
  }
  return ev;
}

/// Decision tree: constancy first; for K = 0 the degenerate cases are tried
/// in the order X vanishing, X' vanishing, X' - Y' vanishing, then the
/// branch constant kappa = (X/X')' picks cone (kappa = 0), exponential
/// cylinder (k = 1/(2 kappa) = 1) or conical power. For K != 0 only the
/// axis-parallel rotational case is admissible.
inline ClassificationResult classify(const SeparableSurface& s, const std::vector<SurfacePoint>& points,
                                     const Tolerances& tols) {
  auto [regular, Ks] = detail::regular_points(s, points);
  if (regular.empty() && !points.empty()) throw SingularPointError("all sample points are singular");
  if (regular.size() < kMinClassifyPoints)
    throw TooFewPoints("need at least " + std::to_string(kMinClassifyPoints) + " regular points, got " +
                       std::to_string(regular.size()));

  ClassificationResult res;
  res.tolerances = tols;
  res.report = constancy_from_values(Ks, tols.constancy);
  res.evidence = estimate_structure(s, regular, tols);
  const auto& ev = res.evidence;
  auto& params = res.params;

  if (!res.report.is_constant) {
    res.label = Label::NotConstantCurvature;
    return res;
  }

  auto first_flag = [](const std::array<bool, 3>& flags) -> int {
    for (int i = 0; i < 3; ++i) {
      if (flags[static_cast<std::size_t>(i)]) return i;
    }
    return -1;
  };
  auto rotation_axis = [](int pair) { return 3 - kAxisPairs[static_cast<std::size_t>(pair)][0] - kAxisPairs[static_cast<std::size_t>(pair)][1]; };

  if (!res.report.is_zero) {
    params["K"] = res.report.K_mean;
    if (int pair = first_flag(ev.pair_equal); pair >= 0) {
      res.label = Label::RotationalCGC;
      params["axis"] = detail::axis_name(rotation_axis(pair));
    } else {
      res.label = Label::ContradictionTheorem2;
    }
    return res;
  }

  params["K"] = res.report.K_mean;
  if (int axis = first_flag(ev.vanishing); axis >= 0) {
    res.label = Label::RightCylinder;
    params["absent_axis"] = detail::axis_name(axis);
    return res;
  }
  if (int axis = first_flag(ev.constant); axis >= 0) {
    res.label = Label::Translation;
    nlohmann::ordered_json lin = nlohmann::ordered_json::array();
    for (int i = 0; i < 3; ++i) {
      if (ev.constant[static_cast<std::size_t>(i)]) lin.push_back(detail::axis_name(i));
    }
    params["linear_axes"] = std::move(lin);
    return res;
  }
  if (int pair = first_flag(ev.pair_equal); pair >= 0) {
    res.label = Label::RotationalFlat;
    params["axis"] = detail::axis_name(rotation_axis(pair));
    return res;
  }

  if (!ev.kappa_estimate || ev.kappa_agreement > tols.kappa) {
    res.label = Label::ContradictionTheorem1;
    return res;
  }
  const double kappa = *ev.kappa_estimate;
  params["kappa"] = kappa;
  if (std::abs(kappa) <= tols.kappa) {
    res.label = Label::GeneralizedCone;
    params["k"] = 0.0;
    return res;
  }
  const double k = 1.0 / (2.0 * kappa);
  params["k"] = k;
  res.label = std::abs(kappa - 0.5) <= tols.kappa ? Label::ExpCylinder : Label::ConicalPower;
  return res;
}

inline ClassificationResult classify(const SeparableSurface& s, const std::vector<SurfacePoint>& points) {
  return classify(s, points, default_tolerances(s));
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::ordered_json to_json(const ConstancyReport& r) {
  return {{"n_samples", r.n_samples}, {"K_mean", r.K_mean},       {"K_max_dev", r.K_max_dev},
          {"is_constant", r.is_constant}, {"is_zero", r.is_zero}, {"tol", r.tol}};
}

inline nlohmann::ordered_json to_json(const StructureEvidence& ev) {
  using json = nlohmann::ordered_json;
  auto flags = [](const std::array<double, 3>& mag, const std::array<bool, 3>& flag,
                  const std::array<const char*, 3>& names) {
    json out = json::object();
    for (std::size_t i = 0; i < 3; ++i) out[names[i]] = {{"value", mag[i]}, {"flag", flag[i]}};
    return out;
  };
  json out = json::object();
  out["n_samples"] = ev.n_samples;
  out["vanishing"] = flags(ev.max_square, ev.vanishing, {"X", "Y", "Z"});
  out["constant"] = flags(ev.max_slope, ev.constant, {"X", "Y", "Z"});
  out["linear"] = flags(ev.slope_spread, ev.linear, {"X", "Y", "Z"});
  out["pair_equal"] = flags(ev.pair_gap, ev.pair_equal, {"dX-dY", "dX-dZ", "dY-dZ"});
  out["kappa_estimate"] = ev.kappa_estimate ? json(*ev.kappa_estimate) : json(nullptr);
  out["kappa_agreement"] = ev.kappa_agreement;
  out["kappa_count"] = ev.kappa_count;
  return out;
}

inline nlohmann::ordered_json to_json(const Tolerances& t) {
  return {{"constancy", t.constancy}, {"structure", t.structure}, {"kappa", t.kappa}};
}

/// {"surface", "constancy", "evidence", "label", "params", "tolerances"}
inline nlohmann::ordered_json classification_report(const nlohmann::ordered_json& surface,
                                                    const ClassificationResult& r) {
  return {{"surface", surface},
          {"constancy", to_json(r.report)},
          {"evidence", to_json(r.evidence)},
          {"label", label_name(r.label)},
          {"params", r.params},
          {"tolerances", to_json(r.tolerances)}};
}

}  // namespace sepsurf
