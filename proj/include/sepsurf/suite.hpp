#pragma once

// Numerical identity checks over a catalog of surfaces, grouped into the
// geometry, families and classifier suites. Reports carry worst-case
// magnitudes and their thresholds and are deterministic for a given seed.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "sepsurf/catalog.hpp"
#include "sepsurf/families.hpp"
#include "sepsurf/geometry.hpp"
#include "sepsurf/sampler.hpp"
#include "sepsurf/verify.hpp"

namespace sepsurf {

struct TheoremCheck {
  std::string name;
  std::string suite;
  double worst = 0.0;
  double threshold = 0.0;
  std::size_t samples = 0;
  bool passed = false;
  std::string note;  // set when a check could not run as intended
};

struct TheoremCheckReport {
  std::uint64_t seed = 0;
  std::string suite;
  std::vector<TheoremCheck> checks;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const TheoremCheck& c) { return c.passed; });
  }
  const TheoremCheck* find(std::string_view name) const {
    for (const auto& c : checks) {
      if (c.name == name) return &c;
    }
    return nullptr;
  }
};

inline constexpr std::array<std::string_view, 4> kSuiteNames{"all", "geometry", "families", "classifier"};

/// Samples per surface used by the checks.
inline constexpr std::size_t kSuiteMinSamples = 1000;
/// Random instances per family tag in the classifier round trip.
inline constexpr int kRoundTripInstances = 20;

namespace detail {

/// Accumulates max magnitude and sample count for one check.
class CheckBuilder {
 public:
  CheckBuilder(std::string name, std::string suite, double threshold)
      : check_{std::move(name), std::move(suite), 0.0, threshold, 0, false, {}} {}

  void add(double magnitude) {
    ++check_.samples;
    if (!(magnitude <= check_.worst)) check_.worst = std::isnan(magnitude) ? INFINITY : magnitude;
  }
  void fail(std::string note) {
    failed_ = true;
    if (check_.note.empty()) check_.note = std::move(note);
  }
  void set_note(std::string note) { check_.note = std::move(note); }

  TheoremCheck finish(std::size_t min_samples = 1) {
    check_.passed = !failed_ && check_.samples >= min_samples && check_.worst <= check_.threshold;
    if (check_.samples < min_samples && check_.note.empty())
      check_.note = "only " + std::to_string(check_.samples) + " samples";
    return check_;
  }

 private:
  TheoremCheck check_;
  bool failed_ = false;
};

struct SampledSurface {
  const CatalogEntry* entry = nullptr;
  SeparableSurface surface;
  std::vector<SurfacePoint> points;
};

inline std::vector<SampledSurface> sample_catalog(const std::vector<CatalogEntry>& catalog, std::uint64_t seed) {
  std::vector<SampledSurface> out;
  out.reserve(catalog.size());
  for (const auto& e : catalog) {
    SampledSurface ss{&e, build_surface(e.spec), {}};
    ss.points = sample_at_least(ss.surface, admissible_box(e.spec), seed, kSuiteMinSamples);
    out.push_back(std::move(ss));
  }
  return out;
}

inline Eigen::Matrix3d random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Eigen::Quaterniond q(nd(rng), nd(rng), nd(rng), nd(rng));
  q.normalize();
  return q.toRotationMatrix();
}

/// t with f(t) = target on the monotone branch through t0, by Newton
/// iteration; absent when the branch does not reach the target.
inline std::optional<double> invert_near(const Univariate& f, double t0, double target) {
  double t = t0;
  double slope0 = 0.0;
  for (int it = 0; it < 20; ++it) {
    Jet3 j;
    try {
      j = f.jet(t);
    } catch (const DomainError&) {
      return std::nullopt;
    }
    if (it == 0) slope0 = j.d1;
    if (j.d1 == 0.0 || (j.d1 > 0.0) != (slope0 > 0.0)) return std::nullopt;
    const double r = j.v - target;
    if (std::abs(r) <= 1e-15 * (1.0 + std::abs(target))) return t;
    t -= r / j.d1;
  }
  return std::nullopt;
}

/// Q = X Y' Z' + Y X' Z' + Z X' Y' - 4K (X+Y+Z)^2 from per-axis jets.
inline double plane_q(const std::array<Jet3, 3>& j, double K) {
  const double X = j[0].d1 * j[0].d1, Y = j[1].d1 * j[1].d1, Z = j[2].d1 * j[2].d1;
  const double dX = 2.0 * j[0].d2, dY = 2.0 * j[1].d2, dZ = 2.0 * j[2].d2;
  const double sum = X + Y + Z;
  return X * dY * dZ + Y * dX * dZ + Z * dX * dY - 4.0 * K * sum * sum;
}

inline bool flat_family(const FamilySpec& spec) {
  return std::holds_alternative<RightCylinder>(spec) || std::holds_alternative<Translation>(spec) ||
         std::holds_alternative<GeneralizedCone>(spec) || std::holds_alternative<ExpCylinder>(spec) ||
         std::holds_alternative<ConicalPower>(spec);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// geometry

inline std::vector<TheoremCheck> geometry_checks(const std::vector<detail::SampledSurface>& sampled,
                                                 std::uint64_t seed) {
  std::vector<TheoremCheck> out;
  std::mt19937_64 rng(seed ^ 0x67656f6dULL);

  detail::CheckBuilder agree("formula-agreement", "geometry", 1e-10);
  detail::CheckBuilder k2("k2-residual", "geometry", 1e-8);
  detail::CheckBuilder rigid("rigid-motion-invariance", "geometry", 1e-10);
  detail::CheckBuilder scale("scaling-invariance", "geometry", 1e-10);
  detail::CheckBuilder qgrad("q-gradient-normal", "geometry", 1e-5);
  detail::CheckBuilder kappa("kappa-consistency", "geometry", 1e-7);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  for (const auto& ss : sampled) {
    const auto& s = ss.surface;
    const bool kappa_family = std::holds_alternative<GeneralizedCone>(ss.entry->spec) ||
                              std::holds_alternative<ExpCylinder>(ss.entry->spec) ||
                              std::holds_alternative<ConicalPower>(ss.entry->spec);
    for (const auto& p : ss.points) {
      ImplicitJet2 jet;
      double K = 0.0;
      try {
        jet = implicit_jet(s, p);
        K = gauss_curvature_separable(s, p);
      } catch (const SingularPointError&) {
        continue;
      }
      const double Ki = gauss_curvature_implicit(jet);
      agree.add(std::abs(Ki - K) / (1.0 + std::abs(K)));
      k2.add(std::abs(k2_residual(uvw_state(s, p), K)));

      RigidMotion T;
      T.rotation = detail::random_rotation(rng);
      T.translation = {unit(rng), unit(rng), unit(rng)};
      rigid.add(std::abs(gauss_curvature_implicit(transform_jet(jet, T)) - Ki) / (1.0 + std::abs(Ki)));

      double lambda = std::exp(std::log(10.0) * unit(rng));
      if (unit(rng) < 0.0) lambda = -lambda;
      ImplicitJet2 scaled = jet;
      scaled.F *= lambda;
      scaled.grad *= lambda;
      scaled.hess *= lambda;
      scale.add(std::abs(gauss_curvature_implicit(scaled) - Ki) / (1.0 + std::abs(Ki)));

      if (kappa_family) {
        const auto st = uvw_state(s, p);
        if (st.kappa[0] && st.kappa[1]) kappa.add(std::abs(*st.kappa[0] - *st.kappa[1]));
        if (st.kappa[1] && st.kappa[2]) kappa.add(std::abs(*st.kappa[1] - *st.kappa[2]));
      }

      // Q vanishes on u + v + w = 0, so its gradient is normal to that
      // plane: Q_u = Q_v = Q_w. Tabulated profiles lack the smoothness.
      if (s.has_tabulated()) continue;
      constexpr double kStep = 1e-4;
      const auto base = axis_jets(s, p);
      std::array<std::optional<double>, 3> grad;
      for (int i = 0; i < 3; ++i) {
        const auto ii = static_cast<std::size_t>(i);
        if (std::abs(base[ii].d1) < 1e-2) continue;  // u not a local coordinate
        auto tp = detail::invert_near(s.fn(i), p[i], base[ii].v + kStep);
        auto tm = detail::invert_near(s.fn(i), p[i], base[ii].v - kStep);
        if (!tp || !tm) continue;
        try {
          auto jp = base, jm = base;
          jp[ii] = s.fn(i).jet(*tp);
          jm[ii] = s.fn(i).jet(*tm);
          grad[ii] = (detail::plane_q(jp, K) - detail::plane_q(jm, K)) / (2.0 * kStep);
        } catch (const DomainError&) {
        }
      }
      const double sum = base[0].d1 * base[0].d1 + base[1].d1 * base[1].d1 + base[2].d1 * base[2].d1;
      const double norm = std::max(1.0, sum * sum);
      if (grad[0] && grad[1]) qgrad.add(std::abs(*grad[0] - *grad[1]) / norm);
      if (grad[1] && grad[2]) qgrad.add(std::abs(*grad[1] - *grad[2]) / norm);
    }
  }
  out.push_back(agree.finish(10000));
  out.push_back(k2.finish(10000));
  out.push_back(rigid.finish(10000));
  out.push_back(scale.finish(10000));
  out.push_back(qgrad.finish(1000));
  out.push_back(kappa.finish(1000));
  return out;
}

// ---------------------------------------------------------------------------
// families

inline std::vector<TheoremCheck> family_checks(const std::vector<detail::SampledSurface>& sampled,
                                               std::uint64_t seed) {
  std::vector<TheoremCheck> out;
  std::mt19937_64 rng(seed ^ 0x66616d69ULL);

  detail::CheckBuilder on_surface("sampler-on-surface", "families", 1e-9);
  detail::CheckBuilder flat("flatness", "families", 1e-8);
  detail::CheckBuilder cgc("rotational-cgc-curvature", "families", 1e-4);
  detail::CheckBuilder energy("profile-energy", "families", 1e-8);
  detail::CheckBuilder apex("cone-apex-scaling", "families", 1e-9);
  detail::CheckBuilder ruling("exp-cylinder-ruling", "families", 1e-9);

  auto record = [&](const FamilySpec& spec, const SeparableSurface& s, const std::vector<SurfacePoint>& pts) {
    for (const auto& p : pts) on_surface.add(std::abs(s.F(p)));
    if (detail::flat_family(spec)) {
      for (const auto& p : pts) {
        try {
          flat.add(std::abs(gauss_curvature_separable(s, p)));
        } catch (const SingularPointError&) {
        }
      }
    }
    if (const auto* rc = std::get_if<RotationalCGC>(&spec)) {
      for (const auto& p : pts) {
        try {
          cgc.add(std::abs(gauss_curvature_separable(s, p) - rc->K));
        } catch (const SingularPointError&) {
        }
      }
      const auto profile = rotational_profile(*rc);
      const double e0 = rc->dr0 * rc->dr0 + rc->K * rc->r0 * rc->r0;
      for (const auto& n : profile.nodes) energy.add(std::abs(n.dr * n.dr + rc->K * n.r * n.r - e0));
    }
    auto scale_about = [&](const Vec3& m, const Vec3& n) {
      for (const auto& p : pts) {
        for (double t : {0.5, 2.0}) {
          SurfacePoint q;
          for (int i = 0; i < 3; ++i) {
            const auto ii = static_cast<std::size_t>(i);
            const double a = -n[ii] / m[ii];
            q[i] = a + t * (p[i] - a);
          }
          try {
            apex.add(std::abs(s.F(q)));
          } catch (const DomainError&) {
            apex.fail("scaled point left the chart");
          }
        }
      }
    };
    if (const auto* gc = std::get_if<GeneralizedCone>(&spec)) scale_about(gc->m, gc->n);
    if (const auto* cp = std::get_if<ConicalPower>(&spec)) scale_about(cp->m, cp->n);
    if (const auto* ec = std::get_if<ExpCylinder>(&spec)) {
      for (const auto& p : pts) {
        for (double t : {-1.0, -0.5, 0.5, 1.0}) {
          SurfacePoint q;
          for (int i = 0; i < 3; ++i) q[i] = p[i] + t / ec->m[static_cast<std::size_t>(i)];
          // F(q) = e^t F(p)
          ruling.add(std::abs(s.F(q)) / std::exp(t));
        }
      }
    }
  };

  for (const auto& ss : sampled) record(ss.entry->spec, ss.surface, ss.points);
  std::uint64_t sub = 0;
  for (auto tag : kFamilyTags) {
    for (int i = 0; i < 3; ++i) {
      CatalogEntry e = random_instance(tag, rng);
      SeparableSurface s = build_surface(e.spec);
      record(e.spec, s, sample_at_least(s, admissible_box(e.spec), seed + ++sub, kSuiteMinSamples));
    }
  }

  out.push_back(on_surface.finish(10000));
  out.push_back(flat.finish(5000));
  out.push_back(cgc.finish(1000));
  out.push_back(energy.finish(100));
  out.push_back(apex.finish(1000));
  out.push_back(ruling.finish(1000));
  return out;
}

// ---------------------------------------------------------------------------
// classifier

inline std::vector<TheoremCheck> classifier_checks(const std::vector<detail::SampledSurface>& sampled,
                                                   std::uint64_t seed) {
  std::vector<TheoremCheck> out;
  std::mt19937_64 rng(seed ^ 0x636c6173ULL);

  detail::CheckBuilder round_trip("round-trip-labels", "classifier", 0.0);
  detail::CheckBuilder k_recovery("conical-k-recovery", "classifier", 1e-6);
  detail::CheckBuilder kappa_presets("preset-kappa", "classifier", 1e-6);
  detail::CheckBuilder sphere_K("sphere-fitted-K", "classifier", 1e-8);
  detail::CheckBuilder monotone("monotone-tolerance", "classifier", 0.0);
  detail::CheckBuilder sentinel("sentinel-count", "classifier", 0.0);
  detail::CheckBuilder catenoid("catenoid-negative-control", "classifier", 0.0);

  auto is_wrong = [](Label got, Label want) { return got == want ? 0.0 : 1.0; };

  for (const auto& ss : sampled) {
    const auto& e = *ss.entry;
    const auto res = classify(ss.surface, ss.points);
    round_trip.add(is_wrong(res.label, e.expected));
    sentinel.add(is_contradiction(res.label) ? 1.0 : 0.0);
    if (e.name.rfind("paper-fig1-", 0) == 0 && e.k && res.evidence.kappa_estimate) {
      const double want = *e.k == 0.0 ? 0.0 : 1.0 / (2.0 * *e.k);
      kappa_presets.add(std::abs(*res.evidence.kappa_estimate - want));
    }
    if (e.name.rfind("sphere-r", 0) == 0 && e.K) {
      sphere_K.add(res.label == Label::RotationalCGC ? std::abs(res.report.K_mean - *e.K) / *e.K : INFINITY);
    }

    // A looser tolerance may only turn flags on.
    Tolerances t = default_tolerances(ss.surface);
    auto prev_c = check_constant_K(ss.surface, ss.points, t.constancy);
    auto prev_e = estimate_structure(ss.surface, ss.points, t);
    for (int step = 0; step < 3; ++step) {
      t.constancy *= 10.0;
      t.structure *= 10.0;
      t.kappa *= 10.0;
      auto c = check_constant_K(ss.surface, ss.points, t.constancy);
      auto ev = estimate_structure(ss.surface, ss.points, t);
      bool ok = (!prev_c.is_constant || c.is_constant) && (!prev_c.is_zero || c.is_zero);
      for (std::size_t i = 0; i < 3; ++i) {
        ok = ok && (!prev_e.vanishing[i] || ev.vanishing[i]) && (!prev_e.constant[i] || ev.constant[i]) &&
             (!prev_e.linear[i] || ev.linear[i]) && (!prev_e.pair_equal[i] || ev.pair_equal[i]);
      }
      monotone.add(ok ? 0.0 : 1.0);
      prev_c = c;
      prev_e = ev;
    }
  }

  std::uint64_t sub = 0;
  for (auto tag : kFamilyTags) {
    for (int i = 0; i < kRoundTripInstances; ++i) {
      CatalogEntry e = random_instance(tag, rng);
      SeparableSurface s = build_surface(e.spec);
      GridSpec g;
      g.box = admissible_box(e.spec);
      g.nx = g.ny = g.nz = 24;
      g.seed = seed + ++sub;
      const auto res = classify(s, sample_points(s, g));
      round_trip.add(is_wrong(res.label, e.expected));
      sentinel.add(is_contradiction(res.label) ? 1.0 : 0.0);
      if (e.expected == Label::ConicalPower && res.label == Label::ConicalPower)
        k_recovery.add(std::abs(res.params["k"].get<double>() - *e.k) / std::abs(*e.k));
    }
  }

  {
    const SeparableSurface s = catenoid_surface();
    const auto res = classify(s, sample_at_least(s, catenoid_box(), seed, kSuiteMinSamples));
    catenoid.add(res.label == Label::NotConstantCurvature ? 0.0 : 1.0);
  }

  out.push_back(round_trip.finish(static_cast<std::size_t>(kRoundTripInstances) * kFamilyTags.size()));
  out.push_back(k_recovery.finish(kRoundTripInstances));
  out.push_back(kappa_presets.finish(3));
  out.push_back(sphere_K.finish(3));
  out.push_back(monotone.finish(1));
  out.push_back(sentinel.finish(1));
  out.push_back(catenoid.finish(1));
  return out;
}

// ---------------------------------------------------------------------------

inline TheoremCheckReport run_theorem_suite(const std::vector<CatalogEntry>& catalog, std::uint64_t seed,
                                            std::string_view suite = "all") {
  if (std::find(kSuiteNames.begin(), kSuiteNames.end(), suite) == kSuiteNames.end())
    throw InvalidParameter("unknown suite '" + std::string(suite) + "'");
  TheoremCheckReport report;
  report.seed = seed;
  report.suite = std::string(suite);
  const auto sampled = detail::sample_catalog(catalog, seed);
  auto append = [&](std::vector<TheoremCheck> checks) {
    for (auto& c : checks) report.checks.push_back(std::move(c));
  };
  if (suite == "all" || suite == "geometry") append(geometry_checks(sampled, seed));
  if (suite == "all" || suite == "families") append(family_checks(sampled, seed));
  if (suite == "all" || suite == "classifier") append(classifier_checks(sampled, seed));
  return report;
}

inline TheoremCheckReport run_theorem_suite(std::uint64_t seed, std::string_view suite = "all") {
  return run_theorem_suite(default_catalog(), seed, suite);
}

inline nlohmann::ordered_json to_json(const TheoremCheck& c) {
  nlohmann::ordered_json j{{"name", c.name},           {"suite", c.suite},     {"passed", c.passed},
                           {"worst", c.worst},         {"threshold", c.threshold}, {"samples", c.samples}};
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

inline nlohmann::ordered_json to_json(const TheoremCheckReport& r) {
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  return {{"suite", r.suite}, {"seed", r.seed}, {"passed", r.passed()}, {"checks", std::move(checks)}};
}

}  // namespace sepsurf
