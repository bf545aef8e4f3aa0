#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "sepsurf/catalog.hpp"
#include "sepsurf/families.hpp"
#include "sepsurf/sampler.hpp"
#include "sepsurf/suite.hpp"
#include "sepsurf/verify.hpp"

using namespace sepsurf;

namespace {

struct Sampled {
  SeparableSurface surface;
  std::vector<SurfacePoint> points;
};

Sampled sampled(const FamilySpec& spec, std::size_t n = 200, std::uint64_t seed = 42) {
  auto s = build_surface(spec);
  auto pts = sample_at_least(s, admissible_box(spec), seed, n);
  return {std::move(s), std::move(pts)};
}

Sampled unit_sphere() { return sampled(preset("unit-sphere")->spec); }

}  // namespace

TEST(Constancy, Examples) {
  auto cone = sampled(GeneralizedCone{2.0});
  auto r = check_constant_K(cone.surface, cone.points);
  EXPECT_TRUE(r.is_zero);
  EXPECT_TRUE(r.is_constant);

  auto sph = unit_sphere();
  auto s = check_constant_K(sph.surface, sph.points);
  EXPECT_TRUE(s.is_constant);
  EXPECT_FALSE(s.is_zero);
  EXPECT_NEAR(s.K_mean, 1.0, 1e-9);
  EXPECT_GE(s.n_samples, 200u);
}

TEST(Constancy, CatenoidIsNotConstant) {
  auto cat = catenoid_surface();
  // oracle: K at the waist and at z = 1 on the x axis differ
  const double K0 = gauss_curvature_separable(cat, {1.0, 0.0, 0.0});
  const double K1 = gauss_curvature_separable(cat, {std::cosh(1.0), 0.0, 1.0});
  EXPECT_GT(std::abs(K0 - K1), 0.1);
  EXPECT_NEAR(K0, -1.0, 1e-12);  // waist of the unit catenoid: K = -1/cosh^4

  auto pts = sample_at_least(cat, catenoid_box(), 42, 200);
  auto r = check_constant_K(cat, pts);
  EXPECT_FALSE(r.is_constant);
  EXPECT_FALSE(r.is_zero);
  EXPECT_EQ(classify(cat, pts).label, Label::NotConstantCurvature);
}

TEST(Constancy, TooFewPoints) {
  auto sph = unit_sphere();
  std::vector<SurfacePoint> few(sph.points.begin(), sph.points.begin() + 31);
  EXPECT_THROW(check_constant_K(sph.surface, few), TooFewPoints);
  EXPECT_THROW(estimate_structure(sph.surface, few), TooFewPoints);
  EXPECT_THROW(classify(sph.surface, few), TooFewPoints);
  few.push_back(sph.points[31]);
  EXPECT_NO_THROW(check_constant_K(sph.surface, few));
}

TEST(Constancy, IsZeroImpliesIsConstant) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  for (int i = 0; i < 2000; ++i) {
    std::vector<double> Ks(40);
    const double mean = std::pow(10.0, -12.0 + 8.0 * std::abs(nd(rng))) * (nd(rng) > 0 ? 1 : -1);
    const double spread = std::pow(10.0, -12.0 + 6.0 * std::abs(nd(rng)));
    for (auto& k : Ks) k = mean + spread * nd(rng);
    auto r = constancy_from_values(Ks, 1e-8);
    if (r.is_zero) {
      EXPECT_TRUE(r.is_constant);
    }
    EXPECT_GE(r.K_max_dev, 0.0);
  }
}

TEST(Structure, TranslationFlags) {
  auto t = sampled(Translation{1.0, Func1D::parse("y^2", "y")});
  auto ev = estimate_structure(t.surface, t.points);
  int flags = 0;
  for (bool b : ev.constant) flags += b;
  EXPECT_GE(flags, 1);
  EXPECT_FALSE(ev.constant[1]);
  EXPECT_EQ(classify(t.surface, t.points).label, Label::Translation);
}

TEST(Structure, SpherePairFlags) {
  auto sph = unit_sphere();
  auto ev = estimate_structure(sph.surface, sph.points);
  // X = x^2 squared-derivative 4u with u = x^2, so X' = 4 on every axis
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_TRUE(ev.pair_equal[k]);
    EXPECT_LE(ev.pair_gap[k], 1e-12);
  }
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_TRUE(ev.linear[i]);
    EXPECT_FALSE(ev.constant[i]);
    EXPECT_NEAR(ev.max_slope[i], 4.0, 1e-12);
  }
}

TEST(Structure, ExpCylinderKappa) {
  auto e = sampled(ExpCylinder{});
  auto ev = estimate_structure(e.surface, e.points);
  ASSERT_TRUE(ev.kappa_estimate);
  EXPECT_NEAR(*ev.kappa_estimate, 0.5, 1e-9);
  EXPECT_LE(ev.kappa_agreement, 1e-9);
  EXPECT_GT(ev.kappa_count, 0u);
  for (double m : ev.max_square) EXPECT_GE(m, 0.0);
}

TEST(Classify, Examples) {
  auto cone = sampled(GeneralizedCone{2.0});
  auto c = classify(cone.surface, cone.points);
  EXPECT_EQ(c.label, Label::GeneralizedCone);
  EXPECT_EQ(c.params["k"], 0.0);

  auto sph = unit_sphere();
  auto s = classify(sph.surface, sph.points);
  EXPECT_EQ(s.label, Label::RotationalCGC);
  EXPECT_NEAR(s.params["K"].get<double>(), 1.0, 1e-8);
  EXPECT_EQ(s.params["axis"], "z");

  auto cp = sampled(ConicalPower{});
  auto p = classify(cp.surface, cp.points);
  EXPECT_EQ(p.label, Label::ConicalPower);
  EXPECT_NEAR(p.params["k"].get<double>(), 2.0, 2e-6);
  EXPECT_NEAR(p.params["kappa"].get<double>(), 0.25, 1e-6);
}

TEST(Classify, ConicalKRecovery) {
  std::mt19937_64 rng(77);
  for (int i = 0; i < 30; ++i) {
    const double k = random_conical_k(rng);
    ConicalPower spec;
    spec.k = k;
    spec.coeff = {1.0, 1.0, -2.0};  // (1, 1, 1) is on the surface for every k
    auto cp = sampled(spec);
    auto r = classify(cp.surface, cp.points);
    ASSERT_EQ(r.label, Label::ConicalPower) << k;
    EXPECT_LE(std::abs(r.params["k"].get<double>() - k), 1e-6 * std::abs(k)) << k;
  }
}

TEST(Classify, RoundTripOverRandomInstances) {
  std::mt19937_64 rng(2024);
  for (auto tag : kFamilyTags) {
    for (int i = 0; i < 5; ++i) {
      auto e = random_instance(tag, rng);
      auto s = sampled(e.spec, 100, 7);
      auto r = classify(s.surface, s.points);
      EXPECT_EQ(r.label, e.expected) << tag << " " << e.name << " got " << label_name(r.label);
      EXPECT_FALSE(is_contradiction(r.label));
    }
  }
}

TEST(Classify, CatalogHasNoContradictions) {
  for (const auto& e : default_catalog()) {
    auto s = sampled(e.spec, 200, 3);
    auto r = classify(s.surface, s.points);
    EXPECT_EQ(r.label, e.expected) << e.name << " got " << label_name(r.label);
    EXPECT_FALSE(is_contradiction(r.label)) << e.name;
  }
}

TEST(Classify, NonRotationalConstantCurvatureIsContradiction) {
  // A near-spherical ellipsoid passes a loose constancy gate with K != 0,
  // but no two of X', Y', Z' agree, so no rotation axis exists.
  auto s = SeparableSurface::from_strings("x^2", "1.1*y^2", "1.2*z^2 - 1");
  Box b;
  b.lo = {-1, -1, -1};
  b.hi = {1, 1, 1};
  auto pts = sample_at_least(s, b, 42, 200);
  Tolerances t;
  t.constancy = 0.5;
  auto r = classify(s, pts, t);
  EXPECT_EQ(r.label, Label::ContradictionTheorem2);
  EXPECT_TRUE(is_contradiction(r.label));
}

TEST(Classify, MonotoneInTolerance) {
  // loosening the constancy tolerance never turns a constant report into a
  // non-constant one
  std::vector<Sampled> inputs;
  for (const auto& e : default_catalog()) inputs.push_back(sampled(e.spec, 64, 11));
  inputs.push_back({catenoid_surface(), sample_at_least(catenoid_surface(), catenoid_box(), 11, 64)});
  for (const auto& in : inputs) {
    bool was_constant = false, was_zero = false;
    for (double tol = 1e-14; tol <= 10.0; tol *= 10.0) {
      auto r = check_constant_K(in.surface, in.points, tol);
      if (was_constant) {
        EXPECT_TRUE(r.is_constant);
      }
      if (was_zero) {
        EXPECT_TRUE(r.is_zero);
      }
      was_constant = r.is_constant;
      was_zero = r.is_zero;
    }
    EXPECT_TRUE(was_constant);
  }
}

TEST(Report, KeyOrder) {
  auto sph = unit_sphere();
  auto doc = classification_report({{"preset", "unit-sphere"}}, classify(sph.surface, sph.points));
  std::vector<std::string> keys;
  for (auto it = doc.begin(); it != doc.end(); ++it) keys.push_back(it.key());
  EXPECT_EQ(keys, (std::vector<std::string>{"surface", "constancy", "evidence", "label", "params", "tolerances"}));
  EXPECT_EQ(doc["label"], "rotational-cgc");
  EXPECT_EQ(doc["tolerances"]["constancy"], 1e-8);
}

TEST(Suite, PassesAndIsDeterministic) {
  auto a = run_theorem_suite(42, "all");
  for (const auto& c : a.checks) EXPECT_TRUE(c.passed) << c.suite << "/" << c.name << " worst " << c.worst << " " << c.note;
  EXPECT_TRUE(a.passed());
  auto b = run_theorem_suite(42, "all");
  EXPECT_EQ(to_json(a).dump(2), to_json(b).dump(2));
  for (std::string_view s : {"geometry", "families", "classifier"}) {
    auto part = run_theorem_suite(42, s);
    EXPECT_FALSE(part.checks.empty()) << s;
    for (const auto& c : part.checks) {
      EXPECT_EQ(c.suite, s);
      const auto* full = a.find(c.name);
      ASSERT_NE(full, nullptr) << c.name;
      EXPECT_EQ(full->worst, c.worst) << c.name;
    }
  }
  EXPECT_THROW(run_theorem_suite(42, "bogus"), InvalidParameter);
}
