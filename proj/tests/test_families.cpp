#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "sepsurf/catalog.hpp"
#include "sepsurf/families.hpp"
#include "sepsurf/geometry.hpp"
#include "sepsurf/sampler.hpp"

using namespace sepsurf;

TEST(Build, ConeExample) {
  auto s = build_surface(GeneralizedCone{2.0, {1, 1, 1}, {0, 0, 0}});
  // x^2 = yz on the positive chart
  for (auto [y, z] : {std::pair{1.0, 1.0}, {0.5, 2.0}, {3.0, 0.7}}) {
    SurfacePoint p{std::sqrt(y * z), y, z};
    EXPECT_NEAR(s.F(p), 0.0, 1e-14);
    EXPECT_NEAR(gauss_curvature_separable(s, p), 0.0, 1e-14);
  }
  EXPECT_GT(std::abs(s.F({1.0, 2.0, 2.0})), 0.1);
  EXPECT_THROW(s.F({-1.0, 1.0, 1.0}), DomainError);
}

TEST(Build, ExpCylinderExample) {
  auto s = build_surface(ExpCylinder{});
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 50; ++i) {
    SurfacePoint p{u(rng), u(rng), u(rng)};
    EXPECT_NEAR(s.F(p), -std::exp(p.x) + std::exp(p.y) + std::exp(p.z), 1e-12);
  }
}

TEST(Build, ConicalPowerExample) {
  ConicalPower spec;  // k = 2
  EXPECT_EQ(spec.exponent(), -1.0);
  auto charts = conical_charts(spec);
  EXPECT_EQ(charts, (std::array<int, 3>{1, 1, -1}));
  auto s = build_surface(spec);
  for (auto [x, y] : {std::pair{1.0, 1.0}, {0.5, 2.0}, {1.5, 0.6}}) {
    const double z = -1.0 / (1.0 / x + 1.0 / y);
    EXPECT_NEAR(s.F({x, y, z}), 0.0, 1e-14);
    EXPECT_NEAR(s.F({x, y, z}), 1 / x + 1 / y + 1 / z, 1e-14);
  }
  Box b = admissible_box(spec);
  EXPECT_GT(b.lo[0], 0.0);
  EXPECT_GT(b.lo[1], 0.0);
  EXPECT_LT(b.hi[2], 0.0);
}

TEST(Build, InvalidParameters) {
  ConicalPower half;
  half.k = 0.5;  // exponent 2 with same-sign terms: only the apex
  EXPECT_THROW(build_surface(half), DegeneratePointSet);
  half.coeff = {1.0, 1.0, -1.0};
  EXPECT_NO_THROW(build_surface(half));
  EXPECT_THROW(build_surface(ConicalPower{0.0}), InvalidParameter);
  EXPECT_THROW(build_surface(ConicalPower{1.0}), InvalidParameter);
  ConicalPower frac;
  frac.k = 3.0;  // exponent -1/2, positive chart only, same-sign terms
  EXPECT_THROW(build_surface(frac), EmptyZeroSet);

  EXPECT_THROW(build_surface(ExpCylinder{{1, 1, 1}, {1, 2, 3}}), EmptyZeroSet);
  EXPECT_THROW(build_surface(ExpCylinder{{1, 0, 1}, {1, -2, 3}}), InvalidParameter);
  EXPECT_THROW(build_surface(GeneralizedCone{1.0}), InvalidParameter);
  EXPECT_THROW(build_surface(GeneralizedCone{0.0}), InvalidParameter);
  EXPECT_THROW(build_surface(Translation{0.0, Func1D::parse("y^2", "y")}), InvalidParameter);
  EXPECT_THROW(build_surface(RotationalCGC{0.0}), InvalidParameter);
  EXPECT_THROW(build_surface(RotationalCGC{1.0, -1.0}), InvalidParameter);
  EXPECT_THROW(build_surface(RotationalCGC{1.0, 1.0, 0.99}), InvalidParameter);
  EXPECT_THROW(rotational_profile(1.0, 1.0, 0.0, 1.0, 0.01), InvalidParameter);  // step > 1e-3 span
  EXPECT_THROW(build_surface(RightCylinder{Func1D::parse("1"), Func1D::parse("2", "y"), 0.0, 2}), InvalidParameter);
}

TEST(Build, ConeQIsDerived) {
  GeneralizedCone c{0.3};
  EXPECT_EQ(c.p + c.q(), 1.0);
}

// ---------------------------------------------------------------------------
// Rotational profiles

TEST(Profile, SphereBand) {
  RotationalProfile prof = rotational_profile(RotationalCGC{1.0, 1.0, 0.0});
  ASSERT_TRUE(prof.h);
  // r = cos s, z = sin s: h(z) = z^2 - 1
  const Interval d = prof.h->domain();
  EXPECT_LT(d.lo, -0.9);
  EXPECT_GT(d.hi, 0.9);
  for (int i = 1; i < 100; ++i) {
    const double z = d.lo + (d.hi - d.lo) * i / 100.0;
    Jet3 j = prof.h->jet(z);
    EXPECT_NEAR(j.v, z * z - 1.0, 1e-6);
    EXPECT_NEAR(j.d1, 2.0 * z, 1e-6);
    EXPECT_NEAR(j.d2, 2.0, 1e-5);
  }
}

TEST(Profile, EnergyConserved) {
  for (RotationalCGC spec : {RotationalCGC{1.0, 0.5, 0.0}, RotationalCGC{-1.0, 0.5, 0.0}, RotationalCGC{2.0, 0.3, 0.2},
                             RotationalCGC{-0.7, 1.0, -0.3}}) {
    auto prof = rotational_profile(spec);
    const double e0 = spec.dr0 * spec.dr0 + spec.K * spec.r0 * spec.r0;
    ASSERT_GT(prof.nodes.size(), 100u);
    for (const auto& n : prof.nodes) EXPECT_NEAR(n.dr * n.dr + spec.K * n.r * n.r, e0, 1e-8);
    for (std::size_t i = 1; i < prof.nodes.size(); ++i) EXPECT_GT(prof.nodes[i].z, prof.nodes[i - 1].z);
  }
}

TEST(Profile, SpindleAndPseudosphericalCurvature) {
  for (RotationalCGC spec : {RotationalCGC{1.0, 0.5, 0.0}, RotationalCGC{-1.0, 0.5, 0.0}}) {
    auto s = build_surface(spec);
    auto prof = rotational_profile(spec);
    int checked = 0;
    for (std::size_t i = 1; i + 1 < prof.nodes.size(); i += 7) {
      // midpoint between nodes exercises the interpolant, not the samples
      const double z = 0.5 * (prof.nodes[i].z + prof.nodes[i + 1].z);
      const double r = std::sqrt(-prof.h->value(z));
      for (double phi : {0.3, 2.0, 4.4}) {
        SurfacePoint p{r * std::cos(phi), r * std::sin(phi), z};
        EXPECT_NEAR(gauss_curvature_implicit(implicit_jet(s, p)), spec.K, 1e-4);
        ++checked;
      }
    }
    EXPECT_GT(checked, 100);
  }
}

TEST(Profile, TruncatesAtTheAxis) {
  // K = 1, r0 = 0.5: r = 0.5 cos s reaches the axis inside the default span
  auto prof = rotational_profile(RotationalCGC{1.0, 0.5, 0.0});
  EXPECT_TRUE(prof.truncated);
  for (const auto& n : prof.nodes) {
    EXPECT_GT(n.r, kMinProfileRadiusFraction * 0.5);
    EXPECT_LT(std::abs(n.dr), kMaxProfileSlope);
  }
}

// ---------------------------------------------------------------------------
// Quintic Hermite tabulation

TEST(Tabulated, ReproducesQuinticsExactly) {
  // p(x) = 1 - 2x + 0.5x^2 + 3x^3 - x^4 + 0.25x^5
  auto jet = [](double x) {
    Jet3 j;
    j.v = 1 - 2 * x + 0.5 * x * x + 3 * x * x * x - std::pow(x, 4) + 0.25 * std::pow(x, 5);
    j.d1 = -2 + x + 9 * x * x - 4 * x * x * x + 1.25 * std::pow(x, 4);
    j.d2 = 1 + 18 * x - 12 * x * x + 5 * x * x * x;
    j.d3 = 18 - 24 * x + 15 * x * x;
    return j;
  };
  std::vector<double> xs{-1.0, -0.3, 0.2, 1.0, 1.7};
  std::vector<Jet3> js;
  for (double x : xs) js.push_back(jet(x));
  TabulatedFunc1D t(xs, js);
  for (int i = 0; i <= 200; ++i) {
    const double x = std::min(1.7, -1.0 + 2.7 * i / 200.0);
    Jet3 a = t.jet(x), b = jet(x);
    EXPECT_NEAR(a.v, b.v, 1e-12);
    EXPECT_NEAR(a.d1, b.d1, 1e-11);
    EXPECT_NEAR(a.d2, b.d2, 1e-10);
    EXPECT_NEAR(a.d3, b.d3, 1e-9);
  }
  EXPECT_THROW(t.jet(1.8), DomainError);
  EXPECT_THROW(TabulatedFunc1D({0.0, 0.0}, {Jet3{}, Jet3{}}), InvalidParameter);
}

TEST(Tabulated, IsSecondOrderContinuousAtBreakpoints) {
  std::vector<double> xs{0.0, 0.5, 1.0};
  std::vector<Jet3> js{{0.0, 1.0, 0.0, 0.0}, {0.3, -1.0, 2.0, 0.0}, {1.0, 0.0, -1.0, 0.0}};
  TabulatedFunc1D t(xs, js);
  const double eps = 1e-9;
  Jet3 l = t.jet(0.5 - eps), r = t.jet(0.5 + eps);
  EXPECT_NEAR(l.v, r.v, 1e-8);
  EXPECT_NEAR(l.d1, r.d1, 1e-6);
  EXPECT_NEAR(l.d2, r.d2, 1e-5);
  EXPECT_NEAR(t.jet(0.5).d2, 2.0, 1e-12);
}

// ---------------------------------------------------------------------------
// Family invariants over random admissible instances

TEST(Invariants, FlatFamiliesHaveZeroCurvature) {
  std::mt19937_64 rng(5);
  for (auto tag : {"right-cylinder", "translation", "generalized-cone", "exp-cylinder", "conical-power"}) {
    for (int i = 0; i < 5; ++i) {
      CatalogEntry e = random_instance(tag, rng);
      auto s = build_surface(e.spec);
      auto pts = sample_at_least(s, admissible_box(e.spec), 100 + i, 1000);
      ASSERT_GE(pts.size(), 1000u) << tag;
      for (const auto& p : pts) {
        EXPECT_LE(std::abs(s.F(p)), 1e-9);
        EXPECT_LE(std::abs(gauss_curvature_separable(s, p)), 1e-8) << tag;
      }
    }
  }
}

TEST(Invariants, ConeApexScaling) {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 10; ++i) {
    auto e = random_instance("generalized-cone", rng);
    const auto& gc = std::get<GeneralizedCone>(e.spec);
    auto s = build_surface(gc);
    for (const auto& p : sample_at_least(s, admissible_box(gc), 7, 200)) {
      for (double t : {0.5, 2.0}) {
        SurfacePoint q;
        for (int k = 0; k < 3; ++k) {
          const double apex = -gc.n[static_cast<std::size_t>(k)] / gc.m[static_cast<std::size_t>(k)];
          q[k] = apex + t * (p[k] - apex);
        }
        EXPECT_LE(std::abs(s.F(q)), 1e-9);
      }
    }
  }
}

TEST(Invariants, ExpCylinderRuling) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 10; ++i) {
    auto e = random_instance("exp-cylinder", rng);
    const auto& ec = std::get<ExpCylinder>(e.spec);
    auto s = build_surface(ec);
    for (const auto& p : sample_at_least(s, admissible_box(ec), 9, 200)) {
      for (double t : {-1.0, -0.5, 0.5, 1.0}) {
        SurfacePoint q{p.x + t / ec.m[0], p.y + t / ec.m[1], p.z + t / ec.m[2]};
        EXPECT_LE(std::abs(s.F(q)), 1e-9 * std::exp(t));
      }
    }
  }
}

TEST(Invariants, RandomCgcInstances) {
  std::mt19937_64 rng(10);
  for (int i = 0; i < 5; ++i) {
    auto e = random_instance("rotational-cgc", rng);
    const auto& rc = std::get<RotationalCGC>(e.spec);
    auto s = build_surface(rc);
    auto pts = sample_at_least(s, admissible_box(rc), 11, 500);
    ASSERT_GE(pts.size(), 500u);
    for (const auto& p : pts) EXPECT_NEAR(gauss_curvature_separable(s, p), rc.K, 1e-4);
  }
}

// ---------------------------------------------------------------------------
// JSON

TEST(Json, RoundTripsCatalog) {
  for (const auto& e : default_catalog()) {
    auto doc = to_json(e.spec);
    auto back = family_from_json(doc);
    EXPECT_EQ(back.index(), e.spec.index()) << e.name;
    EXPECT_EQ(to_json(back), doc) << e.name;
  }
}

TEST(Json, ParsesHandWrittenSpecs) {
  auto spec = family_from_json(nlohmann::ordered_json::parse(
      R"({"family": "right-cylinder", "params": {"f": "y^2", "g": "-z", "plane": "x"}})"));
  auto s = build_surface(spec);
  EXPECT_TRUE(s.f().is_constant());
  EXPECT_NEAR(s.F({5.0, 2.0, 4.0}), 0.0, 1e-15);

  auto dom = family_from_json(nlohmann::ordered_json::parse(
      R"j({"family": "translation", "params": {"a": 2, "g": {"expr": "log(y)", "domain": [0, null]}}})j"));
  EXPECT_EQ(std::get<Translation>(dom).g.domain().lo, 0.0);
  EXPECT_TRUE(std::isinf(std::get<Translation>(dom).g.domain().hi));

  using nlohmann::ordered_json;
  EXPECT_THROW(family_from_json(ordered_json::parse(R"({"family": "torus"})")), InvalidParameter);
  EXPECT_THROW(family_from_json(ordered_json::parse(R"({"family": "exp-cylinder", "params": {"w": 1}})")),
               InvalidParameter);
  EXPECT_THROW(family_from_json(ordered_json::parse(R"({"family": "generalized-cone", "params": {"p": 2, "q": 0}})")),
               InvalidParameter);
  EXPECT_THROW(family_from_json(ordered_json::parse(R"({"family": "conical-power", "params": {"k": "two"}})")),
               InvalidParameter);
}

TEST(Box, Examples) {
  Box b = admissible_box(GeneralizedCone{2.0});
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_DOUBLE_EQ(b.lo[i], 0.5);
    EXPECT_DOUBLE_EQ(b.hi[i], 2.0);
  }
  Box e = admissible_box(ExpCylinder{});
  EXPECT_EQ(e.lo, (std::array<double, 3>{-1, -1, -1}));
  EXPECT_EQ(e.hi, (std::array<double, 3>{1, 1, 1}));
}
