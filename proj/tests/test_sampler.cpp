#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "sepsurf/catalog.hpp"
#include "sepsurf/families.hpp"
#include "sepsurf/geometry.hpp"
#include "sepsurf/mc_tables.hpp"
#include "sepsurf/sampler.hpp"

using namespace sepsurf;

namespace {

SeparableSurface unit_sphere() { return SeparableSurface::from_strings("x^2", "y^2", "z^2 - 1"); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(SolveZ, Examples) {
  auto roots = solve_z(unit_sphere(), 0.6, 0.0);
  ASSERT_EQ(roots.size(), 2u);
  EXPECT_NEAR(roots[0], -0.8, 1e-13);
  EXPECT_NEAR(roots[1], 0.8, 1e-13);

  auto e = solve_z(build_surface(ExpCylinder{}), 1.0, 0.0);
  ASSERT_EQ(e.size(), 1u);
  EXPECT_NEAR(e[0], std::log(std::exp(1.0) - 1.0), 1e-13);
  EXPECT_NEAR(e[0], 0.541324854612918, 1e-12);

  EXPECT_TRUE(solve_z(unit_sphere(), 2.0, 0.0).empty());
}

TEST(SolveZ, ResidualBound) {
  auto s = SeparableSurface::from_strings("sin(3*x)", "y^3", "z^3 - 2*z");
  for (int i = 0; i < 40; ++i) {
    for (int j = 0; j < 40; ++j) {
      const double x = -1.0 + i / 20.0, y = -1.0 + j / 20.0;
      const double c = s.f().value(x) + s.g().value(y);
      auto roots = solve_z(s, x, y, -3.0, 3.0);
      EXPECT_TRUE(std::is_sorted(roots.begin(), roots.end()));
      for (double z : roots) EXPECT_LE(std::abs(s.h().value(z) + c), 1e-12 * (1.0 + std::abs(c)));
    }
  }
  // three roots where the cubic crosses thrice
  EXPECT_EQ(solve_z(s, 0.0, 0.0, -3.0, 3.0).size(), 3u);
}

TEST(SolveZ, RespectsDomain) {
  auto s = SeparableSurface::from_strings("x", "y", "log(z)");
  auto r = solve_z(s, 0.5, 0.5);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_NEAR(r[0], std::exp(-1.0), 1e-13);
}

TEST(Grid, Validation) {
  GridSpec g;
  g.nx = 1;
  EXPECT_THROW(g.validate(), InvalidParameter);
  GridSpec h;
  h.box.hi[2] = h.box.lo[2];
  EXPECT_THROW(h.validate(), InvalidParameter);
}

TEST(SamplePoints, OnSurfaceAndDeterministic) {
  GridSpec g;
  g.nx = g.ny = 40;
  g.seed = 9;
  auto a = sample_points(unit_sphere(), g);
  auto b = sample_points(unit_sphere(), g);
  ASSERT_FALSE(a.empty());
  EXPECT_EQ(a, b);
  for (const auto& p : a) EXPECT_LE(std::abs(unit_sphere().F(p)), 1e-9);
  g.seed = 10;
  EXPECT_NE(sample_points(unit_sphere(), g), a);
}

TEST(SamplePoints, SolvesAlongAnotherAxisWhenHIsConstant) {
  RightCylinder rc{Func1D::parse("x^2", "x"), Func1D::parse("y^2", "y"), -1.0, 2};
  auto s = build_surface(rc);
  EXPECT_EQ(solve_axis(s), 1);
  auto pts = sample_points(s, GridSpec{});
  ASSERT_FALSE(pts.empty());
  for (const auto& p : pts) EXPECT_NEAR(p.x * p.x + p.y * p.y, 1.0, 1e-12);
}

// ---------------------------------------------------------------------------
// Marching cubes

TEST(MarchingCubes, TablesAreConsistent) {
  // every edge used by a case's triangles is flagged in its edge mask, and
  // each flagged edge joins an inside corner to an outside corner
  for (int c = 0; c < 256; ++c) {
    std::uint16_t used = 0;
    for (int k = 0; k < 16 && mc_tables::kTriangles[c][k] >= 0; ++k) used |= std::uint16_t(1u << mc_tables::kTriangles[c][k]);
    EXPECT_EQ(used, mc_tables::kEdgeMask[c]) << c;
    for (int e = 0; e < 12; ++e) {
      const bool a = (c >> mc_tables::kEdgeCorners[e][0]) & 1, b = (c >> mc_tables::kEdgeCorners[e][1]) & 1;
      EXPECT_EQ(bool(mc_tables::kEdgeMask[c] & (1u << e)), a != b) << c << " " << e;
    }
  }
}

TEST(MarchingCubes, SphereAtResolution64) {
  GridSpec g;
  g.box.lo = {-1.2, -1.2, -1.2};
  g.box.hi = {1.2, 1.2, 1.2};
  g.nx = g.ny = g.nz = 64;
  Mesh m = marching_cubes(unit_sphere(), g);
  ASSERT_GT(m.triangles.size(), 1000u);
  ASSERT_EQ(m.vertex_K.size(), m.vertices.size());
  EXPECT_EQ(m.skipped_cells, 0u);
  for (std::size_t i = 0; i < m.vertices.size(); ++i) {
    EXPECT_LE(std::abs(unit_sphere().F(m.vertices[i])), 1e-6);
    EXPECT_NEAR(m.vertex_K[i], 1.0, 1e-6);
  }
  // closed: every edge is shared by exactly two triangles
  std::map<std::pair<int, int>, int> edges;
  for (const auto& t : m.triangles) {
    for (int k = 0; k < 3; ++k) {
      int a = t[static_cast<std::size_t>(k)], b = t[static_cast<std::size_t>((k + 1) % 3)];
      ASSERT_GE(a, 0);
      ASSERT_LT(static_cast<std::size_t>(a), m.vertices.size());
      ++edges[{std::min(a, b), std::max(a, b)}];
    }
  }
  for (const auto& [e, n] : edges) EXPECT_EQ(n, 2);
}

TEST(MarchingCubes, ConeExampleIsFlat) {
  GeneralizedCone spec{2.0};
  GridSpec g;
  g.box = admissible_box(spec);
  g.nx = g.ny = g.nz = 24;
  auto s = build_surface(spec);
  Mesh m = marching_cubes(s, g);
  ASSERT_GT(m.vertices.size(), 100u);
  for (std::size_t i = 0; i < m.vertices.size(); ++i) {
    const auto& p = m.vertices[i];
    EXPECT_LE(std::abs(s.F(p)), 1e-6);
    EXPECT_LE(std::abs(p.x * p.x - p.y * p.z), 1e-6);
    EXPECT_LE(std::abs(m.vertex_K[i]), 1e-8);
  }
}

TEST(MarchingCubes, SkipsCellsOutsideTheDomain) {
  GeneralizedCone spec{2.0};
  GridSpec g;
  g.box.lo = {-0.5, 0.5, 0.5};  // x <= 0 is outside log's domain
  g.box.hi = {2.0, 2.0, 2.0};
  g.nx = g.ny = g.nz = 10;
  Mesh m = marching_cubes(build_surface(spec), g);
  EXPECT_GT(m.skipped_cells, 0u);
  for (const auto& p : m.vertices) EXPECT_GT(p.x, 0.0);
}

TEST(MarchingCubes, Deterministic) {
  GridSpec g;
  g.nx = g.ny = g.nz = 20;
  auto s = build_surface(ExpCylinder{});
  std::ostringstream a, b;
  write_obj(marching_cubes(s, g), a);
  write_obj(marching_cubes(s, g), b);
  EXPECT_EQ(a.str(), b.str());
}

TEST(MarchingCubes, RefinementKeepsCurvatureSign) {
  // sign of K at matched nearest vertices is stable under refinement
  for (const char* name : {"offset-sphere", "cgc-hyperbolic"}) {
    CatalogEntry e;
    for (auto& c : default_catalog()) {
      if (c.name == name) e = c;
    }
    auto s = build_surface(e.spec);
    GridSpec coarse, fine;
    coarse.box = fine.box = admissible_box(e.spec);
    coarse.nx = coarse.ny = coarse.nz = 12;
    fine.nx = fine.ny = fine.nz = 24;
    Mesh a = marching_cubes(s, coarse), b = marching_cubes(s, fine);
    ASSERT_FALSE(a.vertices.empty()) << name;
    for (std::size_t i = 0; i < a.vertices.size(); ++i) {
      if (!std::isfinite(a.vertex_K[i])) continue;
      std::size_t best = 0;
      double bd = INFINITY;
      for (std::size_t j = 0; j < b.vertices.size(); ++j) {
        const double d = std::hypot(a.vertices[i].x - b.vertices[j].x, a.vertices[i].y - b.vertices[j].y,
                                    a.vertices[i].z - b.vertices[j].z);
        if (d < bd) bd = d, best = j;
      }
      EXPECT_EQ(std::signbit(a.vertex_K[i]), std::signbit(b.vertex_K[best])) << name;
    }
  }
}

// ---------------------------------------------------------------------------
// Export

TEST(Export, OneTriangleObj) {
  Mesh m;
  m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0.1}};
  m.triangles = {{0, 1, 2}};
  m.vertex_K = {0, 0, 0};
  std::ostringstream os;
  write_obj(m, os);
  EXPECT_EQ(os.str(), "v 0 0 0\nv 1 0 0\nv 0 1 0.10000000000000001\nf 1 2 3\n");
}

TEST(Export, FilesAndSidecar) {
  const auto dir = std::filesystem::temp_directory_path() / "sepsurf_test_export";
  std::filesystem::create_directories(dir);
  GridSpec g;
  g.nx = g.ny = g.nz = 8;
  Mesh m = marching_cubes(unit_sphere(), g);
  export_obj(m, (dir / "m.obj").string());
  export_report(m, g, (dir / "m.json").string());
  const std::string obj = read_file((dir / "m.obj").string());
  EXPECT_EQ(obj.find('\r'), std::string::npos);
  auto doc = nlohmann::ordered_json::parse(read_file((dir / "m.json").string()));
  EXPECT_EQ(doc["K"].size(), m.vertices.size());
  EXPECT_EQ(doc["skipped_cells"], 0);
  EXPECT_EQ(doc["grid"]["nx"], 8);
  std::vector<std::string> keys;
  for (auto it = doc.begin(); it != doc.end(); ++it) keys.push_back(it.key());
  EXPECT_EQ(keys, (std::vector<std::string>{"K", "skipped_cells", "grid"}));
  EXPECT_THROW(export_obj(m, (dir / "missing" / "m.obj").string()), IoError);
}
