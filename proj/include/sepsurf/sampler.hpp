#pragma once

// On-surface point sampling and marching-cubes meshing of separable surfaces.

#include <array>
#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "sepsurf/errors.hpp"
#include "sepsurf/geometry.hpp"
#include "sepsurf/mc_tables.hpp"
#include "sepsurf/surface.hpp"

namespace sepsurf {

struct GridSpec {
  Box box;
  int nx = 32, ny = 32, nz = 32;
  std::uint64_t seed = 42;

  void validate() const {
    if (nx < 2 || ny < 2 || nz < 2) throw InvalidParameter("grid resolution must be >= 2 per axis");
    if (!box.nonempty()) throw InvalidParameter("grid box is empty");
  }
  int resolution(int axis) const { return axis == 0 ? nx : (axis == 1 ? ny : nz); }
};

struct Mesh {
  std::vector<SurfacePoint> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<double> vertex_K;  // NaN at singular vertices
  std::size_t skipped_cells = 0;
};

inline constexpr int kRootScanSubdivisions = 256;

namespace detail {

inline std::optional<double> try_value(const Univariate& fn, double t) {
  if (!fn.domain().contains(t)) return std::nullopt;
  try {
    return fn.value(t);
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

/// Search interval intersected with an open domain, pulled slightly inside
/// any finite domain edge.
inline std::optional<std::pair<double, double>> search_range(const Interval& domain, double lo, double hi) {
  if (std::isfinite(domain.lo) && lo <= domain.lo) lo = domain.lo + 1e-9 * std::max(1.0, std::abs(domain.lo));
  if (std::isfinite(domain.hi) && hi >= domain.hi) hi = domain.hi - 1e-9 * std::max(1.0, std::abs(domain.hi));
  if (!(lo < hi)) return std::nullopt;
  return std::make_pair(lo, hi);
}

/// Root of fn(t) + offset on [a, b] given a sign change, by bisection and one
/// Newton polish.
inline double bracketed_root(const Univariate& fn, double offset, double a, double fa, double b) {
  for (int it = 0; it < 200; ++it) {
    if (b - a <= 1e-13 * std::max(1.0, std::abs(a) + std::abs(b)) * 0.5 || b - a <= 1e-13) break;
    double mid = 0.5 * (a + b);
    double fm = fn.value(mid) + offset;
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (fa < 0.0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  double t = 0.5 * (a + b);
  Jet3 j = fn.jet(t);
  double r = j.v + offset;
  if (j.d1 != 0.0) {
    double tn = t - r / j.d1;
    if (tn >= a && tn <= b) {
      double rn = fn.value(tn) + offset;
      if (std::abs(rn) <= std::abs(r)) t = tn;
    }
  }
  return t;
}

}  // namespace detail

/// All roots t in [lo, hi] (clipped to the domain) of fn(t) + offset = 0,
/// sorted ascending. Tangential roots without a sign change are not found.
inline std::vector<double> solve_univariate(const Univariate& fn, double offset, double lo, double hi) {
  std::vector<double> roots;
  auto range = detail::search_range(fn.domain(), lo, hi);
  if (!range) return roots;
  const auto [a, b] = *range;
  const int n = kRootScanSubdivisions;
  std::vector<double> ts(static_cast<std::size_t>(n) + 1);
  std::vector<std::optional<double>> vals(ts.size());
  for (int i = 0; i <= n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    ts[k] = i == n ? b : a + (b - a) * i / n;
    auto v = detail::try_value(fn, ts[k]);
    if (v) vals[k] = *v + offset;
  }
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    if (!vals[i] || !vals[i + 1]) continue;
    double f0 = *vals[i], f1 = *vals[i + 1];
    if (f0 == 0.0) {
      if (roots.empty() || roots.back() != ts[i]) roots.push_back(ts[i]);
      continue;
    }
    if (f1 == 0.0) {
      roots.push_back(ts[i + 1]);
      continue;
    }
    if ((f0 < 0.0) != (f1 < 0.0)) roots.push_back(detail::bracketed_root(fn, offset, ts[i], f0, ts[i + 1]));
  }
  return roots;
}

/// Roots z of h(z) = -(f(x) + g(y)) inside the search window and h's domain.
inline std::vector<double> solve_z(const SeparableSurface& s, double x, double y, double zlo = -10.0,
                                   double zhi = 10.0) {
  const double c = s.f().value(x) + s.g().value(y);
  return solve_univariate(s.h(), c, zlo, zhi);
}

/// Coordinate solved for when sampling: z unless h is constant.
inline int solve_axis(const SeparableSurface& s) {
  for (int axis = 2; axis >= 0; --axis) {
    if (!s.fn(axis).is_constant()) return axis;
  }
  throw InvalidParameter("all three functions are constant");
}

/// Jittered column sampling: for each cell of the (nx, ny) grid over the two
/// non-solved axes, every root along the solved axis inside the box.
inline std::vector<SurfacePoint> sample_points(const SeparableSurface& s, const GridSpec& grid) {
  grid.validate();
  const int axis = solve_axis(s);
  const int a0 = axis == 0 ? 1 : 0;
  const int a1 = axis == 2 ? 1 : 2;
  const int n0 = grid.nx, n1 = grid.ny;
  const auto& box = grid.box;
  const auto ia0 = static_cast<std::size_t>(a0), ia1 = static_cast<std::size_t>(a1),
             iax = static_cast<std::size_t>(axis);
  const double h0 = (box.hi[ia0] - box.lo[ia0]) / n0;
  const double h1 = (box.hi[ia1] - box.lo[ia1]) / n1;

  std::mt19937_64 rng(grid.seed);
  std::uniform_real_distribution<double> jitter(-0.25, 0.25);
  std::vector<SurfacePoint> points;
  for (int i = 0; i < n0; ++i) {
    for (int j = 0; j < n1; ++j) {
      const double t0 = box.lo[ia0] + (i + 0.5 + jitter(rng)) * h0;
      const double t1 = box.lo[ia1] + (j + 0.5 + jitter(rng)) * h1;
      auto v0 = detail::try_value(s.fn(a0), t0);
      auto v1 = detail::try_value(s.fn(a1), t1);
      if (!v0 || !v1) continue;
      for (double r : solve_univariate(s.fn(axis), *v0 + *v1, box.lo[iax], box.hi[iax])) {
        SurfacePoint p;
        p[a0] = t0;
        p[a1] = t1;
        p[axis] = r;
        points.push_back(p);
      }
    }
  }
  return points;
}

/// Jittered samples on the surface inside box; the grid is refined until at
/// least min_points are found or the resolution reaches 256.
inline std::vector<SurfacePoint> sample_at_least(const SeparableSurface& s, const Box& box, std::uint64_t seed,
                                                 std::size_t min_points) {
  for (int n = 32;; n *= 2) {
    GridSpec g;
    g.box = box;
    g.nx = g.ny = g.nz = n;
    g.seed = seed;
    auto pts = sample_points(s, g);
    if (pts.size() >= min_points || n >= 256) return pts;
  }
}

// ---------------------------------------------------------------------------
// Marching cubes

namespace detail {

/// Root of fn(t) + offset on the edge [t0, t1] (values f0, f1 of opposite
/// sign), from linear interpolation and safeguarded Newton steps.
inline double polish_edge(const Univariate& fn, double offset, double t0, double f0, double t1, double f1) {
  if (f0 == 0.0) return t0;
  if (f1 == 0.0) return t1;
  double lo = t0, hi = t1, flo = f0;
  if (lo > hi) {
    std::swap(lo, hi);
    flo = f1;
  }
  double t = t0 + (t1 - t0) * f0 / (f0 - f1);
  for (int it = 0; it < 5; ++it) {
    Jet3 j = fn.jet(t);
    double r = j.v + offset;
    if (r == 0.0) return t;
    if ((r < 0.0) == (flo < 0.0)) {
      lo = t;
      flo = r;
    } else {
      hi = t;
    }
    double tn = j.d1 != 0.0 ? t - r / j.d1 : 0.5 * (lo + hi);
    if (!(tn >= lo && tn <= hi)) tn = 0.5 * (lo + hi);
    if (tn == t) return t;
    t = tn;
  }
  // Vertex contract |F| <= 1e-6; finish by bisection if Newton stalled.
  for (int it = 0; it < 200 && std::abs(fn.value(t) + offset) > 1e-6; ++it) {
    double r = fn.value(t) + offset;
    if ((r < 0.0) == (flo < 0.0)) {
      lo = t;
      flo = r;
    } else {
      hi = t;
    }
    t = 0.5 * (lo + hi);
  }
  return t;
}

}  // namespace detail

inline Mesh marching_cubes(const SeparableSurface& s, const GridSpec& grid) {
  grid.validate();
  const std::array<int, 3> n{grid.nx, grid.ny, grid.nz};
  std::array<std::vector<double>, 3> coord;
  std::array<std::vector<double>, 3> value;  // NaN outside domain
  for (std::size_t a = 0; a < 3; ++a) {
    const auto na = static_cast<std::size_t>(n[a]);
    coord[a].resize(na + 1);
    value[a].resize(na + 1);
    for (std::size_t i = 0; i <= na; ++i) {
      coord[a][i] = grid.box.lo[a] + (grid.box.hi[a] - grid.box.lo[a]) * static_cast<double>(i) / n[a];
      auto v = detail::try_value(s.fn(static_cast<int>(a)), coord[a][i]);
      value[a][i] = v ? *v : std::numeric_limits<double>::quiet_NaN();
    }
  }

  const auto stride_y = static_cast<std::uint64_t>(n[0] + 1);
  const auto stride_z = stride_y * static_cast<std::uint64_t>(n[1] + 1);
  auto corner_id = [&](std::array<int, 3> c) {
    return static_cast<std::uint64_t>(c[0]) + stride_y * static_cast<std::uint64_t>(c[1]) +
           stride_z * static_cast<std::uint64_t>(c[2]);
  };

  Mesh mesh;
  std::unordered_map<std::uint64_t, int> edge_vertex;
  for (int k = 0; k < n[2]; ++k) {
    for (int j = 0; j < n[1]; ++j) {
      for (int i = 0; i < n[0]; ++i) {
        std::array<std::array<int, 3>, 8> corner{};
        std::array<double, 8> F{};
        bool ok = true;
        int cube = 0;
        for (std::size_t c = 0; c < 8; ++c) {
          const auto& off = mc_tables::kCornerOffset[c];
          corner[c] = {i + off[0], j + off[1], k + off[2]};
          F[c] = value[0][static_cast<std::size_t>(corner[c][0])] + value[1][static_cast<std::size_t>(corner[c][1])] +
                 value[2][static_cast<std::size_t>(corner[c][2])];
          if (!std::isfinite(F[c])) ok = false;
          if (F[c] < 0.0) cube |= 1 << c;
        }
        if (!ok) {
          ++mesh.skipped_cells;
          continue;
        }
        const std::uint16_t mask = mc_tables::kEdgeMask[static_cast<std::size_t>(cube)];
        if (mask == 0) continue;

        std::array<int, 12> vid{};
        vid.fill(-1);
        for (std::size_t e = 0; e < 12; ++e) {
          if (!(mask & (1u << e))) continue;
          auto c0 = static_cast<std::size_t>(mc_tables::kEdgeCorners[e][0]);
          auto c1 = static_cast<std::size_t>(mc_tables::kEdgeCorners[e][1]);
          std::array<int, 3> lo = corner[c0], hi = corner[c1];
          double f0 = F[c0], f1 = F[c1];
          int axis = 0;
          while (lo[static_cast<std::size_t>(axis)] == hi[static_cast<std::size_t>(axis)]) ++axis;
          const auto ax = static_cast<std::size_t>(axis);
          if (lo[ax] > hi[ax]) {
            std::swap(lo, hi);
            std::swap(f0, f1);
          }
          const std::uint64_t key = corner_id(lo) * 3 + ax;
          auto found = edge_vertex.find(key);
          if (found != edge_vertex.end()) {
            vid[e] = found->second;
            continue;
          }
          // Only the edge coordinate varies: F = offset + fn_axis(t).
          double offset = 0.0;
          for (std::size_t b = 0; b < 3; ++b) {
            if (b != ax) offset += value[b][static_cast<std::size_t>(lo[b])];
          }
          const double t0 = coord[ax][static_cast<std::size_t>(lo[ax])];
          const double t1 = coord[ax][static_cast<std::size_t>(hi[ax])];
          const double t = detail::polish_edge(s.fn(axis), offset, t0, f0, t1, f1);
          SurfacePoint p{coord[0][static_cast<std::size_t>(lo[0])], coord[1][static_cast<std::size_t>(lo[1])],
                         coord[2][static_cast<std::size_t>(lo[2])]};
          p[axis] = t;
          vid[e] = static_cast<int>(mesh.vertices.size());
          edge_vertex.emplace(key, vid[e]);
          mesh.vertices.push_back(p);
        }

        const auto& tri = mc_tables::kTriangles[static_cast<std::size_t>(cube)];
        for (std::size_t t = 0; t + 2 < tri.size() && tri[t] != -1; t += 3) {
          std::array<int, 3> idx{vid[static_cast<std::size_t>(tri[t])], vid[static_cast<std::size_t>(tri[t + 1])],
                                 vid[static_cast<std::size_t>(tri[t + 2])]};
          if (idx[0] == idx[1] || idx[1] == idx[2] || idx[0] == idx[2]) continue;
          mesh.triangles.push_back(idx);
        }
      }
    }
  }

  mesh.vertex_K.reserve(mesh.vertices.size());
  for (const auto& p : mesh.vertices) {
    try {
      mesh.vertex_K.push_back(gauss_curvature_implicit(implicit_jet(s, p)));
    } catch (const Error&) {
      mesh.vertex_K.push_back(std::numeric_limits<double>::quiet_NaN());
    }
  }
  return mesh;
}

// ---------------------------------------------------------------------------
// Export

inline void write_obj(const Mesh& mesh, std::ostream& os) {
  char buf[128];
  for (const auto& v : mesh.vertices) {
    std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", v.x, v.y, v.z);
    os << buf;
  }
  for (const auto& t : mesh.triangles) os << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
}

inline nlohmann::ordered_json grid_to_json(const GridSpec& grid) {
  return {{"box", {grid.box.lo[0], grid.box.hi[0], grid.box.lo[1], grid.box.hi[1], grid.box.lo[2], grid.box.hi[2]}},
          {"nx", grid.nx},
          {"ny", grid.ny},
          {"nz", grid.nz},
          {"seed", grid.seed}};
}

inline nlohmann::ordered_json mesh_report(const Mesh& mesh, const GridSpec& grid) {
  nlohmann::ordered_json K = nlohmann::ordered_json::array();
  for (double k : mesh.vertex_K) K.push_back(std::isfinite(k) ? nlohmann::ordered_json(k) : nullptr);
  return {{"K", std::move(K)}, {"skipped_cells", mesh.skipped_cells}, {"grid", grid_to_json(grid)}};
}

namespace detail {

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "': " + std::strerror(errno));
  out << content;
  out.flush();
  if (!out) throw IoError("cannot write '" + path + "': " + std::strerror(errno));
}

}  // namespace detail

inline void export_obj(const Mesh& mesh, const std::string& path) {
  std::ostringstream os;
  write_obj(mesh, os);
  detail::write_text_file(path, os.str());
}

inline void export_report(const Mesh& mesh, const GridSpec& grid, const std::string& path) {
  detail::write_text_file(path, mesh_report(mesh, grid).dump(2) + "\n");
}

}  // namespace sepsurf
