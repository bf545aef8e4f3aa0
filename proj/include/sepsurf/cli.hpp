#pragma once

// Command-line front end: family, curvature, classify and verify
// subcommands. run() is the whole program minus main so tests can drive it.
//
// Exit codes: 0 success, 1 runtime or domain error (and failing verify
// checks), 2 classifier contradiction sentinel, 64 usage error.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sepsurf/catalog.hpp"
#include "sepsurf/families.hpp"
#include "sepsurf/sampler.hpp"
#include "sepsurf/suite.hpp"
#include "sepsurf/verify.hpp"

namespace sepsurf::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitSentinel = 2;
inline constexpr int kExitUsage = 64;

/// Bad flag values detected after parsing.
class UsageError : public Error {
 public:
  using Error::Error;
};

using json = nlohmann::ordered_json;

inline Box parse_box(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("--box: '" + item + "' is not a number");
    }
  }
  if (v.size() != 6) throw UsageError("--box expects x0,x1,y0,y1,z0,z1");
  Box b;
  for (std::size_t i = 0; i < 3; ++i) {
    b.lo[i] = v[2 * i];
    b.hi[i] = v[2 * i + 1];
  }
  if (!b.nonempty()) throw UsageError("--box has an empty axis");
  return b;
}

/// Inline JSON when the argument starts with '{', otherwise a file path.
inline FamilySpec load_spec(const std::string& arg) {
  std::string text = arg;
  if (arg.find_first_not_of(" \t\n") == std::string::npos || arg[arg.find_first_not_of(" \t\n")] != '{') {
    std::ifstream in(arg, std::ios::binary);
    if (!in) throw IoError("cannot open '" + arg + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidParameter(std::string("spec is not valid JSON: ") + e.what());
  }
  return family_from_json(doc);
}

inline void emit(const std::string& path, const json& doc, std::ostream& out) {
  const std::string text = doc.dump(2) + "\n";
  if (path == "-") {
    out << text;
  } else {
    detail::write_text_file(path, text);
  }
}

/// Surface input shared by family, curvature and classify.
struct SurfaceInput {
  std::string spec, preset, f, g, h, box;

  bool has_expressions() const { return !f.empty() || !g.empty() || !h.empty(); }
};

struct ResolvedSurface {
  SeparableSurface surface;
  Box box;
  json description;
};

inline ResolvedSurface resolve(const SurfaceInput& in, bool allow_expressions) {
  const int sources = (!in.spec.empty() ? 1 : 0) + (!in.preset.empty() ? 1 : 0) + (in.has_expressions() ? 1 : 0);
  if (sources != 1)
    throw UsageError(allow_expressions ? "give exactly one of --spec, --preset or --f/--g/--h"
                                       : "give exactly one of --spec or --preset");
  ResolvedSurface r;
  if (in.has_expressions()) {
    if (in.f.empty() || in.g.empty() || in.h.empty()) throw UsageError("--f, --g and --h are all required");
    r.surface = SeparableSurface::from_strings(in.f, in.g, in.h);
    r.description = {{"f", in.f}, {"g", in.g}, {"h", in.h}};
  } else {
    FamilySpec spec;
    if (!in.preset.empty()) {
      auto p = preset(in.preset);
      if (!p) throw UsageError("unknown preset '" + in.preset + "'");
      spec = p->spec;
    } else {
      spec = load_spec(in.spec);
    }
    r.surface = build_surface(spec);
    r.box = admissible_box(spec);
    r.description = to_json(spec);
  }
  if (!in.box.empty()) r.box = parse_box(in.box);
  return r;
}

/// First n samples from a grid refined until it yields at least n.
inline std::vector<SurfacePoint> sample_n(const SeparableSurface& s, const Box& box, std::uint64_t seed,
                                          std::size_t n) {
  int res = std::max(2, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n)))));
  for (;;) {
    GridSpec g;
    g.box = box;
    g.nx = g.ny = g.nz = res;
    g.seed = seed;
    auto pts = sample_points(s, g);
    // a surface that misses the box yields nothing at any resolution
    if (pts.size() >= n || res >= 512 || (pts.empty() && res >= 64)) {
      if (pts.size() > n) pts.resize(n);
      return pts;
    }
    res *= 2;
  }
}

inline json curvature_report(const ResolvedSurface& r, const std::vector<SurfacePoint>& pts, std::uint64_t seed) {
  json samples = json::array();
  std::vector<double> Ks;
  std::size_t singular = 0;
  for (const auto& p : pts) {
    json item{{"x", p.x}, {"y", p.y}, {"z", p.z}};
    try {
      double K = gauss_curvature_separable(r.surface, p);
      Ks.push_back(K);
      item["K"] = K;
    } catch (const SingularPointError&) {
      ++singular;
      item["K"] = nullptr;
    }
    samples.push_back(std::move(item));
  }
  const auto stats = constancy_from_values(Ks, Tolerances{}.constancy);
  json doc{{"surface", r.description}, {"seed", seed}, {"n_samples", pts.size()}, {"n_singular", singular}};
  doc["K_min"] = Ks.empty() ? json(nullptr) : json(*std::min_element(Ks.begin(), Ks.end()));
  doc["K_max"] = Ks.empty() ? json(nullptr) : json(*std::max_element(Ks.begin(), Ks.end()));
  doc["K_mean"] = stats.K_mean;
  doc["K_max_dev"] = stats.K_max_dev;
  doc["samples"] = std::move(samples);
  return doc;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Separable implicit surfaces f(x) + g(y) + h(z) = 0", "sepsurf"};
  app.require_subcommand(1);
  // -h would collide with --h; subcommands inherit this at creation
  app.set_help_flag("--help", "Print this help message and exit");

  SurfaceInput fam_in;
  std::string fam_mesh, fam_report;
  int fam_res = 32;
  auto* fam = app.add_subcommand("family", "Build a family surface and mesh it with marching cubes");
  fam->add_option("--spec", fam_in.spec, "FamilySpec JSON (inline or file path)");
  fam->add_option("--preset", fam_in.preset, "Named surface: paper-fig1-left|middle|right, unit-sphere");
  fam->add_option("--mesh", fam_mesh, "Write the mesh as OBJ to this path");
  fam->add_option("--report", fam_report, "Write the per-vertex curvature sidecar JSON ('-' for stdout)");
  fam->add_option("--res", fam_res, "Cells per axis")->check(CLI::Range(2, 1024))->capture_default_str();
  fam->add_option("--box", fam_in.box, "Bounds x0,x1,y0,y1,z0,z1 (default: family region)");

  SurfaceInput curv_in;
  std::size_t curv_n = 1000;
  std::uint64_t curv_seed = 42;
  std::string curv_report = "-";
  auto* curv = app.add_subcommand("curvature", "Sample points on f(x)+g(y)+h(z)=0 and report Gaussian curvature");
  curv->add_option("--f", curv_in.f, "f(x)")->required();
  curv->add_option("--g", curv_in.g, "g(y)")->required();
  curv->add_option("--h", curv_in.h, "h(z)")->required();
  curv->add_option("--box", curv_in.box, "Bounds x0,x1,y0,y1,z0,z1 (default [-1,1]^3)");
  curv->add_option("--n", curv_n, "Number of samples")->check(CLI::PositiveNumber)->capture_default_str();
  curv->add_option("--seed", curv_seed, "Sampling seed")->capture_default_str();
  curv->add_option("--report", curv_report, "Report path ('-' for stdout)")->capture_default_str();

  SurfaceInput cls_in;
  std::size_t cls_n = 1000;
  std::uint64_t cls_seed = 42;
  std::string cls_report = "-";
  auto* cls = app.add_subcommand("classify", "Classify a separable surface of constant Gaussian curvature");
  cls->add_option("--f", cls_in.f, "f(x)");
  cls->add_option("--g", cls_in.g, "g(y)");
  cls->add_option("--h", cls_in.h, "h(z)");
  cls->add_option("--spec", cls_in.spec, "FamilySpec JSON (inline or file path)");
  cls->add_option("--preset", cls_in.preset, "Named surface: paper-fig1-left|middle|right, unit-sphere");
  cls->add_option("--box", cls_in.box, "Bounds x0,x1,y0,y1,z0,z1 (default: family region or [-1,1]^3)");
  cls->add_option("--n", cls_n, "Number of samples")->check(CLI::PositiveNumber)->capture_default_str();
  cls->add_option("--seed", cls_seed, "Sampling seed")->capture_default_str();
  cls->add_option("--report", cls_report, "Report path ('-' for stdout)")->capture_default_str();

  std::string ver_suite = "all";
  std::uint64_t ver_seed = 42;
  std::string ver_report = "-";
  auto* ver = app.add_subcommand("verify", "Run the numerical identity suites");
  ver->add_option("--suite", ver_suite, "all|geometry|families|classifier")
      ->check(CLI::IsMember({"all", "geometry", "families", "classifier"}))
      ->capture_default_str();
  ver->add_option("--seed", ver_seed, "Random seed")->capture_default_str();
  ver->add_option("--report", ver_report, "Report path ('-' for stdout)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*fam) {
      const auto r = resolve(fam_in, false);
      GridSpec grid;
      grid.box = r.box;
      grid.nx = grid.ny = grid.nz = fam_res;
      const Mesh mesh = marching_cubes(r.surface, grid);
      if (!fam_mesh.empty()) export_obj(mesh, fam_mesh);
      if (!fam_report.empty()) emit(fam_report, mesh_report(mesh, grid), out);
      if (fam_report != "-")
        out << "vertices " << mesh.vertices.size() << " triangles " << mesh.triangles.size() << " skipped_cells "
            << mesh.skipped_cells << "\n";
      return kExitOk;
    }
    if (*curv) {
      auto r = resolve(curv_in, true);
      const auto pts = sample_n(r.surface, r.box, curv_seed, curv_n);
      emit(curv_report, curvature_report(r, pts, curv_seed), out);
      return kExitOk;
    }
    if (*cls) {
      auto r = resolve(cls_in, true);
      const auto pts = sample_n(r.surface, r.box, cls_seed, cls_n);
      const auto res = classify(r.surface, pts);
      emit(cls_report, classification_report(r.description, res), out);
      return is_contradiction(res.label) ? kExitSentinel : kExitOk;
    }
    if (*ver) {
      const auto report = run_theorem_suite(ver_seed, ver_suite);
      emit(ver_report, to_json(report), out);
      return report.passed() ? kExitOk : kExitRuntime;
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace sepsurf::cli
