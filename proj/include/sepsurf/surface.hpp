#pragma once

#include <array>
#include <memory>
#include <string>
#include <utility>
#include <variant>

#include "sepsurf/expr.hpp"
#include "sepsurf/tabulated.hpp"

namespace sepsurf {

/// A one-variable function behind the jet interface: either a closed-form
/// expression or a shared tabulated interpolant.
class Univariate {
 public:
  Univariate() = default;
  Univariate(Func1D f) : impl_(std::move(f)) {}  // NOLINT(google-explicit-constructor)
  Univariate(std::shared_ptr<const TabulatedFunc1D> t) : impl_(std::move(t)) {}  // NOLINT

  Jet3 jet(double x) const {
    return std::visit([x](const auto& f) { return deref(f).jet(x); }, impl_);
  }
  double value(double x) const {
    return std::visit([x](const auto& f) { return deref(f).value(x); }, impl_);
  }
  Interval domain() const {
    return std::visit([](const auto& f) { return deref(f).domain(); }, impl_);
  }

  bool is_tabulated() const { return impl_.index() == 1; }
  bool is_constant() const {
    const auto* f = std::get_if<Func1D>(&impl_);
    return f != nullptr && f->is_constant();
  }
  /// Expression text, or "<tabulated>".
  std::string str() const {
    const auto* f = std::get_if<Func1D>(&impl_);
    return f != nullptr ? f->str() : std::string("<tabulated>");
  }
  const Func1D* expression() const { return std::get_if<Func1D>(&impl_); }

 private:
  std::variant<Func1D, std::shared_ptr<const TabulatedFunc1D>> impl_;

  static const Func1D& deref(const Func1D& f) { return f; }
  static const TabulatedFunc1D& deref(const std::shared_ptr<const TabulatedFunc1D>& t) {
    return *t;
  }
};

struct SurfacePoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double operator[](int axis) const { return axis == 0 ? x : (axis == 1 ? y : z); }
  double& operator[](int axis) { return axis == 0 ? x : (axis == 1 ? y : z); }
  bool operator==(const SurfacePoint&) const = default;
};

/// Axis-aligned box [lo, hi] per coordinate.
struct Box {
  std::array<double, 3> lo{-1.0, -1.0, -1.0};
  std::array<double, 3> hi{1.0, 1.0, 1.0};

  bool nonempty() const { return lo[0] < hi[0] && lo[1] < hi[1] && lo[2] < hi[2]; }
  bool contains(const SurfacePoint& p) const {
    for (int i = 0; i < 3; ++i) {
      const auto k = static_cast<std::size_t>(i);
      if (p[i] < lo[k] || p[i] > hi[k]) return false;
    }
    return true;
  }
};

/// Zero set of f(x) + g(y) + h(z).
class SeparableSurface {
 public:
  SeparableSurface() = default;
  SeparableSurface(Univariate f, Univariate g, Univariate h) : fns_{std::move(f), std::move(g), std::move(h)} {}

  static SeparableSurface from_strings(std::string_view f, std::string_view g, std::string_view h) {
    return {Func1D::parse(f, "x"), Func1D::parse(g, "y"), Func1D::parse(h, "z")};
  }

  const Univariate& f() const { return fns_[0]; }
  const Univariate& g() const { return fns_[1]; }
  const Univariate& h() const { return fns_[2]; }
  /// axis 0, 1, 2 -> f, g, h
  const Univariate& fn(int axis) const { return fns_.at(static_cast<std::size_t>(axis)); }

  bool has_tabulated() const {
    return fns_[0].is_tabulated() || fns_[1].is_tabulated() || fns_[2].is_tabulated();
  }

  bool in_domain(const SurfacePoint& p) const {
    return fns_[0].domain().contains(p.x) && fns_[1].domain().contains(p.y) &&
           fns_[2].domain().contains(p.z);
  }

  double F(const SurfacePoint& p) const {
    return fns_[0].value(p.x) + fns_[1].value(p.y) + fns_[2].value(p.z);
  }

 private:
  std::array<Univariate, 3> fns_;
};

}  // namespace sepsurf
