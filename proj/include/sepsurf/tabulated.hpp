#pragma once

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#include "sepsurf/errors.hpp"
#include "sepsurf/expr.hpp"

namespace sepsurf {

/// Piecewise quintic Hermite interpolant through (value, d1, d2) samples.
///
/// Each span matches value and first two derivatives at both ends, so the
/// result is C^2 on [front, back]. The third derivative is that of the
/// local quintic and may jump at breakpoints.
class TabulatedFunc1D {
 public:
  TabulatedFunc1D() = default;

  TabulatedFunc1D(std::vector<double> breakpoints, std::vector<Jet3> samples)
      : x_(std::move(breakpoints)), jets_(std::move(samples)) {
    if (x_.size() < 2 || x_.size() != jets_.size())
      throw InvalidParameter("tabulated function needs >= 2 matching breakpoints and samples");
    for (std::size_t i = 1; i < x_.size(); ++i) {
      if (!(x_[i] > x_[i - 1])) throw InvalidParameter("breakpoints must be strictly increasing");
    }
  }

  const std::vector<double>& breakpoints() const { return x_; }
  const std::vector<Jet3>& samples() const { return jets_; }

  /// Open interval spanned by the breakpoints.
  Interval domain() const { return {x_.front(), x_.back()}; }

  double value(double x) const { return jet(x).v; }

  Jet3 jet(double x) const {
    if (x < x_.front() || x > x_.back()) throw DomainError("point outside tabulated range");
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t i = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
    if (i + 1 >= x_.size()) i = x_.size() - 2;

    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const Jet3& a = jets_[i];
    const Jet3& b = jets_[i + 1];

    // Monomial coefficients in t of the quintic on this span.
    const double dp = b.v - a.v;
    const double d0 = a.d1 * h, d1 = b.d1 * h;
    const double s0 = a.d2 * h * h, s1 = b.d2 * h * h;
    const double c0 = a.v;
    const double c1 = d0;
    const double c2 = 0.5 * s0;
    const double c3 = 10.0 * dp - 6.0 * d0 - 4.0 * d1 - 0.5 * (3.0 * s0 - s1);
    const double c4 = -15.0 * dp + 8.0 * d0 + 7.0 * d1 + 0.5 * (3.0 * s0 - 2.0 * s1);
    const double c5 = 6.0 * dp - 3.0 * d0 - 3.0 * d1 - 0.5 * (s0 - s1);

    Jet3 out;
    out.v = c0 + t * (c1 + t * (c2 + t * (c3 + t * (c4 + t * c5))));
    out.d1 = (c1 + t * (2.0 * c2 + t * (3.0 * c3 + t * (4.0 * c4 + t * 5.0 * c5)))) / h;
    out.d2 = (2.0 * c2 + t * (6.0 * c3 + t * (12.0 * c4 + t * 20.0 * c5))) / (h * h);
    out.d3 = (6.0 * c3 + t * (24.0 * c4 + t * 60.0 * c5)) / (h * h * h);
    return out;
  }

 private:
  std::vector<double> x_;
  std::vector<Jet3> jets_;
};

}  // namespace sepsurf
