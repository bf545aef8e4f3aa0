#pragma once

// Independent reference computations for the tests and the acceptance
// binary: a long-double tree evaluator with finite-difference stencils,
// a random expression generator, and closed-form curvature of graphs.

#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "sepsurf/expr.hpp"

namespace oracle {

using sepsurf::Ast;
using sepsurf::Op;

/// Evaluates the tree in long double. Records the sign of every abs/sign
/// argument so callers can detect a stencil straddling a kink.
struct LongEval {
  std::vector<int> kink_signs;

  std::optional<long double> operator()(const Ast& a, long double x) {
    switch (a->op) {
      case Op::Const: return static_cast<long double>(a->value);
      case Op::Var: return x;
      default: break;
    }
    auto l = (*this)(a->lhs, x);
    if (!l) return std::nullopt;
    const long double u = *l;
    switch (a->op) {
      case Op::Neg: return -u;
      case Op::Sin: return std::sin(u);
      case Op::Cos: return std::cos(u);
      case Op::Sinh: return std::sinh(u);
      case Op::Cosh: return std::cosh(u);
      case Op::Tanh: return std::tanh(u);
      case Op::Exp: return std::exp(u);
      case Op::Log:
        if (u <= 0) return std::nullopt;
        return std::log(u);
      case Op::Sqrt:
        if (u < 0) return std::nullopt;
        return std::sqrt(u);
      case Op::Abs:
      case Op::Sign:
        kink_signs.push_back(u > 0 ? 1 : (u < 0 ? -1 : 0));
        if (a->op == Op::Abs) return std::fabs(u);
        if (u == 0) return std::nullopt;
        return u > 0 ? 1.0L : -1.0L;
      default: break;
    }
    auto r = (*this)(a->rhs, x);
    if (!r) return std::nullopt;
    const long double v = *r;
    switch (a->op) {
      case Op::Add: return u + v;
      case Op::Sub: return u - v;
      case Op::Mul: return u * v;
      case Op::Div:
        if (v == 0) return std::nullopt;
        return u / v;
      case Op::Pow: {
        if (v == std::nearbyint(v)) return std::pow(u, v);
        if (u <= 0) return std::nullopt;
        return std::pow(u, v);
      }
      default: return std::nullopt;
    }
  }
};

struct FdJet {
  long double d1, d2, d3;
};

/// Central differences in long double: second-order stencils with step
/// 1e-5 for f' and f'', a sixth-order stencil with step 1e-3 for f'''.
/// Absent when any stencil point is outside the domain or crosses a kink.
inline std::optional<FdJet> central_differences(const Ast& f, double x) {
  LongEval ref;
  auto base = ref(f, x);
  if (!base) return std::nullopt;
  const auto signs = ref.kink_signs;
  auto at = [&](long double t) -> std::optional<long double> {
    LongEval e;
    auto v = e(f, t);
    if (!v || e.kink_signs != signs || !std::isfinite(static_cast<double>(*v))) return std::nullopt;
    return v;
  };
  const long double X = x;
  const long double h = 1e-5L;
  auto p1 = at(X + h), m1 = at(X - h);
  if (!p1 || !m1) return std::nullopt;
  FdJet out{};
  out.d1 = (*p1 - *m1) / (2 * h);
  out.d2 = (*p1 - 2 * *base + *m1) / (h * h);

  const long double H = 1e-3L;
  static constexpr long double kC3[4] = {-61.0L / 30.0L, 169.0L / 120.0L, -3.0L / 10.0L, 7.0L / 240.0L};
  long double d3 = 0;
  for (int k = 1; k <= 4; ++k) {
    auto p = at(X + k * H), m = at(X - k * H);
    if (!p || !m) return std::nullopt;
    d3 += kC3[k - 1] * (*p - *m);
  }
  out.d3 = d3 / (H * H * H);
  return out;
}

/// Random expression source in x over the full grammar.
class ExprGenerator {
 public:
  explicit ExprGenerator(std::uint64_t seed) : rng_(seed) {}

  std::string operator()(int depth = 3) { return gen(depth); }

 private:
  std::string gen(int depth) {
    const int pick = depth <= 0 ? uniform_int(0, 1) : uniform_int(0, 9);
    switch (pick) {
      case 0: return "x";
      case 1: return number();
      case 2:
      case 3: {
        static const char* kFns[] = {"sin", "cos", "exp", "log", "sqrt", "sinh", "cosh", "tanh", "abs"};
        return std::string(kFns[uniform_int(0, 8)]) + "(" + gen(depth - 1) + ")";
      }
      case 4: return "-(" + gen(depth - 1) + ")";
      case 5: {
        static const char* kExps[] = {"2", "3", "-1", "0.5", "1.5", "-2"};
        return "(" + gen(depth - 1) + ")^" + kExps[uniform_int(0, 5)];
      }
      default: {
        static const char* kOps[] = {" + ", " - ", " * ", " / "};
        return "(" + gen(depth - 1) + kOps[uniform_int(0, 3)] + gen(depth - 1) + ")";
      }
    }
  }
  std::string number() {
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    return "(" + sepsurf::detail::format_number(std::round(d(rng_) * 100.0) / 100.0) + ")";
  }
  int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  std::mt19937_64 rng_;
};

/// Gaussian curvature of the graph z = phi(x, y) from its derivatives.
inline double graph_curvature(double px, double py, double pxx, double pxy, double pyy) {
  const double w = 1.0 + px * px + py * py;
  return (pxx * pyy - pxy * pxy) / (w * w);
}

}  // namespace oracle
