#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <utility>

#include "wahba/errors.hpp"

namespace wahba {

// coefficients of x^4 + a x^3 + b x^2 + c x + d
template <class Scalar>
struct QuarticCoeffs {
  Scalar a, b, c, d;
};

enum class CubicBranch { OneReal, Repeated, ThreeReal };

// depressed resolvent cubic y^3 + p y + q of the quartic
template <class Scalar>
struct ResolventCubic {
  Scalar p, q;
  Scalar discriminant;  // (q/2)^2 + (p/3)^3, stored unclamped
  CubicBranch branch;   // classified with the near-zero clamp applied
};

template <class Scalar>
struct CubicRoots {
  std::array<Scalar, 3> roots{};  // descending, first `count` entries valid
  int count = 0;
};

// monic quadratic factors (x^2 + g1 x + h1)(x^2 + g2 x + h2) of the quartic
template <class Scalar>
struct FactorPair {
  Scalar g1, g2, h1, h2;
};

template <class Scalar>
struct RootSet {
  std::array<Scalar, 4> roots{};       // descending, first `count` entries valid
  int count = 0;                       // 0, 2, or 4
  std::array<bool, 2> complex_pair{};  // factor k discarded a complex-conjugate pair
};

namespace detail {

// a discriminant within 1e-12 * max(1, (q/2)^2, |p/3|^3) of zero is treated as
// the repeated-root limit; the benchmark quartic of the source problem sits
// exactly on this boundary
template <class Scalar>
CubicBranch classify_cubic(Scalar p, Scalar q, Scalar delta) {
  const Scalar half_q_sq = (q / 2) * (q / 2);
  const Scalar third_p = p / 3;
  const Scalar third_p_cubed = std::abs(third_p * third_p * third_p);
  const Scalar thresh =
      Scalar(1e-12) * std::max({Scalar(1), half_q_sq, third_p_cubed});
  if (std::abs(delta) <= thresh) return CubicBranch::Repeated;
  return delta > Scalar(0) ? CubicBranch::OneReal : CubicBranch::ThreeReal;
}

}  // namespace detail

// classify a depressed cubic given directly as y^3 + p y + q
template <class Scalar>
ResolventCubic<Scalar> make_resolvent(Scalar p, Scalar q) {
  const Scalar delta = (q / 2) * (q / 2) + (p / 3) * (p / 3) * (p / 3);
  return {p, q, delta, detail::classify_cubic(p, q, delta)};
}

template <class Scalar>
ResolventCubic<Scalar> resolvent_cubic(const QuarticCoeffs<Scalar>& qc) {
  const Scalar a = qc.a, b = qc.b, c = qc.c, d = qc.d;
  const Scalar p = a * c - b * b / 3 - 4 * d;
  const Scalar q = a * b * c / 3 - a * a * d - 2 * b * b * b / 27 - c * c +
                   8 * b * d / 3;
  return make_resolvent(p, q);
}

// real roots of the resolvent, sorted descending; Cardano with signed cube
// roots above the discriminant clamp, the trigonometric form below it, and
// the repeated-root limit {2s, -s, -s} with s = cbrt(-q/2) inside it
template <class Scalar>
CubicRoots<Scalar> cubic_real_roots(const ResolventCubic<Scalar>& rc) {
  const Scalar p = rc.p, q = rc.q;
  CubicRoots<Scalar> out;
  switch (rc.branch) {
    case CubicBranch::Repeated: {
      const Scalar s = std::cbrt(-q / 2);
      out.roots = {2 * s, -s, -s};
      out.count = 3;
      break;
    }
    case CubicBranch::OneReal: {
      const Scalar root = std::sqrt(rc.discriminant);
      // pick the cube-root argument that avoids cancellation against -q/2
      const Scalar u = q <= Scalar(0) ? -q / 2 + root : -q / 2 - root;
      const Scalar t = std::cbrt(u);
      const Scalar y = t == Scalar(0) ? std::cbrt(-q) : t - p / (3 * t);
      out.roots = {y, Scalar(0), Scalar(0)};
      out.count = 1;
      break;
    }
    case CubicBranch::ThreeReal: {
      const Scalar third_p = p / 3;
      const Scalar r = std::sqrt(-(third_p * third_p * third_p));
      const Scalar arg = std::clamp(-q / (2 * r), Scalar(-1), Scalar(1));
      const Scalar theta = std::acos(arg) / 3;
      const Scalar mm = 2 * std::sqrt(-third_p);
      constexpr Scalar two_thirds_pi = Scalar(2) * std::numbers::pi_v<Scalar> / 3;
      out.roots = {mm * std::cos(theta), mm * std::cos(theta + two_thirds_pi),
                   mm * std::cos(theta + 2 * two_thirds_pi)};
      out.count = 3;
      break;
    }
  }
  std::sort(out.roots.begin(), out.roots.begin() + out.count,
            std::greater<Scalar>());
  return out;
}

// splits the quartic into two monic quadratics given a real resolvent root y.
// The g split is g = a/2 +/- sqrt(a^2/4 + y - 2b/3) (g1 takes the positive
// sign); h1 + h2 = y + b/3 always, and the difference h2 - h1 comes from the
// cross-term identity g1 h2 + g2 h1 = c when the g split is wide enough to
// divide by, otherwise from the radical sqrt((y + b/3)^2 - 4d) with the
// assignment that best matches the cross term
template <class Scalar>
FactorPair<Scalar> factor_pairs(const QuarticCoeffs<Scalar>& qc, Scalar y) {
  const Scalar a = qc.a, b = qc.b, c = qc.c, d = qc.d;

  const Scalar rad_g = a * a / 4 + y - 2 * b / 3;
  const Scalar eps_g =
      Scalar(1e-10) * std::max({Scalar(1), std::abs(y), std::abs(b)});
  if (rad_g < -eps_g)
    throw NegativeRadicand("the g split", static_cast<double>(rad_g));
  const Scalar half_split = std::sqrt(std::max(rad_g, Scalar(0)));
  const Scalar g1 = a / 2 + half_split;
  const Scalar g2 = a / 2 - half_split;

  const Scalar v = y + b / 3;  // h1 + h2
  const Scalar rad_h = v * v - 4 * d;
  const Scalar eps_h =
      Scalar(1e-10) * std::max({Scalar(1), v * v, std::abs(d)});
  if (rad_h < -eps_h)
    throw NegativeRadicand("the h split", static_cast<double>(rad_h));

  Scalar h1, h2;
  const Scalar split_floor =
      Scalar(1e-8) * std::max({Scalar(1), std::abs(a),
                               std::sqrt(std::max(std::abs(y), std::abs(b)))});
  if (2 * half_split > split_floor) {
    const Scalar dc = (2 * c - a * v) / (2 * half_split);  // h2 - h1
    h1 = (v - dc) / 2;
    h2 = (v + dc) / 2;
  } else {
    // nearly biquadratic: the two factors are interchangeable and the radical
    // split is well conditioned here
    const Scalar root_h = std::sqrt(std::max(rad_h, Scalar(0)));
    const Scalar hp = (v + root_h) / 2;
    const Scalar hm = (v - root_h) / 2;
    if (std::abs(g1 * hm + g2 * hp - c) <= std::abs(g1 * hp + g2 * hm - c)) {
      h1 = hp;
      h2 = hm;
    } else {
      h1 = hm;
      h2 = hp;
    }
  }

  const Scalar miss = std::abs(g1 * h2 + g2 * h1 - c);
  const Scalar scale =
      std::max({Scalar(1), std::abs(b), std::abs(c), std::abs(d)});
  if (miss > Scalar(1e-9) * scale)
    throw ConstraintViolation(static_cast<double>(miss));
  return {g1, g2, h1, h2};
}

namespace detail {

template <class Scalar>
struct ValueError {
  Scalar value;
  Scalar error;
};

template <class Scalar>
ValueError<Scalar> two_sum(Scalar x, Scalar y) {
  const Scalar s = x + y;
  const Scalar bv = s - x;
  const Scalar av = s - bv;
  return {s, (x - av) + (y - bv)};
}

template <class Scalar>
ValueError<Scalar> two_prod(Scalar x, Scalar y) {
  const Scalar prod = x * y;
  return {prod, std::fma(x, y, -prod)};
}

// Horner evaluation of the quartic with a running first-order error term
template <class Scalar>
Scalar polyval_compensated(const QuarticCoeffs<Scalar>& qc, Scalar x) {
  Scalar s = Scalar(1);
  Scalar e = Scalar(0);
  for (const Scalar coef : {qc.a, qc.b, qc.c, qc.d}) {
    const auto pr = two_prod(s, x);
    const auto su = two_sum(pr.value, coef);
    s = su.value;
    e = e * x + (pr.error + su.error);
  }
  return s + e;
}

template <class Scalar>
Scalar polyval_derivative(const QuarticCoeffs<Scalar>& qc, Scalar x) {
  return ((4 * x + 3 * qc.a) * x + 2 * qc.b) * x + qc.c;
}

// at most `steps` Newton corrections, each kept only if it shrinks |p(x)|
template <class Scalar>
Scalar polish_root(const QuarticCoeffs<Scalar>& qc, Scalar x, int steps = 2) {
  for (int i = 0; i < steps; ++i) {
    const Scalar f = polyval_compensated(qc, x);
    if (f == Scalar(0)) return x;
    const Scalar fp = polyval_derivative(qc, x);
    if (std::abs(fp) < Scalar(1e-300)) return x;
    const Scalar xn = x - f / fp;
    if (std::abs(polyval_compensated(qc, xn)) < std::abs(f))
      x = xn;
    else
      return x;
  }
  return x;
}

// real roots of x^2 + g x + h, or nothing when the discriminant is
// materially negative
template <class Scalar>
std::optional<std::array<Scalar, 2>> quadratic_roots(Scalar g, Scalar h) {
  const Scalar disc = g * g - 4 * h;
  const Scalar clamp =
      Scalar(1e-12) * std::max({Scalar(1), g * g, std::abs(h)});
  if (disc < -clamp) return std::nullopt;
  const Scalar root = std::sqrt(std::max(disc, Scalar(0)));
  const Scalar x1 = g >= Scalar(0) ? (-g - root) / 2 : (-g + root) / 2;
  const Scalar x2 = x1 != Scalar(0) ? h / x1 : -g - x1;
  return std::array<Scalar, 2>{x1, x2};
}

}  // namespace detail

// full pipeline: resolvent -> cubic roots (largest first) -> factor split ->
// two quadratics. A NegativeRadicand from the split retries the next cubic
// root; each real root gets a short guarded Newton polish before sorting
template <class Scalar>
RootSet<Scalar> quartic_roots(const QuarticCoeffs<Scalar>& qc) {
  const auto ys = cubic_real_roots(resolvent_cubic(qc));
  std::optional<NegativeRadicand> rejected;
  for (int i = 0; i < ys.count; ++i) {
    FactorPair<Scalar> fp;
    try {
      fp = factor_pairs(qc, ys.roots[i]);
    } catch (const NegativeRadicand& e) {
      rejected = e;
      continue;
    }
    RootSet<Scalar> out;
    const std::array<std::pair<Scalar, Scalar>, 2> factors{
        {{fp.g1, fp.h1}, {fp.g2, fp.h2}}};
    for (int k = 0; k < 2; ++k) {
      if (const auto r =
              detail::quadratic_roots(factors[k].first, factors[k].second)) {
        out.roots[out.count++] = (*r)[0];
        out.roots[out.count++] = (*r)[1];
      } else {
        out.complex_pair[k] = true;
      }
    }
    if (out.count == 0) throw NoRealRoot();
    for (int k = 0; k < out.count; ++k)
      out.roots[k] = detail::polish_root(qc, out.roots[k]);
    std::sort(out.roots.begin(), out.roots.begin() + out.count,
              std::greater<Scalar>());
    return out;
  }
  // the cubic always produces at least one real root, so reaching this point
  // means every candidate was rejected
  throw *rejected;
}

template <class Scalar>
Scalar max_real_root(const RootSet<Scalar>& rs) {
  if (rs.count == 0) throw NoRealRoot();
  return rs.roots[0];
}

}  // namespace wahba
