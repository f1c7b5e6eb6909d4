#pragma once

#include <Eigen/LU>

#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <tuple>
#include <utility>
#include <vector>

#include "wahba/linalg.hpp"
#include "wahba/observation.hpp"
#include "wahba/quartic.hpp"

namespace wahba {

// unit quaternion, vector part first and scalar part last, matching the
// K-matrix block order (z above, trB at the corner)
template <class Scalar>
struct Quaternion {
  Vec3<Scalar> vector;
  Scalar scalar;

  Vec4<Scalar> as_vec4() const {
    return Vec4<Scalar>(vector[0], vector[1], vector[2], scalar);
  }
  static Quaternion from_vec4(const Vec4<Scalar>& v) {
    return {v.template head<3>(), v[3]};
  }
};

template <class Scalar>
struct SolverReport {
  Scalar lambda_max;
  Quaternion<Scalar> quaternion;
  Mat3<Scalar> attitude;
  Scalar loss;            // total weight minus lambda_max
  int iterations;         // adaptive iterations only; 0 for the closed form
  Scalar eigenvalue_gap;  // lambda_max minus the nearest competing eigenvalue
  bool ambiguous;         // gap below 1e-9 * max(1, lambda_max)
  double wall_time_ns;    // eigenvalue and quaternion work only
};

template <class Scalar>
struct NewtonConfig {
  std::optional<Scalar> x0;    // solvers default this to the total weight
  Scalar tol = Scalar(1e-13);  // relative step tolerance
  int max_iterations = 100;
};

template <class Scalar>
struct NewtonResult {
  Scalar root;
  int iterations;
};

namespace detail {

template <class Scalar>
Vec4<Scalar> canonicalize_sign(Vec4<Scalar> q) {
  int imax = 0;
  for (int i = 1; i < 4; ++i)
    if (std::abs(q[i]) > std::abs(q[imax])) imax = i;
  if (q[3] < Scalar(0) || (q[3] == Scalar(0) && q[imax] < Scalar(0))) q = -q;
  return q;
}

}  // namespace detail

// eigenvector of k for the eigenvalue lambda, from the largest-norm column of
// adj(lambda I - k); sign fixed so the scalar part is non-negative (ties
// broken by the largest-magnitude component for reproducibility)
template <class Scalar>
Quaternion<Scalar> extract_quaternion(const Mat4<Scalar>& k, Scalar lambda) {
  const Mat4<Scalar> m = lambda * Mat4<Scalar>::Identity() - k;
  const auto da = det4_adjugate4(m);
  int best = 0;
  Scalar best_norm = Scalar(-1);
  for (int j = 0; j < 4; ++j) {
    const Scalar n = da.adj.col(j).norm();
    if (n > best_norm) {
      best_norm = n;
      best = j;
    }
  }
  const Scalar mn = m.norm();
  if (best_norm <= Scalar(1e-12) * std::max(Scalar(1), mn * mn * mn))
    throw DegenerateEigenvector(static_cast<double>(lambda),
                                std::numeric_limits<double>::quiet_NaN());
  const Vec4<Scalar> q =
      detail::canonicalize_sign<Scalar>(da.adj.col(best) / best_norm);
  return Quaternion<Scalar>::from_vec4(q);
}

// rotation matrix A(q) = (w^2 - |v|^2) I + 2 v v^T - 2 w [v]x, the direction
// that maps reference vectors onto body vectors
template <class Scalar>
Mat3<Scalar> quaternion_to_matrix(const Quaternion<Scalar>& qn) {
  const Vec3<Scalar>& v = qn.vector;
  const Scalar w = qn.scalar;
  Mat3<Scalar> cross;
  cross << Scalar(0), -v[2], v[1],
           v[2], Scalar(0), -v[0],
           -v[1], v[0], Scalar(0);
  return (w * w - v.dot(v)) * Mat3<Scalar>::Identity() +
         2 * v * v.transpose() - 2 * w * cross;
}

// Newton iteration x <- x - p(x)/p'(x) from cfg.x0, stopping when the step
// falls to tol * max(1, |x|); the optional trace records x0 and every iterate
template <class Scalar>
NewtonResult<Scalar> newton_max_root(const QuarticCoeffs<Scalar>& qc,
                                     const NewtonConfig<Scalar>& cfg,
                                     std::vector<Scalar>* trace = nullptr) {
  if (!cfg.x0) throw Error("newton_max_root needs a start value");
  if (!(cfg.tol > Scalar(0)) || cfg.max_iterations < 1)
    throw Error("newton_max_root configuration is invalid");
  Scalar x = *cfg.x0;
  if (trace) trace->push_back(x);
  Scalar best_x = x;
  Scalar best_f = std::numeric_limits<Scalar>::infinity();
  for (int k = 1; k <= cfg.max_iterations; ++k) {
    const Scalar f = detail::polyval_compensated(qc, x);
    if (std::abs(f) < best_f) {
      best_f = std::abs(f);
      best_x = x;
    }
    if (f == Scalar(0)) return {x, k};
    const Scalar fp = detail::polyval_derivative(qc, x);
    if (std::abs(fp) <= Scalar(1e-300))
      throw ZeroDerivative(static_cast<double>(x));
    const Scalar step = f / fp;
    x -= step;
    if (trace) trace->push_back(x);
    if (std::abs(step) <= cfg.tol * std::max(Scalar(1), std::abs(x)))
      return {x, k};
  }
  throw NonConvergence("newton_max_root hit the iteration cap",
                       static_cast<double>(best_x), cfg.max_iterations);
}

namespace detail {

template <class Scalar>
Scalar rayleigh_quotient(const Mat4<Scalar>& k, const Quaternion<Scalar>& q) {
  const Vec4<Scalar> u = q.as_vec4();
  return u.dot(k * u);
}

// largest eigenvalue by a two-dimensional Rayleigh-Ritz step on the dominant
// column space of adj(lambda I - k); when the top two eigenvalues are
// clustered, that column space tracks their invariant subspace even though
// each individual column mixes the two eigenvectors, so the Ritz value pins
// lambda_max to matrix accuracy where the coefficient round trip cannot
template <class Scalar>
std::optional<Scalar> ritz_max_eigenvalue(const Mat4<Scalar>& k,
                                          Scalar lambda) {
  const Mat4<Scalar> m = lambda * Mat4<Scalar>::Identity() - k;
  const Mat4<Scalar> adj = det4_adjugate4(m).adj;
  int j1 = 0;
  Scalar n1 = Scalar(-1);
  for (int j = 0; j < 4; ++j) {
    const Scalar n = adj.col(j).norm();
    if (n > n1) {
      n1 = n;
      j1 = j;
    }
  }
  const Scalar mn = m.norm();
  if (n1 <= Scalar(1e-12) * std::max(Scalar(1), mn * mn * mn))
    return std::nullopt;
  const Vec4<Scalar> q1 = adj.col(j1) / n1;
  Vec4<Scalar> r = Vec4<Scalar>::Zero();
  Scalar rn = Scalar(-1);
  for (int j = 0; j < 4; ++j) {
    if (j == j1) continue;
    const Vec4<Scalar> res = adj.col(j) - q1 * q1.dot(adj.col(j));
    const Scalar n = res.norm();
    if (n > rn) {
      rn = n;
      r = res;
    }
  }
  // a one-dimensional column space means the shift already sits on a simple
  // separated eigenvalue, where the plain quotient rounds suffice
  if (rn <= Scalar(1e-7) * n1) return std::nullopt;
  const Vec4<Scalar> q2 = r / rn;
  const Scalar h11 = q1.dot(k * q1);
  const Scalar h22 = q2.dot(k * q2);
  const Scalar h12 = q1.dot(k * q2);
  return (h11 + h22) / 2 + std::hypot((h11 - h22) / 2, h12);
}

// seed the eigenpair from the polynomial root, then apply two fixed rounds of
// Rayleigh-quotient update and re-extraction; the eigenvector error contracts
// quadratically, so the final pair is limited by the matrix itself rather
// than by the coefficient round trip; a clustered top pair first gets a
// Rayleigh-Ritz pass because a shift inside the cluster mixes the two
// eigenvectors and the plain quotient can land anywhere in the cluster
template <class Scalar>
std::pair<Scalar, Quaternion<Scalar>> refine_eigenpair(const Mat4<Scalar>& k,
                                                       Scalar lambda,
                                                       Scalar gap) {
  const bool clustered =
      gap < Scalar(1e-4) * std::max(Scalar(1), std::abs(lambda));
  if (clustered) {
    if (const auto ritz = ritz_max_eigenvalue(k, lambda)) lambda = *ritz;
  }
  Quaternion<Scalar> q = extract_quaternion(k, lambda);
  for (int round = 0; round < 2; ++round) {
    lambda = rayleigh_quotient(k, q);
    q = extract_quaternion(k, lambda);
  }
  if (clustered) {
    // one inverse-iteration step through a pivoted solve scrubs the
    // eigenvector residual: adjugate columns at a clustered shift carry
    // noise of order eps over gap in the well-separated directions
    const Mat4<Scalar> m = lambda * Mat4<Scalar>::Identity() - k;
    const Vec4<Scalar> u = q.as_vec4();
    Vec4<Scalar> w = m.partialPivLu().solve(u);
    const Scalar wn = w.norm();
    if (std::isfinite(wn) && wn > Scalar(0)) {
      w /= wn;
      const Scalar cand = w.dot(k * w);
      if ((k * w - cand * w).norm() < (k * u - lambda * u).norm()) {
        q = Quaternion<Scalar>::from_vec4(canonicalize_sign<Scalar>(w));
      }
    }
  }
  return {rayleigh_quotient(k, q), q};
}

template <class Scalar>
SolverReport<Scalar> finish_report(const Mat4<Scalar>& k, Scalar lambda_seed,
                                   Scalar gap, int iterations,
                                   Scalar total_weight) {
  Scalar lambda;
  Quaternion<Scalar> q;
  try {
    std::tie(lambda, q) = refine_eigenpair(k, lambda_seed, gap);
  } catch (const DegenerateEigenvector& e) {
    throw DegenerateEigenvector(e.lambda_max, static_cast<double>(gap));
  }
  SolverReport<Scalar> rep;
  rep.lambda_max = lambda;
  rep.quaternion = q;
  rep.attitude = quaternion_to_matrix(q);
  rep.loss = total_weight - lambda;
  rep.iterations = iterations;
  rep.eigenvalue_gap = gap;
  rep.ambiguous = gap < Scalar(1e-9) * std::max(Scalar(1), lambda);
  rep.wall_time_ns = 0.0;
  return rep;
}

inline double elapsed_ns(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::nano>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace detail

// closed-form solver: characteristic quartic, resolvent factorization, root
// selection, adjugate extraction
template <class Scalar>
SolverReport<Scalar> solve_analytic(const ObservationSet<Scalar>& obs) {
  const auto profile = build_profile(obs);
  const auto k = build_k_matrix(profile);
  // timed region covers eigenvalue and quaternion work; profile and K
  // assembly are excluded
  const auto t0 = std::chrono::steady_clock::now();
  const auto qc = quartic_coefficients(profile, k);
  const auto roots = quartic_roots(qc);
  const Scalar lambda = max_real_root(roots);
  const Scalar gap =
      roots.count >= 2 ? roots.roots[0] - roots.roots[1] : Scalar(0);
  auto rep = detail::finish_report(k, lambda, gap, 0, obs.total_weight());
  rep.wall_time_ns = detail::elapsed_ns(t0);
  return rep;
}

// QUEST-style solver: Newton iteration on the characteristic quartic from
// x0 = total weight, then the shared extraction path; the eigenvalue gap
// comes from deflating the quartic by the converged root
template <class Scalar>
SolverReport<Scalar> solve_quest_newton(const ObservationSet<Scalar>& obs,
                                        const NewtonConfig<Scalar>& cfg = {}) {
  const auto profile = build_profile(obs);
  const auto k = build_k_matrix(profile);
  const auto t0 = std::chrono::steady_clock::now();
  const auto qc = quartic_coefficients(profile, k);
  NewtonConfig<Scalar> c = cfg;
  if (!c.x0) c.x0 = obs.total_weight();
  const auto nr = newton_max_root(qc, c);
  // synthetic division by (x - root) leaves a cubic holding the other
  // eigenvalues
  const Scalar q2 = qc.a + nr.root;
  const Scalar q1 = qc.b + nr.root * q2;
  const Scalar q0 = qc.c + nr.root * q1;
  const Scalar shift = q2 / 3;
  const Scalar dp = q1 - q2 * q2 / 3;
  const Scalar dq = 2 * q2 * q2 * q2 / 27 - q2 * q1 / 3 + q0;
  const auto cub = cubic_real_roots(make_resolvent(dp, dq));
  const Scalar gap = nr.root - (cub.roots[0] - shift);
  auto rep =
      detail::finish_report(k, nr.root, gap, nr.iterations, obs.total_weight());
  rep.wall_time_ns = detail::elapsed_ns(t0);
  return rep;
}

// q-method solver: full Jacobi eigendecomposition of K
template <class Scalar>
SolverReport<Scalar> solve_davenport(const ObservationSet<Scalar>& obs) {
  const auto profile = build_profile(obs);
  const auto k = build_k_matrix(profile);
  const auto t0 = std::chrono::steady_clock::now();
  const auto eig = jacobi_eigen_sym4(k);
  const Scalar lambda = eig.eigenvalues[0];
  const Scalar gap = eig.eigenvalues[0] - eig.eigenvalues[1];
  const Vec4<Scalar> col = eig.eigenvectors.col(0).normalized();
  const Quaternion<Scalar> q =
      Quaternion<Scalar>::from_vec4(detail::canonicalize_sign<Scalar>(col));
  SolverReport<Scalar> rep;
  rep.lambda_max = lambda;
  rep.quaternion = q;
  rep.attitude = quaternion_to_matrix(q);
  rep.loss = obs.total_weight() - lambda;
  rep.iterations = eig.sweeps;
  rep.eigenvalue_gap = gap;
  rep.ambiguous = gap < Scalar(1e-9) * std::max(Scalar(1), lambda);
  rep.wall_time_ns = detail::elapsed_ns(t0);
  return rep;
}

}  // namespace wahba
