#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <vector>

#include "wahba/errors.hpp"
#include "wahba/linalg.hpp"
#include "wahba/quartic.hpp"

namespace wahba {

// one weighted vector pair: unit reference direction r and unit body-frame
// measurement b
template <class Scalar>
struct Observation {
  Vec3<Scalar> reference;
  Vec3<Scalar> body;
  Scalar weight;
};

template <class Scalar>
class ObservationSet {
 public:
  ObservationSet() = default;

  // inputs are normalized on ingestion; weight must be positive
  void add(const Vec3<Scalar>& reference, const Vec3<Scalar>& body,
           Scalar weight) {
    const Scalar rn = reference.norm();
    const Scalar bn = body.norm();
    if (!(rn > Scalar(0)) || !(bn > Scalar(0)))
      throw Error("observation vectors must be nonzero");
    if (!(weight > Scalar(0)))
      throw Error("observation weight must be positive");
    items_.push_back({reference / rn, body / bn, weight});
  }

  // maximum-likelihood weights a_i = sigma_i^-2 / sum_j sigma_j^-2
  static ObservationSet from_sigmas(const std::vector<Vec3<Scalar>>& references,
                                    const std::vector<Vec3<Scalar>>& bodies,
                                    const std::vector<Scalar>& sigmas) {
    if (references.size() != bodies.size() ||
        references.size() != sigmas.size())
      throw Error("observation arrays differ in length");
    Scalar inv_sum = Scalar(0);
    for (const Scalar s : sigmas) {
      if (!(s > Scalar(0))) throw Error("sigma must be positive");
      inv_sum += Scalar(1) / (s * s);
    }
    ObservationSet out;
    for (std::size_t i = 0; i < references.size(); ++i)
      out.add(references[i], bodies[i],
              Scalar(1) / (sigmas[i] * sigmas[i] * inv_sum));
    return out;
  }

  // equal weights a_i = 1/n
  static ObservationSet equal_weights(
      const std::vector<Vec3<Scalar>>& references,
      const std::vector<Vec3<Scalar>>& bodies) {
    if (references.size() != bodies.size())
      throw Error("observation arrays differ in length");
    if (references.empty()) throw EmptyObservationSet();
    ObservationSet out;
    const Scalar w = Scalar(1) / Scalar(references.size());
    for (std::size_t i = 0; i < references.size(); ++i)
      out.add(references[i], bodies[i], w);
    return out;
  }

  const std::vector<Observation<Scalar>>& observations() const {
    return items_;
  }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }

  Scalar total_weight() const {
    Scalar s = Scalar(0);
    for (const auto& o : items_) s += o.weight;
    return s;
  }

 private:
  std::vector<Observation<Scalar>> items_;
};

// B = sum_i a_i b_i r_i^T and its derived pieces
template <class Scalar>
struct AttitudeProfile {
  Mat3<Scalar> B;
  Mat3<Scalar> S;   // B + B^T
  Vec3<Scalar> z;   // (B23 - B32, B31 - B13, B12 - B21), 1-based indices
  Scalar trB;
};

template <class Scalar>
AttitudeProfile<Scalar> build_profile(const ObservationSet<Scalar>& obs) {
  if (obs.empty()) throw EmptyObservationSet();
  Mat3<Scalar> B = Mat3<Scalar>::Zero();
  for (const auto& o : obs.observations())
    B += o.weight * o.body * o.reference.transpose();
  AttitudeProfile<Scalar> p;
  p.B = B;
  p.S = B + B.transpose();
  p.z = Vec3<Scalar>(B(1, 2) - B(2, 1), B(2, 0) - B(0, 2), B(0, 1) - B(1, 0));
  p.trB = B.trace();
  return p;
}

// K = [[S - trB * I, z], [z^T, trB]]; symmetric and traceless by construction
template <class Scalar>
Mat4<Scalar> build_k_matrix(const AttitudeProfile<Scalar>& p) {
  Mat4<Scalar> k;
  k.template topLeftCorner<3, 3>() =
      p.S - p.trB * Mat3<Scalar>::Identity();
  k.template topRightCorner<3, 1>() = p.z;
  k.template bottomLeftCorner<1, 3>() = p.z.transpose();
  k(3, 3) = p.trB;
  return k;
}

// characteristic polynomial det(x I - K) = x^4 + a x^3 + b x^2 + c x + d;
// a vanishes because K is traceless, and b comes from the profile identity
// b = -2 (trB)^2 + tr(adj S) - z^T z
template <class Scalar>
QuarticCoeffs<Scalar> quartic_coefficients(const AttitudeProfile<Scalar>& p,
                                           const Mat4<Scalar>& k) {
  const auto da = det4_adjugate4(k);
  QuarticCoeffs<Scalar> qc;
  qc.a = Scalar(0);
  qc.b = -2 * p.trB * p.trB + adjugate3(p.S).trace() - p.z.dot(p.z);
  qc.c = -da.adj.trace();
  qc.d = da.det;
  return qc;
}

// (1/2) sum_i a_i ||b_i - A r_i||^2, evaluated as sum a_i - sum a_i b_i . A r_i
template <class Scalar>
Scalar wahba_loss(const Mat3<Scalar>& A, const ObservationSet<Scalar>& obs) {
  const Scalar dev =
      (A.transpose() * A - Mat3<Scalar>::Identity()).norm();
  if (dev > Scalar(1e-10))
    throw NonOrthogonalAttitude(static_cast<double>(dev));
  Scalar weight_sum = Scalar(0);
  Scalar projection_sum = Scalar(0);
  for (const auto& o : obs.observations()) {
    weight_sum += o.weight;
    projection_sum += o.weight * o.body.dot(A * o.reference);
  }
  return weight_sum - projection_sum;
}

}  // namespace wahba
