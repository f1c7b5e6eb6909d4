#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <array>
#include <cmath>

#include "wahba/errors.hpp"

namespace wahba {

template <class Scalar> using Vec3 = Eigen::Matrix<Scalar, 3, 1>;
template <class Scalar> using Vec4 = Eigen::Matrix<Scalar, 4, 1>;
template <class Scalar> using Mat3 = Eigen::Matrix<Scalar, 3, 3>;
template <class Scalar> using Mat4 = Eigen::Matrix<Scalar, 4, 4>;

namespace detail {

template <class Derived, int Rows, int Cols>
constexpr void require_shape() {
  static_assert(Derived::RowsAtCompileTime == Rows &&
                    Derived::ColsAtCompileTime == Cols,
                "fixed-size matrix argument has the wrong shape");
}

}  // namespace detail

// determinant of a 3x3 matrix by cofactor expansion along the first row
template <class Derived>
typename Derived::Scalar det3(const Eigen::MatrixBase<Derived>& m) {
  detail::require_shape<Derived, 3, 3>();
  return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
         m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

// transpose of the cofactor matrix; satisfies m * adjugate3(m) = det3(m) * I
template <class Derived>
Mat3<typename Derived::Scalar> adjugate3(const Eigen::MatrixBase<Derived>& m) {
  detail::require_shape<Derived, 3, 3>();
  Mat3<typename Derived::Scalar> adj;
  adj(0, 0) = m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
  adj(0, 1) = -(m(0, 1) * m(2, 2) - m(0, 2) * m(2, 1));
  adj(0, 2) = m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1);
  adj(1, 0) = -(m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0));
  adj(1, 1) = m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0);
  adj(1, 2) = -(m(0, 0) * m(1, 2) - m(0, 2) * m(1, 0));
  adj(2, 0) = m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0);
  adj(2, 1) = -(m(0, 0) * m(2, 1) - m(0, 1) * m(2, 0));
  adj(2, 2) = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  return adj;
}

template <class Scalar>
struct DetAdj4 {
  Scalar det;
  Mat4<Scalar> adj;
};

// determinant and adjugate of a 4x4 matrix by cofactor expansion over 3x3
// minors; satisfies m * adj = det * I
template <class Derived>
DetAdj4<typename Derived::Scalar> det4_adjugate4(
    const Eigen::MatrixBase<Derived>& m) {
  detail::require_shape<Derived, 4, 4>();
  using Scalar = typename Derived::Scalar;
  Mat4<Scalar> cof;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      Mat3<Scalar> sub;
      int rr = 0;
      for (int r = 0; r < 4; ++r) {
        if (r == i) continue;
        int cc = 0;
        for (int c = 0; c < 4; ++c) {
          if (c == j) continue;
          sub(rr, cc) = m(r, c);
          ++cc;
        }
        ++rr;
      }
      const Scalar minor = det3(sub);
      cof(i, j) = ((i + j) % 2 == 0) ? minor : -minor;
    }
  }
  Scalar det = Scalar(0);
  for (int j = 0; j < 4; ++j) det += m(0, j) * cof(0, j);
  return {det, cof.transpose()};
}

// square root of the sum of squared entries
template <class Derived>
typename Derived::Scalar frobenius3(const Eigen::MatrixBase<Derived>& m) {
  detail::require_shape<Derived, 3, 3>();
  return m.norm();
}

template <class Scalar>
struct EigenDecomp4 {
  Vec4<Scalar> eigenvalues;   // sorted descending
  Mat4<Scalar> eigenvectors;  // orthonormal columns, column k pairs with eigenvalues[k]
  int sweeps = 0;
};

// cyclic Jacobi diagonalization of a symmetric 4x4 matrix; rotations are
// applied in a fixed (p, q) order until every off-diagonal magnitude is at
// most tol * ||m||_F
template <class Derived>
EigenDecomp4<typename Derived::Scalar> jacobi_eigen_sym4(
    const Eigen::MatrixBase<Derived>& m,
    typename Derived::Scalar tol = typename Derived::Scalar(1e-14),
    int max_sweeps = 50) {
  detail::require_shape<Derived, 4, 4>();
  using Scalar = typename Derived::Scalar;
  Mat4<Scalar> a = m;
  Mat4<Scalar> v = Mat4<Scalar>::Identity();
  const Scalar stop = tol * a.norm();

  const auto off_max = [&a]() {
    Scalar w = Scalar(0);
    for (int p = 0; p < 4; ++p)
      for (int q = p + 1; q < 4; ++q) w = std::max(w, std::abs(a(p, q)));
    return w;
  };

  int sweeps = 0;
  while (off_max() > stop) {
    if (sweeps == max_sweeps) {
      throw NonConvergence("jacobi_eigen_sym4 exceeded the sweep limit",
                           static_cast<double>(a.diagonal().maxCoeff()),
                           sweeps);
    }
    for (int p = 0; p < 4; ++p) {
      for (int q = p + 1; q < 4; ++q) {
        const Scalar apq = a(p, q);
        if (apq == Scalar(0)) continue;
        const Scalar theta = (a(q, q) - a(p, p)) / (2 * apq);
        const Scalar t = (theta >= Scalar(0) ? Scalar(1) : Scalar(-1)) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1));
        const Scalar c = Scalar(1) / std::sqrt(t * t + 1);
        const Scalar s = t * c;
        // the (p, q) entry is annihilated exactly; only rows/columns p and q move
        a(p, p) -= t * apq;
        a(q, q) += t * apq;
        a(p, q) = Scalar(0);
        a(q, p) = Scalar(0);
        for (int k = 0; k < 4; ++k) {
          if (k == p || k == q) continue;
          const Scalar akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
          a(p, k) = a(k, p);
          a(q, k) = a(k, q);
        }
        for (int k = 0; k < 4; ++k) {
          const Scalar vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
    ++sweeps;
  }

  std::array<int, 4> order{0, 1, 2, 3};
  std::stable_sort(order.begin(), order.end(),
                   [&a](int i, int j) { return a(i, i) > a(j, j); });
  EigenDecomp4<Scalar> out;
  for (int k = 0; k < 4; ++k) {
    out.eigenvalues[k] = a(order[k], order[k]);
    out.eigenvectors.col(k) = v.col(order[k]);
  }
  out.sweeps = sweeps;
  return out;
}

}  // namespace wahba
