#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "wahba/linalg.hpp"

using wahba::Mat3;
using wahba::Mat4;
using wahba::Vec4;

TEST_CASE("det3 on fixed matrices") {
  CHECK(wahba::det3(Eigen::Matrix3d::Identity()) == 1.0);
  Eigen::Matrix3d d = Eigen::Vector3d(2, 3, 4).asDiagonal();
  CHECK(wahba::det3(d) == 24.0);
}

TEST_CASE("det3 matches the permutation-sum oracle") {
  std::mt19937_64 gen(101);
  for (int trial = 0; trial < 300; ++trial) {
    const Eigen::Matrix3d m = oracle::random_mat3(gen);
    const double n = m.norm();
    const double scale = std::max(1.0, n * n * n);
    CHECK(std::abs(wahba::det3(m) - oracle::perm_det3(m)) <= 1e-12 * scale);
  }
}

TEST_CASE("adjugate3 on fixed matrices") {
  CHECK(wahba::adjugate3(Eigen::Matrix3d::Identity()) ==
        Eigen::Matrix3d::Identity());
  Eigen::Matrix3d d = Eigen::Vector3d(1, 1, 0).asDiagonal();
  Eigen::Matrix3d expect = Eigen::Vector3d(0, 0, 1).asDiagonal();
  CHECK(wahba::adjugate3(d) == expect);
}

TEST_CASE("adjugate3 satisfies m adj(m) = det(m) I") {
  std::mt19937_64 gen(102);
  for (int trial = 0; trial < 500; ++trial) {
    const Eigen::Matrix3d m = oracle::random_mat3(gen);
    const double n = m.norm();
    const double scale = std::max(1.0, n * n * n);
    const Eigen::Matrix3d lhs = m * wahba::adjugate3(m);
    const Eigen::Matrix3d rhs =
        wahba::det3(m) * Eigen::Matrix3d::Identity();
    CHECK((lhs - rhs).norm() <= 1e-12 * scale);
  }
}

TEST_CASE("det4_adjugate4 on fixed matrices") {
  Eigen::Matrix4d d = Eigen::Vector4d(0, 0, -1, 1).asDiagonal();
  const auto da = wahba::det4_adjugate4(d);
  CHECK(da.det == 0.0);
  CHECK(da.adj == Eigen::Matrix4d::Zero());

  const auto id = wahba::det4_adjugate4(Eigen::Matrix4d::Identity());
  CHECK(id.det == 1.0);
  CHECK(id.adj == Eigen::Matrix4d::Identity());
}

TEST_CASE("det4_adjugate4 identity and trace properties on random input") {
  std::mt19937_64 gen(103);
  for (int trial = 0; trial < 300; ++trial) {
    const Eigen::Matrix4d m = oracle::random_sym4(gen);
    const double n = m.norm();
    const auto da = wahba::det4_adjugate4(m);

    const double det_scale = std::max(1.0, n * n * n * n);
    CHECK(std::abs(da.det - oracle::perm_det4(m)) <= 1e-11 * det_scale);
    CHECK((m * da.adj - da.det * Eigen::Matrix4d::Identity()).norm() <=
          1e-11 * det_scale);

    // trace of the adjugate equals the sum of principal 3x3 minors
    double minor_sum = 0.0;
    for (int k = 0; k < 4; ++k) {
      Eigen::Matrix3d sub;
      int rr = 0;
      for (int r = 0; r < 4; ++r) {
        if (r == k) continue;
        int cc = 0;
        for (int c = 0; c < 4; ++c) {
          if (c == k) continue;
          sub(rr, cc++) = m(r, c);
        }
        ++rr;
      }
      minor_sum += oracle::perm_det3(sub);
    }
    const double minor_scale = std::max(1.0, n * n * n);
    CHECK(std::abs(da.adj.trace() - minor_sum) <= 1e-11 * minor_scale);
  }
}

TEST_CASE("jacobi_eigen_sym4 on a diagonal matrix") {
  Eigen::Matrix4d d = Eigen::Vector4d(0, 0, -1, 1).asDiagonal();
  const auto eig = wahba::jacobi_eigen_sym4(d);
  CHECK(eig.eigenvalues[0] == 1.0);
  CHECK(eig.eigenvalues[1] == 0.0);
  CHECK(eig.eigenvalues[2] == 0.0);
  CHECK(eig.eigenvalues[3] == -1.0);
  for (int k = 0; k < 4; ++k) {
    // eigenvectors of the diagonal matrix are coordinate axes
    const Vec4<double> v = eig.eigenvectors.col(k);
    CHECK(v.cwiseAbs().maxCoeff() == 1.0);
    CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK((d * v - eig.eigenvalues[k] * v).norm() <= 1e-14);
  }
}

TEST_CASE("jacobi_eigen_sym4 on the identity") {
  const auto eig = wahba::jacobi_eigen_sym4(Eigen::Matrix4d::Identity());
  for (int k = 0; k < 4; ++k) CHECK(eig.eigenvalues[k] == 1.0);
}

TEST_CASE("jacobi_eigen_sym4 properties on random symmetric matrices") {
  std::mt19937_64 gen(104);
  for (int trial = 0; trial < 300; ++trial) {
    const Eigen::Matrix4d m = oracle::random_sym4(gen);
    const double n = m.norm();
    const auto eig = wahba::jacobi_eigen_sym4(m);

    for (int k = 0; k < 4; ++k) {
      const Vec4<double> v = eig.eigenvectors.col(k);
      CHECK((m * v - eig.eigenvalues[k] * v).norm() <= 1e-10 * n);
      if (k > 0) CHECK(eig.eigenvalues[k] <= eig.eigenvalues[k - 1]);
    }
    CHECK(std::abs(eig.eigenvalues.sum() - m.trace()) <=
          1e-11 * std::max(1.0, n));
    CHECK(std::abs(eig.eigenvalues.prod() - oracle::perm_det4(m)) <=
          1e-9 * std::max(1.0, n * n * n * n));
    CHECK((eig.eigenvectors.transpose() * eig.eigenvectors -
           Eigen::Matrix4d::Identity())
              .norm() <= 1e-10);
  }
}

TEST_CASE("jacobi_eigen_sym4 reports non-convergence at the sweep cap") {
  std::mt19937_64 gen(105);
  Eigen::Matrix4d m = oracle::random_sym4(gen);
  CHECK_THROWS_AS(wahba::jacobi_eigen_sym4(m, 1e-14, 0),
                  wahba::NonConvergence);
  try {
    wahba::jacobi_eigen_sym4(m, 1e-14, 0);
  } catch (const wahba::NonConvergence& e) {
    CHECK(e.iterations == 0);
  }
}

TEST_CASE("frobenius3 on fixed matrices") {
  CHECK(wahba::frobenius3(Eigen::Matrix3d::Zero()) == 0.0);
  CHECK(wahba::frobenius3(Eigen::Matrix3d::Identity()) ==
        doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
  CHECK(wahba::frobenius3(Eigen::Matrix3d::Ones()) == 3.0);
}
