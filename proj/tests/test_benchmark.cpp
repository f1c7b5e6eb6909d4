#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "oracles.hpp"
#include "wahba/benchmark.hpp"

namespace bench = wahba::bench;
using bench::Solver;

namespace {

bool stats_equal_modulo_time(const bench::CaseStats& a,
                             const bench::CaseStats& b) {
  return a.case_id == b.case_id && a.solver == b.solver &&
         a.trials == b.trials && a.mean_phi_deg == b.mean_phi_deg &&
         a.std_phi_deg == b.std_phi_deg && a.mean_lambda == b.mean_lambda &&
         a.failures == b.failures;
}

}  // namespace

TEST_CASE("solver names round-trip") {
  for (Solver s : bench::all_solvers()) {
    const auto back = bench::solver_from_name(bench::solver_name(s));
    REQUIRE(back.has_value());
    CHECK(*back == s);
  }
  CHECK_FALSE(bench::solver_from_name("esoq").has_value());
  CHECK(bench::all_solvers().size() == 3);
}

TEST_CASE("true attitude constants") {
  const Eigen::Matrix3d raw = bench::true_attitude_raw();
  CHECK(raw(0, 0) == 0.352);
  CHECK(raw(0, 1) == 0.864);
  CHECK(raw(0, 2) == 0.360);
  CHECK(raw(1, 0) == -0.864);
  CHECK(raw(1, 1) == 0.152);
  CHECK(raw(1, 2) == 0.480);
  CHECK(raw(2, 0) == 0.360);
  CHECK(raw(2, 1) == -0.480);
  CHECK(raw(2, 2) == 0.800);

  // tabulated to three decimals: close to orthogonal but not exactly
  CHECK((raw.transpose() * raw - Eigen::Matrix3d::Identity()).norm() <= 2e-2);

  const Eigen::Matrix3d a = bench::true_attitude();
  CHECK((a.transpose() * a - Eigen::Matrix3d::Identity()).norm() <= 1e-12);
  CHECK(std::abs(wahba::det3(a) - 1.0) <= 1e-12);
  CHECK((a - bench::polar_orthonormalize(raw)).norm() == 0.0);
  CHECK((a - raw).norm() <= 2e-2);
}

TEST_CASE("case table contents") {
  const auto& table = bench::case_table();
  REQUIRE(table.size() == 12);
  for (int i = 0; i < 12; ++i) CHECK(table[i].id == i + 1);

  const auto& c1 = bench::find_case(1);
  REQUIRE(c1.references.size() == 3);
  CHECK(c1.references[0] == Eigen::Vector3d(1, 0, 0));
  CHECK(c1.references[1] == Eigen::Vector3d(0, 1, 0));
  CHECK(c1.references[2] == Eigen::Vector3d(0, 0, 1));
  CHECK(c1.sigmas == std::vector<double>{1e-6, 1e-6, 1e-6});

  const auto& c5 = bench::find_case(5);
  REQUIRE(c5.references.size() == 2);
  CHECK(c5.references[0] == Eigen::Vector3d(0.6, 0.8, 0));
  CHECK(c5.references[1] == Eigen::Vector3d(0.8, -0.6, 0));
  CHECK(c5.sigmas == std::vector<double>{1e-6, 0.01});

  const auto& c12 = bench::find_case(12);
  REQUIRE(c12.references.size() == 2);
  CHECK(c12.references[0] == Eigen::Vector3d(1, 0, 0));
  CHECK(c12.references[1] == Eigen::Vector3d(0.96, 0.28, 0));
  CHECK(c12.sigmas == std::vector<double>{0.01, 1e-6});

  for (const auto& c : table) {
    CHECK(c.references.size() == c.sigmas.size());
    CHECK((c.references.size() == 2 || c.references.size() == 3));
    for (double s : c.sigmas) CHECK(s > 0.0);
    for (Solver s : bench::all_solvers())
      CHECK(bench::expected_phi(c, s) > 0.0);
  }

  CHECK_THROWS_AS(bench::find_case(0), wahba::Error);
  CHECK_THROWS_AS(bench::find_case(13), wahba::Error);
}

TEST_CASE("sample_measurement in the vanishing-noise limit") {
  const bench::BenchmarkCase tiny{
      99,
      {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}},
      {1e-30, 1e-30, 1e-30},
      0,
      0,
      0};
  const Eigen::Matrix3d& a = bench::true_attitude();
  const auto obs = bench::sample_measurement(tiny, a, {7, 0});
  REQUIRE(obs.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& o = obs.observations()[i];
    CHECK((o.body - a * o.reference).norm() <= 1e-12);
  }
  const auto rep = wahba::solve_analytic(obs);
  CHECK(bench::attitude_error_deg(rep.attitude, a) <= 1e-9);
}

TEST_CASE("sample_measurement basic shape") {
  const auto& c5 = bench::find_case(5);
  const Eigen::Matrix3d& a = bench::true_attitude();
  const auto obs = bench::sample_measurement(c5, a, {3, 11});
  REQUIRE(obs.size() == 2);
  double total = 0.0;
  for (const auto& o : obs.observations()) {
    CHECK(std::abs(o.body.norm() - 1.0) <= 1e-14);
    CHECK(std::abs(o.reference.norm() - 1.0) <= 1e-14);
    total += o.weight;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-14));

  // identical seeds reproduce the draw; different indexes change it
  const auto again = bench::sample_measurement(c5, a, {3, 11});
  CHECK(obs.observations()[0].body == again.observations()[0].body);
  const auto other = bench::sample_measurement(c5, a, {3, 12});
  CHECK(obs.observations()[0].body != other.observations()[0].body);
}

TEST_CASE("sample_measurement noise magnitude matches its model") {
  const bench::BenchmarkCase c{99, {{1, 0, 0}}, {0.01}, 0, 0, 0};
  const Eigen::Matrix3d& a = bench::true_attitude();
  const Eigen::Vector3d target = a * Eigen::Vector3d(1, 0, 0);
  double sum_angle = 0.0;
  const int samples = 100000;
  for (int t = 0; t < samples; ++t) {
    const auto obs = bench::sample_measurement(c, a, {1234, static_cast<std::uint64_t>(t)});
    const double cosang =
        std::clamp(obs.observations()[0].body.dot(target), -1.0, 1.0);
    sum_angle += std::acos(cosang);
  }
  const double mean_angle = sum_angle / samples;
  // small-angle transverse deviation has mean sigma * sqrt(pi/2) ~ 1.25 sigma
  CHECK(mean_angle >= 1.15 * 0.01);
  CHECK(mean_angle <= 1.35 * 0.01);
}

TEST_CASE("attitude_error_deg endpoints") {
  const Eigen::Matrix3d& a = bench::true_attitude();
  CHECK(bench::attitude_error_deg(a, a) == 0.0);

  // the arcsin derivative blows up at the 180 degree endpoint, so an epsilon
  // of Frobenius roundoff turns into about 1e-6 degrees of angle
  const Eigen::Matrix3d half_turn =
      a * oracle::rodrigues(Eigen::Vector3d(0, 0, 1), std::numbers::pi);
  CHECK(std::abs(bench::attitude_error_deg(half_turn, a) - 180.0) <= 1e-5);

  const Eigen::Matrix3d small =
      a * oracle::rodrigues(Eigen::Vector3d(1, 0, 0), 1e-4);
  CHECK(bench::attitude_error_deg(small, a) ==
        doctest::Approx(1e-4 * 180.0 / std::numbers::pi).epsilon(1e-6));
}

TEST_CASE("run_case is deterministic and schedule-invariant") {
  const auto& c3 = bench::find_case(3);
  const auto first = bench::run_case(c3, Solver::Analytic, 1, 5);
  const auto second = bench::run_case(c3, Solver::Analytic, 1, 5);
  CHECK(stats_equal_modulo_time(first, second));
  CHECK(first.std_phi_deg == 0.0);

  const auto serial = bench::run_case(c3, Solver::Quest, 32, 5, 1);
  const auto parallel = bench::run_case(c3, Solver::Quest, 32, 5, 4);
  CHECK(stats_equal_modulo_time(serial, parallel));
  CHECK(serial.trials == 32);
  CHECK(serial.failures == 0);
}

TEST_CASE("run_case counts degenerate trials as failures") {
  // a single observation leaves the rotation about its axis free
  const bench::BenchmarkCase lone{99, {{1, 0, 0}}, {0.01}, 0, 0, 0};
  const auto analytic = bench::run_case(lone, Solver::Analytic, 8, 2);
  CHECK(analytic.failures == 8);
  CHECK(std::isnan(analytic.mean_phi_deg));
  CHECK(analytic.mean_time_ns == 0.0);

  const auto davenport = bench::run_case(lone, Solver::Davenport, 8, 2);
  CHECK(davenport.failures == 0);
  CHECK(davenport.mean_phi_deg >= 0.0);
}

TEST_CASE("run_all shape and row order") {
  const auto rep =
      bench::run_all(10, 1, {Solver::Analytic, Solver::Davenport});
  REQUIRE(rep.rows.size() == 24);
  for (int i = 0; i < 24; ++i) {
    CHECK(rep.rows[i].case_id == i / 2 + 1);
    CHECK(rep.rows[i].solver ==
          (i % 2 == 0 ? Solver::Analytic : Solver::Davenport));
    CHECK(rep.rows[i].mean_lambda <= 1.0 + 1e-12);
    CHECK(rep.rows[i].failures == 0);
  }
  REQUIRE(rep.timing.size() == 2);
  CHECK(rep.timing[0].solver == Solver::Analytic);
  CHECK(rep.timing[1].solver == Solver::Davenport);

  const auto subset = bench::run_all(2, 1, bench::all_solvers(), {3, 7});
  REQUIRE(subset.rows.size() == 6);
  CHECK(subset.rows[0].case_id == 3);
  CHECK(subset.rows[3].case_id == 7);

  CHECK_THROWS_AS(bench::run_all(2, 1, bench::all_solvers(), {99}),
                  wahba::Error);
}

TEST_CASE("solvers see the same optimum on benchmark draws") {
  // same seeds, different solvers: per-trial errors nearly coincide
  const auto& c5 = bench::find_case(5);
  const Eigen::Matrix3d& truth = bench::true_attitude();
  for (int t = 0; t < 50; ++t) {
    const auto obs =
        bench::sample_measurement(c5, truth, {9, static_cast<std::uint64_t>(t)});
    const auto a = bench::solve_with(Solver::Analytic, obs);
    const auto q = bench::solve_with(Solver::Quest, obs);
    const auto d = bench::solve_with(Solver::Davenport, obs);
    const double gap =
        std::min({a.eigenvalue_gap, q.eigenvalue_gap, d.eigenvalue_gap});
    if (gap <= 1e-6) continue;
    const double phi_a = bench::attitude_error_deg(a.attitude, truth);
    const double phi_q = bench::attitude_error_deg(q.attitude, truth);
    const double phi_d = bench::attitude_error_deg(d.attitude, truth);
    CHECK(std::abs(phi_a - phi_q) <= 1e-6);
    CHECK(std::abs(phi_a - phi_d) <= 1e-6);
  }
}

TEST_CASE("analytic and davenport means agree case by case") {
  for (const auto& c : bench::case_table()) {
    const auto a = bench::run_case(c, Solver::Analytic, 50, 11);
    const auto d = bench::run_case(c, Solver::Davenport, 50, 11);
    REQUIRE(a.failures == 0);
    REQUIRE(d.failures == 0);
    CHECK(std::abs(a.mean_phi_deg - d.mean_phi_deg) <=
          5e-4 * std::abs(d.mean_phi_deg));
  }
}

TEST_CASE("noise scale drives the error scale") {
  // cases 1 and 3 share geometry; sigma differs by 1e4
  const auto low = bench::run_case(bench::find_case(1), Solver::Analytic, 200, 1);
  const auto high = bench::run_case(bench::find_case(3), Solver::Analytic, 200, 1);
  const double ratio = high.mean_phi_deg / low.mean_phi_deg;
  CHECK(ratio >= 0.8e4);
  CHECK(ratio <= 1.2e4);
}
