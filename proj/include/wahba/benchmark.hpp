#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wahba/observation.hpp"
#include "wahba/solvers.hpp"

namespace wahba::bench {

enum class Solver { Analytic, Quest, Davenport };

const char* solver_name(Solver s);
std::optional<Solver> solver_from_name(const std::string& name);
const std::vector<Solver>& all_solvers();

// one simulation scenario: reference directions exactly as tabulated
// (normalized at sampling time), per-observation noise sigmas in radians, and
// the bundled reference mean errors in degrees used for regression bands
struct BenchmarkCase {
  int id;
  std::vector<Eigen::Vector3d> references;
  std::vector<double> sigmas;
  double expected_phi_analytic;
  double expected_phi_quest;
  double expected_phi_davenport;
};

const std::vector<BenchmarkCase>& case_table();
const BenchmarkCase& find_case(int id);  // throws wahba::Error on unknown ids
double expected_phi(const BenchmarkCase& c, Solver s);

// the target attitude with entries exactly as tabulated; rounded to three
// decimals, so not quite orthogonal
Eigen::Matrix3d true_attitude_raw();
// nearest orthogonal matrix (polar factor of the SVD)
Eigen::Matrix3d polar_orthonormalize(const Eigen::Matrix3d& m);
// orthonormalized target attitude used by the simulation
const Eigen::Matrix3d& true_attitude();

// (base, index) fully determines one trial's noise stream, so trials can run
// in any order or in parallel without changing their draws
struct TrialSeed {
  std::uint64_t base;
  std::uint64_t index;
};

// one synthetic measurement set: body vectors are the rotated references plus
// per-component Gaussian noise scaled by sigma, re-normalized; weights are
// uniform
ObservationSet<double> sample_measurement(const BenchmarkCase& c,
                                          const Eigen::Matrix3d& attitude,
                                          TrialSeed seed);

// rotation angle 2 asin(||Ae - A||_F / sqrt(8)) in degrees
double attitude_error_deg(const Eigen::Matrix3d& estimate,
                          const Eigen::Matrix3d& truth);

SolverReport<double> solve_with(Solver s, const ObservationSet<double>& obs);

struct CaseStats {
  int case_id;
  Solver solver;
  int trials;
  double mean_phi_deg;  // over successful trials
  double std_phi_deg;   // sample standard deviation, n - 1 divisor
  double mean_lambda;
  int failures;         // trials whose solve threw
  double mean_time_ns;  // mean solver timed region per successful trial
};

// runs `trials` independent trials and aggregates; failed trials are counted
// and left out of the means; every field except mean_time_ns is bit-identical
// for a fixed (case, solver, trials, base_seed) regardless of thread count
CaseStats run_case(const BenchmarkCase& c, Solver s, int trials,
                   std::uint64_t base_seed, int threads = 1);

struct SolverTiming {
  Solver solver;
  double mean_time_ns;  // per successful trial, across all cases run
};

struct BenchmarkReport {
  int trials;
  std::uint64_t base_seed;
  std::vector<CaseStats> rows;
  std::vector<SolverTiming> timing;
};

// all requested cases (all twelve when case_ids is empty) for each requested
// solver, case-major row order
BenchmarkReport run_all(int trials, std::uint64_t base_seed,
                        const std::vector<Solver>& solvers,
                        const std::vector<int>& case_ids = {},
                        int threads = 1);

}  // namespace wahba::bench
