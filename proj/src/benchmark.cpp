#include "wahba/benchmark.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <thread>

namespace wahba::bench {

const char* solver_name(Solver s) {
  switch (s) {
    case Solver::Analytic: return "analytic";
    case Solver::Quest: return "quest";
    case Solver::Davenport: return "davenport";
  }
  return "unknown";
}

std::optional<Solver> solver_from_name(const std::string& name) {
  if (name == "analytic") return Solver::Analytic;
  if (name == "quest") return Solver::Quest;
  if (name == "davenport") return Solver::Davenport;
  return std::nullopt;
}

const std::vector<Solver>& all_solvers() {
  static const std::vector<Solver> v{Solver::Analytic, Solver::Quest,
                                     Solver::Davenport};
  return v;
}

namespace {

BenchmarkCase make_case(int id, std::vector<Eigen::Vector3d> refs,
                        std::vector<double> sigmas, double phi_analytic,
                        double phi_quest, double phi_davenport) {
  return {id,          std::move(refs), std::move(sigmas),
          phi_analytic, phi_quest,      phi_davenport};
}

std::vector<BenchmarkCase> build_case_table() {
  const Eigen::Vector3d e1(1, 0, 0), e2(0, 1, 0), e3(0, 0, 1);
  std::vector<BenchmarkCase> t;
  t.push_back(make_case(1, {e1, e2, e3}, {1e-6, 1e-6, 1e-6},
                        6.495694956077782e-05, 6.495694956097059e-05,
                        6.49569495609e-05));
  t.push_back(make_case(2, {e1, e2}, {1e-6, 1e-6}, 8.324164015961696e-05,
                        8.324223749065883e-05, 8.32422374907e-05));
  t.push_back(make_case(3, {e1, e2, e3}, {0.01, 0.01, 0.01},
                        0.649531332307863, 0.649531332307864,
                        0.649531332307864));
  t.push_back(make_case(4, {e1, e2}, {0.01, 0.01}, 0.832408546987256,
                        0.832408547860284, 0.832408547860284));
  t.push_back(make_case(5, {{0.6, 0.8, 0.0}, {0.8, -0.6, 0.0}}, {1e-6, 0.01},
                        0.557528700788137, 0.557528701877667,
                        0.557528701877667));
  t.push_back(make_case(6, {{1, 0, 0}, {0, 0.01, 0}, {0, 0, 0.01}},
                        {1e-6, 1e-6, 1e-6}, 6.495694956077782e-05,
                        6.495694956097059e-05, 6.49569495609e-05));
  t.push_back(make_case(7, {{1, 0, 0}, {1, 0.01, 0}}, {1e-6, 1e-6},
                        8.324164015961696e-05, 8.324223749065883e-05,
                        8.32422374907e-05));
  t.push_back(make_case(8, {{1, 0, 0}, {1, 0.01, 0}, {1, 0, 0.01}},
                        {0.01, 0.01, 0.01}, 0.649531332307863,
                        0.649531332307864, 0.649531332307864));
  t.push_back(make_case(9, {{1, 0, 0}, {1, 0.01, 0}}, {0.01, 0.01},
                        0.832408546987256, 0.832408547860284,
                        0.832408547860284));
  t.push_back(make_case(10, {{1, 0, 0}, {0.96, 0.28, 0}, {0.96, 0, 0.28}},
                        {1e-6, 0.01, 0.01}, 1.371174492955960,
                        1.371174492966333, 1.371174492966333));
  t.push_back(make_case(11, {{1, 0, 0}, {0.96, 0.28, 0}}, {1e-6, 0.01},
                        1.685838524732360, 1.685841533993944,
                        1.685841533993952));
  t.push_back(make_case(12, {{1, 0, 0}, {0.96, 0.28, 0}}, {0.01, 1e-6},
                        1.670635461315306, 1.670644941845449,
                        1.670644941845431));
  return t;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// standard-normal draws from one trial's private generator; Box-Muller over
// open-interval uniforms, keeping the second variate of each pair
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : gen_(seed) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(angle);
    have_spare_ = true;
    return r * std::cos(angle);
  }

 private:
  // top 53 bits, centered so the result stays inside (0, 1)
  double uniform() { return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1p-53; }

  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace

const std::vector<BenchmarkCase>& case_table() {
  static const std::vector<BenchmarkCase> table = build_case_table();
  return table;
}

const BenchmarkCase& find_case(int id) {
  for (const auto& c : case_table())
    if (c.id == id) return c;
  throw Error("unknown benchmark case id " + std::to_string(id));
}

double expected_phi(const BenchmarkCase& c, Solver s) {
  switch (s) {
    case Solver::Analytic: return c.expected_phi_analytic;
    case Solver::Quest: return c.expected_phi_quest;
    case Solver::Davenport: return c.expected_phi_davenport;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

Eigen::Matrix3d true_attitude_raw() {
  Eigen::Matrix3d a;
  a << 0.352, 0.864, 0.360,
      -0.864, 0.152, 0.480,
       0.360, -0.480, 0.800;
  return a;
}

Eigen::Matrix3d polar_orthonormalize(const Eigen::Matrix3d& m) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(
      m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

const Eigen::Matrix3d& true_attitude() {
  static const Eigen::Matrix3d a = polar_orthonormalize(true_attitude_raw());
  return a;
}

ObservationSet<double> sample_measurement(const BenchmarkCase& c,
                                          const Eigen::Matrix3d& attitude,
                                          TrialSeed seed) {
  GaussianStream noise(splitmix64(seed.base ^ splitmix64(seed.index)));
  std::vector<Eigen::Vector3d> refs, bodies;
  refs.reserve(c.references.size());
  bodies.reserve(c.references.size());
  for (std::size_t i = 0; i < c.references.size(); ++i) {
    const Eigen::Vector3d r = c.references[i].normalized();
    Eigen::Vector3d n;
    n << noise.next(), noise.next(), noise.next();
    bodies.push_back((attitude * r + c.sigmas[i] * n).normalized());
    refs.push_back(r);
  }
  return ObservationSet<double>::equal_weights(refs, bodies);
}

double attitude_error_deg(const Eigen::Matrix3d& estimate,
                          const Eigen::Matrix3d& truth) {
  const double s = std::min(1.0, (estimate - truth).norm() / std::sqrt(8.0));
  return 2.0 * std::asin(s) * 180.0 / std::numbers::pi;
}

SolverReport<double> solve_with(Solver s, const ObservationSet<double>& obs) {
  switch (s) {
    case Solver::Analytic: return solve_analytic(obs);
    case Solver::Quest: return solve_quest_newton(obs);
    case Solver::Davenport: return solve_davenport(obs);
  }
  throw Error("unknown solver");
}

CaseStats run_case(const BenchmarkCase& c, Solver s, int trials,
                   std::uint64_t base_seed, int threads) {
  if (trials < 1) throw Error("trial count must be at least 1");
  if (threads < 1) threads = 1;

  // per-trial result slots keep aggregation independent of thread layout
  std::vector<double> phi(trials), lambda(trials), time_ns(trials);
  std::vector<unsigned char> failed(trials, 0);
  const Eigen::Matrix3d& truth = true_attitude();

  auto worker = [&](int lo, int hi) {
    for (int t = lo; t < hi; ++t) {
      const auto obs =
          sample_measurement(c, truth, {base_seed, static_cast<std::uint64_t>(t)});
      try {
        const auto rep = solve_with(s, obs);
        phi[t] = attitude_error_deg(rep.attitude, truth);
        lambda[t] = rep.lambda_max;
        time_ns[t] = rep.wall_time_ns;
      } catch (const Error&) {
        failed[t] = 1;
      }
    }
  };

  if (threads == 1) {
    worker(0, trials);
  } else {
    std::vector<std::thread> pool;
    const int chunk = (trials + threads - 1) / threads;
    for (int w = 0; w < threads; ++w) {
      const int lo = w * chunk;
      const int hi = std::min(trials, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back(worker, lo, hi);
    }
    for (auto& th : pool) th.join();
  }

  // reduce in trial-index order so parallel and serial runs agree bit-exactly
  CaseStats out;
  out.case_id = c.id;
  out.solver = s;
  out.trials = trials;
  out.failures = 0;
  int n = 0;
  double sum_phi = 0, sum_lambda = 0, sum_time = 0;
  for (int t = 0; t < trials; ++t) {
    if (failed[t]) {
      ++out.failures;
      continue;
    }
    sum_phi += phi[t];
    sum_lambda += lambda[t];
    sum_time += time_ns[t];
    ++n;
  }
  if (n > 0) {
    out.mean_phi_deg = sum_phi / n;
    out.mean_lambda = sum_lambda / n;
    out.mean_time_ns = sum_time / n;
    double ss = 0;
    for (int t = 0; t < trials; ++t) {
      if (failed[t]) continue;
      const double d = phi[t] - out.mean_phi_deg;
      ss += d * d;
    }
    out.std_phi_deg = n > 1 ? std::sqrt(ss / (n - 1)) : 0.0;
  } else {
    out.mean_phi_deg = std::numeric_limits<double>::quiet_NaN();
    out.std_phi_deg = std::numeric_limits<double>::quiet_NaN();
    out.mean_lambda = std::numeric_limits<double>::quiet_NaN();
    out.mean_time_ns = 0.0;
  }
  return out;
}

BenchmarkReport run_all(int trials, std::uint64_t base_seed,
                        const std::vector<Solver>& solvers,
                        const std::vector<int>& case_ids, int threads) {
  std::vector<const BenchmarkCase*> cases;
  if (case_ids.empty()) {
    for (const auto& c : case_table()) cases.push_back(&c);
  } else {
    for (int id : case_ids) cases.push_back(&find_case(id));
  }

  BenchmarkReport rep;
  rep.trials = trials;
  rep.base_seed = base_seed;
  for (const auto* c : cases)
    for (Solver s : solvers)
      rep.rows.push_back(run_case(*c, s, trials, base_seed, threads));

  for (Solver s : solvers) {
    double total = 0;
    long successes = 0;
    for (const auto& row : rep.rows) {
      if (row.solver != s) continue;
      const long n = row.trials - row.failures;
      total += row.mean_time_ns * static_cast<double>(n);
      successes += n;
    }
    rep.timing.push_back(
        {s, successes > 0 ? total / static_cast<double>(successes) : 0.0});
  }
  return rep;
}

}  // namespace wahba::bench
