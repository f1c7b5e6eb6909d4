#include <array>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "wahba/benchmark.hpp"
#include "wahba/io.hpp"
#include "wahba/solvers.hpp"

namespace {

std::vector<wahba::bench::Solver> parse_solver_list(const std::string& csv) {
  std::vector<wahba::bench::Solver> out;
  std::istringstream ss(csv);
  std::string name;
  while (std::getline(ss, name, ',')) {
    while (!name.empty() && name.front() == ' ') name.erase(name.begin());
    while (!name.empty() && name.back() == ' ') name.pop_back();
    if (name.empty()) continue;
    const auto s = wahba::bench::solver_from_name(name);
    if (!s) throw wahba::Error("unknown solver '" + name + "'");
    out.push_back(*s);
  }
  if (out.empty()) throw wahba::Error("no solvers requested");
  return out;
}

// routes report text to --output when given, stdout otherwise
struct OutputTarget {
  std::ofstream file;
  std::ostream* stream = &std::cout;

  explicit OutputTarget(const std::string& path) {
    if (!path.empty()) {
      file.open(path);
      if (!file) throw wahba::Error("cannot open output file " + path);
      stream = &file;
    }
  }
};

void print_report(std::ostream& out, const wahba::SolverReport<double>& rep,
                  bool timing) {
  using wahba::io::format_float;
  const auto q = rep.quaternion.as_vec4();
  out << "  lambda_max: " << format_float(rep.lambda_max) << "\n";
  out << "  quaternion_xyzw: " << format_float(q[0]) << " " << format_float(q[1])
      << " " << format_float(q[2]) << " " << format_float(q[3]) << "\n";
  out << "  attitude:\n";
  for (int i = 0; i < 3; ++i)
    out << "    " << format_float(rep.attitude(i, 0)) << " "
        << format_float(rep.attitude(i, 1)) << " "
        << format_float(rep.attitude(i, 2)) << "\n";
  out << "  loss: " << format_float(rep.loss) << "\n";
  out << "  iterations: " << rep.iterations << "\n";
  out << "  eigenvalue_gap: " << format_float(rep.eigenvalue_gap) << "\n";
  out << "  ambiguous: " << (rep.ambiguous ? "yes" : "no") << "\n";
  out << "  time_ns: " << format_float(timing ? rep.wall_time_ns : 0.0)
      << "\n";
}

int cmd_solve(const std::string& input, const std::string& solvers_csv,
              bool timing, const std::string& output) {
  const auto solvers = parse_solver_list(solvers_csv);
  const auto obs = input == "-" ? wahba::io::parse_observations(std::cin)
                                : wahba::io::load_observations(input);
  OutputTarget target(output);
  std::ostream& out = *target.stream;

  bool hard_failure = false;
  bool ambiguous = false;
  for (const auto s : solvers) {
    out << "solver: " << wahba::bench::solver_name(s) << "\n";
    try {
      const auto rep = wahba::bench::solve_with(s, obs);
      print_report(out, rep, timing);
      if (rep.ambiguous) ambiguous = true;
    } catch (const wahba::DegenerateEigenvector& e) {
      out << "  degenerate: lambda_max "
          << wahba::io::format_float(e.lambda_max)
          << " is numerically repeated (gap "
          << wahba::io::format_float(e.gap)
          << "); the optimal attitude is not unique\n";
      ambiguous = true;
    } catch (const wahba::Error& e) {
      out << "  error: " << e.what() << "\n";
      hard_failure = true;
    }
  }
  if (hard_failure) return 1;
  return ambiguous ? 2 : 0;
}

int cmd_roots(const std::array<double, 4>& co, bool newton,
              std::optional<double> x0, double tol,
              const std::string& output) {
  using wahba::io::format_float;
  OutputTarget target(output);
  std::ostream& out = *target.stream;
  const wahba::QuarticCoeffs<double> qc{co[0], co[1], co[2], co[3]};

  try {
    const auto roots = wahba::quartic_roots(qc);
    out << "real_roots:";
    for (int i = 0; i < roots.count; ++i)
      out << " " << format_float(roots.roots[i]);
    out << "\n";
    out << "complex_pairs: "
        << (int(roots.complex_pair[0]) + int(roots.complex_pair[1])) << "\n";
    out << "max_real_root: " << format_float(roots.roots[0]) << "\n";
  } catch (const wahba::NoRealRoot& e) {
    out << "error: " << e.what() << "\n";
    return 2;
  }

  if (newton) {
    wahba::NewtonConfig<double> cfg;
    cfg.x0 = x0;
    cfg.tol = tol;
    std::vector<double> trace;
    try {
      const auto nr = wahba::newton_max_root(qc, cfg, &trace);
      out << "newton_trace:";
      for (const double v : trace) out << " " << format_float(v);
      out << "\n";
      out << "newton_iterations: " << nr.iterations << "\n";
      out << "newton_root: " << format_float(nr.root) << "\n";
    } catch (const wahba::Error& e) {
      out << "newton_error: " << e.what() << "\n";
      return 1;
    }
  }
  return 0;
}

int cmd_bench(const std::string& case_filter, int trials, std::uint64_t seed,
              const std::string& solvers_csv, const std::string& format,
              const std::string& output, bool timing) {
  const auto solvers = parse_solver_list(solvers_csv);
  std::vector<int> case_ids;
  if (case_filter != "all") {
    std::size_t pos = 0;
    int id = 0;
    try {
      id = std::stoi(case_filter, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != case_filter.size())
      throw wahba::Error("--case wants an integer or 'all', got '" +
                         case_filter + "'");
    case_ids.push_back(id);
  }

  const auto rep = wahba::bench::run_all(trials, seed, solvers, case_ids);
  OutputTarget target(output);
  if (format == "csv")
    wahba::io::write_csv(*target.stream, rep, timing);
  else if (format == "json")
    wahba::io::write_json(*target.stream, rep, timing);
  else
    wahba::io::write_table(*target.stream, rep, timing);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wahba's problem: closed-form quartic, Newton, and full "
               "eigendecomposition solvers"};
  app.require_subcommand(1);

  auto* solve_cmd = app.add_subcommand(
      "solve", "solve one observation file with the requested solvers");
  std::string solve_input;
  std::string solve_solvers = "analytic,quest,davenport";
  std::string solve_output;
  bool solve_timing = false;
  solve_cmd
      ->add_option("input", solve_input,
                   "observation file, or - to read stdin")
      ->required();
  solve_cmd->add_option("--solvers", solve_solvers,
                        "comma-separated subset of analytic,quest,davenport");
  solve_cmd->add_flag("--timing", solve_timing,
                      "print measured solve times instead of zeros");
  solve_cmd->add_option("--output", solve_output,
                        "write the report here instead of stdout");

  auto* roots_cmd = app.add_subcommand(
      "roots", "real roots of x^4 + a x^3 + b x^2 + c x + d");
  std::array<double, 4> co{};
  bool newton = false;
  std::optional<double> x0;
  double tol = 1e-13;
  std::string roots_output;
  roots_cmd->add_option("a", co[0], "cubic coefficient")->required();
  roots_cmd->add_option("b", co[1], "quadratic coefficient")->required();
  roots_cmd->add_option("c", co[2], "linear coefficient")->required();
  roots_cmd->add_option("d", co[3], "constant coefficient")->required();
  auto* x0_opt =
      roots_cmd->add_option("--x0", x0, "Newton iteration start value");
  roots_cmd
      ->add_flag("--newton", newton,
                 "also run Newton iteration from --x0 and print the trace")
      ->needs(x0_opt);
  roots_cmd->add_option("--tol", tol, "Newton relative step tolerance");
  roots_cmd->add_option("--output", roots_output,
                        "write the report here instead of stdout");

  auto* bench_cmd = app.add_subcommand(
      "bench", "Monte Carlo benchmark across the bundled cases");
  std::string case_filter = "all";
  int trials = 4000;
  std::uint64_t seed = 1;
  std::string bench_solvers = "analytic,quest,davenport";
  std::string format = "table";
  std::string bench_output;
  bool bench_timing = false;
  bench_cmd->add_option("--case", case_filter, "case id, or 'all'");
  bench_cmd->add_option("--trials", trials, "trials per case and solver")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--seed", seed, "base seed for the per-trial streams");
  bench_cmd->add_option("--solvers", bench_solvers,
                        "comma-separated subset of analytic,quest,davenport");
  bench_cmd->add_option("--format", format, "csv, json, or table")
      ->check(CLI::IsMember({"csv", "json", "table"}));
  bench_cmd->add_option("--output", bench_output,
                        "write the report here instead of stdout");
  bench_cmd->add_flag("--timing", bench_timing,
                      "print measured solve times instead of zeros");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (app.got_subcommand(solve_cmd))
      return cmd_solve(solve_input, solve_solvers, solve_timing, solve_output);
    if (app.got_subcommand(roots_cmd))
      return cmd_roots(co, newton, x0, tol, roots_output);
    return cmd_bench(case_filter, trials, seed, bench_solvers, format,
                     bench_output, bench_timing);
  } catch (const wahba::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
