#include "wahba/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace wahba::io {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',' || std::isspace(static_cast<unsigned char>(ch))) {
      if (!cur.empty()) {
        out.push_back(cur);
        cur.clear();
      }
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

double parse_double(const std::string& tok, int line) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos != tok.size())
      throw ParseError("invalid number '" + tok + "'", line);
    return v;
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception&) {
    throw ParseError("invalid number '" + tok + "'", line);
  }
}

long parse_int(const std::string& tok, int line) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(tok, &pos);
    if (pos != tok.size())
      throw ParseError("invalid integer '" + tok + "'", line);
    return v;
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception&) {
    throw ParseError("invalid integer '" + tok + "'", line);
  }
}

Eigen::Vector3d record_vec3(const nlohmann::json& rec, const char* key,
                            int line) {
  if (!rec.contains(key) || !rec[key].is_array() || rec[key].size() != 3)
    throw ParseError(std::string("record needs a 3-element \"") + key +
                         "\" array",
                     line);
  Eigen::Vector3d v;
  for (int i = 0; i < 3; ++i) {
    if (!rec[key][i].is_number())
      throw ParseError(std::string("non-numeric entry in \"") + key + "\"",
                       line);
    v[i] = rec[key][i].get<double>();
  }
  return v;
}

ObservationSet<double> parse_json_observations(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    const int line =
        1 + static_cast<int>(std::count(text.begin(), text.begin() + upto, '\n'));
    throw ParseError(std::string("invalid JSON: ") + e.what(), line);
  }
  if (doc.is_object()) doc = nlohmann::json::array({doc});
  if (!doc.is_array() || doc.empty())
    throw ParseError("expected a non-empty array of observation records", 1);

  bool any_weight = false, all_weight = true, all_sigma = true;
  for (const auto& rec : doc) {
    if (!rec.is_object())
      throw ParseError("expected an observation record object", 1);
    if (rec.contains("weight")) any_weight = true;
    else all_weight = false;
    if (!rec.contains("sigma")) all_sigma = false;
  }
  if (any_weight && !all_weight)
    throw ParseError("\"weight\" must be given on every record or none", 1);
  if (!any_weight && !all_sigma)
    throw ParseError("records without weights all need a \"sigma\"", 1);

  std::vector<Eigen::Vector3d> refs, bodies;
  std::vector<double> sigmas;
  ObservationSet<double> weighted;
  int line = 0;
  for (const auto& rec : doc) {
    ++line;
    const Eigen::Vector3d r = record_vec3(rec, "reference", line);
    const Eigen::Vector3d b = record_vec3(rec, "body", line);
    if (rec.contains("sigma")) {
      if (!rec["sigma"].is_number() || !(rec["sigma"].get<double>() > 0))
        throw ParseError("\"sigma\" must be a positive number", line);
    }
    if (any_weight) {
      if (!rec["weight"].is_number())
        throw ParseError("\"weight\" must be a number", line);
      try {
        weighted.add(r, b, rec["weight"].get<double>());
      } catch (const Error& e) {
        throw ParseError(e.what(), line);
      }
    } else {
      if (r.norm() == 0 || b.norm() == 0)
        throw ParseError("zero-length vector", line);
      refs.push_back(r);
      bodies.push_back(b);
      sigmas.push_back(rec["sigma"].get<double>());
    }
  }
  if (any_weight) return weighted;
  return ObservationSet<double>::from_sigmas(refs, bodies, sigmas);
}

}  // namespace

ObservationSet<double> parse_observations(std::istream& in) {
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos)
    throw ParseError("no observations in input", 1);
  if (text[first] == '[' || text[first] == '{')
    return parse_json_observations(text);

  std::vector<Eigen::Vector3d> refs, bodies;
  std::vector<double> sigmas, weights;
  std::size_t columns = 0;
  int line_no = 0;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    const auto toks = tokenize(line);
    if (toks.empty()) continue;
    if (toks.size() != 7 && toks.size() != 8)
      throw ParseError("expected 7 or 8 fields, got " +
                           std::to_string(toks.size()),
                       line_no);
    if (columns == 0) columns = toks.size();
    if (toks.size() != columns)
      throw ParseError("expected " + std::to_string(columns) +
                           " fields like the first data line, got " +
                           std::to_string(toks.size()),
                       line_no);
    double f[8] = {};
    for (std::size_t i = 0; i < toks.size(); ++i)
      f[i] = parse_double(toks[i], line_no);
    const Eigen::Vector3d r(f[0], f[1], f[2]);
    const Eigen::Vector3d b(f[3], f[4], f[5]);
    if (r.norm() == 0 || b.norm() == 0)
      throw ParseError("zero-length vector", line_no);
    if (!(f[6] > 0)) throw ParseError("sigma must be positive", line_no);
    if (columns == 8 && !(f[7] > 0))
      throw ParseError("weight must be positive", line_no);
    refs.push_back(r);
    bodies.push_back(b);
    sigmas.push_back(f[6]);
    if (columns == 8) weights.push_back(f[7]);
  }
  if (refs.empty()) throw ParseError("no observations in input", line_no);
  if (columns == 8) {
    ObservationSet<double> out;
    for (std::size_t i = 0; i < refs.size(); ++i)
      out.add(refs[i], bodies[i], weights[i]);
    return out;
  }
  return ObservationSet<double>::from_sigmas(refs, bodies, sigmas);
}

ObservationSet<double> load_observations(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open observation file " + path);
  return parse_observations(in);
}

std::string format_float(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_csv(std::ostream& out, const bench::BenchmarkReport& rep,
               bool with_timing) {
  out << "case,solver,trials,mean_phi_deg,std_phi_deg,mean_lambda,failures,"
         "mean_time_ns\n";
  for (const auto& r : rep.rows) {
    out << r.case_id << ',' << bench::solver_name(r.solver) << ',' << r.trials
        << ',' << format_float(r.mean_phi_deg) << ','
        << format_float(r.std_phi_deg) << ',' << format_float(r.mean_lambda)
        << ',' << r.failures << ','
        << format_float(with_timing ? r.mean_time_ns : 0.0) << '\n';
  }
}

std::vector<bench::CaseStats> parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty CSV input", 1);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line !=
      "case,solver,trials,mean_phi_deg,std_phi_deg,mean_lambda,failures,"
      "mean_time_ns")
    throw ParseError("unexpected CSV header", 1);

  std::vector<bench::CaseStats> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto toks = tokenize(line);
    if (toks.size() != 8)
      throw ParseError("expected 8 fields, got " + std::to_string(toks.size()),
                       line_no);
    bench::CaseStats r;
    r.case_id = static_cast<int>(parse_int(toks[0], line_no));
    const auto s = bench::solver_from_name(toks[1]);
    if (!s) throw ParseError("unknown solver '" + toks[1] + "'", line_no);
    r.solver = *s;
    r.trials = static_cast<int>(parse_int(toks[2], line_no));
    r.mean_phi_deg = parse_double(toks[3], line_no);
    r.std_phi_deg = parse_double(toks[4], line_no);
    r.mean_lambda = parse_double(toks[5], line_no);
    r.failures = static_cast<int>(parse_int(toks[6], line_no));
    r.mean_time_ns = parse_double(toks[7], line_no);
    rows.push_back(r);
  }
  return rows;
}

namespace {

double deviation_percent(const bench::CaseStats& r, double expected) {
  return (r.mean_phi_deg - expected) / expected * 100.0;
}

}  // namespace

void write_json(std::ostream& out, const bench::BenchmarkReport& rep,
                bool with_timing) {
  nlohmann::ordered_json doc;
  doc["trials"] = rep.trials;
  doc["base_seed"] = rep.base_seed;
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : rep.rows) {
    const double expected =
        bench::expected_phi(bench::find_case(r.case_id), r.solver);
    const double dev = deviation_percent(r, expected);
    nlohmann::ordered_json row;
    row["case"] = r.case_id;
    row["solver"] = bench::solver_name(r.solver);
    row["trials"] = r.trials;
    row["mean_phi_deg"] = r.mean_phi_deg;
    row["std_phi_deg"] = r.std_phi_deg;
    row["mean_lambda"] = r.mean_lambda;
    row["failures"] = r.failures;
    row["mean_time_ns"] = with_timing ? r.mean_time_ns : 0.0;
    row["expected_phi_deg"] = expected;
    row["deviation_percent"] = dev;
    row["exceeds_10_percent"] = std::abs(dev) > 10.0;
    doc["rows"].push_back(std::move(row));
  }
  doc["timing"] = nlohmann::ordered_json::array();
  for (const auto& t : rep.timing) {
    nlohmann::ordered_json item;
    item["solver"] = bench::solver_name(t.solver);
    item["mean_time_ns"] = with_timing ? t.mean_time_ns : 0.0;
    doc["timing"].push_back(std::move(item));
  }
  out << doc.dump(2) << '\n';
}

void write_table(std::ostream& out, const bench::BenchmarkReport& rep,
                 bool with_timing) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%4s  %-9s  %6s  %8s  %-18s  %-18s  %-18s  %-18s  %9s\n",
                "case", "solver", "trials", "failures", "mean_phi_deg",
                "std_phi_deg", "mean_lambda", "expected_phi_deg", "dev_pct");
  out << buf;
  for (const auto& r : rep.rows) {
    const double expected =
        bench::expected_phi(bench::find_case(r.case_id), r.solver);
    const double dev = deviation_percent(r, expected);
    std::snprintf(buf, sizeof(buf),
                  "%4d  %-9s  %6d  %8d  %-18.12g  %-18.12g  %-18.12g  %-18.12g  %+8.2f%%%s\n",
                  r.case_id, bench::solver_name(r.solver), r.trials,
                  r.failures, r.mean_phi_deg, r.std_phi_deg, r.mean_lambda,
                  expected, dev, std::abs(dev) > 10.0 ? "  >10%" : "");
    out << buf;
  }
  out << "mean solve time per trial (ns):\n";
  for (const auto& t : rep.timing) {
    std::snprintf(buf, sizeof(buf), "  %-9s  %.1f\n",
                  bench::solver_name(t.solver),
                  with_timing ? t.mean_time_ns : 0.0);
    out << buf;
  }
}

}  // namespace wahba::io
