#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "wahba/benchmark.hpp"
#include "wahba/errors.hpp"
#include "wahba/observation.hpp"

namespace wahba::io {

// input failure carrying the 1-based line it occurred on (for JSON input the
// number is the 1-based record position instead)
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error("line " + std::to_string(line) + ": " + what), line(line) {}
  int line;
};

// observation input, format auto-detected from the first character:
//  - text: one observation per line, "r1 r2 r3 b1 b2 b3 sigma" or
//    "r1 r2 r3 b1 b2 b3 sigma weight", comma- or whitespace-separated,
//    '#' starts a comment, every data line must use the same column count.
//    Without the weight column, weights are 1/sigma^2 normalized to sum 1;
//    with it, the eighth column is taken as-is.
//  - JSON: an array of {"reference": [..], "body": [..], "sigma": s,
//    "weight": w} records (a single record object also works); "weight" is
//    all-or-nothing across records and "sigma" may be left out wherever a
//    weight is given.
ObservationSet<double> parse_observations(std::istream& in);
ObservationSet<double> load_observations(const std::string& path);

// 17 significant digits, enough for an exact double round-trip
std::string format_float(double v);

// benchmark report output; when with_timing is false every timing value is
// written as zero so identical runs stay byte-identical
void write_csv(std::ostream& out, const bench::BenchmarkReport& rep,
               bool with_timing);
std::vector<bench::CaseStats> parse_csv(std::istream& in);
void write_json(std::ostream& out, const bench::BenchmarkReport& rep,
                bool with_timing);
void write_table(std::ostream& out, const bench::BenchmarkReport& rep,
                 bool with_timing);

}  // namespace wahba::io
