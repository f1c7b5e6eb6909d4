#pragma once

#include <stdexcept>
#include <string>

namespace wahba {

// base class for every failure raised by this library
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class EmptyObservationSet : public Error {
 public:
  EmptyObservationSet() : Error("observation set is empty") {}
};

class NonOrthogonalAttitude : public Error {
 public:
  explicit NonOrthogonalAttitude(double deviation)
      : Error("attitude matrix is not orthogonal (||A^T A - I|| = " +
              std::to_string(deviation) + ")"),
        deviation(deviation) {}
  double deviation;
};

// a radicand in the quartic factor split is negative beyond the clamp band,
// meaning the supplied y is not a usable resolvent root for this quartic
class NegativeRadicand : public Error {
 public:
  NegativeRadicand(const char* which, double value)
      : Error(std::string("negative radicand in ") + which + " (" +
              std::to_string(value) + ")"),
        value(value) {}
  double value;
};

// the best factor-pair assignment still misses the cross-term identity
class ConstraintViolation : public Error {
 public:
  explicit ConstraintViolation(double miss)
      : Error("factor pair misses g1*h2 + g2*h1 = c by " + std::to_string(miss)),
        miss(miss) {}
  double miss;
};

class NoRealRoot : public Error {
 public:
  NoRealRoot() : Error("quartic has no real roots") {}
};

// every adjugate column vanished: lambda_max is (numerically) repeated and the
// optimal attitude is not unique
class DegenerateEigenvector : public Error {
 public:
  DegenerateEigenvector(double lambda_max, double gap)
      : Error("degenerate eigenvector extraction at lambda = " +
              std::to_string(lambda_max)),
        lambda_max(lambda_max),
        gap(gap) {}
  double lambda_max;
  double gap;  // NaN when the thrower has not resolved the spectrum
};

class ZeroDerivative : public Error {
 public:
  explicit ZeroDerivative(double x)
      : Error("polynomial derivative vanished at x = " + std::to_string(x)),
        x(x) {}
  double x;
};

class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, double best, int iterations)
      : Error(what), best(best), iterations(iterations) {}
  double best;     // best iterate (or estimate) seen before giving up
  int iterations;
};

}  // namespace wahba
