#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace holophase {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Proximity tolerance for "this point sits on an atom/zero/pole of the
// evaluation set"; far below every test tolerance in the suite.
inline constexpr double kProximityTol = 1e-12;

// Errors that mean the input data or evaluation point is bad. CLI exit 1.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Evaluation outside the operation's domain (pole hit, |z| >= r, ...).
class DomainError : public DataError {
 public:
  explicit DomainError(const std::string& what) : DataError(what) {}
};

// Evaluation at a singular boundary point (atom angle, boundary zero).
class SingularityError : public DataError {
 public:
  explicit SingularityError(const std::string& what) : DataError(what) {}
};

// Errors that mean the problem is ill-conditioned or the model does not
// fit the data. CLI exit 2.
class ConditioningError : public std::runtime_error {
 public:
  explicit ConditioningError(const std::string& what)
      : std::runtime_error(what) {}
};

class IllConditionedError : public ConditioningError {
 public:
  explicit IllConditionedError(const std::string& what)
      : ConditioningError(what) {}
};

class ModelMismatchError : public ConditioningError {
 public:
  explicit ModelMismatchError(const std::string& what)
      : ConditioningError(what) {}
};

inline bool is_finite(Complex z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// Wrap an angle into [0, 2*pi).
inline double wrap_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0) t += kTwoPi;
  return t;
}

// Distance between two angles on the circle.
inline double angle_distance(double a, double b) {
  double d = std::fabs(wrap_angle(a) - wrap_angle(b));
  return std::min(d, kTwoPi - d);
}

}  // namespace holophase
