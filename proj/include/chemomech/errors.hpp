#pragma once

#include <stdexcept>
#include <string>

namespace chemomech {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A deformation gradient (or one of its diagonal stretches) is not orientation preserving.
class OrientationViolation : public Error {
 public:
  using Error::Error;
};

class ConcentrationOutOfRange : public Error {
 public:
  using Error::Error;
};

class PlasticSingularity : public Error {
 public:
  using Error::Error;
};

/// Symmetric eigen-solver did not converge, or a log/sqrt was requested of a non-SPD tensor.
class SpectralFailure : public Error {
 public:
  using Error::Error;
};

/// d(mu)/dc is not positive, so the mobility D / (d mu / dc) is undefined.
class NonconvexChemistry : public Error {
 public:
  using Error::Error;
};

class ViscoplasticSolveFailure : public Error {
 public:
  using Error::Error;
};

class JacobianNonFinite : public Error {
 public:
  using Error::Error;
};

class SampleOutOfDomain : public Error {
 public:
  using Error::Error;
};

/// A quadrature-point evaluation failed during assembly; carries the location.
class AssemblyFailure : public Error {
 public:
  AssemblyFailure(int element, int point, const std::string& what)
      : Error("element " + std::to_string(element) + ", quadrature point " +
              std::to_string(point) + ": " + what),
        element_(element),
        point_(point) {}
  int element() const noexcept { return element_; }
  int point() const noexcept { return point_; }

 private:
  int element_;
  int point_;
};

/// Configuration schema violation; `path()` names the offending field.
class ConfigError : public Error {
 public:
  ConfigError(std::string path, const std::string& what)
      : Error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace chemomech
