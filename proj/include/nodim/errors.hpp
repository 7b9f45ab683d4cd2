#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace nodim {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or invalid caller input. `kind` is a stable machine-readable tag
/// ("non_finite", "ragged_dimensions", "unequal_color_classes", ...).
class InputError : public Error {
 public:
  InputError(std::string kind, const std::string& what)
      : Error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

/// An exhaustive computation was requested beyond its size cap.
class CapacityError : public Error {
 public:
  CapacityError(const std::string& what, double requested)
      : Error(what), requested_(requested) {}
  /// Size the computation would have had (count of patterns/subsets).
  double requested() const noexcept { return requested_; }

 private:
  double requested_;
};

/// A hypothesis of an operation does not hold for the given data.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A randomized search exhausted its budget without meeting the bound.
class BoundMissError : public Error {
 public:
  BoundMissError(const std::string& what, double best, double bound)
      : Error(what), best_(best), bound_(bound) {}
  double best() const noexcept { return best_; }
  double bound() const noexcept { return bound_; }

 private:
  double best_;
  double bound_;
};

/// A certified quantity contradicts a guarantee that must hold.
class TheoremViolationError : public Error {
 public:
  using Error::Error;
};

/// A certified hull distance exceeded the bound it was checked against.
class CertificationError : public Error {
 public:
  CertificationError(const std::string& what, std::size_t part, double lower,
                     double upper, double bound)
      : Error(what), part_(part), lower_(lower), upper_(upper), bound_(bound) {}
  std::size_t part() const noexcept { return part_; }
  double lower() const noexcept { return lower_; }
  double upper() const noexcept { return upper_; }
  double bound() const noexcept { return bound_; }

 private:
  std::size_t part_;
  double lower_;
  double upper_;
  double bound_;
};

}  // namespace nodim
