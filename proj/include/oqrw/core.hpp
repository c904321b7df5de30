#pragma once

#include <Eigen/Dense>

#include <complex>
#include <compare>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace oqrw {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Position label of the lattice; an index into the walk's site list.
struct SiteIndex {
  std::size_t id = 0;

  friend auto operator<=>(const SiteIndex&, const SiteIndex&) = default;
};

/// One operator per lattice site; absent sites are stored as zero blocks.
using Blocks = std::vector<ComplexMatrix>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Malformed transition data (bad site index, duplicated pair, non-finite entry).
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Kraus (sum-of-effects) condition violated.
class NormalizationError : public Error {
 public:
  NormalizationError(const std::string& what, double residual, SiteIndex site)
      : Error(what), residual_(residual), site_(site) {}

  double residual() const noexcept { return residual_; }
  SiteIndex site() const noexcept { return site_; }

 private:
  double residual_;
  SiteIndex site_;
};

class InvalidStateError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace oqrw
