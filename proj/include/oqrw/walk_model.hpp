#pragma once

#include "oqrw/core.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace oqrw {

enum class ValidationMode { strict, relaxed };

inline constexpr double kDefaultKrausTol = 1e-9;

/// B^to_from: the effect on 𝓗 of a jump from site `from` to site `to`.
struct TransitionEntry {
  SiteIndex from;
  SiteIndex to;
  ComplexMatrix op;
};

/// One endpoint of a transition together with its operator. In an outgoing
/// list `site` is the target; in an incoming list it is the source.
struct Arc {
  SiteIndex site;
  ComplexMatrix op;
};

struct ValidationReport {
  /// ‖Σ_i B^{i*}_j B^i_j − I‖_F for every source site j.
  std::vector<double> residuals;
  double max_residual = 0.0;
  SiteIndex worst_site;
  double tol = kDefaultKrausTol;
  bool pass = false;
};

/// Operator family {B^i_j} of an open quantum random walk on a finite site set.
/// Immutable after construction.
class TransitionFamily {
 public:
  /// Throws StructuralError / DimensionError on malformed input, and in strict mode
  /// NormalizationError when the Kraus residual of some source exceeds `kraus_tol`.
  TransitionFamily(std::size_t h_dim, std::vector<std::string> sites, std::vector<TransitionEntry> transitions,
                   ValidationMode mode = ValidationMode::strict, double kraus_tol = kDefaultKrausTol);

  std::size_t h_dim() const noexcept { return h_dim_; }
  std::size_t num_sites() const noexcept { return labels_.size(); }
  std::size_t num_transitions() const noexcept { return num_transitions_; }
  ValidationMode mode() const noexcept { return mode_; }
  double kraus_tol() const noexcept { return kraus_tol_; }

  const std::vector<std::string>& site_labels() const noexcept { return labels_; }
  const std::string& label(SiteIndex site) const { return labels_.at(site.id); }
  std::optional<SiteIndex> find_site(const std::string& label) const;

  /// Transitions leaving `source`, ordered by target.
  std::span<const Arc> outgoing(SiteIndex source) const { return outgoing_.at(source.id); }
  /// Transitions entering `target`, ordered by source.
  std::span<const Arc> incoming(SiteIndex target) const { return incoming_.at(target.id); }

  /// All transitions, ordered by (from, to).
  std::vector<TransitionEntry> entries() const;

  /// Kraus residuals recorded at construction (relaxed families keep theirs here).
  const ValidationReport& kraus_report() const noexcept { return report_; }

 private:
  std::size_t h_dim_;
  std::vector<std::string> labels_;
  std::vector<std::vector<Arc>> outgoing_;
  std::vector<std::vector<Arc>> incoming_;
  std::size_t num_transitions_ = 0;
  ValidationMode mode_;
  double kraus_tol_;
  ValidationReport report_;
};

ValidationReport validate_kraus(const TransitionFamily& family, double tol = kDefaultKrausTol);

/// Nearest-neighbour walk on the ring ℤ_n: B^{i−1}_i = B, B^{i+1}_i = C.
TransitionFamily build_ring_walk(std::size_t n_sites, const ComplexMatrix& B, const ComplexMatrix& C,
                                 double kraus_tol = kDefaultKrausTol);

/// Two-site walk on {1, 2} with 𝓗 = ℂ²:
///   B^1_1 = diag(a, b), B^1_2 = [[0, √p], [0, 0]], B^2_2 = diag(1, √(1−p)), B^2_1 = diag(c, d).
/// Site "1" is index 0 and site "2" is index 1.
TransitionFamily build_two_site_walk(Complex a, Complex b, Complex c, Complex d, double p,
                                     ValidationMode mode = ValidationMode::strict,
                                     double kraus_tol = kDefaultKrausTol);

}  // namespace oqrw
