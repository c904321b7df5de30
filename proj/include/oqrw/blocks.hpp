#pragma once

#include "oqrw/core.hpp"

#include <span>

namespace oqrw {

/// Density matrix ρ = Σ_i ρ_i ⊗ |i⟩⟨i| held as one PSD block per site.
class BlockState {
 public:
  static constexpr double kDefaultTraceTol = 1e-9;
  static constexpr double kHermitianTol = 1e-12;
  static constexpr double kPositivityTol = 1e-9;

  /// Validates Hermiticity, positivity and unit total trace.
  BlockState(std::size_t h_dim, Blocks blocks, double trace_tol = kDefaultTraceTol);

  /// Skips the positivity/trace checks (dimensions are still checked). Used for
  /// outputs of maps that preserve the invariants by construction.
  static BlockState trusted(std::size_t h_dim, Blocks blocks, double trace_tol = kDefaultTraceTol);

  /// I/h_dim on every site, scaled to unit total trace.
  static BlockState maximally_mixed(std::size_t h_dim, std::size_t n_sites);

  /// σ ⊗ |site⟩⟨site|.
  static BlockState localized(std::size_t n_sites, SiteIndex site, const ComplexMatrix& sigma);

  std::size_t h_dim() const noexcept { return h_dim_; }
  std::size_t num_sites() const noexcept { return blocks_.size(); }
  double trace_tol() const noexcept { return trace_tol_; }

  const ComplexMatrix& block(SiteIndex site) const { return blocks_.at(site.id); }
  const Blocks& blocks() const noexcept { return blocks_; }

  /// Σ_i Tr ρ_i (real part).
  double trace() const;

 private:
  struct Unchecked {};
  BlockState(Unchecked, std::size_t h_dim, Blocks blocks, double trace_tol);

  std::size_t h_dim_;
  Blocks blocks_;
  double trace_tol_;
};

/// Block-diagonal observable x on 𝓗⊗𝒦: only the diagonal blocks x_ii are stored.
/// Every functional in this library reads nothing else.
class BlockObservable {
 public:
  BlockObservable(std::size_t h_dim, Blocks blocks, bool hermitian = false);

  static BlockObservable identity(std::size_t h_dim, std::size_t n_sites);
  static BlockObservable zero(std::size_t h_dim, std::size_t n_sites);
  /// op ⊗ |site⟩⟨site|.
  static BlockObservable at_site(std::size_t n_sites, SiteIndex site, const ComplexMatrix& op);

  std::size_t h_dim() const noexcept { return h_dim_; }
  std::size_t num_sites() const noexcept { return blocks_.size(); }
  bool hermitian() const noexcept { return hermitian_; }

  const ComplexMatrix& block(SiteIndex site) const { return blocks_.at(site.id); }
  const Blocks& blocks() const noexcept { return blocks_; }

  Complex trace() const;
  double frobenius() const;

  friend BlockObservable operator+(const BlockObservable& a, const BlockObservable& b);
  friend BlockObservable operator-(const BlockObservable& a, const BlockObservable& b);
  friend BlockObservable operator*(Complex s, const BlockObservable& a);

 private:
  std::size_t h_dim_;
  Blocks blocks_;
  bool hermitian_;
};

/// Block-diagonal projection e = Σ_i q_i ⊗ |i⟩⟨i|.
class BlockProjection {
 public:
  static constexpr double kProjectionTol = 1e-9;

  BlockProjection(std::size_t h_dim, Blocks blocks);

  static BlockProjection identity(std::size_t h_dim, std::size_t n_sites);
  static BlockProjection zero(std::size_t h_dim, std::size_t n_sites);
  static BlockProjection at_site(std::size_t h_dim, std::size_t n_sites, SiteIndex site,
                                 const ComplexMatrix& q);

  /// e^⊥ with blocks I − q_i.
  BlockProjection complement() const;

  const BlockObservable& observable() const noexcept { return obs_; }
  std::size_t h_dim() const noexcept { return obs_.h_dim(); }
  std::size_t num_sites() const noexcept { return obs_.num_sites(); }
  const ComplexMatrix& block(SiteIndex site) const { return obs_.block(site); }

 private:
  explicit BlockProjection(BlockObservable obs) : obs_(std::move(obs)) {}
  BlockObservable obs_;
};

}  // namespace oqrw
