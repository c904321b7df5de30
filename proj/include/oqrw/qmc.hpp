#pragma once

#include "oqrw/blocks.hpp"
#include "oqrw/walk_model.hpp"

#include <span>
#include <vector>

namespace oqrw {

inline constexpr double kDefaultSupportTol = 1e-12;

/// Partition of the sites into I_ρ (blocks of ρ at most `support_tol` in Frobenius
/// norm) and its complement, together with the walk restricted to sources in the
/// support. The restricted family is held in relaxed mode: sources outside the
/// support have no transitions left.
struct SupportRestriction {
  std::vector<SiteIndex> zero_sites;
  std::vector<SiteIndex> support_sites;
  std::vector<bool> in_support;
  TransitionFamily family;
  double support_tol = kDefaultSupportTol;

  bool contains(SiteIndex site) const { return in_support.at(site.id); }
};

SupportRestriction restrict_support(const TransitionFamily& family, const BlockState& state,
                                    double support_tol = kDefaultSupportTol);

/// K_ij = M^{i*}_j ⊗ A_ij with A_ij = ρ_j^{1/2} ⊗ |i⟩⟨j| / √Tr ρ_j, kept factored.
struct KrausTerm {
  SiteIndex target;
  SiteIndex source;
  /// B^target_source
  ComplexMatrix transition;
  /// ρ_source^{1/2} / √Tr ρ_source
  ComplexMatrix amplitude;
};

class KrausFamily {
 public:
  KrausFamily(std::size_t h_dim, std::size_t n_sites, std::vector<KrausTerm> terms)
      : h_dim_(h_dim), n_sites_(n_sites), terms_(std::move(terms)) {}

  std::size_t h_dim() const noexcept { return h_dim_; }
  std::size_t num_sites() const noexcept { return n_sites_; }
  const std::vector<KrausTerm>& terms() const noexcept { return terms_; }

 private:
  std::size_t h_dim_;
  std::size_t n_sites_;
  std::vector<KrausTerm> terms_;
};

/// `family` must already be restricted to sources carrying weight in `state`.
KrausFamily build_kraus_K(const TransitionFamily& family, const BlockState& state);

/// ‖Σ Tr^{(2)}(K K*) − 1‖_F, with 1 the identity on the supported sites.
double check_kk1(const KrausFamily& kraus);

/// ‖Σ Tr^{(1)}(K*(ρ⊗1)K) − ρ‖_F.
double check_kk2(const KrausFamily& kraus, const BlockState& state);

/// 𝓔(x⊗y) = Σ Tr^{(2)}(K (x⊗y) K*) evaluated from the Kraus pair.
BlockObservable kraus_transition_expectation(const KrausFamily& kraus, const BlockObservable& x,
                                             const BlockObservable& y);

enum class ExpectationKind {
  /// 𝓔(x⊗y) = Σ_{ij} M^{i*}_j x M^i_j φ_j(y)
  forward,
  /// 𝓔̃(x⊗y) = Σ_{ij} φ_j(x) M^{i*}_j y M^i_j
  dual,
};

/// Initial state ρ (also the weight defining φ_j) plus a transition expectation kind.
///
/// Observables range over all sites. Transition expectations only produce blocks
/// on supported sites; the unit passed as the innermost argument is the identity
/// on every site.
class MarkovPair {
 public:
  MarkovPair(const TransitionFamily& family, BlockState state, ExpectationKind kind,
             double support_tol = kDefaultSupportTol);

  ExpectationKind kind() const noexcept { return kind_; }
  const BlockState& state() const noexcept { return state_; }
  /// The walk restricted to supported sources.
  const TransitionFamily& family() const noexcept { return restriction_.family; }
  const SupportRestriction& restriction() const noexcept { return restriction_; }
  std::size_t h_dim() const noexcept { return state_.h_dim(); }
  std::size_t num_sites() const noexcept { return state_.num_sites(); }

  bool in_support(SiteIndex site) const { return restriction_.contains(site); }
  /// Tr ρ_site
  double weight(SiteIndex site) const { return weights_.at(site.id); }

  MarkovPair with_kind(ExpectationKind kind) const;

  /// φ_k(x) = Tr(ρ_k x_kk) / Tr ρ_k; zero off the support.
  Complex site_functional(SiteIndex k, const BlockObservable& x) const;
  /// ψ_v(x) = Σ_i Tr(B^i_v ρ_v B^{i*}_v x_ii) / Tr ρ_v; zero off the support.
  Complex emission_functional(SiteIndex v, const BlockObservable& x) const;
  /// φ₀(x) = Tr(ρ x)
  Complex initial_functional(const BlockObservable& x) const;

 private:
  BlockState state_;
  ExpectationKind kind_;
  SupportRestriction restriction_;
  std::vector<double> weights_;
  /// ρ_k / Tr ρ_k on the support.
  Blocks normalized_;
  /// (i, B^i_v ρ_v B^{i*}_v / Tr ρ_v) for each supported v.
  std::vector<std::vector<Arc>> emitted_;
};

/// ψ_v(x); throws PreconditionError when v is outside the support.
double psi(const MarkovPair& pair, SiteIndex v, const BlockObservable& x);

/// φ_k(x); throws PreconditionError when k is outside the support.
double phi_site(const MarkovPair& pair, SiteIndex k, const BlockObservable& x);

/// The pair's transition expectation applied to x⊗y.
BlockObservable transition_expectation(const MarkovPair& pair, const BlockObservable& x, const BlockObservable& y);

/// φ(x₀⊗…⊗xₙ) = φ₀(𝓔(x₀⊗𝓔(x₁⊗…𝓔(xₙ⊗1)…))) by direct right fold.
double qmc_evaluate_nested(const MarkovPair& pair, std::span<const BlockObservable> xs);

/// Σ_v Tr(ρ_v) Π_k ψ_v(x_k). Forward pairs only.
double qmc_evaluate_product_forward(const MarkovPair& pair, std::span<const BlockObservable> xs);

/// Path-sum form of the dual chain, evaluated by a transfer recursion over sites:
/// σ ← φ(x_k)·M(σ) per word position. Dual pairs only.
double qmc_evaluate_product_dual(const MarkovPair& pair, std::span<const BlockObservable> xs);

/// Product evaluator matching the pair's kind.
double qmc_evaluate_product(const MarkovPair& pair, std::span<const BlockObservable> xs);

/// max over all matrix units x on every diagonal block of |φ₀(𝓔(1⊗x)) − φ₀(x)|.
double check_compatibility(const MarkovPair& pair);

}  // namespace oqrw
