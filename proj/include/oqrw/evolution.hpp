#pragma once

#include "oqrw/blocks.hpp"
#include "oqrw/walk_model.hpp"

#include <vector>

namespace oqrw {

/// One application of the walk map: ρ'_i = Σ_j B^i_j ρ_j B^{i*}_j.
BlockState step(const TransitionFamily& family, const BlockState& state);

/// `n`-fold composition of step; n = 0 returns the input.
BlockState evolve(const TransitionFamily& family, const BlockState& state, std::size_t n);

/// p_i = Tr ρ_i, indexed by site.
std::vector<double> position_distribution(const BlockState& state);

/// Heisenberg-picture map: (M*y)_j = Σ_i B^{i*}_j y_i B^i_j.
BlockObservable adjoint_apply(const TransitionFamily& family, const BlockObservable& observable);

enum class InvariantMethod { power_iteration, dense_eigen };

struct InvariantOptions {
  InvariantMethod method = InvariantMethod::dense_eigen;
  std::size_t max_iters = 100000;
  /// Bound on ‖M(ρ) − ρ‖_F for the returned state.
  double tol = 1e-10;
  /// Singular values of (M − I) at or below this count as eigenvalue 1 (dense method).
  double eig_tol = 1e-8;
};

struct InvariantResult {
  BlockState state;
  /// Dimension of the eigenvalue-1 eigenspace (dense method; 0 when not computed).
  std::size_t multiplicity = 0;
  double residual = 0.0;
  std::size_t iterations = 0;

  bool unique() const noexcept { return multiplicity == 1; }
};

/// Throws NotFoundError when no fixed point is reached.
///
/// The dense method vectorizes M on the h_dim²·|sites| block-diagonal space and
/// projects the maximally mixed state onto the eigenvalue-1 eigenspace with the
/// spectral projector built from left and right null vectors of (M − I). With a
/// degenerate eigenspace this picks the fixed point reached by Cesàro averaging
/// from that seed; the degeneracy is reported through `multiplicity`.
InvariantResult find_invariant_state(const TransitionFamily& family, const InvariantOptions& opts = {});

/// r_n = max_i ‖(Mⁿρ)_i − ρ_i‖_F for n = 1..n_max.
std::vector<double> check_invariance_chain(const TransitionFamily& family, const BlockState& state,
                                           std::size_t n_max);

/// The dense (h_dim²·|sites|)² matrix of M acting on column-major vectorized blocks.
ComplexMatrix vectorized_map(const TransitionFamily& family);

}  // namespace oqrw
