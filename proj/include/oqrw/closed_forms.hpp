#pragma once
// Closed-form values for the two worked examples: the nearest-neighbour ring
// with e = q⊗|k⟩⟨k|, and the two-site walk. Used as independent checks of the
// generic recursions and by the example generator.

#include "oqrw/blocks.hpp"

namespace oqrw::closed_form {

/// The four local numbers that drive the ring example around site k.
struct RingLocal {
  /// Tr ρ_{k+1}, Tr ρ_{k−1}
  double weight_next = 0.0;
  double weight_prev = 0.0;
  /// Tr(B ρ_{k+1} B* q), Tr(C ρ_{k−1} C* q)
  double hit_next = 0.0;
  double hit_prev = 0.0;

  /// ψ_{k±1}(e^⊥)
  double survive_next() const { return 1.0 - hit_next / weight_next; }
  double survive_prev() const { return 1.0 - hit_prev / weight_prev; }
};

RingLocal ring_local(const BlockState& state, const ComplexMatrix& B, const ComplexMatrix& C, const ComplexMatrix& q,
                     SiteIndex k);

/// φ(e ⊗ e^⊥ ⊗ … ⊗ e^⊥), n trailing complements, forward chain.
double ring_joint_tau(const RingLocal& local, std::size_t n);

/// 𝓔(e ⊗ E₀(τⁿ_∞)) = B*qB⊗|k+1⟩⟨k+1| ψ_{k+1}(e^⊥)^{n+1} + C*qC⊗|k−1⟩⟨k−1| ψ_{k−1}(e^⊥)^{n+1}.
BlockObservable ring_e_tau(std::size_t n_sites, const ComplexMatrix& B, const ComplexMatrix& C,
                           const ComplexMatrix& q, SiteIndex k, const RingLocal& local, std::size_t n);

/// Two-site walk from ρ̃ = ρ₀⊗|2⟩⟨2|: φ̃(τⁿ_∞) = φ₀(e^⊥)^{n+1}.
double two_site_invariant_tau(double phi0_complement, std::size_t n);

/// Two-site walk with c = 0 from ½ρ₀⊗(|1⟩⟨1| + |2⟩⟨2|), ρ₀ = |e₁⟩⟨e₁|, and
/// e^⊥ = p⊗|1⟩⟨1| where t = Tr(ρ₀p). Dual chain values.
double two_site_split_tau(double a_abs, double t, std::size_t n);
/// Joint word [e, e^⊥×n]: ½|a|^{2n}(1−t)tⁿ for n ≥ 1, plus ½ at n = 0.
double two_site_split_joint_tau(double a_abs, double t, std::size_t n);

/// E₀(τⁿ_∞) for the same setting with |a| = 1: diag(|a|^{2n}, |b|^{2n}) t^{n+1} on site 1.
BlockObservable two_site_split_e0_tau(double a_abs, double b_abs, double t, std::size_t n);

/// Same walk and state with e = p⊗|1⟩⟨1| instead: a word of m complements has value ½((1−t)^m + 1).
double two_site_split_complement_word(double t, std::size_t m);

}  // namespace oqrw::closed_form
