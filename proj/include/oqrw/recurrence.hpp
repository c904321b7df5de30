#pragma once

#include "oqrw/blocks.hpp"
#include "oqrw/qmc.hpp"

#include <optional>
#include <string>
#include <vector>

namespace oqrw {

/// How word functionals are evaluated: the generic right fold, or the pair's product formula.
enum class Evaluator { nested, product };

/// φ(τⁿ_∞) = φ(e^⊥ ⊗ … ⊗ e^⊥) with n+1 factors.
double tau_expectation(const MarkovPair& pair, const BlockProjection& e, std::size_t n,
                       Evaluator how = Evaluator::nested);

/// φ(e ⊗ e^⊥ ⊗ … ⊗ e^⊥) with n trailing complements.
double joint_tau_expectation(const MarkovPair& pair, const BlockProjection& e, std::size_t n,
                             Evaluator how = Evaluator::nested);

/// tau_expectation for n = 0..n_max, computed incrementally.
std::vector<double> tau_series(const MarkovPair& pair, const BlockProjection& e, std::size_t n_max,
                               Evaluator how = Evaluator::nested);

/// joint_tau_expectation for n = 0..n_max, computed incrementally.
std::vector<double> joint_tau_series(const MarkovPair& pair, const BlockProjection& e, std::size_t n_max,
                                     Evaluator how = Evaluator::nested);

/// E₀(τⁿ_∞) = 𝓔(e^⊥ ⊗ 𝓔(e^⊥ ⊗ … 𝓔(e^⊥ ⊗ 1)…)) with n+1 nested expectations.
BlockObservable e0_tau(const MarkovPair& pair, const BlockProjection& e, std::size_t n);

/// 𝓔(e ⊗ E₀(τⁿ_∞)) without recursion: block v is (M*e)_v ψ_v(e^⊥)^{n+1}. Forward pairs only.
BlockObservable e_tau_closed_forward(const MarkovPair& pair, const BlockProjection& e, std::size_t n);

enum class Criterion { phi_recurrent, phi_completely_accessible, E_recurrent, E_completely_accessible };

enum class Verdict { holds, fails, inconclusive };

std::string to_string(Criterion c);
std::string to_string(Verdict v);
std::optional<Criterion> parse_criterion(const std::string& name);

struct DiagnoseOptions {
  std::size_t n_max = 200;
  /// A limit within this distance of the criterion's target counts as reached.
  double decision_tol = 1e-8;
  /// Number of trailing horizons used to certify convergence.
  std::size_t window = 10;
  /// Preconditions φ(J₀(e)) ≠ 0 and Tr 𝓔(e⊗1) ≠ 0 are tested against this.
  double access_tol = 1e-12;
  Evaluator how = Evaluator::nested;
};

struct RecurrenceVerdict {
  Criterion criterion = Criterion::phi_recurrent;
  /// The criterion's quantity at n = 0..n_max. For E-recurrence this is the
  /// partial return probability, whose target is 1; the other three target 0.
  std::vector<double> series;
  double limit = 0.0;
  /// Decay ratio of the distance to the limit, when a geometric tail was certified.
  std::optional<double> ratio;
  Verdict verdict = Verdict::inconclusive;
  std::size_t n_max = 0;
};

/// Finite-horizon decision of one recurrence or accessibility criterion.
///
/// Throws PreconditionError for φ-recurrence when φ(J₀(e)) vanishes, and for
/// E-recurrence when Tr 𝓔(e⊗1) does.
RecurrenceVerdict diagnose(const MarkovPair& pair, const BlockProjection& e, Criterion criterion,
                           const DiagnoseOptions& opts = {});

/// Classification of the tail of a non-negative, non-increasing sequence.
struct TailEstimate {
  bool certified = false;
  double limit = 0.0;
  std::optional<double> ratio;
};

/// Either the last `window` differences sit at rounding level, or their
/// successive ratios agree to 1e-4 on a common value below one, in which case
/// the geometric remainder is added back.
TailEstimate estimate_tail(const std::vector<double>& values, std::size_t window);

enum class AccessMode { phi, E };

inline constexpr double kDefaultAccessTol = 1e-12;

struct AccessResult {
  bool accessible = false;
  /// Smallest n at which the word [e, 1, …, 1, f] is charged.
  std::optional<std::size_t> witness;
};

/// Searches n = 1..n_max for φ(J₀(e) ⊗ 1 ⊗ … ⊗ 1 ⊗ Jₙ(f)) > access_tol. The E mode
/// measures the Frobenius norm of the nested expectation of the same word instead.
AccessResult is_accessible(const MarkovPair& pair, const BlockProjection& e, const BlockProjection& f,
                           std::size_t n_max, AccessMode mode = AccessMode::phi,
                           double access_tol = kDefaultAccessTol);

/// Accessible in both directions.
bool communicate(const MarkovPair& pair, const BlockProjection& e, const BlockProjection& f, std::size_t n_max,
                 AccessMode mode = AccessMode::phi, double access_tol = kDefaultAccessTol);

struct TheoremIReport {
  /// φ(1 ⊗ … ⊗ 1 ⊗ e) with m leading identities, m = 0..n_max.
  std::vector<double> entry_values;
  /// φ of τ^{n_max−k}_∞ shifted by k identities, k = 0..n_max.
  std::vector<double> shifted_tau_values;
  bool never_entered = false;
  bool shifted_all_one = false;
  /// The two sides agree.
  bool consistent = false;
  double tol = 1e-9;
};

/// Finite-horizon form of: e is never entered iff every shifted stopping word has value 1.
TheoremIReport check_theorem_i(const MarkovPair& pair, const BlockProjection& e, std::size_t n_max,
                               double tol = 1e-9);

}  // namespace oqrw
