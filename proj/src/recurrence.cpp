#include "oqrw/recurrence.hpp"

#include "oqrw/kernels.hpp"
#include "oqrw/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace oqrw {

namespace {

void check_projection(const MarkovPair& pair, const BlockProjection& e) {
  if (e.h_dim() != pair.h_dim() || e.num_sites() != pair.num_sites())
    throw DimensionError("projection shape does not match the Markov pair");
}

BlockObservable unit(const MarkovPair& pair) { return BlockObservable::identity(pair.h_dim(), pair.num_sites()); }

/// Y_n = E₀(τⁿ_∞) for n = 0..n_max.
std::vector<BlockObservable> e0_chain(const MarkovPair& pair, const BlockProjection& e, std::size_t n_max) {
  const BlockObservable comp = e.complement().observable();
  std::vector<BlockObservable> chain;
  chain.reserve(n_max + 1);
  BlockObservable y = unit(pair);
  for (std::size_t n = 0; n <= n_max; ++n) {
    y = transition_expectation(pair, comp, y);
    chain.push_back(y);
  }
  return chain;
}

/// Tr σ along σ ← φ(x_k)·M(σ), starting from φ(first)·ρ, then `steps` complements.
std::vector<double> dual_transfer_series(const MarkovPair& pair, const BlockObservable& first,
                                         const BlockObservable& rest, std::size_t steps) {
  const std::size_t n_sites = pair.num_sites();
  const auto h = static_cast<Eigen::Index>(pair.h_dim());
  auto weigh = [&](Blocks& sigma, const BlockObservable& x) {
    for (std::size_t i = 0; i < n_sites; ++i) sigma[i] *= pair.site_functional(SiteIndex{i}, x);
  };
  auto total = [](const Blocks& sigma) {
    Complex acc{};
    for (const auto& s : sigma) acc += s.trace();
    return acc.real();
  };
  Blocks sigma(n_sites);
  for (std::size_t j = 0; j < n_sites; ++j)
    sigma[j] = pair.in_support(SiteIndex{j}) ? ComplexMatrix(pair.state().blocks()[j]) : ComplexMatrix::Zero(h, h);
  weigh(sigma, first);
  std::vector<double> out{total(sigma)};
  for (std::size_t n = 1; n <= steps; ++n) {
    sigma = kernels::apply_map(pair.family(), sigma);
    weigh(sigma, rest);
    out.push_back(total(sigma));
  }
  return out;
}

/// Σ_v Tr ρ_v ψ_v(first) ψ_v(rest)^n for n = 0..steps.
std::vector<double> forward_product_series(const MarkovPair& pair, const BlockObservable& first,
                                           const BlockObservable& rest, std::size_t steps) {
  std::vector<double> out(steps + 1, 0.0);
  for (const SiteIndex v : pair.restriction().support_sites) {
    const double head = pair.weight(v) * pair.emission_functional(v, first).real();
    const double r = pair.emission_functional(v, rest).real();
    double term = head;
    for (std::size_t n = 0; n <= steps; ++n) {
      out[n] += term;
      term *= r;
    }
  }
  return out;
}

std::vector<double> tail_residual(const std::vector<double>& series, double target) {
  std::vector<double> out(series.size());
  std::transform(series.begin(), series.end(), out.begin(), [target](double s) { return std::abs(s - target); });
  return out;
}

}  // namespace

std::vector<double> tau_series(const MarkovPair& pair, const BlockProjection& e, std::size_t n_max, Evaluator how) {
  check_projection(pair, e);
  const BlockObservable comp = e.complement().observable();
  if (how == Evaluator::product) {
    if (pair.kind() == ExpectationKind::forward) return forward_product_series(pair, comp, comp, n_max);
    return dual_transfer_series(pair, comp, comp, n_max);
  }
  std::vector<double> out;
  out.reserve(n_max + 1);
  for (const auto& y : e0_chain(pair, e, n_max)) out.push_back(pair.initial_functional(y).real());
  return out;
}

std::vector<double> joint_tau_series(const MarkovPair& pair, const BlockProjection& e, std::size_t n_max,
                                     Evaluator how) {
  check_projection(pair, e);
  const BlockObservable& head = e.observable();
  if (how == Evaluator::product) {
    const BlockObservable comp = e.complement().observable();
    if (pair.kind() == ExpectationKind::forward) return forward_product_series(pair, head, comp, n_max);
    return dual_transfer_series(pair, head, comp, n_max);
  }
  std::vector<double> out;
  out.reserve(n_max + 1);
  out.push_back(pair.initial_functional(transition_expectation(pair, head, unit(pair))).real());
  if (n_max == 0) return out;
  for (const auto& y : e0_chain(pair, e, n_max - 1))
    out.push_back(pair.initial_functional(transition_expectation(pair, head, y)).real());
  return out;
}

double tau_expectation(const MarkovPair& pair, const BlockProjection& e, std::size_t n, Evaluator how) {
  return tau_series(pair, e, n, how).back();
}

double joint_tau_expectation(const MarkovPair& pair, const BlockProjection& e, std::size_t n, Evaluator how) {
  return joint_tau_series(pair, e, n, how).back();
}

BlockObservable e0_tau(const MarkovPair& pair, const BlockProjection& e, std::size_t n) {
  check_projection(pair, e);
  return e0_chain(pair, e, n).back();
}

BlockObservable e_tau_closed_forward(const MarkovPair& pair, const BlockProjection& e, std::size_t n) {
  check_projection(pair, e);
  if (pair.kind() != ExpectationKind::forward) throw PreconditionError("the closed form needs a forward pair");
  const auto h = static_cast<Eigen::Index>(pair.h_dim());
  const BlockObservable comp = e.complement().observable();
  Blocks pulled = kernels::apply_adjoint(pair.family(), e.observable().blocks());
  for (std::size_t v = 0; v < pulled.size(); ++v) {
    const SiteIndex site{v};
    if (!pair.in_support(site)) {
      pulled[v] = ComplexMatrix::Zero(h, h);
      continue;
    }
    const double r = pair.emission_functional(site, comp).real();
    pulled[v] *= std::pow(r, static_cast<double>(n + 1));
  }
  return BlockObservable(pair.h_dim(), std::move(pulled));
}

std::string to_string(Criterion c) {
  switch (c) {
    case Criterion::phi_recurrent: return "phi_recurrent";
    case Criterion::phi_completely_accessible: return "phi_completely_accessible";
    case Criterion::E_recurrent: return "E_recurrent";
    case Criterion::E_completely_accessible: return "E_completely_accessible";
  }
  return "unknown";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::fails: return "fails";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

std::optional<Criterion> parse_criterion(const std::string& name) {
  for (Criterion c : {Criterion::phi_recurrent, Criterion::phi_completely_accessible, Criterion::E_recurrent,
                      Criterion::E_completely_accessible})
    if (to_string(c) == name) return c;
  return std::nullopt;
}

TailEstimate estimate_tail(const std::vector<double>& values, std::size_t window) {
  TailEstimate out;
  if (values.empty()) return out;
  out.limit = values.back();
  if (window < 3 || values.size() < window + 1) return out;

  const std::size_t n = values.size();
  constexpr double eps = std::numeric_limits<double>::epsilon();
  std::vector<double> diffs;
  std::vector<bool> signal;
  for (std::size_t k = n - window; k < n; ++k) {
    const double d = values[k - 1] - values[k];
    const double noise = 8.0 * eps * std::max(std::abs(values[k - 1]), std::abs(values[k])) + 1e-300;
    diffs.push_back(d);
    signal.push_back(d > noise);
    if (!(std::abs(d) <= noise) && d < 0.0) return out;  // increasing beyond rounding
  }

  const bool settled = std::none_of(signal.end() - 3, signal.end(), [](bool s) { return s; });
  if (settled) {
    out.certified = true;
    return out;
  }
  if (!std::all_of(signal.begin(), signal.end(), [](bool s) { return s; })) return out;

  double lo = 1.0, hi = 0.0;
  for (std::size_t k = 1; k < diffs.size(); ++k) {
    const double r = diffs[k] / diffs[k - 1];
    if (!(r >= 0.0 && r < 1.0)) return out;
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  if (hi - lo > 1e-4) return out;
  const double r = diffs.back() / diffs[diffs.size() - 2];
  out.certified = true;
  out.ratio = r;
  out.limit = values.back() - diffs.back() * r / (1.0 - r);
  return out;
}

RecurrenceVerdict diagnose(const MarkovPair& pair, const BlockProjection& e, Criterion criterion,
                           const DiagnoseOptions& opts) {
  check_projection(pair, e);
  RecurrenceVerdict out;
  out.criterion = criterion;
  out.n_max = opts.n_max;

  // The quantity whose limit decides the criterion, as a distance to its target.
  std::vector<double> residual;
  switch (criterion) {
    case Criterion::phi_completely_accessible:
      out.series = tau_series(pair, e, opts.n_max, opts.how);
      residual = tail_residual(out.series, 0.0);
      break;
    case Criterion::phi_recurrent: {
      const double entry = pair.initial_functional(transition_expectation(pair, e.observable(), unit(pair))).real();
      if (!(entry > opts.access_tol))
        throw PreconditionError("phi-recurrence is undefined: the state never charges e (phi(J0(e)) = 0)");
      out.series = joint_tau_series(pair, e, opts.n_max, opts.how);
      residual = tail_residual(out.series, 0.0);
      break;
    }
    case Criterion::E_completely_accessible:
      for (const auto& y : e0_chain(pair, e, opts.n_max)) out.series.push_back(y.frobenius());
      residual = out.series;
      break;
    case Criterion::E_recurrent: {
      const double base = transition_expectation(pair, e.observable(), unit(pair)).trace().real();
      if (!(base > opts.access_tol))
        throw PreconditionError("E-recurrence is undefined: Tr E(e x 1) vanishes");
      // Return probability up to n is 1 − Tr 𝓔(e⊗E₀(τⁿ_∞)) / Tr 𝓔(e⊗1); the
      // remainder is kept separately so small tails are not lost to cancellation.
      for (const auto& y : e0_chain(pair, e, opts.n_max)) {
        const double rest = transition_expectation(pair, e.observable(), y).trace().real() / base;
        residual.push_back(rest);
        out.series.push_back(1.0 - rest);
      }
      break;
    }
  }

  const TailEstimate tail = estimate_tail(residual, opts.window);
  const double limit_residual = tail.limit;
  if (residual.size() < opts.window + 1) {
    out.verdict = Verdict::inconclusive;
  } else if (tail.certified) {
    out.verdict = std::abs(tail.limit) <= opts.decision_tol ? Verdict::holds : Verdict::fails;
    out.ratio = tail.ratio;
  } else if (residual.back() <= opts.decision_tol) {
    // Non-increasing and non-negative: the limit lies in [0, residual.back()].
    out.verdict = Verdict::holds;
  } else {
    out.verdict = Verdict::inconclusive;
  }
  out.limit = criterion == Criterion::E_recurrent ? 1.0 - limit_residual : limit_residual;
  return out;
}

AccessResult is_accessible(const MarkovPair& pair, const BlockProjection& e, const BlockProjection& f,
                           std::size_t n_max, AccessMode mode, double access_tol) {
  check_projection(pair, e);
  check_projection(pair, f);
  const BlockObservable one = unit(pair);
  BlockObservable tail = transition_expectation(pair, f.observable(), one);
  for (std::size_t n = 1; n <= n_max; ++n) {
    if (n > 1) tail = transition_expectation(pair, one, tail);
    const BlockObservable word = transition_expectation(pair, e.observable(), tail);
    const double value = mode == AccessMode::phi ? pair.initial_functional(word).real() : word.frobenius();
    if (value > access_tol) return AccessResult{true, n};
  }
  return AccessResult{};
}

bool communicate(const MarkovPair& pair, const BlockProjection& e, const BlockProjection& f, std::size_t n_max,
                 AccessMode mode, double access_tol) {
  return is_accessible(pair, e, f, n_max, mode, access_tol).accessible &&
         is_accessible(pair, f, e, n_max, mode, access_tol).accessible;
}

TheoremIReport check_theorem_i(const MarkovPair& pair, const BlockProjection& e, std::size_t n_max, double tol) {
  check_projection(pair, e);
  TheoremIReport out;
  out.tol = tol;
  const BlockObservable one = unit(pair);

  BlockObservable y = transition_expectation(pair, e.observable(), one);
  for (std::size_t m = 0; m <= n_max; ++m) {
    if (m > 0) y = transition_expectation(pair, one, y);
    out.entry_values.push_back(pair.initial_functional(y).real());
  }

  const auto chain = e0_chain(pair, e, n_max);
  for (std::size_t k = 0; k <= n_max; ++k) {
    BlockObservable z = chain[n_max - k];
    for (std::size_t s = 0; s < k; ++s) z = transition_expectation(pair, one, z);
    out.shifted_tau_values.push_back(pair.initial_functional(z).real());
  }

  out.never_entered = std::all_of(out.entry_values.begin(), out.entry_values.end(),
                                  [tol](double v) { return std::abs(v) <= tol; });
  out.shifted_all_one = std::all_of(out.shifted_tau_values.begin(), out.shifted_tau_values.end(),
                                    [tol](double v) { return v >= 1.0 - tol; });
  out.consistent = out.never_entered == out.shifted_all_one;
  return out;
}

}  // namespace oqrw
