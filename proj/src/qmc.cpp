#include "oqrw/qmc.hpp"

#include "oqrw/kernels.hpp"
#include "oqrw/linalg.hpp"

#include <cmath>

namespace oqrw {

namespace {

void check_shape(const MarkovPair& pair, const BlockObservable& x) {
  if (x.h_dim() != pair.h_dim() || x.num_sites() != pair.num_sites())
    throw DimensionError("observable shape does not match the Markov pair");
}

}  // namespace

SupportRestriction restrict_support(const TransitionFamily& family, const BlockState& state, double support_tol) {
  if (state.h_dim() != family.h_dim() || state.num_sites() != family.num_sites())
    throw DimensionError("state shape does not match the walk");
  std::vector<bool> in_support(family.num_sites());
  std::vector<SiteIndex> zero_sites;
  std::vector<SiteIndex> support_sites;
  for (std::size_t i = 0; i < family.num_sites(); ++i) {
    in_support[i] = state.blocks()[i].norm() > support_tol;
    (in_support[i] ? support_sites : zero_sites).push_back(SiteIndex{i});
  }
  std::vector<TransitionEntry> kept;
  for (auto& t : family.entries())
    if (in_support[t.from.id]) kept.push_back(std::move(t));
  TransitionFamily restricted(family.h_dim(), family.site_labels(), std::move(kept), ValidationMode::relaxed,
                              family.kraus_tol());
  return SupportRestriction{std::move(zero_sites), std::move(support_sites), std::move(in_support),
                            std::move(restricted), support_tol};
}

KrausFamily build_kraus_K(const TransitionFamily& family, const BlockState& state) {
  if (state.h_dim() != family.h_dim() || state.num_sites() != family.num_sites())
    throw DimensionError("state shape does not match the walk");
  std::vector<KrausTerm> terms;
  for (std::size_t j = 0; j < family.num_sites(); ++j) {
    const auto arcs = family.outgoing(SiteIndex{j});
    if (arcs.empty()) continue;
    const ComplexMatrix& rho = state.blocks()[j];
    const double tr = rho.trace().real();
    if (!(tr > 0.0))
      throw Error("source site " + family.label(SiteIndex{j}) +
                  " carries no weight; restrict the walk to the support first");
    const ComplexMatrix amplitude = linalg::psd_sqrt(rho) / std::sqrt(tr);
    for (const Arc& arc : arcs) terms.push_back(KrausTerm{arc.site, SiteIndex{j}, arc.op, amplitude});
  }
  return KrausFamily(family.h_dim(), family.num_sites(), std::move(terms));
}

double check_kk1(const KrausFamily& kraus) {
  const auto h = static_cast<Eigen::Index>(kraus.h_dim());
  Blocks sums(kraus.num_sites(), ComplexMatrix::Zero(h, h));
  std::vector<bool> touched(kraus.num_sites(), false);
  for (const auto& t : kraus.terms()) {
    // Tr^{(2)}(K K*) = M^{i*}_j M^i_j · Tr(A A*), and M^{i*}_j M^i_j = B^{i*}_j B^i_j ⊗ |j⟩⟨j|.
    const Complex weight = (t.amplitude * t.amplitude.adjoint()).trace();
    sums[t.source.id].noalias() += weight * (t.transition.adjoint() * t.transition);
    touched[t.source.id] = true;
  }
  double sq = 0.0;
  for (std::size_t j = 0; j < sums.size(); ++j)
    if (touched[j]) sq += (sums[j] - ComplexMatrix::Identity(h, h)).squaredNorm();
  return std::sqrt(sq);
}

double check_kk2(const KrausFamily& kraus, const BlockState& state) {
  if (state.h_dim() != kraus.h_dim() || state.num_sites() != kraus.num_sites())
    throw DimensionError("state shape does not match the Kraus family");
  const auto h = static_cast<Eigen::Index>(kraus.h_dim());
  Blocks sums(kraus.num_sites(), ComplexMatrix::Zero(h, h));
  for (const auto& t : kraus.terms()) {
    // Tr^{(1)}(K*(ρ⊗1)K) = Tr(M ρ M*) · A*A, with Tr(M^i_j ρ M^{i*}_j) = Tr(B^i_j ρ_j B^{i*}_j)
    // and A*_ij A_ij = (amplitude* amplitude) ⊗ |j⟩⟨j|.
    const ComplexMatrix& rho = state.blocks()[t.source.id];
    const Complex moved = (t.transition * rho * t.transition.adjoint()).trace();
    sums[t.source.id].noalias() += moved * (t.amplitude.adjoint() * t.amplitude);
  }
  return linalg::frobenius_distance(sums, state.blocks());
}

BlockObservable kraus_transition_expectation(const KrausFamily& kraus, const BlockObservable& x,
                                             const BlockObservable& y) {
  if (x.h_dim() != kraus.h_dim() || y.h_dim() != kraus.h_dim() || x.num_sites() != kraus.num_sites() ||
      y.num_sites() != kraus.num_sites())
    throw DimensionError("observable shape does not match the Kraus family");
  const auto h = static_cast<Eigen::Index>(kraus.h_dim());
  Blocks out(kraus.num_sites(), ComplexMatrix::Zero(h, h));
  for (const auto& t : kraus.terms()) {
    // Tr^{(2)}(K (x⊗y) K*) = M^{i*}_j x M^i_j · Tr(A y A*), with A y A* = amplitude y_jj amplitude* ⊗ |i⟩⟨i|.
    const Complex weight = (t.amplitude * y.block(t.source) * t.amplitude.adjoint()).trace();
    out[t.source.id].noalias() += weight * (t.transition.adjoint() * x.block(t.target) * t.transition);
  }
  return BlockObservable(kraus.h_dim(), std::move(out));
}

MarkovPair::MarkovPair(const TransitionFamily& family, BlockState state, ExpectationKind kind, double support_tol)
    : state_(std::move(state)), kind_(kind), restriction_(restrict_support(family, state_, support_tol)) {
  const auto h = static_cast<Eigen::Index>(state_.h_dim());
  const std::size_t n = state_.num_sites();
  weights_.resize(n);
  normalized_.assign(n, ComplexMatrix::Zero(h, h));
  emitted_.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    weights_[k] = state_.blocks()[k].trace().real();
    if (!restriction_.in_support[k]) continue;
    if (!(weights_[k] > 0.0))
      throw InvalidStateError("supported site " + family.label(SiteIndex{k}) + " has non-positive trace");
    normalized_[k] = state_.blocks()[k] / weights_[k];
    for (const Arc& arc : restriction_.family.outgoing(SiteIndex{k}))
      emitted_[k].push_back(Arc{arc.site, arc.op * normalized_[k] * arc.op.adjoint()});
  }
}

MarkovPair MarkovPair::with_kind(ExpectationKind kind) const {
  MarkovPair copy = *this;
  copy.kind_ = kind;
  return copy;
}

Complex MarkovPair::site_functional(SiteIndex k, const BlockObservable& x) const {
  check_shape(*this, x);
  if (!in_support(k)) return {};
  return linalg::trace_product(normalized_[k.id], x.block(k));
}

Complex MarkovPair::emission_functional(SiteIndex v, const BlockObservable& x) const {
  check_shape(*this, x);
  Complex acc{};
  for (const Arc& arc : emitted_.at(v.id)) acc += linalg::trace_product(arc.op, x.block(arc.site));
  return acc;
}

Complex MarkovPair::initial_functional(const BlockObservable& x) const {
  check_shape(*this, x);
  Complex acc{};
  for (std::size_t j = 0; j < num_sites(); ++j) acc += linalg::trace_product(state_.blocks()[j], x.blocks()[j]);
  return acc;
}

double psi(const MarkovPair& pair, SiteIndex v, const BlockObservable& x) {
  if (v.id >= pair.num_sites() || !pair.in_support(v))
    throw PreconditionError("psi: site is outside the support of the state");
  return pair.emission_functional(v, x).real();
}

double phi_site(const MarkovPair& pair, SiteIndex k, const BlockObservable& x) {
  if (k.id >= pair.num_sites() || !pair.in_support(k))
    throw PreconditionError("phi_site: site is outside the support of the state");
  return pair.site_functional(k, x).real();
}

BlockObservable transition_expectation(const MarkovPair& pair, const BlockObservable& x, const BlockObservable& y) {
  check_shape(pair, x);
  check_shape(pair, y);
  const auto h = static_cast<Eigen::Index>(pair.h_dim());
  const bool forward = pair.kind() == ExpectationKind::forward;
  // Only the diagonal blocks survive: M^{i*}_j x M^i_j = B^{i*}_j x_ii B^i_j ⊗ |j⟩⟨j|.
  const Blocks pulled = kernels::apply_adjoint(pair.family(), (forward ? x : y).blocks());
  const BlockObservable& weighted = forward ? y : x;
  Blocks out(pair.num_sites());
  for (std::size_t j = 0; j < out.size(); ++j) {
    const SiteIndex site{j};
    if (pair.in_support(site))
      out[j] = pair.site_functional(site, weighted) * pulled[j];
    else
      out[j] = ComplexMatrix::Zero(h, h);
  }
  return BlockObservable(pair.h_dim(), std::move(out));
}

double qmc_evaluate_nested(const MarkovPair& pair, std::span<const BlockObservable> xs) {
  if (xs.empty()) throw PreconditionError("qmc_evaluate_nested: empty word");
  BlockObservable acc = BlockObservable::identity(pair.h_dim(), pair.num_sites());
  for (std::size_t k = xs.size(); k-- > 0;) acc = transition_expectation(pair, xs[k], acc);
  return pair.initial_functional(acc).real();
}

double qmc_evaluate_product_forward(const MarkovPair& pair, std::span<const BlockObservable> xs) {
  if (pair.kind() != ExpectationKind::forward)
    throw PreconditionError("qmc_evaluate_product_forward needs a forward pair");
  Complex total{};
  for (const SiteIndex v : pair.restriction().support_sites) {
    Complex term = pair.weight(v);
    for (const auto& x : xs) term *= pair.emission_functional(v, x);
    total += term;
  }
  return total.real();
}

double qmc_evaluate_product_dual(const MarkovPair& pair, std::span<const BlockObservable> xs) {
  if (pair.kind() != ExpectationKind::dual) throw PreconditionError("qmc_evaluate_product_dual needs a dual pair");
  if (xs.empty()) throw PreconditionError("qmc_evaluate_product_dual: empty word");
  const std::size_t n = pair.num_sites();
  const auto h = static_cast<Eigen::Index>(pair.h_dim());
  Blocks sigma(n);
  for (std::size_t j = 0; j < n; ++j) {
    const SiteIndex site{j};
    sigma[j] = pair.in_support(site) ? ComplexMatrix(pair.site_functional(site, xs[0]) * pair.state().blocks()[j])
                                     : ComplexMatrix::Zero(h, h);
  }
  for (std::size_t k = 1; k < xs.size(); ++k) {
    sigma = kernels::apply_map(pair.family(), sigma);
    for (std::size_t i = 0; i < n; ++i) sigma[i] *= pair.site_functional(SiteIndex{i}, xs[k]);
  }
  Complex total{};
  for (const auto& s : sigma) total += s.trace();
  return total.real();
}

double qmc_evaluate_product(const MarkovPair& pair, std::span<const BlockObservable> xs) {
  return pair.kind() == ExpectationKind::forward ? qmc_evaluate_product_forward(pair, xs)
                                                 : qmc_evaluate_product_dual(pair, xs);
}

double check_compatibility(const MarkovPair& pair) {
  const auto h = static_cast<Eigen::Index>(pair.h_dim());
  const std::size_t n = pair.num_sites();
  const auto one = BlockObservable::identity(pair.h_dim(), n);
  double worst = 0.0;
  for (std::size_t site = 0; site < n; ++site) {
    for (Eigen::Index r = 0; r < h; ++r) {
      for (Eigen::Index c = 0; c < h; ++c) {
        ComplexMatrix unit = ComplexMatrix::Zero(h, h);
        unit(r, c) = 1.0;
        const auto x = BlockObservable::at_site(n, SiteIndex{site}, unit);
        const Complex lhs = pair.initial_functional(transition_expectation(pair, one, x));
        const Complex rhs = pair.initial_functional(x);
        worst = std::max(worst, std::abs(lhs - rhs));
      }
    }
  }
  return worst;
}

}  // namespace oqrw
