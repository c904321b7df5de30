#include "oqrw/evolution.hpp"

#include "oqrw/kernels.hpp"
#include "oqrw/linalg.hpp"

#include <Eigen/SVD>

#include <algorithm>

namespace oqrw {

namespace {

void check_state(const TransitionFamily& family, std::size_t h_dim, std::size_t n_sites) {
  if (h_dim != family.h_dim() || n_sites != family.num_sites())
    throw DimensionError("operand shape (" + std::to_string(h_dim) + ", " + std::to_string(n_sites) +
                         " sites) does not match the walk (" + std::to_string(family.h_dim()) + ", " +
                         std::to_string(family.num_sites()) + " sites)");
}

}  // namespace

BlockState step(const TransitionFamily& family, const BlockState& state) {
  check_state(family, state.h_dim(), state.num_sites());
  return BlockState::trusted(state.h_dim(), kernels::apply_map(family, state.blocks()), state.trace_tol());
}

BlockState evolve(const TransitionFamily& family, const BlockState& state, std::size_t n) {
  check_state(family, state.h_dim(), state.num_sites());
  Blocks blocks = state.blocks();
  for (std::size_t k = 0; k < n; ++k) blocks = kernels::apply_map(family, blocks);
  return BlockState::trusted(state.h_dim(), std::move(blocks), state.trace_tol());
}

std::vector<double> position_distribution(const BlockState& state) {
  std::vector<double> p(state.num_sites());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = state.blocks()[i].trace().real();
  return p;
}

BlockObservable adjoint_apply(const TransitionFamily& family, const BlockObservable& observable) {
  check_state(family, observable.h_dim(), observable.num_sites());
  return BlockObservable(observable.h_dim(), kernels::apply_adjoint(family, observable.blocks()),
                         observable.hermitian());
}

ComplexMatrix vectorized_map(const TransitionFamily& family) {
  const auto h = static_cast<Eigen::Index>(family.h_dim());
  const Eigen::Index hh = h * h;
  const auto n = static_cast<Eigen::Index>(family.num_sites());
  ComplexMatrix L = ComplexMatrix::Zero(hh * n, hh * n);
  // vec(B X B*) = (conj(B) ⊗ B) vec(X) for column-major vec.
  for (const auto& t : family.entries()) {
    const ComplexMatrix left = t.op.conjugate();
    auto block = L.block(static_cast<Eigen::Index>(t.to.id) * hh, static_cast<Eigen::Index>(t.from.id) * hh, hh, hh);
    for (Eigen::Index a = 0; a < h; ++a)
      for (Eigen::Index b = 0; b < h; ++b) block.block(a * h, b * h, h, h) += left(a, b) * t.op;
  }
  return L;
}

namespace {

ComplexVector vectorize(const Blocks& blocks, Eigen::Index h) {
  const Eigen::Index hh = h * h;
  ComplexVector v(hh * static_cast<Eigen::Index>(blocks.size()));
  for (std::size_t i = 0; i < blocks.size(); ++i)
    v.segment(static_cast<Eigen::Index>(i) * hh, hh) = Eigen::Map<const ComplexVector>(blocks[i].data(), hh);
  return v;
}

Blocks unvectorize(const ComplexVector& v, Eigen::Index h, std::size_t n_sites) {
  const Eigen::Index hh = h * h;
  Blocks blocks(n_sites);
  for (std::size_t i = 0; i < n_sites; ++i)
    blocks[i] = Eigen::Map<const ComplexMatrix>(v.data() + static_cast<Eigen::Index>(i) * hh, h, h);
  return blocks;
}

InvariantResult power_iteration(const TransitionFamily& family, const InvariantOptions& opts) {
  Blocks current = BlockState::maximally_mixed(family.h_dim(), family.num_sites()).blocks();
  for (std::size_t it = 0; it < opts.max_iters; ++it) {
    Blocks next = kernels::apply_map(family, current);
    const double dist = linalg::frobenius_distance(current, next);
    if (dist <= opts.tol) {
      return InvariantResult{BlockState(family.h_dim(), std::move(current)), 0, dist, it};
    }
    current = std::move(next);
  }
  throw NotFoundError("power iteration did not converge within " + std::to_string(opts.max_iters) + " iterations");
}

InvariantResult dense_eigen(const TransitionFamily& family, const InvariantOptions& opts) {
  const auto h = static_cast<Eigen::Index>(family.h_dim());
  const ComplexMatrix L = vectorized_map(family);
  const ComplexMatrix A = L - ComplexMatrix::Identity(L.rows(), L.cols());
  Eigen::BDCSVD<ComplexMatrix> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  Eigen::Index null_dim = 0;
  for (Eigen::Index k = sv.size() - 1; k >= 0 && sv(k) <= opts.eig_tol; --k) ++null_dim;
  if (null_dim == 0) throw NotFoundError("no eigenvalue of the walk map within tolerance of 1");

  const ComplexMatrix right = svd.matrixV().rightCols(null_dim);
  const ComplexMatrix left = svd.matrixU().rightCols(null_dim);
  const ComplexMatrix gram = left.adjoint() * right;
  const ComplexVector seed = vectorize(BlockState::maximally_mixed(family.h_dim(), family.num_sites()).blocks(), h);
  const ComplexVector fixed = right * gram.fullPivLu().solve(left.adjoint() * seed);

  Blocks blocks = unvectorize(fixed, h, family.num_sites());
  double tr = 0.0;
  for (auto& b : blocks) {
    b = linalg::clip_to_psd(b);
    tr += b.trace().real();
  }
  if (!(tr > 0.0)) throw NotFoundError("eigenvalue-1 eigenspace contains no state with positive trace");
  for (auto& b : blocks) b /= tr;

  const Blocks image = kernels::apply_map(family, blocks);
  const double residual = linalg::frobenius_distance(image, blocks);
  if (residual > opts.tol)
    throw NotFoundError("fixed point residual " + std::to_string(residual) + " exceeds tolerance");
  return InvariantResult{BlockState(family.h_dim(), std::move(blocks)), static_cast<std::size_t>(null_dim),
                         residual, 0};
}

}  // namespace

InvariantResult find_invariant_state(const TransitionFamily& family, const InvariantOptions& opts) {
  switch (opts.method) {
    case InvariantMethod::power_iteration:
      return power_iteration(family, opts);
    case InvariantMethod::dense_eigen:
      return dense_eigen(family, opts);
  }
  throw Error("unknown invariant-state method");
}

std::vector<double> check_invariance_chain(const TransitionFamily& family, const BlockState& state,
                                           std::size_t n_max) {
  check_state(family, state.h_dim(), state.num_sites());
  std::vector<double> residuals;
  residuals.reserve(n_max);
  Blocks current = state.blocks();
  for (std::size_t n = 1; n <= n_max; ++n) {
    current = kernels::apply_map(family, current);
    double worst = 0.0;
    for (std::size_t i = 0; i < current.size(); ++i)
      worst = std::max(worst, (current[i] - state.blocks()[i]).norm());
    residuals.push_back(worst);
  }
  return residuals;
}

}  // namespace oqrw
