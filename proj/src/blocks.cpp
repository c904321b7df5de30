#include "oqrw/blocks.hpp"

#include "oqrw/linalg.hpp"

#include <cmath>
#include <string>

namespace oqrw {

namespace {

void check_block_dims(std::size_t h_dim, const Blocks& blocks, const char* what) {
  if (h_dim == 0) throw DimensionError(std::string(what) + ": h_dim must be positive");
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const auto& b = blocks[i];
    if (static_cast<std::size_t>(b.rows()) != h_dim || static_cast<std::size_t>(b.cols()) != h_dim)
      throw DimensionError(std::string(what) + ": block at site " + std::to_string(i) + " is " +
                           std::to_string(b.rows()) + "x" + std::to_string(b.cols()) + ", expected " +
                           std::to_string(h_dim) + "x" + std::to_string(h_dim));
    if (!linalg::all_finite(b))
      throw StructuralError(std::string(what) + ": non-finite entry at site " + std::to_string(i));
  }
}

}  // namespace

BlockState::BlockState(Unchecked, std::size_t h_dim, Blocks blocks, double trace_tol)
    : h_dim_(h_dim), blocks_(std::move(blocks)), trace_tol_(trace_tol) {
  check_block_dims(h_dim_, blocks_, "BlockState");
}

BlockState::BlockState(std::size_t h_dim, Blocks blocks, double trace_tol)
    : BlockState(Unchecked{}, h_dim, std::move(blocks), trace_tol) {
  if (!(trace_tol_ > 0.0)) throw InvalidStateError("trace_tol must be positive");
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    const auto& b = blocks_[i];
    if (linalg::hermitian_defect(b) > kHermitianTol)
      throw InvalidStateError("block at site " + std::to_string(i) + " is not Hermitian");
    if (linalg::min_eigenvalue(b) < -kPositivityTol)
      throw InvalidStateError("block at site " + std::to_string(i) + " is not positive semidefinite");
  }
  const double tr = trace();
  if (std::abs(tr - 1.0) > trace_tol_)
    throw InvalidStateError("total trace " + std::to_string(tr) + " differs from 1");
}

BlockState BlockState::trusted(std::size_t h_dim, Blocks blocks, double trace_tol) {
  return BlockState(Unchecked{}, h_dim, std::move(blocks), trace_tol);
}

BlockState BlockState::maximally_mixed(std::size_t h_dim, std::size_t n_sites) {
  const double w = 1.0 / static_cast<double>(h_dim * n_sites);
  const auto h = static_cast<Eigen::Index>(h_dim);
  return BlockState(h_dim, Blocks(n_sites, ComplexMatrix::Identity(h, h) * w));
}

BlockState BlockState::localized(std::size_t n_sites, SiteIndex site, const ComplexMatrix& sigma) {
  if (site.id >= n_sites) throw StructuralError("site index out of range");
  const auto h = sigma.rows();
  Blocks blocks(n_sites, ComplexMatrix::Zero(h, h));
  blocks[site.id] = sigma;
  return BlockState(static_cast<std::size_t>(h), std::move(blocks));
}

double BlockState::trace() const {
  double tr = 0.0;
  for (const auto& b : blocks_) tr += b.trace().real();
  return tr;
}

BlockObservable::BlockObservable(std::size_t h_dim, Blocks blocks, bool hermitian)
    : h_dim_(h_dim), blocks_(std::move(blocks)), hermitian_(hermitian) {
  check_block_dims(h_dim_, blocks_, "BlockObservable");
  if (hermitian_) {
    for (std::size_t i = 0; i < blocks_.size(); ++i)
      if (linalg::hermitian_defect(blocks_[i]) > BlockState::kHermitianTol)
        throw InvalidStateError("observable flagged Hermitian has non-Hermitian block at site " +
                                std::to_string(i));
  }
}

BlockObservable BlockObservable::identity(std::size_t h_dim, std::size_t n_sites) {
  const auto h = static_cast<Eigen::Index>(h_dim);
  return BlockObservable(h_dim, Blocks(n_sites, ComplexMatrix::Identity(h, h)), true);
}

BlockObservable BlockObservable::zero(std::size_t h_dim, std::size_t n_sites) {
  const auto h = static_cast<Eigen::Index>(h_dim);
  return BlockObservable(h_dim, Blocks(n_sites, ComplexMatrix::Zero(h, h)), true);
}

BlockObservable BlockObservable::at_site(std::size_t n_sites, SiteIndex site, const ComplexMatrix& op) {
  if (site.id >= n_sites) throw StructuralError("site index out of range");
  const auto h = op.rows();
  Blocks blocks(n_sites, ComplexMatrix::Zero(h, h));
  blocks[site.id] = op;
  return BlockObservable(static_cast<std::size_t>(h), std::move(blocks),
                         linalg::hermitian_defect(op) <= BlockState::kHermitianTol);
}

Complex BlockObservable::trace() const {
  Complex tr{};
  for (const auto& b : blocks_) tr += b.trace();
  return tr;
}

double BlockObservable::frobenius() const { return linalg::frobenius(blocks_); }

namespace {

void check_compatible(const BlockObservable& a, const BlockObservable& b) {
  if (a.h_dim() != b.h_dim() || a.num_sites() != b.num_sites())
    throw DimensionError("observables have different shapes");
}

}  // namespace

BlockObservable operator+(const BlockObservable& a, const BlockObservable& b) {
  check_compatible(a, b);
  Blocks out(a.num_sites());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.blocks_[i] + b.blocks_[i];
  return BlockObservable(a.h_dim(), std::move(out), a.hermitian() && b.hermitian());
}

BlockObservable operator-(const BlockObservable& a, const BlockObservable& b) {
  check_compatible(a, b);
  Blocks out(a.num_sites());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.blocks_[i] - b.blocks_[i];
  return BlockObservable(a.h_dim(), std::move(out), a.hermitian() && b.hermitian());
}

BlockObservable operator*(Complex s, const BlockObservable& a) {
  Blocks out(a.num_sites());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = s * a.blocks_[i];
  return BlockObservable(a.h_dim(), std::move(out), a.hermitian() && s.imag() == 0.0);
}

BlockProjection::BlockProjection(std::size_t h_dim, Blocks blocks)
    : obs_(h_dim, std::move(blocks), false) {
  for (std::size_t i = 0; i < obs_.num_sites(); ++i)
    if (linalg::projection_defect(obs_.blocks()[i]) > kProjectionTol)
      throw InvalidStateError("block at site " + std::to_string(i) + " is not an orthogonal projection");
}

BlockProjection BlockProjection::identity(std::size_t h_dim, std::size_t n_sites) {
  return BlockProjection(BlockObservable::identity(h_dim, n_sites));
}

BlockProjection BlockProjection::zero(std::size_t h_dim, std::size_t n_sites) {
  return BlockProjection(BlockObservable::zero(h_dim, n_sites));
}

BlockProjection BlockProjection::at_site(std::size_t h_dim, std::size_t n_sites, SiteIndex site,
                                         const ComplexMatrix& q) {
  if (static_cast<std::size_t>(q.rows()) != h_dim) throw DimensionError("projection block has wrong size");
  const auto h = static_cast<Eigen::Index>(h_dim);
  Blocks blocks(n_sites, ComplexMatrix::Zero(h, h));
  if (site.id >= n_sites) throw StructuralError("site index out of range");
  blocks[site.id] = q;
  return BlockProjection(h_dim, std::move(blocks));
}

BlockProjection BlockProjection::complement() const {
  const auto h = static_cast<Eigen::Index>(h_dim());
  Blocks out(num_sites());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = ComplexMatrix::Identity(h, h) - obs_.blocks()[i];
  return BlockProjection(BlockObservable(h_dim(), std::move(out), true));
}

}  // namespace oqrw
