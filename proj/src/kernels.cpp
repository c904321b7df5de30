#include "oqrw/kernels.hpp"

#include <omp.h>

namespace oqrw::kernels {

namespace {

void check_input(const TransitionFamily& family, std::span<const ComplexMatrix> in) {
  if (in.size() != family.num_sites())
    throw DimensionError("block list has " + std::to_string(in.size()) + " sites, walk has " +
                         std::to_string(family.num_sites()));
  const auto h = static_cast<Eigen::Index>(family.h_dim());
  for (const auto& b : in)
    if (b.rows() != h || b.cols() != h)
      throw DimensionError("block dimension does not match the walk's h_dim");
}

}  // namespace

Blocks apply_map(const TransitionFamily& family, std::span<const ComplexMatrix> in) {
  check_input(family, in);
  const auto n = static_cast<std::ptrdiff_t>(family.num_sites());
  const auto h = static_cast<Eigen::Index>(family.h_dim());
  Blocks out(family.num_sites());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    ComplexMatrix acc = ComplexMatrix::Zero(h, h);
    for (const Arc& arc : family.incoming(SiteIndex{static_cast<std::size_t>(i)})) {
      acc.noalias() += arc.op * in[arc.site.id] * arc.op.adjoint();
    }
    out[i] = std::move(acc);
  }
  return out;
}

Blocks apply_map_serial(const TransitionFamily& family, std::span<const ComplexMatrix> in) {
  check_input(family, in);
  const auto h = static_cast<Eigen::Index>(family.h_dim());
  Blocks out(family.num_sites(), ComplexMatrix::Zero(h, h));
  for (std::size_t j = 0; j < family.num_sites(); ++j) {
    for (const Arc& arc : family.outgoing(SiteIndex{j})) {
      const ComplexMatrix term = arc.op * in[j] * arc.op.adjoint();
      out[arc.site.id] += term;
    }
  }
  return out;
}

Blocks apply_adjoint(const TransitionFamily& family, std::span<const ComplexMatrix> in) {
  check_input(family, in);
  const auto n = static_cast<std::ptrdiff_t>(family.num_sites());
  const auto h = static_cast<Eigen::Index>(family.h_dim());
  Blocks out(family.num_sites());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < n; ++j) {
    ComplexMatrix acc = ComplexMatrix::Zero(h, h);
    for (const Arc& arc : family.outgoing(SiteIndex{static_cast<std::size_t>(j)})) {
      acc.noalias() += arc.op.adjoint() * in[arc.site.id] * arc.op;
    }
    out[j] = std::move(acc);
  }
  return out;
}

Blocks apply_adjoint_serial(const TransitionFamily& family, std::span<const ComplexMatrix> in) {
  check_input(family, in);
  const auto h = static_cast<Eigen::Index>(family.h_dim());
  Blocks out(family.num_sites(), ComplexMatrix::Zero(h, h));
  for (std::size_t i = 0; i < family.num_sites(); ++i) {
    for (const Arc& arc : family.incoming(SiteIndex{i})) {
      const ComplexMatrix term = arc.op.adjoint() * in[i] * arc.op;
      out[arc.site.id] += term;
    }
  }
  return out;
}

void set_num_threads(int n) {
  if (n > 0) omp_set_num_threads(n);
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace oqrw::kernels
