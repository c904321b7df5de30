#include "oqrw/closed_forms.hpp"

#include <cmath>

namespace oqrw::closed_form {

RingLocal ring_local(const BlockState& state, const ComplexMatrix& B, const ComplexMatrix& C, const ComplexMatrix& q,
                     SiteIndex k) {
  const std::size_t n = state.num_sites();
  if (n < 3) throw DimensionError("ring needs at least three sites");
  const SiteIndex next{(k.id + 1) % n};
  const SiteIndex prev{(k.id + n - 1) % n};
  RingLocal out;
  out.weight_next = state.block(next).trace().real();
  out.weight_prev = state.block(prev).trace().real();
  out.hit_next = (B * state.block(next) * B.adjoint() * q).trace().real();
  out.hit_prev = (C * state.block(prev) * C.adjoint() * q).trace().real();
  return out;
}

double ring_joint_tau(const RingLocal& local, std::size_t n) {
  const double m = static_cast<double>(n);
  return local.hit_next * std::pow(local.survive_next(), m) + local.hit_prev * std::pow(local.survive_prev(), m);
}

BlockObservable ring_e_tau(std::size_t n_sites, const ComplexMatrix& B, const ComplexMatrix& C,
                           const ComplexMatrix& q, SiteIndex k, const RingLocal& local, std::size_t n) {
  const auto h = B.rows();
  const double m = static_cast<double>(n + 1);
  Blocks blocks(n_sites, ComplexMatrix::Zero(h, h));
  blocks[(k.id + 1) % n_sites] += B.adjoint() * q * B * std::pow(local.survive_next(), m);
  blocks[(k.id + n_sites - 1) % n_sites] += C.adjoint() * q * C * std::pow(local.survive_prev(), m);
  return BlockObservable(static_cast<std::size_t>(h), std::move(blocks));
}

double two_site_invariant_tau(double phi0_complement, std::size_t n) {
  return std::pow(phi0_complement, static_cast<double>(n + 1));
}

double two_site_split_tau(double a_abs, double t, std::size_t n) {
  const double m = static_cast<double>(n);
  return 0.5 * std::pow(a_abs, 2.0 * m) * std::pow(t, m + 1.0);
}

double two_site_split_joint_tau(double a_abs, double t, std::size_t n) {
  const double m = static_cast<double>(n);
  // At n = 0 the word is e alone, which the site-2 half also charges.
  const double site2 = n == 0 ? 0.5 : 0.0;
  return 0.5 * std::pow(a_abs, 2.0 * m) * (1.0 - t) * std::pow(t, m) + site2;
}

BlockObservable two_site_split_e0_tau(double a_abs, double b_abs, double t, std::size_t n) {
  const double m = static_cast<double>(n);
  ComplexMatrix site1 = ComplexMatrix::Zero(2, 2);
  site1(0, 0) = std::pow(a_abs, 2.0 * m);
  site1(1, 1) = std::pow(b_abs, 2.0 * m);
  site1 *= std::pow(t, m + 1.0);
  return BlockObservable(2, Blocks{site1, ComplexMatrix::Zero(2, 2)});
}

double two_site_split_complement_word(double t, std::size_t m) {
  return 0.5 * (std::pow(1.0 - t, static_cast<double>(m)) + 1.0);
}

}  // namespace oqrw::closed_form
