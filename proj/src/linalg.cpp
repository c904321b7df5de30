#include "oqrw/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace oqrw::linalg {

double frobenius(const ComplexMatrix& m) { return m.norm(); }

double frobenius(std::span<const ComplexMatrix> blocks) {
  double sq = 0.0;
  for (const auto& b : blocks) sq += b.squaredNorm();
  return std::sqrt(sq);
}

double frobenius_distance(std::span<const ComplexMatrix> a, std::span<const ComplexMatrix> b) {
  if (a.size() != b.size()) throw DimensionError("block lists differ in length");
  double sq = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sq += (a[i] - b[i]).squaredNorm();
  return std::sqrt(sq);
}

bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      if (!std::isfinite(m(r, c).real()) || !std::isfinite(m(r, c).imag())) return false;
  return true;
}

double hermitian_defect(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double min_eigenvalue(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  const ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

ComplexMatrix psd_sqrt(const ComplexMatrix& m, double clip_tol) {
  const ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  Eigen::VectorXd ev = es.eigenvalues();
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    if (ev(k) < -clip_tol) throw InvalidStateError("matrix square root of a non-PSD block");
    ev(k) = ev(k) > 0.0 ? std::sqrt(ev(k)) : 0.0;
  }
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

ComplexMatrix clip_to_psd(const ComplexMatrix& m, double clip_tol) {
  const ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  Eigen::VectorXd ev = es.eigenvalues();
  bool clipped = false;
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    if (ev(k) < -clip_tol) {
      ev(k) = 0.0;
      clipped = true;
    }
  }
  if (!clipped) return h;
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

double projection_defect(const ComplexMatrix& p) {
  return std::max((p * p - p).norm(), (p - p.adjoint()).norm());
}

Complex trace(const ComplexMatrix& m) { return m.trace(); }

Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  // Tr(ab) = Σ_{rc} a_{rc} b_{cr}
  return a.transpose().cwiseProduct(b).sum();
}

bool is_exact_zero(const ComplexMatrix& m) {
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      if (m(r, c) != Complex{}) return false;
  return true;
}

}  // namespace oqrw::linalg
