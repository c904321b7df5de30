#pragma once

#include "oqrw/core.hpp"

#include <span>

namespace oqrw::linalg {

double frobenius(const ComplexMatrix& m);

/// Frobenius norm of the block-diagonal operator built from `blocks`.
double frobenius(std::span<const ComplexMatrix> blocks);

double frobenius_distance(std::span<const ComplexMatrix> a, std::span<const ComplexMatrix> b);

bool all_finite(const ComplexMatrix& m);

/// Largest entry of |m - m*|.
double hermitian_defect(const ComplexMatrix& m);

/// Smallest eigenvalue of the Hermitian part of `m`.
double min_eigenvalue(const ComplexMatrix& m);

/// Principal square root of a PSD matrix through its eigendecomposition.
/// Eigenvalues in [-clip_tol, 0) are clipped to zero; anything more negative throws.
ComplexMatrix psd_sqrt(const ComplexMatrix& m, double clip_tol = 1e-12);

/// Hermitize, clip eigenvalues below `clip_tol` (negative) to zero.
ComplexMatrix clip_to_psd(const ComplexMatrix& m, double clip_tol = 1e-12);

/// Max of ‖p² − p‖_F and ‖p − p*‖_F.
double projection_defect(const ComplexMatrix& p);

Complex trace(const ComplexMatrix& m);

/// Tr(a b) without forming the product.
Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& b);

bool is_exact_zero(const ComplexMatrix& m);

}  // namespace oqrw::linalg
