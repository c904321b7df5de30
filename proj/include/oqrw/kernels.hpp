#pragma once

// Block-wise application of the walk map and its adjoint. The parallel kernels
// split the work over output sites; each output block accumulates its terms in
// a fixed (site-ordered) sequence, so results are identical for every thread
// count. The *_serial variants are plain scatter loops kept as the reference
// implementation for tests and benchmarks.

#include "oqrw/core.hpp"
#include "oqrw/walk_model.hpp"

#include <span>

namespace oqrw::kernels {

/// out_i = Σ_j B^i_j in_j B^{i*}_j
Blocks apply_map(const TransitionFamily& family, std::span<const ComplexMatrix> in);
Blocks apply_map_serial(const TransitionFamily& family, std::span<const ComplexMatrix> in);

/// out_j = Σ_i B^{i*}_j in_i B^i_j
Blocks apply_adjoint(const TransitionFamily& family, std::span<const ComplexMatrix> in);
Blocks apply_adjoint_serial(const TransitionFamily& family, std::span<const ComplexMatrix> in);

void set_num_threads(int n);
int max_threads();

}  // namespace oqrw::kernels
