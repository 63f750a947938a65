#pragma once

#include "pcc/spectral.hpp"

namespace pcc::detail {

/// Thick-restart Lanczos with full reorthogonalisation, targeting the m
/// eigenvalues of largest magnitude. Requires m + 1 < op.rows().
EigenBasis lanczos_top_magnitude(const SymmetricOperator& op, Eigen::Index m,
                                 const EigenOptions& opts);

}  // namespace pcc::detail
