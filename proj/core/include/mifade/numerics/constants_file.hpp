#pragma once

#include <string>

namespace mifade::numerics {

/// Source text of generated_constants.hpp, recomputed from scratch: the
/// capacity-series coefficients with their fit error and the digests of the
/// order-20 and order-500 Gauss-Hermite rules.
std::string render_constants_header();

}  // namespace mifade::numerics
