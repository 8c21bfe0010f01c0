// Generated by `mifade constants`. Do not edit by hand.
#pragma once

#include <cstdint>

#include "mifade/numerics/capacity_fit.hpp"

namespace mifade::numerics::generated {

inline constexpr CapacityCoefficients kCapacityCoefficients{
    0.99999642326648697,
    -0.49987403680713394,
    0.33179817781889004,
    -0.24073041526074848,
    0.16764704572795333,
    -0.095321436895271422,
    0.036083811110003042,
    -0.0064524204360639926,
};
inline constexpr double kCapacityFitMaxError = 3.210e-08;

inline constexpr std::uint64_t kHermite20Digest = 0x65d7456d3b38a8d1ull;
inline constexpr std::uint64_t kHermite500Digest = 0xf324303adf5da10bull;

}  // namespace mifade::numerics::generated
