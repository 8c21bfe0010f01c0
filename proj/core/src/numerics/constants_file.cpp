#include "mifade/numerics/constants_file.hpp"

#include <fmt/format.h>

#include "mifade/numerics/capacity_fit.hpp"
#include "mifade/numerics/quadrature.hpp"

namespace mifade::numerics {

std::string render_constants_header() {
  const CapacityFit fit = fit_capacity_coefficients();
  std::string out;
  out += "// Generated by `mifade constants`. Do not edit by hand.\n";
  out += "#pragma once\n\n#include <cstdint>\n\n#include \"mifade/numerics/capacity_fit.hpp\"\n\n";
  out += "namespace mifade::numerics::generated {\n\n";
  out += "inline constexpr CapacityCoefficients kCapacityCoefficients{\n";
  for (double a : fit.coefficients) out += fmt::format("    {:.17g},\n", a);
  out += "};\n";
  out += fmt::format("inline constexpr double kCapacityFitMaxError = {:.3e};\n\n", fit.max_error);
  out += fmt::format("inline constexpr std::uint64_t kHermite20Digest = 0x{:016x}ull;\n",
                     rule_digest(shared_gauss_hermite_rule(20)));
  out += fmt::format("inline constexpr std::uint64_t kHermite500Digest = 0x{:016x}ull;\n\n",
                     rule_digest(shared_gauss_hermite_rule(500)));
  out += "}  // namespace mifade::numerics::generated\n";
  return out;
}

}  // namespace mifade::numerics
