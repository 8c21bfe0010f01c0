#pragma once

#include <string_view>

namespace mifade {

std::string_view version();

}  // namespace mifade
