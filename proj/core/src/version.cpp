#include "mifade/version.hpp"

namespace mifade {

std::string_view version() { return MIFADE_VERSION; }

}  // namespace mifade
