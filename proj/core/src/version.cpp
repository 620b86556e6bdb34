#include "yousense/version.hpp"

namespace yousense {

std::string_view library_version() noexcept { return YOUSENSE_VERSION_STRING; }

}  // namespace yousense
