#ifndef YOUSENSE_VERSION_HPP
#define YOUSENSE_VERSION_HPP

#include <string_view>

namespace yousense {

[[nodiscard]] std::string_view library_version() noexcept;

}  // namespace yousense

#endif  // YOUSENSE_VERSION_HPP
