#ifndef MAGNOENT_VERSION_HPP
#define MAGNOENT_VERSION_HPP

#include <string_view>

namespace magnoent {
inline constexpr std::string_view kVersion = "0.1.0";
}

#endif
