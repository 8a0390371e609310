#pragma once

#include <string>
#include <string_view>

namespace cosmix {

// Porter (1980) suffix-stripping stem of a lowercase alphabetic token.
// Tokens of length <= 2 are returned unchanged.
std::string porter_stem(std::string_view token);

}  // namespace cosmix
