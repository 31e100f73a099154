#pragma once

#include <string>
#include <string_view>

namespace opus {

// Porter suffix-stripping stemmer (the original 1980 rule set) over
// lowercase ASCII words. Tokens containing non-letter characters are
// returned unchanged; the empty string maps to itself.
std::string stem(std::string_view token);

}  // namespace opus
