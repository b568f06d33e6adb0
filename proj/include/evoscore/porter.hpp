#pragma once

#include <string>
#include <string_view>

namespace evoscore {

// Porter's suffix-stripping algorithm (the original 1980 rule set).
// Expects a lowercase alphabetic token; tokens shorter than three
// characters or containing non-alphabetic characters pass through
// unchanged.
std::string porter_stem(std::string_view token);

}  // namespace evoscore
