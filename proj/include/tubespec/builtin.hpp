#pragma once

#include "tubespec/io.hpp"
#include "tubespec/operator.hpp"

#include <string>
#include <vector>

namespace tubespec {

/// Reference operators "E1".."E6" and "liouville".
std::vector<std::string> builtin_names();
json builtin_operator_json(const std::string& name);
OperatorSpec builtin_operator(const std::string& name);

/// sum_{k=1}^{4} 10^{-k!}, to 50 significant digits.
inline constexpr const char* kLiouvilleAlpha = "0.11000100000000000000000100000000000000000000000000";

}  // namespace tubespec
