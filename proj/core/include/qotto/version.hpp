// Build identification string (git describe at configure time).
#pragma once

#include <string_view>

namespace qotto {

std::string_view version();

}  // namespace qotto
