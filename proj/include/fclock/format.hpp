#pragma once

#include <string>

namespace fclock {

/// Every real number in the text outputs goes through here: 17 significant
/// digits, which round-trips any double exactly.
std::string format_real(double value);

}  // namespace fclock
