#include "fclock/format.hpp"

#include <fmt/format.h>

namespace fclock {

std::string format_real(double value) { return fmt::format("{:.17g}", value); }

}  // namespace fclock
