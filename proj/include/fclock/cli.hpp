#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fclock::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitUsage = 2;

/// Entry point behind the fclock binary. args excludes the program name.
///
///   run       simulate a scenario, write events/timeline/arrows/summary
///   validate  parse and check a scenario, report cycles; writes nothing
///   bigbang   print the root-clock preset as a scenario
///   unify     print unification scalars for four lifetimes and tau_u
int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fclock::cli
