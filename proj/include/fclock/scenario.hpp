#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "fclock/chronology.hpp"
#include "fclock/engine.hpp"
#include "fclock/network.hpp"

namespace fclock {

/// Everything needed for a run: the network (with its units), initial
/// excitations, run settings and the standard clock used for labeling.
struct Scenario {
  Network network;
  std::vector<Excitation> excitations;
  RunConfig run;
  StandardClock clock;
};

/// Line-oriented `directive key=value ...` records. Directives: units,
/// clock, channel, cen, sen, excite, stdclock, run. '#' starts a comment.
/// All errors are ParseError carrying the offending line.
///
///   units mode=natural
///   clock id=A gamma=1.0 interaction=em zeno=1.0
///   clock id=B gamma=2.0 interaction=strong
///   channel id=c1 src=A dst=B distance=2.0 velocity=1.0
///   excite node=A time=0.0
///   stdclock period=0.5 origin=0.0
///   run mode=deterministic seed=0 max_events=1000
Scenario parse_scenario(std::string_view text);

/// Canonical text form; parse_scenario(serialize_scenario(s)) reproduces s.
std::string serialize_scenario(const Scenario& scenario);

Scenario preset_to_scenario(PresetScenario preset);

}  // namespace fclock
