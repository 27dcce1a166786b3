#include "fclock/scenario.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>

#include <fmt/format.h>

#include "fclock/error.hpp"
#include "fclock/format.hpp"

namespace fclock {
namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    out.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

double parse_real(std::string_view text, std::string_view key) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw InvalidParameter(fmt::format("{} expects a number (got '{}')", key, text));
  }
  return value;
}

std::uint64_t parse_u64(std::string_view text, std::string_view key) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw InvalidParameter(fmt::format("{} expects a non-negative integer (got '{}')", key, text));
  }
  return value;
}

std::string parse_id(std::string_view text, std::string_view key) {
  if (text.empty() || text.find_first_of(",:=#") != std::string_view::npos) {
    throw InvalidParameter(fmt::format("{} is not a valid identifier: '{}'", key, text));
  }
  return std::string(text);
}

// key=value pairs of one record; every key must be consumed.
class Fields {
public:
  Fields(std::string_view directive, std::span<const std::string_view> tokens) : directive_(directive) {
    for (auto tok : tokens) {
      const auto eq = tok.find('=');
      if (eq == std::string_view::npos || eq == 0) {
        throw InvalidParameter(fmt::format("expected key=value, got '{}'", tok));
      }
      if (!values_.emplace(tok.substr(0, eq), tok.substr(eq + 1)).second) {
        throw InvalidParameter(fmt::format("duplicate key '{}'", tok.substr(0, eq)));
      }
    }
  }

  std::optional<std::string_view> optional(std::string_view key) {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    auto v = it->second;
    values_.erase(it);
    return v;
  }

  std::string_view required(std::string_view key) {
    auto v = optional(key);
    if (!v) throw InvalidParameter(fmt::format("{} requires {}=", directive_, key));
    return *v;
  }

  void finish() const {
    if (!values_.empty()) {
      throw InvalidParameter(fmt::format("unknown key '{}' for {}", values_.begin()->first, directive_));
    }
  }

private:
  std::string_view directive_;
  std::map<std::string_view, std::string_view, std::less<>> values_;
};

Momentum parse_momentum(std::string_view text) {
  const auto parts = split(text, ',');
  if (parts.size() != 3) throw InvalidParameter(fmt::format("momentum expects px,py,pz (got '{}')", text));
  return {parse_real(parts[0], "momentum"), parse_real(parts[1], "momentum"), parse_real(parts[2], "momentum")};
}

class Parser {
public:
  Scenario parse(std::string_view text) {
    std::size_t line_no = 0;
    for (auto line : split(text, '\n')) {
      ++line_no;
      if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
      const auto tokens = tokenize(line);
      if (tokens.empty()) continue;
      try {
        record(tokens.front(), std::span(tokens).subspan(1));
      } catch (const ParseError&) {
        throw;
      } catch (const Error& e) {
        throw ParseError(line_no, e.what());
      }
    }
    return Scenario{std::move(builder_).build(), std::move(excitations_), run_, clock_};
  }

private:
  void record(std::string_view directive, std::span<const std::string_view> tokens) {
    Fields f(directive, tokens);
    if (directive == "units") {
      once(seen_units_, directive);
      builder_.set_units(UnitSystem::of(parse_unit_mode(f.required("mode"))));
    } else if (directive == "clock") {
      std::string id = parse_id(f.required("id"), "id");
      const double gamma = parse_real(f.required("gamma"), "gamma");
      const auto interaction = f.optional("interaction");
      const auto zeno = f.optional("zeno");
      const auto momentum = f.optional("momentum");
      f.finish();
      builder_.add_node(ClockNode(NodeId(std::move(id)), ReconfigurationEnergy(gamma),
                                  interaction ? parse_interaction_kind(*interaction) : InteractionKind::em,
                                  zeno ? parse_real(*zeno, "zeno") : 1.0,
                                  momentum ? parse_momentum(*momentum) : Momentum{}));
    } else if (directive == "channel") {
      std::string id = parse_id(f.required("id"), "id");
      std::string src = parse_id(f.required("src"), "src");
      std::string dst = parse_id(f.required("dst"), "dst");
      const double distance = parse_real(f.required("distance"), "distance");
      const double velocity = parse_real(f.required("velocity"), "velocity");
      const auto lifetime = f.optional("lifetime");
      const auto weight = f.optional("weight");
      f.finish();
      builder_.add_channel(SignalChannel(ChannelId(std::move(id)), NodeId(std::move(src)), NodeId(std::move(dst)),
                                         distance, velocity,
                                         lifetime ? std::optional(parse_real(*lifetime, "lifetime")) : std::nullopt,
                                         weight ? parse_real(*weight, "weight") : 1.0));
    } else if (directive == "cen") {
      std::string id = parse_id(f.required("id"), "id");
      std::vector<NodeId> members;
      for (auto m : split(f.required("members"), ',')) members.emplace_back(parse_id(m, "members"));
      const double coupling = parse_real(f.required("coupling"), "coupling");
      f.finish();
      builder_.add_cen(CENode(CenId(std::move(id)), std::move(members), coupling));
    } else if (directive == "sen") {
      SENPath path{PathId(parse_id(f.required("id"), "id")), {}};
      for (auto hop : split(f.required("hops"), ',')) {
        const auto colon = hop.find(':');
        if (colon == std::string_view::npos) {
          path.hops.push_back(SenHop{NodeId(parse_id(hop, "hops")), std::nullopt});
        } else {
          path.hops.push_back(SenHop{NodeId(parse_id(hop.substr(0, colon), "hops")),
                                     ChannelId(parse_id(hop.substr(colon + 1), "hops"))});
        }
      }
      f.finish();
      builder_.add_sen_path(std::move(path));
    } else if (directive == "excite") {
      NodeId node(parse_id(f.required("node"), "node"));
      const double time = parse_real(f.required("time"), "time");
      f.finish();
      builder_.peek().node_index(node);
      if (!std::isfinite(time) || time < 0.0) {
        throw InvalidParameter(fmt::format("excitation time must be non-negative (got {})", time));
      }
      excitations_.push_back(Excitation{std::move(node), time});
    } else if (directive == "stdclock") {
      once(seen_clock_, directive);
      const double period = parse_real(f.required("period"), "period");
      const auto origin = f.optional("origin");
      f.finish();
      clock_ = StandardClock(period, origin ? parse_real(*origin, "origin") : 0.0);
    } else if (directive == "run") {
      once(seen_run_, directive);
      RunConfig cfg;
      if (auto v = f.optional("mode")) cfg.mode = parse_run_mode(*v);
      if (auto v = f.optional("seed")) cfg.seed = parse_u64(*v, "seed");
      if (auto v = f.optional("max_events")) cfg.max_events = parse_u64(*v, "max_events");
      if (auto v = f.optional("until")) cfg.until = parse_real(*v, "until");
      f.finish();
      cfg.validate();
      run_ = cfg;
    } else {
      throw InvalidParameter(fmt::format("unknown directive '{}'", directive));
    }
  }

  static void once(bool& seen, std::string_view directive) {
    if (seen) throw InvalidParameter(fmt::format("{} may appear only once", directive));
    seen = true;
  }

  NetworkBuilder builder_;
  std::vector<Excitation> excitations_;
  RunConfig run_;
  StandardClock clock_;
  bool seen_units_ = false;
  bool seen_clock_ = false;
  bool seen_run_ = false;
};

}  // namespace

Scenario parse_scenario(std::string_view text) { return Parser().parse(text); }

std::string serialize_scenario(const Scenario& s) {
  std::ostringstream out;
  const Network& net = s.network;
  out << "units mode=" << to_string(net.units().mode()) << '\n';
  for (const auto& n : net.nodes()) {
    out << "clock id=" << n.id.str() << " gamma=" << format_real(n.gamma.value())
        << " interaction=" << to_string(n.interaction) << " zeno=" << format_real(n.zeno_factor);
    if (n.momentum != Momentum{}) {
      out << " momentum=" << format_real(n.momentum[0]) << ',' << format_real(n.momentum[1]) << ','
          << format_real(n.momentum[2]);
    }
    out << '\n';
  }
  for (const auto& c : net.channels()) {
    out << "channel id=" << c.id.str() << " src=" << c.source.str() << " dst=" << c.target.str()
        << " distance=" << format_real(c.distance) << " velocity=" << format_real(c.velocity);
    if (c.override_lifetime) out << " lifetime=" << format_real(*c.override_lifetime);
    if (c.weight != 1.0) out << " weight=" << format_real(c.weight);
    out << '\n';
  }
  for (const auto& cen : net.cens()) {
    out << "cen id=" << cen.id.str() << " members=";
    for (std::size_t i = 0; i < cen.members.size(); ++i) out << (i ? "," : "") << cen.members[i].str();
    out << " coupling=" << format_real(cen.coupling_strength) << '\n';
  }
  for (const auto& path : net.sen_paths()) {
    out << "sen id=" << path.id.str() << " hops=";
    for (std::size_t i = 0; i < path.hops.size(); ++i) {
      out << (i ? "," : "") << path.hops[i].node.str();
      if (path.hops[i].channel) out << ':' << path.hops[i].channel->str();
    }
    out << '\n';
  }
  for (const auto& e : s.excitations) out << "excite node=" << e.node.str() << " time=" << format_real(e.time) << '\n';
  out << "stdclock period=" << format_real(s.clock.period()) << " origin=" << format_real(s.clock.origin()) << '\n';
  out << "run mode=" << to_string(s.run.mode) << " seed=" << s.run.seed << " max_events=" << s.run.max_events;
  if (s.run.until) out << " until=" << format_real(*s.run.until);
  out << '\n';
  return out.str();
}

Scenario preset_to_scenario(PresetScenario preset) {
  const auto nodes = preset.network.nodes();
  const double root_tau = effective_lifetime(nodes.front(), preset.network.units()).value();
  return Scenario{std::move(preset.network), std::move(preset.excitations), RunConfig{},
                  StandardClock(root_tau, 0.0)};
}

}  // namespace fclock
