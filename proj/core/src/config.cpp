#include "c2c/config.hpp"

#include <fstream>
#include <functional>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "c2c/error.hpp"
#include "text.hpp"

namespace c2c {

namespace {

struct Entry {
  const char* key;
  std::function<void(SimConfig&, std::string_view)> set;
  std::function<std::string(const SimConfig&)> get;
};

[[noreturn]] void bad_value(const std::string& key, std::string_view value, const char* expected) {
  throw Error(ErrorKind::config,
              "config key '" + key + "': expected " + expected + ", got '" + std::string(value) + "'");
}

double as_double(const std::string& key, std::string_view v) {
  const auto d = text::parse_double(v);
  if (!d) bad_value(key, v, "a number");
  return *d;
}

std::uint64_t as_uint(const std::string& key, std::string_view v) {
  const auto i = text::parse_int(v);
  if (!i || *i < 0) bad_value(key, v, "a non-negative integer");
  return static_cast<std::uint64_t>(*i);
}

bool as_bool(const std::string& key, std::string_view v) {
  v = text::trim(v);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  bad_value(key, v, "true or false");
}

template <typename Getter>
Entry number(const char* key, Getter field) {
  return {key,
          [key, field](SimConfig& c, std::string_view v) { field(c) = as_double(key, v); },
          [field](const SimConfig& c) {
            return text::format_double(field(c));
          }};
}

template <typename Getter>
Entry count(const char* key, Getter field) {
  return {key,
          [key, field](SimConfig& c, std::string_view v) {
            using T = std::remove_reference_t<decltype(field(c))>;
            const auto u = as_uint(key, v);
            if (u > static_cast<std::uint64_t>(std::numeric_limits<T>::max())) bad_value(key, v, "a smaller integer");
            field(c) = static_cast<T>(u);
          },
          [field](const SimConfig& c) {
            return std::to_string(field(c));
          }};
}

std::string join_channels(const std::set<std::uint16_t>& channels) {
  std::string out;
  for (auto id : channels) {
    if (!out.empty()) out += ',';
    out += std::to_string(id);
  }
  return out;
}

const std::vector<Entry>& registry() {
  static const std::vector<Entry> entries = [] {
    std::vector<Entry> e;
    e.push_back({"scenario.label",
                 [](SimConfig& c, std::string_view v) { c.scenario_label = std::string(text::trim(v)); },
                 [](const SimConfig& c) { return c.scenario_label; }});
    e.push_back(count("sim.seed", [](auto& c) -> auto& { return c.seed; }));

    e.push_back({"road.topology",
                 [](SimConfig& c, std::string_view v) {
                   c.road.topology = parse_topology(std::string(text::trim(v)));
                 },
                 [](const SimConfig& c) { return std::string(to_string(c.road.topology)); }});
    e.push_back(number("road.length", [](auto& c) -> auto& { return c.road.length; }));
    e.push_back(number("road.inflow", [](auto& c) -> auto& { return c.road.inflow; }));
    e.push_back(count("road.duration", [](auto& c) -> auto& { return c.road.duration; }));
    e.push_back({"road.prefill",
                 [](SimConfig& c, std::string_view v) { c.road.prefill = as_bool("road.prefill", v); },
                 [](const SimConfig& c) { return std::string(c.road.prefill ? "true" : "false"); }});
    e.push_back(number("road.zone_start", [](auto& c) -> auto& { return c.road.zone_start; }));
    e.push_back(number("road.zone_end", [](auto& c) -> auto& { return c.road.zone_end; }));
    e.push_back(number("road.zone_speed", [](auto& c) -> auto& { return c.road.zone_speed; }));

    e.push_back(number("krauss.a_max", [](auto& c) -> auto& { return c.krauss.a_max; }));
    e.push_back(number("krauss.b_max", [](auto& c) -> auto& { return c.krauss.b_max; }));
    e.push_back(number("krauss.v_max", [](auto& c) -> auto& { return c.krauss.v_max; }));
    e.push_back(number("krauss.sigma", [](auto& c) -> auto& { return c.krauss.sigma; }));
    e.push_back(number("krauss.tau", [](auto& c) -> auto& { return c.krauss.tau; }));
    e.push_back(number("krauss.min_gap", [](auto& c) -> auto& { return c.krauss.min_gap; }));
    e.push_back(number("krauss.veh_length", [](auto& c) -> auto& { return c.krauss.veh_length; }));
    e.push_back(number("krauss.speed_dev", [](auto& c) -> auto& { return c.krauss.speed_dev; }));

    e.push_back(number("radio.carrier_freq", [](auto& c) -> auto& { return c.radio.carrier_freq; }));
    e.push_back(number("radio.tx_power", [](auto& c) -> auto& { return c.radio.tx_power; }));
    e.push_back(number("radio.ue_gain", [](auto& c) -> auto& { return c.radio.ue_gain; }));
    e.push_back(number("radio.ue_height", [](auto& c) -> auto& { return c.radio.ue_height; }));
    e.push_back(number("radio.noise_figure", [](auto& c) -> auto& { return c.radio.noise_figure; }));
    e.push_back(number("radio.noise_power", [](auto& c) -> auto& { return c.radio.noise_power; }));
    e.push_back(number("radio.path_loss_offset",
                       [](auto& c) -> auto& { return c.radio.path_loss_offset; }));
    e.push_back(number("radio.bs_gain", [](auto& c) -> auto& { return c.bs_gain; }));
    e.push_back(number("radio.bs_height", [](auto& c) -> auto& { return c.bs_height; }));

    e.push_back(number("linkrate.rb_bandwidth", [](auto& c) -> auto& { return c.linkrate.rb_bandwidth; }));
    e.push_back(number("linkrate.attenuation_beta",
                       [](auto& c) -> auto& { return c.linkrate.attenuation_beta; }));
    e.push_back(number("linkrate.eta_max", [](auto& c) -> auto& { return c.linkrate.eta_max; }));
    e.push_back(number("linkrate.snr_min", [](auto& c) -> auto& { return c.linkrate.snr_min; }));
    e.push_back(number("linkrate.speed_penalty_at_vmax",
                       [](auto& c) -> auto& { return c.linkrate.speed_penalty_at_vmax; }));
    e.push_back(number("linkrate.v_ref", [](auto& c) -> auto& { return c.linkrate.v_ref; }));

    e.push_back(count("cell.n_rb", [](auto& c) -> auto& { return c.cell.n_rb; }));
    e.push_back(count("cell.rb_limit", [](auto& c) -> auto& { return c.cell.rb_limit; }));
    e.push_back({"scheduler.mode",
                 [](SimConfig& c, std::string_view v) {
                   c.cell.mode = parse_allocation_mode(std::string(text::trim(v)));
                 },
                 [](const SimConfig& c) { return std::string(to_string(c.cell.mode)); }});

    e.push_back(count("cvim.header_bytes", [](auto& c) -> auto& { return c.cvim.sizing.header_bytes; }));
    e.push_back(count("cvim.record_bytes", [](auto& c) -> auto& { return c.cvim.sizing.record_bytes; }));
    e.push_back(count("cvim.n_extra", [](auto& c) -> auto& { return c.cvim.n_extra; }));
    e.push_back(count("cvim.aggregate_ticks",
                      [](auto& c) -> auto& { return c.cvim.aggregate_ticks; }));
    e.push_back({"cvim.priority_channels",
                 [](SimConfig& c, std::string_view v) {
                   std::set<std::uint16_t> ids;
                   if (!text::trim(v).empty()) {
                     for (auto part : text::split(text::trim(v), ',')) {
                       const auto id = as_uint("cvim.priority_channels", part);
                       if (id > std::numeric_limits<std::uint16_t>::max()) {
                         bad_value("cvim.priority_channels", part, "a 16-bit channel id");
                       }
                       ids.insert(static_cast<std::uint16_t>(id));
                     }
                   }
                   c.cvim.priority_channels = std::move(ids);
                 },
                 [](const SimConfig& c) { return join_channels(c.cvim.priority_channels); }});
    e.push_back({"cvim.pseudonym_key",
                 [](SimConfig& c, std::string_view v) { c.cvim.pseudonym_key = std::string(text::trim(v)); },
                 [](const SimConfig& c) { return c.cvim.pseudonym_key; }});
    e.push_back({"cvim.owner",
                 [](SimConfig& c, std::string_view v) { c.cvim.owner = std::string(text::trim(v)); },
                 [](const SimConfig& c) { return c.cvim.owner; }});
    e.push_back({"cvim.privacy",
                 [](SimConfig& c, std::string_view v) {
                   c.cvim.privacy = parse_privacy_level(std::string(text::trim(v)));
                 },
                 [](const SimConfig& c) { return std::string(to_string(c.cvim.privacy)); }});

    e.push_back({"analysis.pooling",
                 [](SimConfig& c, std::string_view v) {
                   v = text::trim(v);
                   if (v == "tick") {
                     c.pooling = Pooling::tick;
                   } else if (v == "vehicle") {
                     c.pooling = Pooling::vehicle;
                   } else {
                     bad_value("analysis.pooling", v, "tick or vehicle");
                   }
                 },
                 [](const SimConfig& c) {
                   return std::string(c.pooling == Pooling::tick ? "tick" : "vehicle");
                 }});
    return e;
  }();
  return entries;
}

}  // namespace

void SimConfig::validate() const {
  road.validate();
  krauss.validate();
  radio.validate();
  linkrate.validate();
  if (!(bs_height > 1.0)) throw Error(ErrorKind::config, "radio.bs_height must exceed 1 m");
  if (cvim.aggregate_ticks < 1 || cvim.aggregate_ticks > 65) {
    throw Error(ErrorKind::config, "cvim.aggregate_ticks must lie in 1..65");
  }
  if (cvim.owner.size() > kOwnerBytes) {
    throw Error(ErrorKind::config, "cvim.owner must fit in 16 bytes");
  }
  if (cvim.n_extra + 3 > std::numeric_limits<std::uint16_t>::max()) {
    throw Error(ErrorKind::config, "cvim.n_extra is too large");
  }
}

RoadSpec SimConfig::road_spec() const {
  RoadSpec out = road;
  out.seed = seed;
  return out;
}

SimConfig free_flow_config() {
  SimConfig c;
  c.scenario_label = "free_flow";
  c.road.inflow = kFreeFlowInflow;
  return c;
}

SimConfig traffic_jam_config() {
  SimConfig c;
  c.scenario_label = "traffic_jam";
  c.road.inflow = kTrafficJamInflow;
  return c;
}

void set_config_value(const std::string& key, std::string_view value, SimConfig& config) {
  for (const auto& entry : registry()) {
    if (key == entry.key) {
      entry.set(config, value);
      return;
    }
  }
  throw Error(ErrorKind::config, "unknown config key '" + key + "'");
}

void apply_override(std::string_view assignment, SimConfig& config) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw Error(ErrorKind::config,
                "override '" + std::string(assignment) + "' is not of the form section.key=value");
  }
  const std::string key(text::trim(assignment.substr(0, eq)));
  set_config_value(key, assignment.substr(eq + 1), config);
}

void load_config(std::istream& in, SimConfig& config) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    view = text::trim(view);
    if (view.empty()) continue;
    if (view.find('=') == std::string_view::npos) {
      throw Error(ErrorKind::config, "config line " + std::to_string(line_no) +
                                         ": expected 'section.key = value'");
    }
    try {
      apply_override(view, config);
    } catch (const Error& e) {
      throw e.with_context("config line " + std::to_string(line_no));
    }
  }
}

void load_config_file(const std::string& path, SimConfig& config) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::config, "cannot open config file '" + path + "'");
  load_config(in, config);
}

std::vector<std::pair<std::string, std::string>> config_entries(const SimConfig& config) {
  std::vector<std::pair<std::string, std::string>> out;
  out.reserve(registry().size());
  for (const auto& entry : registry()) out.emplace_back(entry.key, entry.get(config));
  return out;
}

void write_config(std::ostream& out, const SimConfig& config) {
  for (const auto& [key, value] : config_entries(config)) out << key << " = " << value << '\n';
}

}  // namespace c2c
