#include "c2c/trace_io.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <string>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "c2c/error.hpp"
#include "text.hpp"

namespace c2c {

namespace {

constexpr std::string_view kCsvHeader = "vehicle_id,t,x,y,speed";

struct Located {
  TraceSample sample;
  std::string where;  // "line 3" or an element path
};

class TraceAssembler {
 public:
  void add(const std::string& vehicle_id, const TraceSample& sample, std::string where) {
    if (sample.speed < 0.0) {
      throw Error(ErrorKind::validation,
                  "negative speed for vehicle " + vehicle_id + " at " + where);
    }
    by_vehicle_[vehicle_id].push_back({sample, std::move(where)});
  }

  TraceSet finish() {
    TraceSet out;
    out.reserve(by_vehicle_.size());
    for (auto& [id, rows] : by_vehicle_) {
      std::stable_sort(rows.begin(), rows.end(), [](const Located& a, const Located& b) {
        return a.sample.t < b.sample.t;
      });
      VehicleTrace trace{id, {}};
      trace.samples.reserve(rows.size());
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i > 0) {
          const Tick prev = rows[i - 1].sample.t;
          const Tick cur = rows[i].sample.t;
          if (cur == prev) {
            // stable_sort keeps input order, so rows[i] is the later occurrence.
            const auto& dup = rows[i];
            throw Error(ErrorKind::validation, "duplicate sample for vehicle " + id +
                                                   " at t=" + std::to_string(cur) +
                                                   " (" + dup.where + ")");
          }
          if (cur != prev + 1) {
            throw Error(ErrorKind::validation,
                        "vehicle " + id + " is not sampled at 1 Hz: t=" +
                            std::to_string(prev) + " is followed by t=" + std::to_string(cur));
          }
        }
        trace.samples.push_back(rows[i].sample);
      }
      out.push_back(std::move(trace));
    }
    return out;
  }

 private:
  std::map<std::string, std::vector<Located>> by_vehicle_;
};

std::string line_ref(std::size_t line) { return "line " + std::to_string(line); }

}  // namespace

TraceSet parse_trace_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) {
    throw Error(ErrorKind::parse, "trace CSV: missing header (expected '" +
                                      std::string(kCsvHeader) + "')");
  }
  ++line_no;
  if (!line.empty() && static_cast<unsigned char>(line[0]) == 0xEF) {
    // UTF-8 byte order mark
    if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  }
  if (text::trim(line) != kCsvHeader) {
    throw Error(ErrorKind::parse, "trace CSV line 1: bad header '" + line + "' (expected '" +
                                      std::string(kCsvHeader) + "')");
  }

  TraceAssembler assembler;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    const auto fields = text::split(text::trim(line), ',');
    auto fail = [&](const std::string& why) {
      throw Error(ErrorKind::parse, "trace CSV line " + std::to_string(line_no) + ": " + why);
    };
    if (fields.size() != 5) fail("expected 5 fields, got " + std::to_string(fields.size()));
    const auto id = text::trim(fields[0]);
    if (id.empty()) fail("empty vehicle_id");
    const auto t = text::parse_int(fields[1]);
    if (!t || *t < 0) fail("t must be a non-negative integer");
    const auto x = text::parse_double(fields[2]);
    const auto y = text::parse_double(fields[3]);
    const auto speed = text::parse_double(fields[4]);
    if (!x || !y || !speed) fail("x, y and speed must be finite numbers");
    assembler.add(std::string(id), TraceSample{*t, *x, *y, *speed}, line_ref(line_no));
  }
  return assembler.finish();
}

void emit_trace_csv(std::ostream& out, std::span<const VehicleTrace> traces) {
  out << kCsvHeader << '\n';
  for (const auto& trace : traces) {
    for (const auto& s : trace.samples) {
      out << trace.vehicle_id << ',' << s.t << ',' << text::format_double(s.x) << ','
          << text::format_double(s.y) << ',' << text::format_double(s.speed) << '\n';
    }
  }
}

TraceSet parse_fcd_xml(std::istream& in) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_xml(in, tree);
  } catch (const pt::xml_parser_error& e) {
    throw Error(ErrorKind::parse, std::string("FCD XML: ") + e.what());
  }

  TraceAssembler assembler;
  for (const auto& [root_name, root] : tree) {
    if (root_name == "<xmlcomment>" || root_name == "<xmlattr>") continue;
    std::size_t step_index = 0;
    for (const auto& [step_name, step] : root) {
      if (step_name != "timestep") continue;
      ++step_index;
      const std::string step_path =
          root_name + "/timestep[" + std::to_string(step_index) + "]";
      auto attr = [](const pt::ptree& node, const char* key, const std::string& path) {
        auto value = node.get_optional<std::string>(std::string("<xmlattr>.") + key);
        if (!value) {
          throw Error(ErrorKind::parse, "FCD XML: " + path + " is missing attribute '" + key + "'");
        }
        return *value;
      };
      auto number = [&](const pt::ptree& node, const char* key, const std::string& path) {
        const auto raw = attr(node, key, path);
        const auto value = text::parse_double(raw);
        if (!value) {
          throw Error(ErrorKind::parse, "FCD XML: " + path + " attribute '" + key +
                                            "' is not a number: '" + raw + "'");
        }
        return *value;
      };

      const double time = number(step, "time", step_path);
      const double whole = std::round(time);
      if (time < 0.0 || std::abs(time - whole) > 1e-9) {
        throw Error(ErrorKind::validation, "FCD XML: " + step_path + " time=" + attr(step, "time", step_path) +
                                               " is not a whole non-negative second");
      }
      std::size_t veh_index = 0;
      for (const auto& [child_name, vehicle] : step) {
        if (child_name != "vehicle") continue;
        ++veh_index;
        const std::string path = step_path + "/vehicle[" + std::to_string(veh_index) + "]";
        const std::string id = attr(vehicle, "id", path);
        const TraceSample sample{static_cast<Tick>(whole), number(vehicle, "x", path),
                                 number(vehicle, "y", path), number(vehicle, "speed", path)};
        assembler.add(id, sample, path);
      }
    }
  }
  return assembler.finish();
}

}  // namespace c2c
