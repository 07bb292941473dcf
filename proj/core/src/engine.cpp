#include "c2c/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>

#include <nlohmann/json.hpp>

#include "c2c/cvim.hpp"
#include "c2c/error.hpp"
#include "c2c/scheduler.hpp"

namespace c2c {

namespace {

struct VehicleSlot {
  const VehicleTrace* trace = nullptr;
  Tick first = 0;
  Tick last = 0;
  TransmitQueue queue;
  std::vector<ChannelRecord> window;
  Tick window_start = 0;
};

void check_traces(std::span<const VehicleTrace> traces) {
  std::vector<const std::string*> ids;
  ids.reserve(traces.size());
  for (const auto& trace : traces) {
    ids.push_back(&trace.vehicle_id);
    for (std::size_t i = 1; i < trace.samples.size(); ++i) {
      if (trace.samples[i].t != trace.samples[i - 1].t + 1) {
        throw Error(ErrorKind::validation,
                    "vehicle " + trace.vehicle_id + ": samples are not consecutive 1 Hz ticks");
      }
    }
  }
  std::sort(ids.begin(), ids.end(), [](auto* a, auto* b) { return *a < *b; });
  const auto dup = std::adjacent_find(ids.begin(), ids.end(), [](auto* a, auto* b) { return *a == *b; });
  if (dup != ids.end()) {
    throw Error(ErrorKind::validation, "vehicle " + **dup + " appears in more than one trace");
  }
}

}  // namespace

RunOutput run(const SimConfig& config, std::span<const VehicleTrace> traces,
              std::span<const BaseStation> stations) {
  const ShannonRateModel model(config.linkrate);
  return run(config, traces, stations, model);
}

RunOutput run(const SimConfig& config, std::span<const VehicleTrace> traces,
              std::span<const BaseStation> stations, const RateModel& model) {
  config.validate();
  if (stations.empty()) throw Error(ErrorKind::config, "station set is empty");
  check_traces(traces);

  std::map<std::string, const BaseStation*> station_by_id;
  for (const auto& s : stations) station_by_id.emplace(s.station_id, &s);

  PackageContext ctx{config.cvim.sizing, Pseudonymizer(config.cvim.pseudonym_key),
                     config.cvim.owner, config.cvim.privacy};
  const auto channels = default_channel_set(config.cvim.n_extra);
  TransmitQueue::Predicate priority;
  if (!config.cvim.priority_channels.empty()) {
    priority = channel_allowlist(config.cvim.priority_channels);
  }

  std::vector<VehicleSlot> slots;
  slots.reserve(traces.size());
  for (const auto& trace : traces) {
    if (trace.samples.empty()) continue;
    slots.push_back(VehicleSlot{&trace, trace.samples.front().t, trace.samples.back().t,
                                TransmitQueue(trace.vehicle_id, priority), {}, 0});
  }
  std::sort(slots.begin(), slots.end(), [](const VehicleSlot& a, const VehicleSlot& b) {
    return a.trace->vehicle_id < b.trace->vehicle_id;
  });

  RunOutput out;
  RunSummary& sum = out.summary;
  sum.scenario_label = config.scenario_label;
  sum.vehicles = slots.size();
  if (slots.empty()) return out;

  Tick t_begin = std::numeric_limits<Tick>::max();
  Tick t_end = std::numeric_limits<Tick>::min();
  for (const auto& s : slots) {
    t_begin = std::min(t_begin, s.first);
    t_end = std::max(t_end, s.last);
  }
  sum.first_tick = t_begin;
  sum.last_tick = t_end;

  const std::size_t n_rb = config.cell.effective_rb();
  std::vector<std::size_t> present;
  std::vector<VehiclePosition> positions;
  std::map<std::string, std::size_t> row_of;  // vehicle_id -> index into tick rows
  double rate_sum = 0.0;

  for (Tick t = t_begin; t <= t_end; ++t) {
    present.clear();
    positions.clear();
    for (std::size_t i = 0; i < slots.size(); ++i) {
      const auto& s = slots[i];
      if (t < s.first || t > s.last) continue;
      const auto& sample = s.trace->samples[static_cast<std::size_t>(t - s.first)];
      present.push_back(i);
      positions.push_back({s.trace->vehicle_id, sample.x, sample.y});
    }
    if (present.empty()) continue;

    std::vector<TickResult> rows(present.size());
    row_of.clear();
    for (std::size_t k = 0; k < present.size(); ++k) {
      row_of.emplace(positions[k].vehicle_id, k);
    }

    const auto cells = build_cells(t, positions, stations, config.radio);
    for (const auto& cell : cells) {
      const BaseStation& station = *station_by_id.at(cell.station_id);
      const auto alloc = rr_allocate(cell, n_rb, config.cell.mode, static_cast<std::uint64_t>(t));
      for (const auto& share : alloc.shares) {
        const std::size_t k = row_of.at(share.vehicle_id);
        VehicleSlot& slot = slots[present[k]];
        const auto& sample = slot.trace->samples[static_cast<std::size_t>(t - slot.first)];
        TickResult& r = rows[k];
        try {
          r.t = t;
          r.vehicle_id = share.vehicle_id;
          r.serving_station = cell.station_id;
          r.speed = sample.speed;
          r.snr_db = snr(sample.x, sample.y, station, config.radio).snr;
          r.rb_share = share.share;
          r.rate_bps = vehicle_rate(share.share, r.snr_db, sample.speed, model);

          if (slot.window.empty()) slot.window_start = t;
          auto records = tick_records({share.vehicle_id, t, sample.x, sample.y, sample.speed}, channels);
          slot.window.insert(slot.window.end(), records.begin(), records.end());
          const Tick span = t - slot.window_start + 1;
          if (span >= static_cast<Tick>(config.cvim.aggregate_ticks) || t == slot.last) {
            auto pkg = package(share.vehicle_id, slot.window_start, std::move(slot.window), ctx,
                               static_cast<std::uint32_t>(span));
            slot.window = {};
            r.packages_generated = 1;
            r.bytes_generated = pkg.payload_bytes;
            slot.queue.push(std::move(pkg));
          }

          const double capacity = std::floor(r.rate_bps);
          const auto sent = slot.queue.try_transmit(static_cast<std::uint64_t>(capacity));
          r.bits_sent = sent.sent_bits;
          r.packages_sent = static_cast<std::uint32_t>(sent.sent.size());
          r.queue_bytes = slot.queue.queued_bytes();
          r.queue_packages = slot.queue.size();
        } catch (const Error& e) {
          throw e.with_context("tick " + std::to_string(t) + ", vehicle " + share.vehicle_id);
        }
      }
    }

    for (auto& r : rows) {
      if (r.vehicle_id.empty()) {
        throw Error(ErrorKind::integrity, "tick " + std::to_string(t) + ": vehicle left unscheduled");
      }
      sum.packages_generated += r.packages_generated;
      sum.packages_sent += r.packages_sent;
      sum.bytes_generated += r.bytes_generated;
      sum.bytes_sent += r.bits_sent / 8;
      rate_sum += r.rate_bps;
      out.results.push_back(std::move(r));
    }
    for (std::size_t i : present) {
      auto& s = slots[i];
      if (s.last == t) {
        sum.undelivered_packages += s.queue.size();
        sum.undelivered_bytes += s.queue.queued_bytes();
      }
    }
  }

  sum.rows = out.results.size();
  sum.mean_rate_bps = sum.rows > 0 ? rate_sum / static_cast<double>(sum.rows) : 0.0;
  if (sum.bytes_generated != sum.bytes_sent + sum.undelivered_bytes) {
    throw Error(ErrorKind::integrity, "byte accounting does not balance");
  }
  return out;
}

std::vector<TimeseriesPoint> vehicle_timeseries(std::span<const TickResult> results,
                                                const std::string& vehicle_id) {
  std::vector<TimeseriesPoint> out;
  for (const auto& r : results) {
    if (r.vehicle_id == vehicle_id) out.push_back({r.t, r.snr_db, r.rate_bps});
  }
  if (out.empty()) throw Error(ErrorKind::lookup, "unknown vehicle '" + vehicle_id + "'");
  std::stable_sort(out.begin(), out.end(),
                   [](const TimeseriesPoint& a, const TimeseriesPoint& b) { return a.t < b.t; });
  return out;
}

void write_summary_json(std::ostream& out, const SimConfig& config, const RunSummary& summary) {
  nlohmann::ordered_json j;
  j["scenario_label"] = summary.scenario_label;
  j["seed"] = config.seed;
  j["first_tick"] = summary.first_tick;
  j["last_tick"] = summary.last_tick;
  j["vehicles"] = summary.vehicles;
  j["rows"] = summary.rows;
  j["mean_rate_bps"] = summary.mean_rate_bps;
  j["packages_generated"] = summary.packages_generated;
  j["packages_sent"] = summary.packages_sent;
  j["bytes_generated"] = summary.bytes_generated;
  j["bytes_sent"] = summary.bytes_sent;
  j["undelivered_packages"] = summary.undelivered_packages;
  j["undelivered_bytes"] = summary.undelivered_bytes;
  auto& echo = j["config"];
  echo = nlohmann::ordered_json::object();
  for (const auto& [key, value] : config_entries(config)) echo[key] = value;
  out << j.dump(2) << '\n';
}

}  // namespace c2c
