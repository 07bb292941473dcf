#include <gtest/gtest.h>

#include <map>
#include <sstream>

#include "c2c/engine.hpp"
#include "c2c/error.hpp"
#include "c2c/scheduler.hpp"
#include "support.hpp"

using namespace c2c;

namespace {

VehicleTrace straight(const std::string& id, Tick t0, int n, double x0, double v, double y = 0.0) {
  VehicleTrace tr{id, {}};
  for (int k = 0; k < n; ++k) tr.samples.push_back({t0 + k, x0 + v * k, y, v});
  return tr;
}

TEST(Engine, SingleUserGetsTheWholeCell) {
  const std::vector<BaseStation> bs{{"bs", 0.0, 0.0}};
  const TraceSet tr{straight("car", 0, 10, 50.0, 0.0)};
  const auto out = run(SimConfig{}, tr, bs);
  ASSERT_EQ(out.results.size(), 10u);
  for (const auto& r : out.results) {
    EXPECT_EQ(r.rb_share, 100.0);
    EXPECT_EQ(r.serving_station, "bs");
    EXPECT_EQ(r.rate_bps, out.results.front().rate_bps);
    EXPECT_EQ(r.packages_generated, 1u);
    EXPECT_EQ(r.bits_sent, 112u * 8u);
    EXPECT_EQ(r.queue_bytes, 0u);
  }
  EXPECT_EQ(out.summary.packages_generated, 10u);
  EXPECT_EQ(out.summary.undelivered_packages, 0u);
}

TEST(Engine, CoLocatedVehiclesShareEqually) {
  const std::vector<BaseStation> bs{{"bs", 0.0, 0.0}};
  const TraceSet tr{straight("a", 0, 20, 300.0, 8.0), straight("b", 0, 20, 300.0, 8.0)};
  const auto out = run(SimConfig{}, tr, bs);
  ASSERT_EQ(out.results.size(), 40u);
  for (std::size_t i = 0; i < out.results.size(); i += 2) {
    EXPECT_EQ(out.results[i].t, out.results[i + 1].t);
    EXPECT_EQ(out.results[i].vehicle_id, "a");
    EXPECT_EQ(out.results[i + 1].vehicle_id, "b");
    EXPECT_EQ(out.results[i].rb_share, 50.0);
    EXPECT_EQ(out.results[i].rate_bps, out.results[i + 1].rate_bps);
  }
}

TEST(Engine, RateIsShareTimesRbRate) {
  SimConfig cfg;
  const auto stations = fixtures::strip_stations();
  RoadSpec road = cfg.road_spec();
  road.duration = 120;
  const auto traces = generate_traces(road, cfg.krauss);
  const auto out = run(cfg, traces, stations);
  std::map<std::pair<Tick, std::string>, double> cell_sum;
  using Key = std::pair<Tick, std::string>;
  for (const auto& r : out.results) {
    EXPECT_DOUBLE_EQ(r.rate_bps, r.rb_share * rb_rate(r.snr_db, r.speed, cfg.linkrate));
    EXPECT_LE(static_cast<double>(r.bits_sent), r.rate_bps);
    cell_sum[Key{r.t, r.serving_station}] += r.rb_share;
  }
  for (const auto& [key, sum] : cell_sum) EXPECT_NEAR(sum, 100.0, 1e-9);
}

TEST(Engine, ResultsOrderedByTickThenVehicle) {
  const std::vector<BaseStation> bs{{"bs", 0.0, 0.0}};
  const TraceSet tr{straight("b", 3, 5, 0, 1), straight("a", 0, 6, 0, 1), straight("c", 1, 2, 0, 1)};
  const auto out = run(SimConfig{}, tr, bs);
  for (std::size_t i = 1; i < out.results.size(); ++i) {
    const auto& p = out.results[i - 1];
    const auto& q = out.results[i];
    EXPECT_TRUE(p.t < q.t || (p.t == q.t && p.vehicle_id < q.vehicle_id));
  }
  EXPECT_EQ(out.results.size(), 13u);
}

TEST(Engine, QueueConservationOverFullRun) {
  SimConfig cfg = traffic_jam_config();
  cfg.cell.n_rb = 1;  // far below the 3312 B generated per tick
  cfg.cvim.n_extra = 200;
  RoadSpec road = cfg.road_spec();
  road.duration = 150;
  const auto traces = generate_traces(road, cfg.krauss);
  const auto out = run(cfg, traces, fixtures::strip_stations());
  std::map<std::string, std::uint64_t> generated, sent, last_queue;
  std::uint64_t max_queue = 0;
  for (const auto& r : out.results) {
    generated[r.vehicle_id] += r.bytes_generated;
    sent[r.vehicle_id] += r.bits_sent / 8;
    ASSERT_EQ(r.bits_sent % 8, 0u);
    // Whole packages only.
    ASSERT_EQ(generated[r.vehicle_id], sent[r.vehicle_id] + r.queue_bytes) << r.vehicle_id;
    last_queue[r.vehicle_id] = r.queue_bytes;
    max_queue = std::max(max_queue, r.queue_bytes);
  }
  std::uint64_t undelivered = 0;
  for (const auto& [id, q] : last_queue) undelivered += q;
  EXPECT_EQ(undelivered, out.summary.undelivered_bytes);
  EXPECT_GT(max_queue, 0u);  // the queue was actually exercised
}

TEST(Engine, AggregationWindowsFlushAtDeparture) {
  SimConfig cfg;
  cfg.cvim.aggregate_ticks = 4;
  const std::vector<BaseStation> bs{{"bs", 0.0, 0.0}};
  const TraceSet tr{straight("v", 0, 10, 0.0, 1.0)};
  const auto out = run(cfg, tr, bs);
  std::vector<Tick> flush_ticks;
  for (const auto& r : out.results) {
    if (r.packages_generated) flush_ticks.push_back(r.t);
  }
  EXPECT_EQ(flush_ticks, (std::vector<Tick>{3, 7, 9}));
  EXPECT_EQ(out.results[3].bytes_generated, 64u + 16u * 12u);
  EXPECT_EQ(out.results[9].bytes_generated, 64u + 16u * 6u);
}

TEST(Engine, LinearInResourceBlocks) {
  SimConfig a;
  RoadSpec road = a.road_spec();
  road.duration = 100;
  const auto traces = generate_traces(road, a.krauss);
  SimConfig b = a;
  b.cell.n_rb = 10;
  const auto ra = run(a, traces, fixtures::strip_stations()).results;
  const auto rb = run(b, traces, fixtures::strip_stations()).results;
  ASSERT_EQ(ra.size(), rb.size());
  for (std::size_t i = 0; i < ra.size(); ++i) {
    EXPECT_NEAR(rb[i].rate_bps, 0.1 * ra[i].rate_bps, 1e-9 * ra[i].rate_bps);
  }
}

TEST(Engine, Deterministic) {
  SimConfig cfg = traffic_jam_config();
  RoadSpec road = cfg.road_spec();
  road.duration = 80;
  const auto traces = generate_traces(road, cfg.krauss);
  std::ostringstream x, y, sx, sy;
  const auto a = run(cfg, traces, fixtures::strip_stations());
  const auto b = run(cfg, traces, fixtures::strip_stations());
  write_results_csv(x, a.results);
  write_results_csv(y, b.results);
  write_summary_json(sx, cfg, a.summary);
  write_summary_json(sy, cfg, b.summary);
  EXPECT_EQ(x.str(), y.str());
  EXPECT_EQ(sx.str(), sy.str());
}

TEST(Engine, RoundTripThroughResultsCsv) {
  const std::vector<BaseStation> bs{{"bs", 0.0, 0.0}};
  const TraceSet tr{straight("car", 0, 5, 50.0, 3.3)};
  const auto out = run(SimConfig{}, tr, bs);
  std::stringstream io;
  write_results_csv(io, out.results);
  const auto back = read_results_csv(io);
  ASSERT_EQ(back.size(), out.results.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].rate_bps, out.results[i].rate_bps);
    EXPECT_EQ(back[i].snr_db, out.results[i].snr_db);
    EXPECT_EQ(back[i].queue_bytes, out.results[i].queue_bytes);
  }
}

TEST(Engine, LoneVehicleInSecondCellSpikes) {
  // Ten vehicles crowd cell "a"; one of them drives on into cell "b" alone.
  const std::vector<BaseStation> bs{{"a", 0.0, 10.0}, {"b", 1000.0, 10.0}};
  TraceSet tr;
  for (int i = 0; i < 9; ++i) tr.push_back(straight("p" + std::to_string(i), 0, 60, 50.0, 0.0));
  tr.push_back(straight("z", 0, 60, 0.0, 20.0));
  const auto out = run(SimConfig{}, tr, bs);
  const auto series = vehicle_timeseries(out.results, "z");
  ASSERT_EQ(series.size(), 60u);
  double crowded = 0.0, alone = 0.0;
  for (const auto& r : out.results) {
    if (r.vehicle_id != "z") continue;
    if (r.serving_station == "a") crowded = std::max(crowded, r.rate_bps);
    if (r.serving_station == "b") alone = std::max(alone, r.rate_bps);
  }
  EXPECT_GT(alone, 5.0 * crowded);
}

TEST(Engine, TimeseriesProjection) {
  const std::vector<BaseStation> bs{{"bs", 0.0, 0.0}};
  const TraceSet tr{straight("car", 0, 300, 50.0, 0.0)};
  const auto out = run(SimConfig{}, tr, bs);
  const auto s = vehicle_timeseries(out.results, "car");
  ASSERT_EQ(s.size(), 300u);
  for (const auto& p : s) EXPECT_EQ(p.rate_bps, s.front().rate_bps);
  try {
    vehicle_timeseries(out.results, "nobody");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::lookup);
  }
}

TEST(Engine, InputErrors) {
  const std::vector<BaseStation> bs{{"bs", 0.0, 0.0}};
  const TraceSet ok{straight("car", 0, 3, 0.0, 1.0)};
  EXPECT_THROW(run(SimConfig{}, ok, std::vector<BaseStation>{}), Error);
  TraceSet gap = ok;
  gap[0].samples[2].t = 5;
  EXPECT_THROW(run(SimConfig{}, gap, bs), Error);
  TraceSet dup{ok[0], ok[0]};
  EXPECT_THROW(run(SimConfig{}, dup, bs), Error);
  EXPECT_TRUE(run(SimConfig{}, TraceSet{}, bs).results.empty());
}

TEST(Engine, LoopErrorsCarryTickAndVehicle) {
  SimConfig cfg;
  const std::vector<BaseStation> bs{{"bs", 0.0, 0.0}};
  TraceSet tr{straight("car", 0, 3, 0.0, 1.0)};
  tr[0].samples[1].x = INFINITY;
  try {
    run(cfg, tr, bs);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("tick 1"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("car"), std::string::npos) << e.what();
  }
}

TEST(Engine, SummaryJsonHasConfigEcho) {
  const std::vector<BaseStation> bs{{"bs", 0.0, 0.0}};
  const TraceSet tr{straight("car", 0, 3, 0.0, 1.0)};
  SimConfig cfg;
  cfg.scenario_label = "unit";
  const auto out = run(cfg, tr, bs);
  std::ostringstream js;
  write_summary_json(js, cfg, out.summary);
  EXPECT_NE(js.str().find("\"scenario_label\": \"unit\""), std::string::npos);
  EXPECT_NE(js.str().find("\"road.inflow\""), std::string::npos);
  EXPECT_NE(js.str().find("\"undelivered_bytes\""), std::string::npos);
}

}  // namespace
