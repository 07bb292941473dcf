#include <gtest/gtest.h>

#include <sstream>

#include "c2c/error.hpp"
#include "c2c/rng.hpp"
#include "c2c/trace_io.hpp"

using c2c::ErrorKind;

namespace {

const std::string kHeader = "vehicle_id,t,x,y,speed\n";

c2c::TraceSet parse_csv(const std::string& body) {
  std::istringstream in(body);
  return c2c::parse_trace_csv(in);
}

c2c::TraceSet parse_xml(const std::string& body) {
  std::istringstream in(body);
  return c2c::parse_fcd_xml(in);
}

ErrorKind kind_of(auto&& fn, std::string* message = nullptr) {
  try {
    fn();
  } catch (const c2c::Error& e) {
    if (message) *message = e.what();
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::integrity;
}

TEST(TraceCsv, MinimalFile) {
  const auto t = parse_csv(kHeader + "a,0,0,0,10\na,1,10,0,10\n");
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t[0].vehicle_id, "a");
  ASSERT_EQ(t[0].samples.size(), 2u);
  EXPECT_EQ(t[0].samples[1], (c2c::TraceSample{1, 10.0, 0.0, 10.0}));
}

TEST(TraceCsv, DuplicateSampleReportsLine3) {
  std::string msg;
  EXPECT_EQ(kind_of([&] { parse_csv(kHeader + "a,0,0,0,10\na,0,0,0,10\n"); }, &msg),
            ErrorKind::validation);
  EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
}

TEST(TraceCsv, HeaderOnlyIsEmpty) { EXPECT_TRUE(parse_csv(kHeader).empty()); }

TEST(TraceCsv, RowsInAnyOrder) {
  const auto t = parse_csv(kHeader + "b,1,1,0,1\na,5,0,0,0\nb,0,0,0,1\n");
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t[0].vehicle_id, "a");
  EXPECT_EQ(t[1].samples[0].t, 0);
  EXPECT_EQ(t[1].samples[1].t, 1);
}

TEST(TraceCsv, MalformedRowCarriesLineNumber) {
  std::string msg;
  EXPECT_EQ(kind_of([&] { parse_csv(kHeader + "a,0,0,0,10\na,1,zz,0,10\n"); }, &msg),
            ErrorKind::parse);
  EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
  EXPECT_EQ(kind_of([&] { parse_csv(kHeader + "a,0,0,0\n"); }), ErrorKind::parse);
  EXPECT_EQ(kind_of([&] { parse_csv("id,t,x,y,v\n"); }), ErrorKind::parse);
}

TEST(TraceCsv, GapInGridNamesVehicle) {
  std::string msg;
  EXPECT_EQ(kind_of([&] { parse_csv(kHeader + "car9,0,0,0,1\ncar9,2,2,0,1\n"); }, &msg),
            ErrorKind::validation);
  EXPECT_NE(msg.find("car9"), std::string::npos) << msg;
}

TEST(TraceCsv, NegativeSpeedRejected) {
  EXPECT_EQ(kind_of([&] { parse_csv(kHeader + "a,0,0,0,-1\n"); }), ErrorKind::validation);
}

TEST(TraceCsv, RoundTripRandomTraces) {
  c2c::Rng rng(11);
  for (int round = 0; round < 50; ++round) {
    c2c::TraceSet traces;
    const int vehicles = 1 + static_cast<int>(rng.uniform() * 6);
    for (int v = 0; v < vehicles; ++v) {
      c2c::VehicleTrace tr{"veh" + std::to_string(v), {}};
      const auto t0 = static_cast<c2c::Tick>(rng.uniform() * 100);
      const int n = 1 + static_cast<int>(rng.uniform() * 20);
      for (int k = 0; k < n; ++k) {
        tr.samples.push_back({t0 + k, (rng.uniform() - 0.5) * 1e5, (rng.uniform() - 0.5) * 1e-3,
                              rng.uniform() * 50.0});
      }
      traces.push_back(std::move(tr));
    }
    std::ostringstream out;
    c2c::emit_trace_csv(out, traces);
    EXPECT_EQ(parse_csv(out.str()), traces);
  }
}

TEST(FcdXml, OneTimestepOneVehicle) {
  const auto t = parse_xml(
      R"(<fcd-export><timestep time="0.00"><vehicle id="v1" x="1.5" y="2" speed="3"/></timestep></fcd-export>)");
  ASSERT_EQ(t.size(), 1u);
  ASSERT_EQ(t[0].samples.size(), 1u);
  EXPECT_EQ(t[0].samples[0], (c2c::TraceSample{0, 1.5, 2.0, 3.0}));
}

TEST(FcdXml, TwoTimesteps) {
  const auto t = parse_xml(R"(<?xml version="1.0"?>
<fcd-export>
  <timestep time="0.0"><vehicle id="v1" x="0" y="0" speed="1" angle="90" lane="e_0"/></timestep>
  <timestep time="1.0"><vehicle id="v1" x="1" y="0" speed="1"/></timestep>
</fcd-export>)");
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t[0].vehicle_id, "v1");
  EXPECT_EQ(t[0].samples.size(), 2u);
}

TEST(FcdXml, FractionalTimeRejected) {
  EXPECT_EQ(kind_of([] {
              parse_xml(R"(<fcd-export><timestep time="0.5"><vehicle id="v" x="0" y="0" speed="0"/></timestep></fcd-export>)");
            }),
            ErrorKind::validation);
}

TEST(FcdXml, MissingAttributeReportsPath) {
  std::string msg;
  EXPECT_EQ(kind_of(
                [] {
                  parse_xml(R"(<fcd-export><timestep time="0"><vehicle id="a" x="0" y="0" speed="0"/></timestep><timestep time="1"><vehicle id="a" x="1" speed="0"/></timestep></fcd-export>)");
                },
                &msg),
            ErrorKind::parse);
  EXPECT_NE(msg.find("timestep[2]/vehicle[1]"), std::string::npos) << msg;
  EXPECT_NE(msg.find("'y'"), std::string::npos) << msg;
}

TEST(FcdXml, UnknownElementsIgnored) {
  const auto t = parse_xml(R"(<fcd-export><meta a="1"/><timestep time="3"><person id="p" x="0" y="0"/><vehicle id="v" x="0" y="0" speed="2"/></timestep></fcd-export>)");
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t[0].samples[0].t, 3);
}

TEST(FcdXml, MalformedXmlIsParseError) {
  EXPECT_EQ(kind_of([] { parse_xml("<fcd-export><timestep"); }), ErrorKind::parse);
}

}  // namespace
