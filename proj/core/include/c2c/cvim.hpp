#pragma once

// Common Vehicle Information Model: proprietary signals are harmonized into
// measurement channels, whose records are aggregated into data packages that
// queue per vehicle until the uplink can carry them.
//
// Wire format of one package (little-endian, payload_bytes = 64 + 16 * n):
//
//   offset  size  field
//        0    16  package id (pseudonym u64, interval_start u64)
//       16     8  pseudonymous vehicle id (keyed SipHash-2-4)
//       24     4  interval_start, s
//       28     1  duration, s
//       29     2  record count n
//       31     1  privacy level
//       32    16  owner, NUL padded
//       48     8  checksum (BLAKE2b over the package with this field zeroed)
//       56     8  reserved
//   then n records of: channel_id u16, t offset ms u16, value f64, 4 reserved.

#include <array>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "c2c/mobility.hpp"
#include "c2c/results.hpp"

namespace c2c {

inline constexpr std::size_t kWireHeaderBytes = 64;
inline constexpr std::size_t kWireRecordBytes = 16;
inline constexpr std::size_t kOwnerBytes = 16;

enum class SignalSource { can, obd, other };

struct SignalDescriptor {
  std::string signal_id;
  SignalSource source = SignalSource::can;
  std::string raw_unit;
  std::string brand_tag;  // manufacturer-specific, never leaves the vehicle
};

struct MeasurementChannel {
  std::uint16_t channel_id = 0;
  std::string name;
  std::string si_unit;
  double scale = 1.0;
  double offset = 0.0;
  double sample_rate = 1.0;  // Hz

  void validate() const;
};

struct ChannelRecord {
  std::uint16_t channel_id = 0;
  double t = 0.0;  // s
  double value = 0.0;

  bool operator==(const ChannelRecord&) const = default;
};

// raw * scale + offset. Throws ErrorKind::validation for non-finite input.
double harmonize(double raw_value, const MeasurementChannel& channel);

enum class PrivacyLevel : std::uint8_t { public_ = 0, restricted = 1, private_ = 2 };

PrivacyLevel parse_privacy_level(const std::string& text);
const char* to_string(PrivacyLevel level) noexcept;

struct PackageMeta {
  std::string owner;
  PrivacyLevel privacy = PrivacyLevel::restricted;
  std::uint64_t checksum = 0;
};

struct PackageId {
  std::string vehicle_id;
  Tick interval_start = 0;

  // "<vehicle_id>@<interval_start>"
  std::string canonical() const;
  bool operator==(const PackageId&) const = default;
};

struct CvimDataPackage {
  PackageId id;
  std::uint64_t pseudonym = 0;
  Tick interval_start = 0;
  std::uint32_t duration = 1;
  std::vector<ChannelRecord> records;
  std::size_t payload_bytes = 0;
  PackageMeta meta;
};

// Keyed 64-bit vehicle pseudonym (SipHash-2-4). The 16-byte key is derived
// from a text passphrase with BLAKE2b.
class Pseudonymizer {
 public:
  explicit Pseudonymizer(std::string_view passphrase = "c2c-default-key");
  std::uint64_t operator()(std::string_view vehicle_id) const;

 private:
  std::array<unsigned char, 16> key_{};
};

struct PackageSizing {
  std::size_t header_bytes = kWireHeaderBytes;
  std::size_t record_bytes = kWireRecordBytes;
};

struct PackageContext {
  PackageSizing sizing;
  Pseudonymizer pseudonymizer;
  std::string owner = "vehicle-owner";
  PrivacyLevel privacy = PrivacyLevel::restricted;
};

// Builds a package covering [interval_start, interval_start + duration).
// Throws ErrorKind::validation naming the first record outside the interval
// (or with a non-finite value), and for an owner longer than 16 bytes.
CvimDataPackage package(const std::string& vehicle_id, Tick interval_start,
                        std::vector<ChannelRecord> records, const PackageContext& ctx,
                        std::uint32_t duration = 1);

std::vector<std::uint8_t> serialize(const CvimDataPackage& pkg);

struct DecodedPackage {
  std::uint64_t pseudonym = 0;
  Tick interval_start = 0;
  std::uint32_t duration = 0;
  PrivacyLevel privacy = PrivacyLevel::restricted;
  std::string owner;
  std::vector<ChannelRecord> records;
  std::uint64_t checksum = 0;
  bool checksum_valid = false;
};

// Throws ErrorKind::parse on truncated or inconsistent input.
DecodedPackage deserialize(std::span<const std::uint8_t> bytes);

// Signal-to-channel binding used to synthesize a vehicle's per-tick records.
enum class Quantity { position_x, position_y, speed, synthetic };

struct ChannelBinding {
  SignalDescriptor signal;
  MeasurementChannel channel;
  Quantity quantity = Quantity::synthetic;
};

// position_x, position_y, speed, then n_extra synthetic sensor channels.
std::vector<ChannelBinding> default_channel_set(std::size_t n_extra,
                                                std::string_view brand_tag = "OEM-A");

struct VehicleTickState {
  std::string vehicle_id;
  Tick t = 0;
  double x = 0.0;
  double y = 0.0;
  double speed = 0.0;
};

// One harmonized record per bound channel, stamped at the tick.
std::vector<ChannelRecord> tick_records(const VehicleTickState& state,
                                        std::span<const ChannelBinding> channels);

CvimDataPackage generate_tick_package(const VehicleTickState& state,
                                      std::span<const ChannelBinding> channels,
                                      const PackageContext& ctx);

// Per-vehicle uplink queue. Packages matching the priority predicate are sent
// first; FIFO within each class.
class TransmitQueue {
 public:
  using Predicate = std::function<bool(const CvimDataPackage&)>;

  explicit TransmitQueue(std::string vehicle_id, Predicate priority = {});

  struct Outcome {
    std::vector<PackageId> sent;
    std::uint64_t sent_bits = 0;
    std::uint64_t remaining_bits = 0;
  };

  void push(CvimDataPackage pkg);

  // Sends whole packages while the next one's bits fit in what is left of
  // capacity_bits; stops at the first one that does not fit.
  Outcome try_transmit(std::uint64_t capacity_bits);

  const std::string& vehicle_id() const { return vehicle_id_; }
  std::size_t size() const { return high_.size() + normal_.size(); }
  bool empty() const { return size() == 0; }
  std::uint64_t queued_bytes() const { return queued_bytes_; }
  // Pending packages in transmission order.
  std::vector<const CvimDataPackage*> pending() const;

 private:
  std::string vehicle_id_;
  Predicate priority_;
  std::deque<CvimDataPackage> high_;
  std::deque<CvimDataPackage> normal_;
  std::uint64_t queued_bytes_ = 0;
};

// High priority when any record belongs to one of the listed channels.
TransmitQueue::Predicate channel_allowlist(std::set<std::uint16_t> channels);

// A maximal run of consecutive ticks a vehicle stays attached to one cell.
struct Traversal {
  std::string vehicle_id;
  std::string station_id;
  Tick first_tick = 0;
  Tick ticks = 0;
  std::uint64_t packages = 0;  // sum of packages_generated over the run
};

std::vector<Traversal> traversals(std::span<const TickResult> results);

// Mean packages generated per traversal, for every cell with at least one
// traversal. Throws ErrorKind::validation when there are no traversals.
std::map<std::string, double> count_packages_per_cell(std::span<const TickResult> results);

}  // namespace c2c
