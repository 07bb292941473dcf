#include "c2c/cvim.hpp"

#include <sodium.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <limits>

#include "c2c/error.hpp"
#include "text.hpp"

namespace c2c {

namespace {

constexpr std::uint32_t kMaxDuration = 65;  // t offsets are u16 milliseconds

void ensure_sodium() {
  static const int status = sodium_init();
  if (status < 0) throw std::runtime_error("libsodium initialisation failed");
}

class Writer {
 public:
  explicit Writer(std::vector<std::uint8_t>& buf) : buf_(buf) {}

  template <typename T>
  void put(T value) {
    static_assert(std::endian::native == std::endian::little,
                  "wire encoding assumes a little-endian host");
    std::uint8_t bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    buf_.insert(buf_.end(), bytes, bytes + sizeof(T));
  }
  void pad(std::size_t n) { buf_.insert(buf_.end(), n, 0); }
  void put_text(const std::string& s, std::size_t width) {
    buf_.insert(buf_.end(), s.begin(), s.end());
    pad(width - s.size());
  }

 private:
  std::vector<std::uint8_t>& buf_;
};

template <typename T>
T read_at(std::span<const std::uint8_t> bytes, std::size_t offset) {
  T value;
  std::memcpy(&value, bytes.data() + offset, sizeof(T));
  return value;
}

std::uint64_t blake_checksum(std::span<const std::uint8_t> bytes) {
  ensure_sodium();
  unsigned char digest[crypto_generichash_BYTES_MIN];
  crypto_generichash(digest, sizeof digest, bytes.data(), bytes.size(), nullptr, 0);
  std::uint64_t out = 0;
  std::memcpy(&out, digest, sizeof out);
  return out;
}

constexpr std::size_t kChecksumOffset = 48;

std::vector<std::uint8_t> encode(const CvimDataPackage& pkg, std::uint64_t checksum) {
  std::vector<std::uint8_t> buf;
  buf.reserve(kWireHeaderBytes + kWireRecordBytes * pkg.records.size());
  Writer w(buf);
  w.put<std::uint64_t>(pkg.pseudonym);
  w.put<std::uint64_t>(static_cast<std::uint64_t>(pkg.interval_start));
  w.put<std::uint64_t>(pkg.pseudonym);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(pkg.interval_start));
  w.put<std::uint8_t>(static_cast<std::uint8_t>(pkg.duration));
  w.put<std::uint16_t>(static_cast<std::uint16_t>(pkg.records.size()));
  w.put<std::uint8_t>(static_cast<std::uint8_t>(pkg.meta.privacy));
  w.put_text(pkg.meta.owner, kOwnerBytes);
  w.put<std::uint64_t>(checksum);
  w.pad(8);
  for (const auto& r : pkg.records) {
    const double offset_ms = std::round((r.t - static_cast<double>(pkg.interval_start)) * 1000.0);
    w.put<std::uint16_t>(r.channel_id);
    w.put<std::uint16_t>(static_cast<std::uint16_t>(offset_ms));
    w.put<double>(r.value);
    w.pad(4);
  }
  return buf;
}

}  // namespace

void MeasurementChannel::validate() const {
  if (scale == 0.0 || !std::isfinite(scale) || !std::isfinite(offset)) {
    throw Error(ErrorKind::config, "channel " + std::to_string(channel_id) +
                                       ": scale must be finite and non-zero");
  }
  if (!(sample_rate > 0.0)) {
    throw Error(ErrorKind::config, "channel " + std::to_string(channel_id) +
                                       ": sample rate must be positive");
  }
}

double harmonize(double raw_value, const MeasurementChannel& channel) {
  if (!std::isfinite(raw_value)) {
    throw Error(ErrorKind::validation,
                "non-finite raw value for channel " + std::to_string(channel.channel_id));
  }
  return raw_value * channel.scale + channel.offset;
}

PrivacyLevel parse_privacy_level(const std::string& text) {
  if (text == "public") return PrivacyLevel::public_;
  if (text == "restricted") return PrivacyLevel::restricted;
  if (text == "private") return PrivacyLevel::private_;
  throw Error(ErrorKind::config, "unknown privacy level '" + text + "'");
}

const char* to_string(PrivacyLevel level) noexcept {
  switch (level) {
    case PrivacyLevel::public_: return "public";
    case PrivacyLevel::restricted: return "restricted";
    case PrivacyLevel::private_: return "private";
  }
  return "restricted";
}

std::string PackageId::canonical() const {
  return vehicle_id + "@" + std::to_string(interval_start);
}

Pseudonymizer::Pseudonymizer(std::string_view passphrase) {
  ensure_sodium();
  static_assert(crypto_shorthash_KEYBYTES == 16);
  crypto_generichash(key_.data(), key_.size(),
                     reinterpret_cast<const unsigned char*>(passphrase.data()),
                     passphrase.size(), nullptr, 0);
}

std::uint64_t Pseudonymizer::operator()(std::string_view vehicle_id) const {
  unsigned char out[crypto_shorthash_BYTES];
  crypto_shorthash(out, reinterpret_cast<const unsigned char*>(vehicle_id.data()),
                   vehicle_id.size(), key_.data());
  std::uint64_t value = 0;
  std::memcpy(&value, out, sizeof value);
  return value;
}

CvimDataPackage package(const std::string& vehicle_id, Tick interval_start,
                        std::vector<ChannelRecord> records, const PackageContext& ctx,
                        std::uint32_t duration) {
  const PackageId id{vehicle_id, interval_start};
  if (duration < 1 || duration > kMaxDuration) {
    throw Error(ErrorKind::validation, "package " + id.canonical() + ": duration must be 1.." +
                                           std::to_string(kMaxDuration) + " s");
  }
  if (interval_start < 0 ||
      interval_start > static_cast<Tick>(std::numeric_limits<std::uint32_t>::max())) {
    throw Error(ErrorKind::validation,
                "package " + id.canonical() + ": interval start outside the u32 range");
  }
  if (records.size() > std::numeric_limits<std::uint16_t>::max()) {
    throw Error(ErrorKind::validation, "package " + id.canonical() + ": too many records");
  }
  if (ctx.owner.size() > kOwnerBytes) {
    throw Error(ErrorKind::validation, "owner '" + ctx.owner + "' exceeds 16 bytes");
  }
  const double begin = static_cast<double>(interval_start);
  const double end = begin + static_cast<double>(duration);
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (!(r.t >= begin && r.t < end)) {
      throw Error(ErrorKind::validation,
                  "package " + id.canonical() + ": record " + std::to_string(i) + " (channel " +
                      std::to_string(r.channel_id) + ", t=" + text::format_double(r.t) +
                      ") lies outside [" + text::format_double(begin) + ", " +
                      text::format_double(end) + ")");
    }
    if (!std::isfinite(r.value)) {
      throw Error(ErrorKind::validation, "package " + id.canonical() + ": record " +
                                             std::to_string(i) + " has a non-finite value");
    }
  }

  CvimDataPackage pkg;
  pkg.id = id;
  pkg.pseudonym = ctx.pseudonymizer(vehicle_id);
  pkg.interval_start = interval_start;
  pkg.duration = duration;
  pkg.records = std::move(records);
  pkg.payload_bytes = ctx.sizing.header_bytes + ctx.sizing.record_bytes * pkg.records.size();
  pkg.meta.owner = ctx.owner;
  pkg.meta.privacy = ctx.privacy;
  pkg.meta.checksum = blake_checksum(encode(pkg, 0));
  return pkg;
}

std::vector<std::uint8_t> serialize(const CvimDataPackage& pkg) {
  return encode(pkg, pkg.meta.checksum);
}

DecodedPackage deserialize(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kWireHeaderBytes) {
    throw Error(ErrorKind::parse, "CVIM package truncated: " + std::to_string(bytes.size()) +
                                      " bytes, header needs 64");
  }
  DecodedPackage out;
  const auto id_pseudonym = read_at<std::uint64_t>(bytes, 0);
  const auto id_start = read_at<std::uint64_t>(bytes, 8);
  out.pseudonym = read_at<std::uint64_t>(bytes, 16);
  out.interval_start = read_at<std::uint32_t>(bytes, 24);
  out.duration = read_at<std::uint8_t>(bytes, 28);
  const auto count = read_at<std::uint16_t>(bytes, 29);
  const auto privacy = read_at<std::uint8_t>(bytes, 31);
  const char* owner = reinterpret_cast<const char*>(bytes.data() + 32);
  out.owner.assign(owner, strnlen(owner, kOwnerBytes));
  out.checksum = read_at<std::uint64_t>(bytes, kChecksumOffset);

  const std::size_t expected = kWireHeaderBytes + kWireRecordBytes * count;
  if (bytes.size() != expected) {
    throw Error(ErrorKind::parse, "CVIM package length " + std::to_string(bytes.size()) +
                                      " does not match " + std::to_string(count) +
                                      " records (" + std::to_string(expected) + " bytes)");
  }
  if (privacy > static_cast<std::uint8_t>(PrivacyLevel::private_)) {
    throw Error(ErrorKind::parse, "CVIM package: unknown privacy level " + std::to_string(privacy));
  }
  if (id_pseudonym != out.pseudonym || id_start != static_cast<std::uint64_t>(out.interval_start)) {
    throw Error(ErrorKind::parse, "CVIM package: package id disagrees with header fields");
  }
  out.privacy = static_cast<PrivacyLevel>(privacy);

  out.records.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t at = kWireHeaderBytes + kWireRecordBytes * i;
    ChannelRecord r;
    r.channel_id = read_at<std::uint16_t>(bytes, at);
    r.t = static_cast<double>(out.interval_start) + read_at<std::uint16_t>(bytes, at + 2) / 1000.0;
    r.value = read_at<double>(bytes, at + 4);
    out.records.push_back(r);
  }

  std::vector<std::uint8_t> zeroed(bytes.begin(), bytes.end());
  std::fill_n(zeroed.begin() + kChecksumOffset, 8, std::uint8_t{0});
  out.checksum_valid = blake_checksum(zeroed) == out.checksum;
  return out;
}

std::vector<ChannelBinding> default_channel_set(std::size_t n_extra, std::string_view brand_tag) {
  const std::string tag(brand_tag);
  std::vector<ChannelBinding> out;
  out.push_back({{"GPS_E_POS", SignalSource::other, "m", tag},
                 {1, "position_x", "m", 1.0, 0.0, 1.0},
                 Quantity::position_x});
  out.push_back({{"GPS_N_POS", SignalSource::other, "m", tag},
                 {2, "position_y", "m", 1.0, 0.0, 1.0},
                 Quantity::position_y});
  // Wheel speed as a CAN word in 0.01 km/h.
  out.push_back({{"ESP_V_SIGNAL", SignalSource::can, "0.01 km/h", tag},
                 {3, "speed", "m/s", 1.0 / 360.0, 0.0, 1.0},
                 Quantity::speed});
  for (std::size_t k = 0; k < n_extra; ++k) {
    const auto id = static_cast<std::uint16_t>(100 + k);
    out.push_back({{"AUX_" + std::to_string(k), SignalSource::obd, "raw", tag},
                   {id, "aux_" + std::to_string(k), "1", 1.0, 0.0, 1.0},
                   Quantity::synthetic});
  }
  return out;
}

std::vector<ChannelRecord> tick_records(const VehicleTickState& state,
                                        std::span<const ChannelBinding> channels) {
  std::vector<ChannelRecord> out;
  out.reserve(channels.size());
  const double t = static_cast<double>(state.t);
  for (const auto& b : channels) {
    double physical = 0.0;
    switch (b.quantity) {
      case Quantity::position_x: physical = state.x; break;
      case Quantity::position_y: physical = state.y; break;
      case Quantity::speed: physical = state.speed; break;
      case Quantity::synthetic:
        // A byte-wide counter sensor.
        physical = static_cast<double>((state.t + b.channel.channel_id) % 256);
        break;
    }
    // The vehicle bus carries the proprietary encoding of the physical value.
    const double raw = (physical - b.channel.offset) / b.channel.scale;
    out.push_back({b.channel.channel_id, t, harmonize(raw, b.channel)});
  }
  return out;
}

CvimDataPackage generate_tick_package(const VehicleTickState& state,
                                      std::span<const ChannelBinding> channels,
                                      const PackageContext& ctx) {
  return package(state.vehicle_id, state.t, tick_records(state, channels), ctx, 1);
}

TransmitQueue::TransmitQueue(std::string vehicle_id, Predicate priority)
    : vehicle_id_(std::move(vehicle_id)), priority_(std::move(priority)) {}

void TransmitQueue::push(CvimDataPackage pkg) {
  queued_bytes_ += pkg.payload_bytes;
  if (priority_ && priority_(pkg)) {
    high_.push_back(std::move(pkg));
  } else {
    normal_.push_back(std::move(pkg));
  }
}

TransmitQueue::Outcome TransmitQueue::try_transmit(std::uint64_t capacity_bits) {
  Outcome out;
  out.remaining_bits = capacity_bits;
  while (!empty()) {
    auto& lane = high_.empty() ? normal_ : high_;
    const std::uint64_t bits = 8ULL * lane.front().payload_bytes;
    if (bits > out.remaining_bits) break;
    out.remaining_bits -= bits;
    out.sent_bits += bits;
    queued_bytes_ -= lane.front().payload_bytes;
    out.sent.push_back(std::move(lane.front().id));
    lane.pop_front();
  }
  return out;
}

std::vector<const CvimDataPackage*> TransmitQueue::pending() const {
  std::vector<const CvimDataPackage*> out;
  out.reserve(size());
  for (const auto& p : high_) out.push_back(&p);
  for (const auto& p : normal_) out.push_back(&p);
  return out;
}

TransmitQueue::Predicate channel_allowlist(std::set<std::uint16_t> channels) {
  return [channels = std::move(channels)](const CvimDataPackage& pkg) {
    return std::any_of(pkg.records.begin(), pkg.records.end(), [&](const ChannelRecord& r) {
      return channels.count(r.channel_id) > 0;
    });
  };
}

std::vector<Traversal> traversals(std::span<const TickResult> results) {
  std::vector<const TickResult*> rows;
  rows.reserve(results.size());
  for (const auto& r : results) rows.push_back(&r);
  std::sort(rows.begin(), rows.end(), [](const TickResult* a, const TickResult* b) {
    return a->vehicle_id != b->vehicle_id ? a->vehicle_id < b->vehicle_id : a->t < b->t;
  });

  std::vector<Traversal> out;
  const TickResult* prev = nullptr;
  for (const TickResult* r : rows) {
    const bool continues = prev != nullptr && prev->vehicle_id == r->vehicle_id &&
                           prev->serving_station == r->serving_station && prev->t + 1 == r->t;
    if (!continues) {
      out.push_back({r->vehicle_id, r->serving_station, r->t, 0, 0});
    }
    ++out.back().ticks;
    out.back().packages += r->packages_generated;
    prev = r;
  }
  return out;
}

std::map<std::string, double> count_packages_per_cell(std::span<const TickResult> results) {
  const auto runs = traversals(results);
  if (runs.empty()) {
    throw Error(ErrorKind::validation, "no cell traversals in the results");
  }
  std::map<std::string, std::pair<double, std::size_t>> acc;
  for (const auto& run : runs) {
    auto& [sum, n] = acc[run.station_id];
    sum += static_cast<double>(run.packages);
    ++n;
  }
  std::map<std::string, double> out;
  for (const auto& [station, sn] : acc) {
    out[station] = sn.first / static_cast<double>(sn.second);
  }
  return out;
}

}  // namespace c2c
