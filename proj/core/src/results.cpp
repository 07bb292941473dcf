#include "c2c/results.hpp"

#include <istream>
#include <ostream>

#include "c2c/error.hpp"
#include "text.hpp"

namespace c2c {

void write_results_csv(std::ostream& out, std::span<const TickResult> results) {
  out << kResultsHeader << '\n';
  for (const auto& r : results) {
    out << r.t << ',' << r.vehicle_id << ',' << r.serving_station << ','
        << text::format_double(r.snr_db) << ',' << text::format_double(r.rb_share) << ','
        << text::format_double(r.rate_bps) << ',' << r.packages_generated << ',' << r.bits_sent
        << ',' << r.queue_bytes << '\n';
  }
}

ResultTable read_results_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || text::trim(line) != kResultsHeader) {
    throw Error(ErrorKind::parse, "results CSV line 1: expected header '" +
                                      std::string(kResultsHeader) + "'");
  }
  ResultTable out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    const auto f = text::split(text::trim(line), ',');
    auto fail = [&](const char* why) {
      throw Error(ErrorKind::parse, "results CSV line " + std::to_string(line_no) + ": " + why);
    };
    if (f.size() != 9) fail("expected 9 fields");
    TickResult r;
    const auto t = text::parse_int(f[0]);
    const auto snr = text::parse_double(f[3]);
    const auto share = text::parse_double(f[4]);
    const auto rate = text::parse_double(f[5]);
    const auto generated = text::parse_int(f[6]);
    const auto sent = text::parse_int(f[7]);
    const auto queued = text::parse_int(f[8]);
    if (!t || !snr || !share || !rate || !generated || !sent || !queued) fail("bad number");
    if (*t < 0 || *generated < 0 || *sent < 0 || *queued < 0) fail("negative count");
    r.t = *t;
    r.vehicle_id = std::string(text::trim(f[1]));
    r.serving_station = std::string(text::trim(f[2]));
    r.snr_db = *snr;
    r.rb_share = *share;
    r.rate_bps = *rate;
    r.packages_generated = static_cast<std::uint32_t>(*generated);
    r.bits_sent = static_cast<std::uint64_t>(*sent);
    r.queue_bytes = static_cast<std::uint64_t>(*queued);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace c2c
