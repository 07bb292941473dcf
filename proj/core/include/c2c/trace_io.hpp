#pragma once

// Trace exchange formats: the `vehicle_id,t,x,y,speed` CSV and the SUMO
// floating-car-data XML subset (<timestep time=..><vehicle id x y speed/>).

#include <iosfwd>

#include "c2c/mobility.hpp"

namespace c2c {

// Rows may come in any order; output is grouped by vehicle (sorted by id)
// and by t. Errors: ErrorKind::parse for malformed rows (with line number),
// ErrorKind::validation for duplicates, negative speeds and gaps in the
// 1 Hz grid.
TraceSet parse_trace_csv(std::istream& in);

// Writes every sample; doubles use the shortest round-trip representation,
// so parse_trace_csv(emit_trace_csv(T)) == T for traces sorted by id.
void emit_trace_csv(std::ostream& out, std::span<const VehicleTrace> traces);

// Same contract as parse_trace_csv. Unknown elements are ignored; a missing
// attribute is reported with its element path (e.g. fcd-export/timestep[2]/vehicle[1]).
TraceSet parse_fcd_xml(std::istream& in);

}  // namespace c2c
