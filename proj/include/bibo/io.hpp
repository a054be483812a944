#pragma once

#include <iosfwd>
#include <string>

#include "bibo/core.hpp"

namespace bibo {

// JSON system-spec schema:
//   {"eigenvalues":[{"re":-1.0,"im":0.0},...],"b":[...],"c":[...],
//    "feedthrough":{"re":0.0,"im":0.0},"tail":{"kind":"none"}}
// tail kinds: {"kind":"none"},
//             {"kind":"power-law","a":..,"p":..,"b_mag":..,"c_mag":..},
//             {"kind":"user-bound","value":..}
SpectralSystemSpec parse_spec_json(const std::string& text);
SpectralSystemSpec load_spec_json(const std::string& path);
std::string spec_to_json(const SpectralSystemSpec& spec);

// CSV signal format: header "t,re,im", one row per grid point, values
// rendered with 17 significant digits so doubles round-trip exactly.
Signal parse_signal_csv(std::istream& in);
Signal load_signal_csv(const std::string& path);
void write_signal_csv(std::ostream& out, const Signal& sig);
void save_signal_csv(const std::string& path, const Signal& sig);

/// %.17g rendering used by every CSV/JSON emitter.
std::string format_double(double x);

}  // namespace bibo
