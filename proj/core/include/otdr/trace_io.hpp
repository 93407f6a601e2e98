#pragma once

#include <filesystem>

#include "otdr/trace.hpp"

namespace otdr {

inline constexpr double kDefaultDt = 10e-9;

// CSV: header "index,intensity", one row per sample, shortest round-trip
// decimal. The format carries no dt; readers take it as a parameter.
void write_trace_csv(const std::filesystem::path& path, const Trace& trace);
Trace read_trace_csv(const std::filesystem::path& path, double dt = kDefaultDt);

// Binary: "OTR1", u64 count, count x f64 samples, f64 dt (all little-endian).
void write_trace_binary(const std::filesystem::path& path, const Trace& trace);
Trace read_trace_binary(const std::filesystem::path& path);

// CSV with header "index,amplitude"; the loaded profile is peak-normalized.
void write_pulse_csv(const std::filesystem::path& path, const PulseProfile& pulse);
PulseProfile read_pulse_csv(const std::filesystem::path& path, double dt = kDefaultDt);

}  // namespace otdr
