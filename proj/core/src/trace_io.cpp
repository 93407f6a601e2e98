#include "otdr/trace_io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <string_view>

#include "otdr/error.hpp"

namespace otdr {

namespace {

static_assert(std::endian::native == std::endian::little, "binary formats assume a little-endian host");

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path, std::ios::openmode mode = std::ios::in) {
  std::ifstream in(path, mode);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  return in;
}

std::string format_double(double v) {
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), end);
}

void write_two_column(const std::filesystem::path& path, std::string_view header,
                      std::span<const double> values) {
  auto out = open_out(path);
  out << header << '\n';
  for (std::size_t i = 0; i < values.size(); ++i) out << i << ',' << format_double(values[i]) << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

std::vector<double> read_two_column(const std::filesystem::path& path, std::string_view header) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path.string() + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header) {
    throw FormatError(path.string() + ": expected header '" + std::string(header) + "', got '" + line + "'");
  }
  std::vector<double> values;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw FormatError(path.string() + ":" + std::to_string(lineno) + ": missing comma");
    double v = 0.0;
    const char* first = line.data() + comma + 1;
    const char* last = line.data() + line.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) {
      throw FormatError(path.string() + ":" + std::to_string(lineno) + ": bad number");
    }
    values.push_back(v);
  }
  return values;
}

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in, const std::filesystem::path& path) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(T))) throw FormatError(path.string() + ": truncated file");
  return v;
}

constexpr std::array<char, 4> kTraceMagic{'O', 'T', 'R', '1'};

}  // namespace

void write_trace_csv(const std::filesystem::path& path, const Trace& trace) {
  write_two_column(path, "index,intensity", trace.samples());
}

Trace read_trace_csv(const std::filesystem::path& path, double dt) {
  auto values = read_two_column(path, "index,intensity");
  if (values.empty()) throw FormatError(path.string() + ": trace has no samples");
  return Trace(std::move(values), dt);
}

void write_trace_binary(const std::filesystem::path& path, const Trace& trace) {
  auto out = open_out(path, std::ios::binary);
  out.write(kTraceMagic.data(), kTraceMagic.size());
  put<std::uint64_t>(out, trace.size());
  out.write(reinterpret_cast<const char*>(trace.values().data()),
            static_cast<std::streamsize>(trace.size() * sizeof(double)));
  put<double>(out, trace.dt());
  if (!out) throw IoError("write failed for " + path.string());
}

Trace read_trace_binary(const std::filesystem::path& path) {
  auto in = open_in(path, std::ios::binary);
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kTraceMagic) {
    throw FormatError(path.string() + ": not an OTR1 trace file");
  }
  const auto count = get<std::uint64_t>(in, path);
  const auto remaining = std::filesystem::file_size(path) - 12;
  if (count == 0 || remaining != (count + 1) * sizeof(double)) {
    throw FormatError(path.string() + ": sample count does not match file size");
  }
  std::vector<double> samples(count);
  if (!in.read(reinterpret_cast<char*>(samples.data()), static_cast<std::streamsize>(count * sizeof(double)))) {
    throw FormatError(path.string() + ": truncated file");
  }
  const double dt = get<double>(in, path);
  return Trace(std::move(samples), dt);
}

void write_pulse_csv(const std::filesystem::path& path, const PulseProfile& pulse) {
  write_two_column(path, "index,amplitude", pulse.taps());
}

PulseProfile read_pulse_csv(const std::filesystem::path& path, double dt) {
  auto taps = read_two_column(path, "index,amplitude");
  return PulseProfile(std::move(taps), dt);
}

}  // namespace otdr
