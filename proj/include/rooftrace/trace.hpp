#pragma once

// Address traces and their on-disk form: a headerless stream of 9-byte
// records, an 8-byte little-endian byte address followed by a 1-byte access
// kind (0 = load, 1 = store, 2 = non-temporal store).

#include <array>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "rooftrace/errors.hpp"

namespace rooftrace {

enum class AccessKind : std::uint8_t { Load = 0, Store = 1, StoreNT = 2 };

inline std::string_view to_string(AccessKind k) {
  switch (k) {
    case AccessKind::Load: return "load";
    case AccessKind::Store: return "store";
    case AccessKind::StoreNT: return "store-nt";
  }
  return "?";
}

struct TraceRecord {
  std::uint64_t addr = 0;
  AccessKind kind = AccessKind::Load;

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

struct Trace {
  std::vector<TraceRecord> records;
  std::uint64_t work_count = 0;  // iterations, rows or nonzeros

  void operator()(std::uint64_t addr, AccessKind kind) { records.push_back({addr, kind}); }
  std::size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }
};

inline constexpr std::size_t kTraceRecordBytes = 9;

inline void write_record(std::ostream& os, const TraceRecord& r) {
  std::array<char, kTraceRecordBytes> buf{};
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((r.addr >> (8 * i)) & 0xff);
  buf[8] = static_cast<char>(r.kind);
  os.write(buf.data(), buf.size());
}

inline void write_trace(std::ostream& os, const Trace& t) {
  for (const auto& r : t.records) write_record(os, r);
}

inline void write_trace(const std::string& path, const Trace& t) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ParseError("cannot open trace file '" + path + "' for writing");
  write_trace(os, t);
}

inline Trace read_trace(std::istream& is, const std::string& source = "<stream>") {
  Trace t;
  std::array<unsigned char, kTraceRecordBytes> buf{};
  std::size_t n = 0;
  while (is.read(reinterpret_cast<char*>(buf.data()), buf.size())) {
    TraceRecord r;
    for (int i = 0; i < 8; ++i) r.addr |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
    if (buf[8] > 2)
      throw ParseError(source + ": record " + std::to_string(n) + " has invalid access kind " +
                       std::to_string(buf[8]));
    r.kind = static_cast<AccessKind>(buf[8]);
    t.records.push_back(r);
    ++n;
  }
  if (is.gcount() != 0)
    throw ParseError(source + ": truncated record at end of trace (" +
                     std::to_string(is.gcount()) + " trailing bytes)");
  return t;
}

inline Trace read_trace(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ParseError("cannot open trace file '" + path + "'");
  return read_trace(is, path);
}

}  // namespace rooftrace
