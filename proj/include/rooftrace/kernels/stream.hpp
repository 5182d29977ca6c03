#pragma once

// STREAM-style kernels on 8-byte elements: execute mode and address traces.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "rooftrace/errors.hpp"
#include "rooftrace/kernels/layout.hpp"
#include "rooftrace/trace.hpp"

namespace rooftrace::kernels {

enum class StreamKind { LoadOnly, Copy, Update, Triad };

inline std::string_view to_string(StreamKind k) {
  switch (k) {
    case StreamKind::LoadOnly: return "load";
    case StreamKind::Copy: return "copy";
    case StreamKind::Update: return "update";
    case StreamKind::Triad: return "triad";
  }
  return "?";
}

inline StreamKind parse_stream_kind(std::string_view s) {
  if (s == "load" || s == "load-only") return StreamKind::LoadOnly;
  if (s == "copy") return StreamKind::Copy;
  if (s == "update") return StreamKind::Update;
  if (s == "triad") return StreamKind::Triad;
  throw DomainError("unknown stream kernel '" + std::string(s) + "'");
}

// Arrays read or written per iteration, for bandwidth bookkeeping.
inline int stream_arrays(StreamKind k) {
  switch (k) {
    case StreamKind::LoadOnly: return 1;
    case StreamKind::Copy: return 2;
    case StreamKind::Update: return 2;
    case StreamKind::Triad: return 3;
  }
  return 0;
}

struct StreamBases {
  std::uint64_t a = 0;  // destination (or the single array)
  std::uint64_t b = 0;
  std::uint64_t c = 0;

  static StreamBases allocate(std::uint64_t n_elems, AddressSpace& space) {
    StreamBases s;
    s.a = space.allocate(8 * n_elems);
    s.b = space.allocate(8 * n_elems);
    s.c = space.allocate(8 * n_elems);
    return s;
  }
};

struct StreamSpec {
  StreamKind kind = StreamKind::Triad;
  std::uint64_t n_elems = 0;
  bool nt_stores = false;  // Copy and Triad
};

namespace detail {
inline bool overlap(std::uint64_t x, std::uint64_t y, std::uint64_t bytes) {
  return x < y + bytes && y < x + bytes;
}
}  // namespace detail

// Emits element-granularity accesses into `sink(addr, kind)`.
template <class Sink>
void stream_trace(const StreamSpec& spec, const StreamBases& base, Sink&& sink) {
  const std::uint64_t n = spec.n_elems;
  if (n == 0) throw DomainError("stream kernel needs at least one element");
  const std::uint64_t bytes = 8 * n;
  switch (spec.kind) {
    case StreamKind::Copy:
      if (detail::overlap(base.a, base.b, bytes)) throw DomainError("copy arrays overlap");
      break;
    case StreamKind::Triad:
      if (detail::overlap(base.a, base.b, bytes) || detail::overlap(base.a, base.c, bytes) ||
          detail::overlap(base.b, base.c, bytes))
        throw DomainError("triad arrays overlap");
      break;
    default:
      break;
  }
  const AccessKind store = spec.nt_stores ? AccessKind::StoreNT : AccessKind::Store;
  for (std::uint64_t i = 0; i < n; ++i) {
    const std::uint64_t off = 8 * i;
    switch (spec.kind) {
      case StreamKind::LoadOnly:
        sink(base.a + off, AccessKind::Load);
        break;
      case StreamKind::Copy:
        sink(base.b + off, AccessKind::Load);
        sink(base.a + off, store);
        break;
      case StreamKind::Update:
        sink(base.a + off, AccessKind::Load);
        sink(base.a + off, AccessKind::Store);
        break;
      case StreamKind::Triad:
        sink(base.b + off, AccessKind::Load);
        sink(base.c + off, AccessKind::Load);
        sink(base.a + off, store);
        break;
    }
  }
}

inline Trace gen_stream_trace(const StreamSpec& spec, const StreamBases& base) {
  Trace t;
  t.records.reserve(spec.n_elems * 3);
  stream_trace(spec, base, t);
  t.work_count = spec.n_elems;
  return t;
}

inline Trace gen_stream_trace(const StreamSpec& spec) {
  AddressSpace space;
  return gen_stream_trace(spec, StreamBases::allocate(spec.n_elems, space));
}

// ---------------------------------------------------------------------------
// Execute mode

inline double stream_load(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s += v;
  return s;
}

inline void stream_copy(std::span<double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DomainError("copy length mismatch");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = b[i];
}

inline void stream_update(std::span<double> a, double s) {
  for (double& v : a) v *= s;
}

inline void stream_triad(std::span<double> a, std::span<const double> b,
                         std::span<const double> c, double s) {
  if (a.size() != b.size() || a.size() != c.size()) throw DomainError("triad length mismatch");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = b[i] + s * c[i];
}

}  // namespace rooftrace::kernels
