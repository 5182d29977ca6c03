#pragma once

// YAML machine / kernel descriptions.
//
//   machine:
//     base: clx              # optional: start from a built-in preset
//     name: my-clx
//     bw_load_only: 110
//     caches:
//       - {name: L1, capacity: 32K, ways: 8}
//       - {name: L3, capacity: 1M, ways: 16, policy: stream-one-way, inclusion: victim}
//   kernels:
//     - {name: DDOT, code_balance: 13.3, flops_per_row: 2, calls: 3}
//
// Capacities accept K/M/G suffixes (powers of 1024).

#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "rooftrace/cache/config.hpp"
#include "rooftrace/errors.hpp"
#include "rooftrace/machine_model.hpp"

namespace rooftrace::config {

inline constexpr const char* kPresetDirEnv = "ROOFTRACE_PRESET_DIR";

inline std::uint64_t parse_size(const std::string& s) {
  if (s.empty()) throw ParseError("empty size");
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw ParseError("invalid size '" + s + "'");
  }
  double mult = 1;
  std::string rest = s.substr(pos);
  if (!rest.empty() && (rest.back() == 'B' || rest.back() == 'b')) rest.pop_back();
  if (rest == "K" || rest == "k" || rest == "Ki") mult = 1024.0;
  else if (rest == "M" || rest == "Mi") mult = 1024.0 * 1024;
  else if (rest == "G" || rest == "Gi") mult = 1024.0 * 1024 * 1024;
  else if (!rest.empty()) throw ParseError("invalid size suffix in '" + s + "'");
  if (v < 0) throw ParseError("negative size '" + s + "'");
  return static_cast<std::uint64_t>(v * mult + 0.5);
}

namespace detail {
template <class T>
void read_opt(const YAML::Node& n, const char* key, T& out) {
  if (n[key]) out = n[key].as<T>();
}
}  // namespace detail

inline cache::CacheConfig cache_from_yaml(const YAML::Node& n) {
  cache::CacheConfig c;
  detail::read_opt(n, "name", c.name);
  if (!n["capacity"]) throw ParseError("cache level '" + c.name + "' has no capacity");
  c.capacity = parse_size(n["capacity"].as<std::string>());
  detail::read_opt(n, "ways", c.ways);
  detail::read_opt(n, "line_size", c.line_size);
  detail::read_opt(n, "allow_non_pow2_sets", c.allow_non_pow2_sets);
  if (n["policy"]) c.policy = cache::parse_policy(n["policy"].as<std::string>());
  if (n["inclusion"]) c.inclusion = cache::parse_inclusion(n["inclusion"].as<std::string>());
  if (n["dueling"]) {
    detail::read_opt(n["dueling"], "leader_sets", c.dueling.leader_sets);
    detail::read_opt(n["dueling"], "selector_bits", c.dueling.selector_bits);
  }
  return c;
}

inline MachineModel machine_from_yaml(const YAML::Node& n) {
  MachineModel m;
  if (n["base"]) m = presets::by_name(n["base"].as<std::string>());
  detail::read_opt(n, "name", m.name);
  detail::read_opt(n, "cores", m.cores);
  detail::read_opt(n, "freq_ghz", m.freq_ghz);
  detail::read_opt(n, "flops_per_cycle_per_core", m.flops_per_cycle_per_core);
  detail::read_opt(n, "bw_load_only", m.bw_load_only);
  detail::read_opt(n, "bw_stream_triad_nt", m.bw_stream_triad_nt);
  detail::read_opt(n, "theoretical_mem_bw", m.theoretical_mem_bw);
  detail::read_opt(n, "l1_bytes_per_cycle", m.l1_bytes_per_cycle);
  if (n["caches"]) {
    m.cache_levels.clear();
    for (const auto& c : n["caches"]) m.cache_levels.push_back(cache_from_yaml(c));
  }
  m.validate();
  return m;
}

inline std::vector<KernelModel> kernels_from_yaml(const YAML::Node& n) {
  std::vector<KernelModel> out;
  for (const auto& k : n) {
    KernelModel km;
    detail::read_opt(k, "name", km.name);
    if (k["kind"]) {
      BalanceParams p;
      detail::read_opt(k, "nnzr", p.nnzr);
      detail::read_opt(k, "nt", p.nt_stores);
      km.code_balance = code_balance(parse_kernel_kind(k["kind"].as<std::string>()), p);
    }
    detail::read_opt(k, "code_balance", km.code_balance);
    detail::read_opt(k, "flops_per_row", km.flops_per_row);
    detail::read_opt(k, "calls", km.calls);
    km.validate();
    out.push_back(km);
  }
  return out;
}

struct ConfigFile {
  std::optional<MachineModel> machine;
  std::vector<KernelModel> kernels;
};

inline ConfigFile load_config(const std::string& path) {
  YAML::Node root;
  try {
    root = YAML::LoadFile(path);
  } catch (const YAML::Exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  ConfigFile cfg;
  try {
    if (root["machine"]) cfg.machine = machine_from_yaml(root["machine"]);
    if (root["kernels"]) cfg.kernels = kernels_from_yaml(root["kernels"]);
  } catch (const YAML::Exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  return cfg;
}

// Built-in preset, or <name>.yaml from $ROOFTRACE_PRESET_DIR when present
// there (the directory takes precedence), or a path to a config file.
inline MachineModel resolve_machine(const std::string& name_or_path) {
  namespace fs = std::filesystem;
  if (const char* dir = std::getenv(kPresetDirEnv)) {
    const fs::path p = fs::path(dir) / (name_or_path + ".yaml");
    if (fs::exists(p)) {
      auto cfg = load_config(p.string());
      if (!cfg.machine) throw ParseError(p.string() + ": no 'machine' section");
      return *cfg.machine;
    }
  }
  if (name_or_path == "bdw" || name_or_path == "clx") return presets::by_name(name_or_path);
  if (fs::exists(name_or_path)) {
    auto cfg = load_config(name_or_path);
    if (!cfg.machine) throw ParseError(name_or_path + ": no 'machine' section");
    return *cfg.machine;
  }
  throw DomainError("unknown machine '" + name_or_path +
                    "' (built-ins: bdw, clx; or a config file path)");
}

}  // namespace rooftrace::config
