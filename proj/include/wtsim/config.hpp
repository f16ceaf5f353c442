#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "wtsim/sim.hpp"

namespace wtsim {

// Flat-sectioned key = value scenario files:
//
//   [pmsg]
//   r_s = 0.0015      # ohm
//
// become "pmsg.r_s" keys.  Overrides use the same dotted form and must name
// keys the schema knows.
struct ConfigError : std::runtime_error {
    enum class Kind { io, parse, validation };

    ConfigError(Kind kind_, std::string key_, const std::string& message)
        : std::runtime_error(key_.empty() ? message : key_ + ": " + message),
          kind(kind_),
          key(std::move(key_)) {}

    Kind kind;
    std::string key;
};

using KeyValueMap = std::map<std::string, std::string>;

// Parses the sectioned text into dotted keys.  Throws ConfigError{parse}.
KeyValueMap parse_config_text(const std::string& text);

// Applies "key=value" overrides on top of the parsed map.
void apply_overrides(KeyValueMap& kv, const std::vector<std::string>& overrides);

// Builds and validates the scenario; unknown keys and invariant violations
// throw ConfigError{validation} naming the offending key.
ScenarioConfig scenario_from_map(const KeyValueMap& kv);

// Convenience front ends.
ScenarioConfig scenario_from_text(const std::string& text,
                                  const std::vector<std::string>& overrides = {});
ScenarioConfig load_scenario(const std::string& path,
                             const std::vector<std::string>& overrides = {});

// FNV-1a over the canonicalized (sorted, normalized) key/value pairs; two
// manifests with the same effective configuration hash identically.
std::uint64_t hash_config(const KeyValueMap& kv);

}  // namespace wtsim
