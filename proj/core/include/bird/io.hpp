#pragma once

#include "bird/sim.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace bird::io {

inline constexpr int kSchemaVersion = 1;

/// Raised for malformed input files; `what()` names the offending field.
class ParseError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

// Regions as nested CSG objects:
//   {"type": "rect", "xmin": .., "xmax": .., "ymin": .., "ymax": ..}
//   {"type": "disc", "cx": .., "cy": .., "r": ..}
//   {"type": "union" | "intersect" | "diff", "left": {..}, "right": {..}}
//   {"type": "all"} / {"type": "empty"}
std::string region_to_json(const Region& r);
Region region_from_json(const std::string& text);

/// Scenario config (schema version 1). Missing fields keep their defaults.
ScenarioConfig scenario_from_json(const std::string& text);
std::string scenario_to_json(const ScenarioConfig& cfg);
ScenarioConfig load_scenario(const std::string& path);

/// Posterior wire format. Binary mode stores every real as a little-endian
/// IEEE-754 double, so encode/decode is bit exact.
std::vector<std::uint8_t> encode_posterior(const PoissonPosterior& post);
PoissonPosterior decode_posterior(const std::vector<std::uint8_t>& bytes);
std::string posterior_to_json(const PoissonPosterior& post);
PoissonPosterior posterior_from_json(const std::string& text);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

/// 64-bit FNV-1a of `text`, as 16 hex digits.
std::string fnv1a_hex(const std::string& text);

/// Result files.
void write_ospa_csv(std::ostream& os, const std::vector<Aggregate>& aggregates);
void write_tracks_json(std::ostream& os, const std::vector<TrialResult>& trials);
void write_summary_json(std::ostream& os, const ScenarioConfig& cfg, const std::vector<Aggregate>& aggregates,
                        const std::string& git_describe);

/// Point-set file: one "x y" pair per line; blank lines and '#' comments are skipped.
std::vector<Vec2> read_points(const std::string& path);

} // namespace bird::io
