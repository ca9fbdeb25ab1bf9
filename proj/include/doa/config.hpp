#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "doa/array_model.hpp"
#include "doa/signal_sim.hpp"
#include "doa/spectrum.hpp"
#include "doa/subspace.hpp"

namespace doa {

inline constexpr int kConfigSchemaVersion = 1;

enum class PrecisionMode { single, double_, both };

PrecisionMode parse_precision_mode(std::string_view text);
std::string_view to_string(PrecisionMode mode) noexcept;

// Everything one JSON config file drives. Subcommands read the sections they
// need; missing optional sections take the defaults below.
struct RunConfig {
  ScenarioConfig scenario;
  AngleGrid grid;
  std::size_t model_order = 0;  // defaults to the number of sources
  std::vector<Algorithm> algorithms{Algorithm::music};
  PrecisionMode precision = PrecisionMode::double_;
  WorkerCount workers = WorkerCount::automatic();
  std::vector<std::pair<std::size_t, std::size_t>> bench_ranges{{360, 1}, {360, 30}, {360, 60},
                                                                {360, 90}};
  std::size_t bench_repeats = 5;
};

// Two uncorrelated unit-power sources at azimuths 30 and 120 degrees in the
// plane of an 8-element, 10 m radius circular array at 15 MHz; 15 dB SNR,
// 128 snapshots, azimuth 0..359 at elevation 90.
RunConfig reference_config(std::uint64_t seed = 42);

// Throws Error(parse) with "<source>:<line>:<col>" for syntax errors and
// "<source>: at <json-pointer>" for schema errors.
RunConfig parse_config(std::string_view text, std::string_view source_name = "<config>");
RunConfig load_config(const std::string& path);

std::string dump_config(const RunConfig& cfg);

// "360x1,360x30" -> {{360,1},{360,30}}
std::vector<std::pair<std::size_t, std::size_t>> parse_ranges(std::string_view text);

// "all" expands to the four algorithms.
std::vector<Algorithm> parse_algorithm_list(std::string_view text);

}  // namespace doa
