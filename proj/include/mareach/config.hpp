#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "mareach/reach.hpp"

namespace mareach {

/// Run parameters carried alongside the scenario by a config file.
struct RunConfig {
    Scenario scenario;
    int horizon = 1;
    std::uint64_t seed = 0;
    std::string mode = "per-agent";  // or "monolithic"
    int workers = 1;
    SdpSettings sdp;
    std::string name;
    std::string config_hash;  // FNV-1a of the canonical config text
    std::map<std::pair<int, int>, std::string> weight_files;  // as referenced
};

/// Loads and validates a scenario config (JSON). Continuous-time agent models
/// are ZOH-discretized on load. Unknown fields are rejected.
RunConfig load_config(const std::filesystem::path& path);

/// Weight file IO: {"layers": [{"W": [[...]], "b": [...]}, ...]}.
Mlp load_weights(const std::filesystem::path& path);
void save_weights(const Mlp& net, const std::filesystem::path& path);

/// Seeded generator of small-weight networks for test scenarios.
Mlp synth_weights(int n_x, int n_u, const std::vector<int>& hidden, std::uint64_t seed,
                  double scale = 0.1);

/// Network file references of a config, readable before the weight files
/// exist (used by synth-weights).
struct WeightStub {
    int i = 0;
    int j = 0;
    std::filesystem::path path;
    int n_x = 0;
    int n_u = 0;
};
std::vector<WeightStub> scan_weight_refs(const std::filesystem::path& config_path);

/// Sub-scenario over the first `verified` non-static agents (ascending id).
/// Every kept agent's neighborhood must stay inside the kept set (static
/// neighbors are carried along); chains and other prefix-closed topologies
/// qualify.
Scenario prefix_scenario(const Scenario& s, int verified);

/// Result file IO; files are self-describing (config hash, seed, solver
/// settings, tool version) and round-trip through `check` without re-running.
void save_result(const ReachResult& result, const RunConfig& cfg,
                 const std::filesystem::path& path);

struct LoadedResult {
    std::map<int, std::vector<Box>> boxes;
    std::string mode;
    std::string config_hash;
    std::uint64_t seed = 0;
    int horizon = 0;
};
LoadedResult load_result(const std::filesystem::path& path);

/// CSV export: per agent one bounds file (step,coord,lower,upper) and one
/// sampled-trajectory file (sample,step,coord,value).
void export_csv(const ReachResult& result, const Scenario& scenario,
                const std::filesystem::path& dir, int trajectory_samples = 50,
                std::uint64_t seed = 0);

std::string tool_version();

}  // namespace mareach
