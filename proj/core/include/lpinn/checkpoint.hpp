#pragma once

#include "lpinn/config.hpp"
#include "lpinn/param_vector.hpp"

#include <cstdint>
#include <filesystem>
#include <string>

namespace lpinn {

inline constexpr const char* kCheckpointFormat = "lpinn-checkpoint-1";

struct Checkpoint {
  std::string config_hash;
  std::uint64_t seed = 0;
  ModelKind model = ModelKind::Pinn;
  ParamVector params;
};

/// JSON text {format, config_hash, seed, model, params}. Doubles are written
/// in shortest round-trip form, so save -> load -> save is byte-identical.
std::string checkpoint_to_string(const Checkpoint& checkpoint);
void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);

/// Parses a checkpoint and checks it against the configuration that is
/// supposed to have produced it. Throws ConfigError on a malformed file, a
/// config hash or model kind mismatch, or parameter shapes that do not fit
/// the configured model.
Checkpoint parse_checkpoint(const std::string& text, const ExperimentConfig& config);
Checkpoint load_checkpoint(const std::filesystem::path& path,
                           const ExperimentConfig& config);

}  // namespace lpinn
