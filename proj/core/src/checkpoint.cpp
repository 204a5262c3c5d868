#include "lpinn/checkpoint.hpp"

#include "lpinn/errors.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace lpinn {

std::string checkpoint_to_string(const Checkpoint& ck) {
  const nlohmann::json doc{
      {"format", kCheckpointFormat},
      {"config_hash", ck.config_hash},
      {"seed", ck.seed},
      {"model", to_string(ck.model)},
      {"params", params_to_json(ck.params)},
  };
  return doc.dump(1) + "\n";
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ck) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write checkpoint " + path.string());
  out << checkpoint_to_string(ck);
}

Checkpoint parse_checkpoint(const std::string& text, const ExperimentConfig& config) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("checkpoint is not valid JSON: ") + e.what());
  }
  Checkpoint ck;
  try {
    if (doc.at("format").get<std::string>() != kCheckpointFormat) {
      throw ConfigError("unsupported checkpoint format '" +
                        doc.at("format").get<std::string>() + "'");
    }
    ck.config_hash = doc.at("config_hash").get<std::string>();
    ck.seed = doc.at("seed").get<std::uint64_t>();
    ck.model = model_kind_from_string(doc.at("model").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed checkpoint: ") + e.what());
  }
  const auto expected = config_hash(config);
  if (ck.config_hash != expected) {
    throw ConfigError("checkpoint config hash " + ck.config_hash +
                      " does not match config hash " + expected);
  }
  if (ck.model != config.model.kind) {
    throw ConfigError("checkpoint holds a " + to_string(ck.model) +
                      " model, config asks for " + to_string(config.model.kind));
  }
  if (!doc.contains("params")) throw ConfigError("malformed checkpoint: no params");
  ck.params = params_from_json(doc["params"], layout_of(build_model(config)));
  return ck;
}

Checkpoint load_checkpoint(const std::filesystem::path& path,
                           const ExperimentConfig& config) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open checkpoint " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_checkpoint(ss.str(), config);
}

}  // namespace lpinn
