#include "lpinn/log.hpp"

#include <cstdlib>
#include <string>

namespace lpinn::log {

void init_from_env() {
  const char* env = std::getenv("LPINN_LOG");
  const std::string level = env ? env : "info";
  if (level == "debug") {
    spdlog::set_level(spdlog::level::debug);
  } else if (level == "warn") {
    spdlog::set_level(spdlog::level::warn);
  } else if (level == "error") {
    spdlog::set_level(spdlog::level::err);
  } else {
    spdlog::set_level(spdlog::level::info);
  }
}

}  // namespace lpinn::log
