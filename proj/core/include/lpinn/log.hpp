#pragma once

#include <spdlog/spdlog.h>

namespace lpinn::log {

/// Sets the level from LPINN_LOG (debug|info|warn|error); default info.
void init_from_env();

using spdlog::debug;
using spdlog::info;
using spdlog::warn;
using spdlog::error;

}  // namespace lpinn::log
