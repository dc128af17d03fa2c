#include "tgplan/log.hpp"

#include <cstdlib>

#include <spdlog/sinks/stdout_color_sinks.h>

namespace tgplan {

spdlog::logger& logger() {
  static std::shared_ptr<spdlog::logger> instance = [] {
    auto l = spdlog::stderr_color_mt("tgplan");
    l->set_level(spdlog::level::warn);
    if (const char* env = std::getenv("TGPLAN_LOG_LEVEL")) l->set_level(spdlog::level::from_str(env));
    l->set_pattern("[%l] %v");
    return l;
  }();
  return *instance;
}

}  // namespace tgplan
