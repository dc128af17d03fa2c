#pragma once

#include <spdlog/spdlog.h>

namespace tgplan {

/// Library logger on stderr. Level comes from TGPLAN_LOG_LEVEL
/// (trace, debug, info, warn, error, off); default warn.
spdlog::logger& logger();

}  // namespace tgplan
