#include "chordkit/log.hpp"

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <mutex>
#include <string>

namespace chordkit {

namespace {

std::shared_ptr<spdlog::logger> logger() {
    static std::once_flag once;
    static std::shared_ptr<spdlog::logger> instance;
    std::call_once(once, [] {
        instance = spdlog::stderr_color_mt("chordkit");
        instance->set_pattern("[%l] %v");
        instance->set_level(spdlog::level::warn);
    });
    return instance;
}

}  // namespace

void init_logging() {
    auto log = logger();
    if (const char* env = std::getenv("CHORDKIT_LOG")) {
        log->set_level(spdlog::level::from_str(env));
    }
}

void log_info(std::string_view message) { logger()->info("{}", message); }
void log_warning(std::string_view message) { logger()->warn("{}", message); }
void log_debug(std::string_view message) { logger()->debug("{}", message); }

}  // namespace chordkit
