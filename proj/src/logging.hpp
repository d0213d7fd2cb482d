#pragma once

#include <cstdlib>
#include <utility>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

// Library logging goes to stderr; FAIRMISS_LOG (trace, debug, info, warn,
// error, off) selects verbosity, default warn.
namespace fairmiss::log {

inline spdlog::logger& logger() {
    static auto instance = [] {
        auto l = spdlog::stderr_color_mt("fairmiss");
        l->set_pattern("[%l] %v");
        const char* level = std::getenv("FAIRMISS_LOG");
        l->set_level(level ? spdlog::level::from_str(level) : spdlog::level::warn);
        return l;
    }();
    return *instance;
}

template <typename... Args>
void debug(fmt::format_string<Args...> fmt, Args&&... args) {
    logger().debug(fmt, std::forward<Args>(args)...);
}

template <typename... Args>
void info(fmt::format_string<Args...> fmt, Args&&... args) {
    logger().info(fmt, std::forward<Args>(args)...);
}

template <typename... Args>
void warn(fmt::format_string<Args...> fmt, Args&&... args) {
    logger().warn(fmt, std::forward<Args>(args)...);
}

}  // namespace fairmiss::log
