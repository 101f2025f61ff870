#include "cyclemt/logging.hpp"

#include <iostream>
#include <mutex>
#include <string>
#include <utility>

namespace cyclemt {

namespace {

std::mutex& sink_mutex() {
  static std::mutex mutex;
  return mutex;
}

LogSink& sink() {
  static LogSink current = [](std::string_view message) {
    std::cerr << "warning: " << message << '\n';
  };
  return current;
}

}  // namespace

LogSink set_warning_sink(LogSink replacement) {
  std::lock_guard lock(sink_mutex());
  return std::exchange(sink(), std::move(replacement));
}

void log_warning(std::string_view message) {
  std::lock_guard lock(sink_mutex());
  if (sink()) sink()(message);
}

}  // namespace cyclemt
