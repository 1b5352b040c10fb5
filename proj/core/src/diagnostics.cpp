#include "alpha_patch/diagnostics.hpp"

#include <iostream>
#include <mutex>
#include <string>
#include <utility>

namespace alpha_patch {
namespace {

std::mutex g_mutex;

WarningHandler& handler() {
  static WarningHandler h = [](std::string_view msg) { std::cerr << "alpha_patch: warning: " << msg << '\n'; };
  return h;
}

}  // namespace

WarningHandler set_warning_handler(WarningHandler h) {
  std::lock_guard lock(g_mutex);
  return std::exchange(handler(), std::move(h));
}

void warn(std::string_view message) {
  std::lock_guard lock(g_mutex);
  if (handler()) handler()(message);
}

}  // namespace alpha_patch
