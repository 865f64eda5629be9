#pragma once

#include <functional>
#include <string_view>

namespace collab {

using WarningHandler = std::function<void(std::string_view)>;

// Non-fatal notices (dropped models, clipped probabilities, swapped pairs).
// The default handler writes "warning: <msg>" to stderr.
void warn(std::string_view message);

// Installs a handler and returns the previous one. Passing an empty handler
// restores the default.
WarningHandler set_warning_handler(WarningHandler handler);

// Swaps in a handler for the lifetime of the guard.
class ScopedWarningHandler {
 public:
  explicit ScopedWarningHandler(WarningHandler handler)
      : previous_(set_warning_handler(std::move(handler))) {}
  ~ScopedWarningHandler() { set_warning_handler(std::move(previous_)); }
  ScopedWarningHandler(const ScopedWarningHandler&) = delete;
  ScopedWarningHandler& operator=(const ScopedWarningHandler&) = delete;

 private:
  WarningHandler previous_;
};

}  // namespace collab
