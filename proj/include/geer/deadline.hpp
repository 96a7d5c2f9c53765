#pragma once

#include <chrono>
#include <optional>

#include "geer/error.hpp"

namespace geer {

using Clock = std::chrono::steady_clock;

/// Optional wall-clock limit for one query. A default-constructed deadline
/// never expires.
class Deadline {
public:
  Deadline() = default;
  explicit Deadline(Clock::duration budget) : expires_at_(Clock::now() + budget) {}

  bool expired() const { return expires_at_ && Clock::now() >= *expires_at_; }

  void check() const {
    if (expired()) throw TimeoutError("query exceeded its time budget");
  }

  static const Deadline& none() {
    static const Deadline d;
    return d;
  }

private:
  std::optional<Clock::time_point> expires_at_;
};

} // namespace geer
