#pragma once

#include <span>
#include <string>

#include "w2bayes/signal.hpp"

namespace w2b {

/// Parameter-to-gather simulator. Implementations are pure functions of
/// theta and safe to call concurrently.
class ForwardModel {
 public:
  virtual ~ForwardModel() = default;

  virtual std::size_t dim() const = 0;
  virtual const TimeGrid& grid() const = 0;
  virtual Gather simulate(std::span<const double> theta) const = 0;
};

}  // namespace w2b
