#pragma once

#include "ltlmine/trace.hpp"

namespace ltlmine {

/// A trace and a formula it is meant to satisfy universally.
struct DatasetPair {
  SymbolicTrace trace;
  Formula formula;

  friend bool operator==(const DatasetPair&, const DatasetPair&) = default;
};

} // namespace ltlmine
