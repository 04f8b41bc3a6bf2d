#pragma once

#include <stdexcept>

namespace strat {

// Requested work lies outside what an algorithm supports (index caps,
// multiplicity limits of the oracles).
class capability_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A cache file is well formed but describes a different tensor.
class stale_cache_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A cache file is truncated or otherwise unreadable.
class format_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace strat
