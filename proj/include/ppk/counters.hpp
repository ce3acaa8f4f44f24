#pragma once

#include <cstdint>

namespace ppk {

// Work counters threaded through solver loops.  Matvecs are tracked on the
// operators themselves; length-n vector ops and dots are tallied here,
// including polynomial-application internals (documented in the report
// schema).
struct Counters {
  std::int64_t vecops = 0;  // length-n axpy/scale/copy-like operations
  std::int64_t dots = 0;
};

}  // namespace ppk
