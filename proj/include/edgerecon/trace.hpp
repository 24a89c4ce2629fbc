#pragma once

#include <cstddef>
#include <vector>

namespace edgerecon {

struct TraceRecord {
  int iter = 0;
  double seconds = 0.0;
  double objective = 0.0;       // NaN when objective tracking is disabled
  std::vector<double> relerr;   // per contrast; empty without ground truth

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

// Per-iteration solver history. Iteration indices are strictly increasing and
// seconds nondecreasing.
struct SolverTrace {
  std::size_t error_columns = 0;  // number of relerr_j columns
  std::vector<TraceRecord> records;
};

}  // namespace edgerecon
