#pragma once

#include <vector>

namespace izosga {

/// Running record of oracle-gap estimates over the outer iterations.
///
/// Gaps are measured only every `cadence`-th iteration; the other iterations
/// are counted as skipped and do not enter the mean.
class ErrorLedger {
 public:
  struct Entry {
    long t;
    double gap;
  };

  explicit ErrorLedger(long cadence = 1) : cadence_(cadence) {}

  /// Appends a gap (must be >= 0) and updates the mean as (n m + g) / (n + 1).
  void track(long t, double gap);
  void mark_skipped(long t);

  long cadence() const { return cadence_; }
  bool due(long t) const { return cadence_ > 0 && t % cadence_ == 0; }
  double mean() const { return mean_; }
  long count() const { return static_cast<long>(entries_.size()); }
  long skipped() const { return skipped_; }
  const std::vector<Entry>& entries() const { return entries_; }

  /// Mean recomputed from the stored entries in index order.
  double recomputed_mean() const;

 private:
  long cadence_;
  double mean_ = 0.0;
  long skipped_ = 0;
  std::vector<Entry> entries_;
};

/// Functional form: returns `ledger` with `gap` appended at iteration t.
ErrorLedger track_epsilon_bar(ErrorLedger ledger, double gap, long t);

}  // namespace izosga
