#include "izosga/ledger.hpp"

#include <cmath>
#include <stdexcept>

namespace izosga {

void ErrorLedger::track(long t, double gap) {
  if (!(gap >= 0.0) || !std::isfinite(gap))
    throw std::invalid_argument("oracle gap must be finite and >= 0");
  const double n = static_cast<double>(entries_.size());
  mean_ = (n * mean_ + gap) / (n + 1.0);
  entries_.push_back({t, gap});
}

void ErrorLedger::mark_skipped(long) { ++skipped_; }

double ErrorLedger::recomputed_mean() const {
  if (entries_.empty()) return 0.0;
  double sum = 0.0;
  for (const Entry& e : entries_) sum += e.gap;
  return sum / static_cast<double>(entries_.size());
}

ErrorLedger track_epsilon_bar(ErrorLedger ledger, double gap, long t) {
  ledger.track(t, gap);
  return ledger;
}

}  // namespace izosga
