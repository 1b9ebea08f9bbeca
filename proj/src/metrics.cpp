#include "mlsbm/metrics.hpp"

#include <algorithm>

#include "mlsbm/errors.hpp"

namespace mlsbm {

RecoveryLoss hamming_loss(const Assignment& sigma_hat, const Assignment& sigma) {
  if (sigma_hat.size() != sigma.size() || sigma.size() == 0)
    throw ValidationError("hamming_loss: length mismatch");
  std::size_t diff = 0;
  for (std::size_t i = 0; i < sigma.size(); ++i) diff += sigma_hat[i] != sigma[i];
  const std::size_t best = std::min(diff, sigma.size() - diff);
  return {static_cast<double>(best) / static_cast<double>(sigma.size())};
}

double detection_risk(std::span<const Bit> truths, std::span<const Bit> decisions) {
  if (truths.size() != decisions.size()) throw ValidationError("detection_risk: length mismatch");
  std::size_t null_trials = 0, planted_trials = 0, false_alarms = 0, misses = 0;
  for (std::size_t k = 0; k < truths.size(); ++k) {
    if (truths[k] > 1 || decisions[k] > 1) throw ValidationError("detection_risk: entries must be bits");
    if (truths[k] == 0) {
      ++null_trials;
      false_alarms += decisions[k];
    } else {
      ++planted_trials;
      misses += 1 - decisions[k];
    }
  }
  if (null_trials == 0 || planted_trials == 0)
    throw ValidationError("detection_risk: need at least one null and one planted trial");
  return static_cast<double>(false_alarms) / static_cast<double>(null_trials) +
         static_cast<double>(misses) / static_cast<double>(planted_trials);
}

}  // namespace mlsbm
