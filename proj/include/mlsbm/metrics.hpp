#pragma once

#include <span>

#include "mlsbm/model.hpp"

namespace mlsbm {

/// Normalized Hamming distance up to a global label flip; always in [0, 1/2].
struct RecoveryLoss {
  double value = 0.0;
};

RecoveryLoss hamming_loss(const Assignment& sigma_hat, const Assignment& sigma);

/// Empirical type-I rate plus type-II rate. truths[k] = 1 when trial k was
/// drawn from the planted model; decisions[k] = 1 when the test said planted.
double detection_risk(std::span<const Bit> truths, std::span<const Bit> decisions);

}  // namespace mlsbm
