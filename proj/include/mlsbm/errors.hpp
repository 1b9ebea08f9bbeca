#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace mlsbm {

/// Input violates a documented precondition (bad n, T, rho, label lengths...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An exhaustive routine was asked to enumerate more than its hard limit.
class SizeGuardError : public std::length_error {
 public:
  SizeGuardError(const std::string& what, double requested, double limit)
      : std::length_error(what + " (requested " + fmt_num(requested) +
                          ", limit " + fmt_num(limit) + ")"),
        requested_(requested),
        limit_(limit) {}

  double requested() const noexcept { return requested_; }
  double limit() const noexcept { return limit_; }

 private:
  static std::string fmt_num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
  }
  double requested_;
  double limit_;
};

/// File read/write failures; message carries the offending path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mlsbm
