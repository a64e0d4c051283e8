#pragma once

#include <stdexcept>
#include <string>

namespace qrabi {

// Fock truncation cannot represent the requested dynamics; carries the
// recommended larger cutoff when one is known (0 otherwise).
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, int recommended_n_max = 0)
      : std::runtime_error(what), recommended_n_max_(recommended_n_max) {}
  int recommended_n_max() const { return recommended_n_max_; }

 private:
  int recommended_n_max_;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class VerificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qrabi
