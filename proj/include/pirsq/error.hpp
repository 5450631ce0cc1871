#ifndef PIRSQ_ERROR_HPP
#define PIRSQ_ERROR_HPP

#include <stdexcept>
#include <string>
#include <utility>

namespace pirsq {

/// Library error with a stable machine-readable code alongside the message.
/// Codes in use: modulus_mismatch, division_by_zero, not_prime,
/// duplicate_nodes, dimension_mismatch, retries_exhausted, field_too_small,
/// invalid_params, span_failure, bad_config.
class Error : public std::runtime_error {
  public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

  private:
    std::string code_;
};

}  // namespace pirsq

#endif
