#pragma once

#include <stdexcept>
#include <string>

namespace iotchain {

/// Failure categories shared by every module. The CLI maps these onto exit codes.
enum class Errc {
  invalid_argument,
  invalid_architecture,
  dimension_mismatch,
  decode,
  io,
  format,
  parse,
  not_found,
  insufficient_data,
  invalid_feature,
  diverged,
  not_trained,
  numeric_degenerate,
  already_registered,
  empty_pool,
  degenerate_eval,
};

const char* to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace iotchain
