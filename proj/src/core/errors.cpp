#include "iotchain/core/errors.hpp"

namespace iotchain {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_argument: return "invalid-argument";
    case Errc::invalid_architecture: return "invalid-architecture";
    case Errc::dimension_mismatch: return "dimension-mismatch";
    case Errc::decode: return "decode";
    case Errc::io: return "io";
    case Errc::format: return "format";
    case Errc::parse: return "parse";
    case Errc::not_found: return "not-found";
    case Errc::insufficient_data: return "insufficient-data";
    case Errc::invalid_feature: return "invalid-feature";
    case Errc::diverged: return "diverged";
    case Errc::not_trained: return "not-trained";
    case Errc::numeric_degenerate: return "numeric-degenerate";
    case Errc::already_registered: return "already-registered";
    case Errc::empty_pool: return "empty-pool";
    case Errc::degenerate_eval: return "degenerate-eval";
  }
  return "unknown";
}

}  // namespace iotchain
