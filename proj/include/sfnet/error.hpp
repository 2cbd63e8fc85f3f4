#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sfnet {

enum class errc {
  self_loop,
  duplicate_edge,
  dead_endpoint,
  already_dead,
  invalid_node,
  no_such_edge,
  empty_graph,
  gamma_out_of_range,
  invalid_params,
  randomization_failed,
  degenerate_histogram,
  too_large,
  length_mismatch,
  parse_error,
  invalid_config,
  io_error,
};

constexpr std::string_view to_string(errc code) {
  switch (code) {
    case errc::self_loop: return "SelfLoop";
    case errc::duplicate_edge: return "DuplicateEdge";
    case errc::dead_endpoint: return "DeadEndpoint";
    case errc::already_dead: return "AlreadyDead";
    case errc::invalid_node: return "InvalidNode";
    case errc::no_such_edge: return "NoSuchEdge";
    case errc::empty_graph: return "EmptyGraph";
    case errc::gamma_out_of_range: return "GammaOutOfRange";
    case errc::invalid_params: return "InvalidParams";
    case errc::randomization_failed: return "RandomizationFailed";
    case errc::degenerate_histogram: return "DegenerateHistogram";
    case errc::too_large: return "TooLarge";
    case errc::length_mismatch: return "LengthMismatch";
    case errc::parse_error: return "ParseError";
    case errc::invalid_config: return "InvalidConfig";
    case errc::io_error: return "IoError";
  }
  return "Unknown";
}

/// Every recoverable failure in the library is reported as an `error`
/// carrying a machine-checkable code.
class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

}  // namespace sfnet
