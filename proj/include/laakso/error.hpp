#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace laakso {

enum class ErrorKind {
  kCapacity,
  kDomain,
  kDegenerate,
  kDisconnected,
  kInvalidArgument,
  kParse,
  kDispatch,
  kNotUniformlyConvex,
  kOptimization,
  kValidation,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library carries a kind so the CLI can emit a
// machine-readable error object without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Edge-count budget for graph construction. LAAKSOLAB_BUDGET overrides the
// default of 2^20 edges.
std::size_t edge_budget();

}  // namespace laakso
