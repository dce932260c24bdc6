#include "laakso/error.hpp"

#include <cstdlib>
#include <string>

namespace laakso {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kCapacity: return "capacity";
    case ErrorKind::kDomain: return "domain";
    case ErrorKind::kDegenerate: return "degenerate";
    case ErrorKind::kDisconnected: return "disconnected";
    case ErrorKind::kInvalidArgument: return "invalid_argument";
    case ErrorKind::kParse: return "parse";
    case ErrorKind::kDispatch: return "dispatch";
    case ErrorKind::kNotUniformlyConvex: return "not_uniformly_convex";
    case ErrorKind::kOptimization: return "optimization";
    case ErrorKind::kValidation: return "validation";
  }
  return "unknown";
}

std::size_t edge_budget() {
  constexpr std::size_t kDefault = std::size_t{1} << 20;
  const char* env = std::getenv("LAAKSOLAB_BUDGET");
  if (env == nullptr || *env == '\0') return kDefault;
  char* end = nullptr;
  const unsigned long long value = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0' || value == 0) {
    throw Error(ErrorKind::kParse,
                std::string("LAAKSOLAB_BUDGET is not a positive integer: ") + env);
  }
  return static_cast<std::size_t>(value);
}

}  // namespace laakso
