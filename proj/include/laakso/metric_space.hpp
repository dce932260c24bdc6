#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "laakso/dyadic.hpp"

namespace laakso {

/// Finite metric space with an exact distance table. All entries share the
/// denominator 2^exponent, so the table stores 64-bit numerators only.
class FiniteMetricSpace {
 public:
  FiniteMetricSpace() = default;
  FiniteMetricSpace(std::vector<std::string> ids, std::vector<std::int64_t> numerators,
                    int exponent = 0, std::string scale_note = {});

  /// Builds from arbitrary dyadic entries (row-major n*n), choosing the
  /// smallest common exponent.
  static FiniteMetricSpace from_dyadic(std::vector<std::string> ids,
                                       const std::vector<Dyadic>& entries,
                                       std::string scale_note = {});

  std::size_t size() const { return ids_.size(); }
  const std::vector<std::string>& ids() const { return ids_; }
  const std::string& id(std::size_t i) const { return ids_[i]; }
  int exponent() const { return exponent_; }
  const std::string& scale_note() const { return scale_note_; }

  std::int64_t numerator(std::size_t i, std::size_t j) const { return numer_[i * ids_.size() + j]; }
  Dyadic distance(std::size_t i, std::size_t j) const {
    return Dyadic::from_parts(numerator(i, j), exponent_);
  }
  double value(std::size_t i, std::size_t j) const;

  const std::vector<std::int64_t>& numerators() const { return numer_; }

  /// Smallest positive distance and the diameter, as doubles.
  double min_positive_distance() const;
  double diameter() const;

  /// Checks zero diagonal, symmetry, positivity and the triangle inequality
  /// (every triple up to `exhaustive_limit` points, else `sampled_triples`
  /// seeded random triples). Throws Error(kValidation) naming the witness.
  void validate(std::size_t exhaustive_limit = 700, std::size_t sampled_triples = 1000000,
                std::uint64_t seed = 1) const;

  // Compares ids and exact distances; the scale note is descriptive only.
  friend bool operator==(const FiniteMetricSpace& a, const FiniteMetricSpace& b) {
    return a.ids_ == b.ids_ && a.exponent_ == b.exponent_ && a.numer_ == b.numer_;
  }

 private:
  std::vector<std::string> ids_;
  std::vector<std::int64_t> numer_;
  int exponent_ = 0;
  std::string scale_note_;
};

}  // namespace laakso
