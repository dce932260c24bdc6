#include "laakso/metric_space.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "laakso/error.hpp"
#include "laakso/kernels.hpp"

namespace laakso {

FiniteMetricSpace::FiniteMetricSpace(std::vector<std::string> ids,
                                     std::vector<std::int64_t> numerators, int exponent,
                                     std::string scale_note)
    : ids_(std::move(ids)),
      numer_(std::move(numerators)),
      exponent_(exponent),
      scale_note_(std::move(scale_note)) {
  if (numer_.size() != ids_.size() * ids_.size()) {
    throw Error(ErrorKind::kValidation, "distance table is not |ids| x |ids|");
  }
  if (exponent_ < 0 || exponent_ > 62) {
    throw Error(ErrorKind::kDomain, "distance exponent out of range");
  }
}

FiniteMetricSpace FiniteMetricSpace::from_dyadic(std::vector<std::string> ids,
                                                 const std::vector<Dyadic>& entries,
                                                 std::string scale_note) {
  int exponent = 0;
  for (const auto& e : entries) exponent = std::max(exponent, e.exponent());
  std::vector<std::int64_t> numer(entries.size());
  for (std::size_t k = 0; k < entries.size(); ++k) numer[k] = entries[k].scaled_to(exponent);
  return FiniteMetricSpace(std::move(ids), std::move(numer), exponent, std::move(scale_note));
}

double FiniteMetricSpace::value(std::size_t i, std::size_t j) const {
  return std::ldexp(static_cast<double>(numerator(i, j)), -exponent_);
}

double FiniteMetricSpace::min_positive_distance() const {
  std::int64_t best = 0;
  for (std::int64_t v : numer_) {
    if (v > 0 && (best == 0 || v < best)) best = v;
  }
  return std::ldexp(static_cast<double>(best), -exponent_);
}

double FiniteMetricSpace::diameter() const {
  std::int64_t best = 0;
  for (std::int64_t v : numer_) best = std::max(best, v);
  return std::ldexp(static_cast<double>(best), -exponent_);
}

void FiniteMetricSpace::validate(std::size_t exhaustive_limit, std::size_t sampled_triples,
                                 std::uint64_t seed) const {
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) {
    if (numerator(i, i) != 0) throw Error(ErrorKind::kValidation, "nonzero self-distance at " + ids_[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      if (numerator(i, j) != numerator(j, i)) {
        throw Error(ErrorKind::kValidation, "asymmetric distance " + ids_[i] + " / " + ids_[j]);
      }
      if (numerator(i, j) <= 0) {
        throw Error(ErrorKind::kValidation, "non-positive distance " + ids_[i] + " / " + ids_[j]);
      }
    }
  }
  auto report = [&](std::size_t i, std::size_t j, std::size_t k) {
    return Error(ErrorKind::kValidation, "triangle inequality fails: d(" + ids_[i] + "," + ids_[k] +
                                             ") > d(" + ids_[i] + "," + ids_[j] + ") + d(" +
                                             ids_[j] + "," + ids_[k] + ")");
  };
  if (n <= exhaustive_limit) {
    if (auto bad = kernels::parallel::triangle_violation(*this)) throw report((*bad)[0], (*bad)[1], (*bad)[2]);
    return;
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (std::size_t t = 0; t < sampled_triples; ++t) {
    const std::size_t i = pick(rng), j = pick(rng), k = pick(rng);
    if (numerator(i, k) > numerator(i, j) + numerator(j, k)) throw report(i, j, k);
  }
}

}  // namespace laakso
