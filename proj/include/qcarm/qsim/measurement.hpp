#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qcarm/errors.hpp"
#include "qcarm/qsim/state_vector.hpp"
#include "qcarm/rng.hpp"

namespace qcarm::qsim {

// Marginal probabilities over a subset of registers. `layout` lists the
// dimensions of the kept registers in their original order and `probs` is
// indexed by the mixed-radix flat index over that sub-layout.
struct Distribution {
  RegisterLayout layout;
  std::vector<double> probs;

  [[nodiscard]] double operator[](std::size_t i) const { return probs.at(i); }
  [[nodiscard]] double total() const { return std::accumulate(probs.begin(), probs.end(), 0.0); }
};

template <typename Scalar>
Distribution exact_distribution(const BasicStateVector<Scalar>& state, std::span<const std::size_t> registers) {
  const auto& layout = state.layout();
  std::vector<std::size_t> dims;
  for (std::size_t r : registers) {
    layout.check_register(r);
    dims.push_back(layout.dim(r));
  }
  if (dims.empty()) throw DomainError("exact_distribution: no registers selected");
  Distribution dist{RegisterLayout(dims), {}};
  dist.probs.assign(dist.layout.dimension(), 0.0);

  // weight of each full-layout register in the sub-index (0 if marginalized)
  std::vector<std::size_t> weight(layout.register_count(), 0);
  for (std::size_t j = 0; j < registers.size(); ++j) {
    if (weight[registers[j]] != 0) throw DomainError("exact_distribution: register listed twice");
    weight[registers[j]] = dist.layout.stride(j);
  }

  // odometer over the full layout keeps the sub-index incrementally
  const auto& amps = state.amplitudes();
  std::vector<std::size_t> digit(layout.register_count(), 0);
  std::size_t sub = 0;
  for (std::size_t i = 0; i < layout.dimension(); ++i) {
    dist.probs[sub] += double(std::norm(amps(Eigen::Index(i))));
    for (std::size_t r = layout.register_count(); r-- > 0;) {
      sub += weight[r];
      if (++digit[r] < layout.dim(r)) break;
      sub -= weight[r] * layout.dim(r);
      digit[r] = 0;
    }
  }
  const double drift = std::abs(dist.total() - 1.0);
  if (!(drift <= 1e-10)) throw NormalizationError("exact_distribution: probabilities sum off by " + std::to_string(drift));
  return dist;
}

template <typename Scalar>
Distribution exact_distribution(const BasicStateVector<Scalar>& state, std::initializer_list<std::size_t> registers) {
  return exact_distribution(state, std::span<const std::size_t>(registers.begin(), registers.size()));
}

/// Inverse-CDF sampler over a fixed distribution.
class Sampler {
 public:
  explicit Sampler(const Distribution& dist) : cdf_(dist.probs.size()) {
    std::partial_sum(dist.probs.begin(), dist.probs.end(), cdf_.begin());
  }

  std::size_t operator()(Rng& rng) const {
    const double u = rng.uniform() * cdf_.back();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    auto idx = std::size_t(it - cdf_.begin());
    if (idx >= cdf_.size()) idx = cdf_.size() - 1;
    return idx;
  }

 private:
  std::vector<double> cdf_;
};

/// n i.i.d. flat outcomes (over dist.layout) from a generator seeded by `seed`.
inline std::vector<std::size_t> sample(const Distribution& dist, std::uint64_t seed, std::size_t n_samples) {
  if (n_samples < 1) throw DomainError("sample: n_samples must be >= 1");
  Rng rng(seed);
  Sampler sampler(dist);
  std::vector<std::size_t> out(n_samples);
  for (auto& o : out) o = sampler(rng);
  return out;
}

template <typename Scalar>
std::vector<std::size_t> sample(const BasicStateVector<Scalar>& state, std::span<const std::size_t> registers,
                                std::uint64_t seed, std::size_t n_samples) {
  return sample(exact_distribution(state, registers), seed, n_samples);
}

/// {"layout": [...], "probs": [{"index": [...], "p": x}, ...]}, entries with p > 1e-12.
inline nlohmann::json to_json(const Distribution& dist) {
  nlohmann::json probs = nlohmann::json::array();
  for (std::size_t i = 0; i < dist.probs.size(); ++i) {
    if (dist.probs[i] > 1e-12) probs.push_back({{"index", dist.layout.digits(i)}, {"p", dist.probs[i]}});
  }
  return {{"layout", dist.layout.dims()}, {"probs", probs}};
}

}  // namespace qcarm::qsim
