#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "qcarm/errors.hpp"
#include "qcarm/qsim/operations.hpp"

namespace qcarm::qsim {

// Rotation data of Grover search with t marked items among D:
// sin(theta) = sqrt(t / D), and G^m|u> = sin((2m+1)theta)|marked> + cos((2m+1)theta)|unmarked>.
template <typename Scalar = double>
struct BasicGroverAngles {
  std::size_t dimension = 1;
  std::size_t marked = 0;
  Scalar theta = 0;

  BasicGroverAngles() = default;
  BasicGroverAngles(std::size_t d, std::size_t t) : dimension(d), marked(t) {
    if (d < 1 || t > d) throw DomainError("GroverAngles: need 0 <= t <= D, D >= 1");
    if (t == d)
      theta = std::numbers::pi_v<Scalar> / 2;
    else
      theta = std::asin(std::sqrt(Scalar(t) / Scalar(d)));
  }

  /// f = P theta / pi, the spectral peak position for a size-P count register.
  [[nodiscard]] Scalar f(std::size_t p) const { return Scalar(p) * theta / std::numbers::pi_v<Scalar>; }

  [[nodiscard]] Scalar marked_amplitude(std::size_t m) const {
    return marked == 0 ? Scalar(0) : std::sin(Scalar(2 * m + 1) * theta) / std::sqrt(Scalar(marked));
  }
  [[nodiscard]] Scalar unmarked_amplitude(std::size_t m) const {
    return marked == dimension ? Scalar(0)
                               : std::cos(Scalar(2 * m + 1) * theta) / std::sqrt(Scalar(dimension - marked));
  }
};

using GroverAngles = BasicGroverAngles<double>;

/// G^m|u_D> from the 2-plane rotation formula, without iterating.
template <typename Scalar = double, typename Predicate>
BasicStateVector<Scalar> analytic_grover_state(std::size_t d, std::size_t m, Predicate&& marked) {
  const auto mask = detail::evaluate_mask(d, marked);
  const auto t = std::size_t(std::count(mask.begin(), mask.end(), 1));
  const BasicGroverAngles<Scalar> angles(d, t);
  auto amps = typename BasicStateVector<Scalar>::Amplitudes(Eigen::Index(d));
  const Scalar in = angles.marked_amplitude(m), out = angles.unmarked_amplitude(m);
  for (std::size_t a = 0; a < d; ++a) amps(Eigen::Index(a)) = mask[a] ? in : out;
  return {RegisterLayout({d}), std::move(amps)};
}

/// Analytic counterpart of controlled_grover_powers.
template <typename Scalar = double, typename Predicate>
BasicStateVector<Scalar> analytic_controlled_grover_powers(std::size_t p, std::size_t r, std::size_t d,
                                                           Predicate&& marked, std::size_t cap = kDefaultAmplitudeCap) {
  std::vector<std::size_t> dims(r, p);
  dims.push_back(d);
  RegisterLayout layout(std::move(dims), cap);
  const auto mask = detail::evaluate_mask(d, marked);
  const auto t = std::size_t(std::count(mask.begin(), mask.end(), 1));
  const BasicGroverAngles<Scalar> angles(d, t);
  const Scalar weight = Scalar(1) / std::sqrt(std::pow(Scalar(p), Scalar(r)));

  typename BasicStateVector<Scalar>::Amplitudes amps(Eigen::Index(layout.dimension()));
  for (std::size_t j = 0; j < layout.dimension() / d; ++j) {
    std::size_t sum = 0;
    for (std::size_t rest = j; rest > 0; rest /= p) sum += rest % p;
    const Scalar in = angles.marked_amplitude(sum) * weight, out = angles.unmarked_amplitude(sum) * weight;
    for (std::size_t a = 0; a < d; ++a) amps(Eigen::Index(j * d + a)) = mask[a] ? in : out;
  }
  return {std::move(layout), std::move(amps)};
}

}  // namespace qcarm::qsim
