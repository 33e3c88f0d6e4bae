#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <limits>
#include <cmath>
#include <complex>
#include <string>

#include "qcarm/errors.hpp"
#include "qcarm/qsim/register_layout.hpp"

namespace qcarm::qsim {

// 1e-10 for double; single precision cannot hold that, so scale with epsilon.
template <typename Scalar>
inline constexpr Scalar kNormTolerance = std::max(Scalar(1e-10), Scalar(1024) * std::numeric_limits<Scalar>::epsilon());

// Normalized amplitude vector over a RegisterLayout. Construction validates
// the norm; nothing renormalizes silently.
template <typename Scalar>
class BasicStateVector {
 public:
  using Complex = std::complex<Scalar>;
  using Amplitudes = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

  BasicStateVector(RegisterLayout layout, Amplitudes amplitudes)
      : layout_(std::move(layout)), amplitudes_(std::move(amplitudes)) {
    if (static_cast<std::size_t>(amplitudes_.size()) != layout_.dimension())
      throw DomainError("StateVector: amplitude count does not match layout dimension");
    const Scalar drift = std::abs(amplitudes_.squaredNorm() - Scalar(1));
    if (!(drift <= kNormTolerance<Scalar>))
      throw NormalizationError("StateVector: squared norm off by " + std::to_string(double(drift)));
  }

  [[nodiscard]] const RegisterLayout& layout() const { return layout_; }
  [[nodiscard]] const Amplitudes& amplitudes() const { return amplitudes_; }
  [[nodiscard]] std::size_t dimension() const { return layout_.dimension(); }
  [[nodiscard]] Complex operator[](std::size_t i) const { return amplitudes_(Eigen::Index(i)); }
  [[nodiscard]] Scalar norm_squared() const { return amplitudes_.squaredNorm(); }

 private:
  RegisterLayout layout_;
  Amplitudes amplitudes_;
};

using StateVector = BasicStateVector<double>;

}  // namespace qcarm::qsim
