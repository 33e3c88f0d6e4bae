#pragma once

// Register-level operations on BasicStateVector. Each takes a state by const
// reference and returns a new state; the result constructor re-checks the norm.
//
// A register r is handled through row-major block views: for each setting of
// the registers left of r, the amplitudes form a dim(r) x stride(r) matrix
// whose rows are indexed by the value of r. Diffusion and the Fourier
// transform then become column-wise Eigen expressions on those blocks.

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "qcarm/errors.hpp"
#include "qcarm/qsim/register_layout.hpp"
#include "qcarm/qsim/state_vector.hpp"

namespace qcarm::qsim {

inline constexpr double kZeroProbability = 1e-15;

namespace detail {

template <typename Scalar>
using BlockMap = Eigen::Map<Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

template <typename Scalar, typename Fn>
void for_each_block(typename BasicStateVector<Scalar>::Amplitudes& amps, const RegisterLayout& layout,
                    std::size_t r, Fn&& fn) {
  layout.check_register(r);
  const auto rows = Eigen::Index(layout.dim(r));
  const auto cols = Eigen::Index(layout.stride(r));
  const std::size_t block = layout.dim(r) * layout.stride(r);
  for (std::size_t o = 0; o < layout.outer(r); ++o) {
    BlockMap<Scalar> view(amps.data() + o * block, rows, cols);
    fn(view);
  }
}

template <typename Predicate>
std::vector<char> evaluate_mask(std::size_t n, Predicate&& marked) {
  std::vector<char> mask(n);
  for (std::size_t v = 0; v < n; ++v) mask[v] = marked(v) ? 1 : 0;
  return mask;
}

/// In-place S_1 then 2|u><u| - I on a single-register amplitude vector.
template <typename Vector>
void grover_step(Vector& v, const std::vector<char>& mask) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (mask[std::size_t(i)]) v(i) = -v(i);
  const auto twice_mean = v.mean() * typename Vector::Scalar(2);
  v = (twice_mean - v.array()).matrix();
}

/// Unitary DFT matrix, entry (b, a) = exp(+-2 pi i a b / n) / sqrt(n).
template <typename Scalar>
Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic> fourier_matrix(std::size_t n, bool inverse) {
  Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic> f(n, n);
  const Scalar norm = Scalar(1) / std::sqrt(Scalar(n));
  const Scalar sign = inverse ? Scalar(-1) : Scalar(1);
  for (std::size_t b = 0; b < n; ++b)
    for (std::size_t a = 0; a < n; ++a) {
      // reduce ab mod n first so large registers keep full phase accuracy
      const Scalar angle = sign * Scalar(2) * std::numbers::pi_v<Scalar> * Scalar((a * b) % n) / Scalar(n);
      f(Eigen::Index(b), Eigen::Index(a)) = std::polar(norm, angle);
    }
  return f;
}

}  // namespace detail

template <typename Scalar = double>
BasicStateVector<Scalar> uniform_state(const RegisterLayout& layout) {
  using Amps = typename BasicStateVector<Scalar>::Amplitudes;
  const auto d = Eigen::Index(layout.dimension());
  return {layout, Amps::Constant(d, std::complex<Scalar>(Scalar(1) / std::sqrt(Scalar(d))))};
}

/// Basis state with the given per-register values.
template <typename Scalar = double>
BasicStateVector<Scalar> basis_state(const RegisterLayout& layout, std::span<const std::size_t> digits) {
  using Amps = typename BasicStateVector<Scalar>::Amplitudes;
  Amps amps = Amps::Zero(Eigen::Index(layout.dimension()));
  amps(Eigen::Index(layout.flat_index(digits))) = Scalar(1);
  return {layout, std::move(amps)};
}

/// Negates amplitudes whose register-r value satisfies `marked`.
template <typename Scalar, typename Predicate>
BasicStateVector<Scalar> phase_flip(const BasicStateVector<Scalar>& state, std::size_t r, Predicate&& marked) {
  state.layout().check_register(r);
  const auto mask = detail::evaluate_mask(state.layout().dim(r), marked);
  auto amps = state.amplitudes();
  detail::for_each_block<Scalar>(amps, state.layout(), r, [&](auto& block) {
    for (Eigen::Index v = 0; v < block.rows(); ++v)
      if (mask[std::size_t(v)]) block.row(v) *= Scalar(-1);
  });
  return {state.layout(), std::move(amps)};
}

/// Reflection 2|u><u| - I about the uniform state of register r.
template <typename Scalar>
BasicStateVector<Scalar> diffusion(const BasicStateVector<Scalar>& state, std::size_t r) {
  auto amps = state.amplitudes();
  detail::for_each_block<Scalar>(amps, state.layout(), r, [](auto& block) {
    const auto twice_mean = (block.colwise().mean() * Scalar(2)).eval();
    block = (-block).rowwise() + twice_mean;
  });
  return {state.layout(), std::move(amps)};
}

/// G = (2|u><u| - I) S_1 on register r.
template <typename Scalar, typename Predicate>
BasicStateVector<Scalar> grover_iterate(const BasicStateVector<Scalar>& state, std::size_t r, Predicate&& marked) {
  return diffusion(phase_flip(state, r, std::forward<Predicate>(marked)), r);
}

/// Size-dim(r) discrete Fourier transform F|a> = sum_b e^{2 pi i ab/n}|b>/sqrt(n).
template <typename Scalar>
BasicStateVector<Scalar> qft(const BasicStateVector<Scalar>& state, std::size_t r, bool inverse = false) {
  state.layout().check_register(r);
  const auto f = detail::fourier_matrix<Scalar>(state.layout().dim(r), inverse);
  auto amps = state.amplitudes();
  detail::for_each_block<Scalar>(amps, state.layout(), r, [&f](auto& block) { block = (f * block).eval(); });
  return {state.layout(), std::move(amps)};
}

template <typename Scalar>
BasicStateVector<Scalar> inverse_qft(const BasicStateVector<Scalar>& state, std::size_t r) {
  return qft(state, r, true);
}

/// Appends a two-level register holding predicate(value of register r),
/// i.e. a controlled-NOT from r onto a fresh |0>.
template <typename Scalar, typename Predicate>
BasicStateVector<Scalar> compute_flag(const BasicStateVector<Scalar>& state, std::size_t r, Predicate&& predicate,
                                      std::size_t cap = kDefaultAmplitudeCap) {
  state.layout().check_register(r);
  const auto& layout = state.layout();
  const auto mask = detail::evaluate_mask(layout.dim(r), predicate);
  auto out_layout = layout.appended(2, cap);
  using Amps = typename BasicStateVector<Scalar>::Amplitudes;
  Amps amps = Amps::Zero(Eigen::Index(out_layout.dimension()));
  for (std::size_t i = 0; i < layout.dimension(); ++i)
    amps(Eigen::Index(2 * i + std::size_t(mask[layout.value_of(i, r)]))) = state[i];
  return {std::move(out_layout), std::move(amps)};
}

/// Result of controlled_grover_powers together with the number of Grover
/// iterations the ladder needed.
template <typename Scalar>
struct ControlledGroverResult {
  BasicStateVector<Scalar> state;
  std::size_t grover_applications;
};

/// Prepares sum_{m_1..m_R} |m_1..m_R> G^{m_1+...+m_R} |u_D> / P^{R/2} on the
/// layout [P, ..., P, D]. G^s|u_D> is computed once per exponent s in
/// [0, R(P-1)] and copied into every ancilla branch with that digit sum.
template <typename Scalar = double, typename Predicate>
ControlledGroverResult<Scalar> controlled_grover_powers(std::size_t p, std::size_t r, std::size_t d,
                                                        Predicate&& marked, std::size_t cap = kDefaultAmplitudeCap) {
  if (p < 2) throw DomainError("controlled_grover_powers: P must be >= 2");
  if (r < 1) throw DomainError("controlled_grover_powers: R must be >= 1");
  if (d < 1) throw DomainError("controlled_grover_powers: D must be >= 1");
  std::vector<std::size_t> dims(r, p);
  dims.push_back(d);
  RegisterLayout layout(std::move(dims), cap);

  using Complex = std::complex<Scalar>;
  using Vec = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;
  const auto mask = detail::evaluate_mask(d, marked);
  const std::size_t max_power = r * (p - 1);
  std::vector<Vec> powers;
  powers.reserve(max_power + 1);
  powers.push_back(Vec::Constant(Eigen::Index(d), Complex(Scalar(1) / std::sqrt(Scalar(d)))));
  for (std::size_t s = 1; s <= max_power; ++s) {
    Vec next = powers.back();
    detail::grover_step(next, mask);
    powers.push_back(std::move(next));
  }

  const Scalar weight = Scalar(1) / std::sqrt(std::pow(Scalar(p), Scalar(r)));
  typename BasicStateVector<Scalar>::Amplitudes amps(Eigen::Index(layout.dimension()));
  const std::size_t branches = layout.dimension() / d;
  for (std::size_t j = 0; j < branches; ++j) {
    std::size_t sum = 0;
    for (std::size_t rest = j; rest > 0; rest /= p) sum += rest % p;
    amps.segment(Eigen::Index(j * d), Eigen::Index(d)) = powers[sum] * weight;
  }
  return {BasicStateVector<Scalar>(std::move(layout), std::move(amps)), max_power};
}

template <typename Scalar>
struct PostSelection {
  BasicStateVector<Scalar> state;
  Scalar probability;
};

/// Conditions register r on `value`; other values are zeroed and the rest
/// renormalized. The layout is kept.
template <typename Scalar>
PostSelection<Scalar> postselect(const BasicStateVector<Scalar>& state, std::size_t r, std::size_t value) {
  state.layout().check_register(r);
  if (value >= state.layout().dim(r)) throw DomainError("postselect: value out of range");
  auto amps = state.amplitudes();
  Scalar mass = 0;
  detail::for_each_block<Scalar>(amps, state.layout(), r, [&](auto& block) {
    for (Eigen::Index v = 0; v < block.rows(); ++v) {
      if (std::size_t(v) == value)
        mass += block.row(v).squaredNorm();
      else
        block.row(v).setZero();
    }
  });
  if (mass < Scalar(kZeroProbability)) throw ZeroProbabilityError("postselect: selected value has zero probability");
  amps /= std::sqrt(mass);
  return {BasicStateVector<Scalar>(state.layout(), std::move(amps)), mass};
}

}  // namespace qcarm::qsim
