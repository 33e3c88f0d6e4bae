#pragma once

#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "qcarm/errors.hpp"

namespace qcarm::qsim {

inline constexpr std::size_t kDefaultAmplitudeCap = std::size_t{1} << 26;

// Mixed-radix register layout, leftmost register most significant:
//   flat = ((v_0 * d_1 + v_1) * d_2 + v_2) ...
class RegisterLayout {
 public:
  RegisterLayout() : RegisterLayout(std::vector<std::size_t>{1}) {}

  explicit RegisterLayout(std::vector<std::size_t> dims, std::size_t cap = kDefaultAmplitudeCap)
      : dims_(std::move(dims)), strides_(dims_.size(), 1) {
    if (dims_.empty()) throw DomainError("RegisterLayout: at least one register required");
    dimension_ = 1;
    for (std::size_t i = dims_.size(); i-- > 0;) {
      if (dims_[i] == 0) throw DomainError("RegisterLayout: register dimension must be >= 1");
      strides_[i] = dimension_;
      if (dimension_ > cap / dims_[i])
        throw CapacityError("RegisterLayout: dimension exceeds amplitude cap of " + std::to_string(cap));
      dimension_ *= dims_[i];
    }
  }

  [[nodiscard]] std::size_t register_count() const { return dims_.size(); }
  [[nodiscard]] std::size_t dim(std::size_t r) const { return dims_.at(r); }
  [[nodiscard]] const std::vector<std::size_t>& dims() const { return dims_; }
  [[nodiscard]] std::size_t dimension() const { return dimension_; }

  /// Number of flat entries spanned by one step of register r.
  [[nodiscard]] std::size_t stride(std::size_t r) const { return strides_.at(r); }
  /// Number of blocks formed by the registers left of r.
  [[nodiscard]] std::size_t outer(std::size_t r) const { return dimension_ / (dims_.at(r) * strides_[r]); }

  [[nodiscard]] std::size_t value_of(std::size_t flat, std::size_t r) const {
    return (flat / strides_.at(r)) % dims_[r];
  }

  [[nodiscard]] std::size_t flat_index(std::span<const std::size_t> digits) const {
    if (digits.size() != dims_.size()) throw DomainError("flat_index: digit count mismatch");
    std::size_t flat = 0;
    for (std::size_t i = 0; i < dims_.size(); ++i) {
      if (digits[i] >= dims_[i]) throw DomainError("flat_index: digit out of range");
      flat = flat * dims_[i] + digits[i];
    }
    return flat;
  }

  [[nodiscard]] std::vector<std::size_t> digits(std::size_t flat) const {
    std::vector<std::size_t> out(dims_.size());
    for (std::size_t i = dims_.size(); i-- > 0;) {
      out[i] = flat % dims_[i];
      flat /= dims_[i];
    }
    return out;
  }

  [[nodiscard]] RegisterLayout appended(std::size_t dim, std::size_t cap = kDefaultAmplitudeCap) const {
    auto dims = dims_;
    dims.push_back(dim);
    return RegisterLayout(std::move(dims), cap);
  }

  void check_register(std::size_t r) const {
    if (r >= dims_.size())
      throw DomainError("register index " + std::to_string(r) + " out of range");
  }

  friend bool operator==(const RegisterLayout& a, const RegisterLayout& b) { return a.dims_ == b.dims_; }

 private:
  std::vector<std::size_t> dims_;
  std::vector<std::size_t> strides_;
  std::size_t dimension_ = 1;
};

}  // namespace qcarm::qsim
