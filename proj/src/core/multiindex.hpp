#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <unordered_map>
#include <vector>

namespace fkm {

/// Dense layout for truncated multivariate polynomials: every exponent
/// vector of total degree <= order over `dim` variables, enumerated in
/// graded lexicographic order (index 0 is the constant term, indices
/// 1..dim the linear terms). Shared and cached per (dim, order).
class JetLayout {
public:
  static constexpr int kMaxDim = 16;   // phase dimension 2n, n <= 8
  static constexpr int kMaxOrder = 3;

  struct MulTriple {
    int32_t a, b, dst;
  };

  static std::shared_ptr<const JetLayout> get(int dim, int order);

  int dim() const { return dim_; }
  int order() const { return order_; }
  int count() const { return static_cast<int>(exps_.size()); }

  const std::array<uint8_t, kMaxDim>& exponents(int idx) const {
    return exps_[idx];
  }
  int degree(int idx) const { return degree_[idx]; }

  /// Index of the monomial with the given exponents; -1 if degree > order.
  int indexOf(std::span<const int> exp) const;

  int variableIndex(int var) const { return 1 + var; }

  /// mu! for the multi-index at `idx` (product of component factorials).
  double factorial(int idx) const { return factorial_[idx]; }

  /// Ordered pairs (a, b) with degree(a) + degree(b) <= order and the
  /// index of the product monomial; drives truncated multiplication.
  const std::vector<MulTriple>& mulTable() const { return mul_; }

private:
  JetLayout(int dim, int order);

  int dim_, order_;
  std::vector<std::array<uint8_t, kMaxDim>> exps_;
  std::vector<int> degree_;
  std::vector<double> factorial_;
  std::unordered_map<uint64_t, int> indexByKey_;
  std::vector<MulTriple> mul_;
};

}  // namespace fkm
