#include "core/multiindex.hpp"

#include <mutex>

#include "core/errors.hpp"

namespace fkm {

namespace {

uint64_t packKey(const std::array<uint8_t, JetLayout::kMaxDim>& exp, int dim) {
  uint64_t key = 0;
  for (int i = 0; i < dim; ++i) key |= uint64_t(exp[i] & 0xF) << (4 * i);
  return key;
}

double fact(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

JetLayout::JetLayout(int dim, int order) : dim_(dim), order_(order) {
  if (dim < 1 || dim > kMaxDim)
    raise(ErrorCode::Parameter,
          "phase dimension must be in [1, " + std::to_string(kMaxDim) + "]");
  if (order < 0 || order > kMaxOrder)
    raise(ErrorCode::Parameter, "jet order must be in [0, 3]");

  // Graded enumeration: all exponent vectors of each total degree in turn.
  std::array<uint8_t, kMaxDim> exp{};
  for (int deg = 0; deg <= order; ++deg) {
    // Lexicographic walk over compositions of `deg` into `dim` parts.
    exp.fill(0);
    exp[0] = static_cast<uint8_t>(deg);
    while (true) {
      exps_.push_back(exp);
      degree_.push_back(deg);
      double f = 1.0;
      for (int i = 0; i < dim; ++i) f *= fact(exp[i]);
      factorial_.push_back(f);
      indexByKey_.emplace(packKey(exp, dim), static_cast<int>(exps_.size()) - 1);

      // Next composition: move one unit from the rightmost movable slot.
      int i = dim - 2;
      while (i >= 0 && exp[i] == 0) --i;
      if (i < 0) break;
      int tail = exp[dim - 1];
      exp[dim - 1] = 0;
      exp[i] -= 1;
      exp[i + 1] = static_cast<uint8_t>(tail + 1);
    }
  }

  for (int a = 0; a < count(); ++a) {
    for (int b = 0; b < count(); ++b) {
      if (degree_[a] + degree_[b] > order_) continue;
      std::array<uint8_t, kMaxDim> sum{};
      for (int i = 0; i < dim_; ++i)
        sum[i] = static_cast<uint8_t>(exps_[a][i] + exps_[b][i]);
      auto it = indexByKey_.find(packKey(sum, dim_));
      mul_.push_back({a, b, it->second});
    }
  }
}

int JetLayout::indexOf(std::span<const int> exp) const {
  std::array<uint8_t, kMaxDim> e{};
  int deg = 0;
  for (size_t i = 0; i < exp.size(); ++i) {
    e[i] = static_cast<uint8_t>(exp[i]);
    deg += exp[i];
  }
  if (deg > order_) return -1;
  auto it = indexByKey_.find(packKey(e, dim_));
  return it == indexByKey_.end() ? -1 : it->second;
}

std::shared_ptr<const JetLayout> JetLayout::get(int dim, int order) {
  static std::mutex mu;
  static std::unordered_map<int, std::shared_ptr<const JetLayout>> cache;
  std::lock_guard<std::mutex> lock(mu);
  int key = dim * 16 + order;
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto lay = std::shared_ptr<const JetLayout>(new JetLayout(dim, order));
  cache.emplace(key, lay);
  return lay;
}

}  // namespace fkm
