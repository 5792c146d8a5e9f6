#pragma once

// Exterior algebra on a based vector space of dimension <= 16, generic over
// the scalar backend. A multivector is a sparse map from basis subsets
// (bitmasks over e_1..e_dim) to coefficients; e^{i1...ik} is the subset
// {i1,...,ik} with ascending orientation.

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "g2kit/scalar.hpp"

namespace g2kit::ext {

inline constexpr int kMaxDim = 16;

// Parity of the permutation that sorts (sorted A)(sorted B) ascending:
// for each element b of B, count elements of A above it.
[[nodiscard]] inline int merge_sign(std::uint32_t a, std::uint32_t b) {
  int inv = 0;
  std::uint32_t bb = b;
  while (bb) {
    const int bit = std::countr_zero(bb);
    bb &= bb - 1;
    inv += std::popcount(a >> (bit + 1));
  }
  return (inv % 2 == 0) ? 1 : -1;
}

template <class S>
class Multivector {
 public:
  using Terms = std::map<std::uint32_t, S>;

  explicit Multivector(int dim = 7) : dim_(dim) {
    if (dim < 1 || dim > kMaxDim)
      throw std::invalid_argument("Multivector: dim out of range [1,16]");
  }

  // e^{indices}, indices 1-based and strictly ascending.
  static Multivector basis_form(int dim, std::initializer_list<int> indices,
                                S coeff = scalar_traits<S>::one()) {
    return basis_form(dim, std::vector<int>(indices), std::move(coeff));
  }
  static Multivector basis_form(int dim, const std::vector<int>& indices,
                                S coeff = scalar_traits<S>::one()) {
    Multivector m(dim);
    std::uint32_t mask = 0;
    int prev = 0;
    for (int i : indices) {
      if (i < 1 || i > dim)
        throw std::invalid_argument("basis_form: index out of range 1.." +
                                    std::to_string(dim));
      if (i <= prev)
        throw std::invalid_argument(
            "basis_form: indices must be strictly ascending (duplicate or "
            "out-of-order index " +
            std::to_string(i) + ")");
      mask |= 1u << (i - 1);
      prev = i;
    }
    m.add_term(mask, std::move(coeff));
    return m;
  }

  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] const Terms& terms() const { return terms_; }
  [[nodiscard]] bool empty() const { return terms_.empty(); }

  void add_term(std::uint32_t mask, S coeff) {
    if (mask >> dim_)
      throw std::invalid_argument("add_term: mask exceeds dimension");
    auto it = terms_.find(mask);
    if (it == terms_.end()) {
      if (!is_zero_scalar(coeff, 0.0)) terms_.emplace(mask, std::move(coeff));
    } else {
      it->second += coeff;
      if (is_zero_scalar(it->second, 0.0)) terms_.erase(it);
    }
  }

  [[nodiscard]] S coeff(std::uint32_t mask) const {
    auto it = terms_.find(mask);
    return it == terms_.end() ? scalar_traits<S>::zero() : it->second;
  }

  // Largest |coefficient|, as a double; 0 for the zero multivector.
  [[nodiscard]] double max_abs() const {
    double m = 0.0;
    for (const auto& [k, v] : terms_) m = std::max(m, abs_approx(v));
    return m;
  }

  // Drop terms with |coefficient| <= tol (exact backends drop only zeros,
  // which add_term already did).
  Multivector& prune(double tol) {
    for (auto it = terms_.begin(); it != terms_.end();)
      it = is_zero_scalar(it->second, tol) ? terms_.erase(it) : std::next(it);
    return *this;
  }

  [[nodiscard]] bool is_homogeneous() const {
    int g = -1;
    for (const auto& [k, v] : terms_) {
      const int gk = std::popcount(k);
      if (g == -1) g = gk;
      if (gk != g) return false;
    }
    return true;
  }
  // Grade of a homogeneous multivector; -1 if mixed, 0 for scalars / zero.
  [[nodiscard]] int grade() const {
    if (terms_.empty()) return 0;
    if (!is_homogeneous()) return -1;
    return std::popcount(terms_.begin()->first);
  }

  Multivector operator-() const {
    Multivector r(dim_);
    for (const auto& [k, v] : terms_) r.terms_.emplace(k, -v);
    return r;
  }
  friend Multivector operator+(const Multivector& a, const Multivector& b) {
    check_same_dim(a, b, "+");
    Multivector r = a;
    for (const auto& [k, v] : b.terms_) r.add_term(k, v);
    return r;
  }
  friend Multivector operator-(const Multivector& a, const Multivector& b) {
    check_same_dim(a, b, "-");
    Multivector r = a;
    for (const auto& [k, v] : b.terms_) r.add_term(k, -v);
    return r;
  }
  friend Multivector operator*(const S& c, const Multivector& a) {
    Multivector r(a.dim_);
    for (const auto& [k, v] : a.terms_) r.add_term(k, c * v);
    return r;
  }

 private:
  static void check_same_dim(const Multivector& a, const Multivector& b,
                             const char* op) {
    if (a.dim_ != b.dim_)
      throw std::invalid_argument(std::string("Multivector: operands of '") +
                                  op + "' live in different dimensions");
  }

  int dim_;
  Terms terms_;
};

template <class S>
[[nodiscard]] Multivector<S> wedge(const Multivector<S>& a,
                                   const Multivector<S>& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("wedge: operands in different dimensions");
  Multivector<S> r(a.dim());
  for (const auto& [ka, va] : a.terms())
    for (const auto& [kb, vb] : b.terms()) {
      if (ka & kb) continue;  // repeated covector
      const int s = merge_sign(ka, kb);
      S c = va * vb;
      r.add_term(ka | kb, s > 0 ? std::move(c) : -c);
    }
  return r;
}

// Interior product iota(v): plugs the vector v = sum v_i e_i into the first
// slot. Anti-derivation of degree -1; iota(v)iota(v) = 0.
template <class S>
[[nodiscard]] Multivector<S> contract(const std::vector<S>& v,
                                      const Multivector<S>& a) {
  if (static_cast<int>(v.size()) != a.dim())
    throw std::invalid_argument("contract: vector length != dimension");
  Multivector<S> r(a.dim());
  for (const auto& [k, c] : a.terms()) {
    std::uint32_t m = k;
    while (m) {
      const int bit = std::countr_zero(m);
      m &= m - 1;
      if (is_zero_scalar(v[bit], 0.0)) continue;
      const int below = std::popcount(k & ((1u << bit) - 1));
      S term = v[bit] * c;
      r.add_term(k & ~(1u << bit), (below % 2 == 0) ? std::move(term) : -term);
    }
  }
  return r;
}

// Coefficient of the top form e^{1...dim}. Any terms of lower degree are
// ignored by design: callers extract the volume component of a wedge.
template <class S>
[[nodiscard]] S top_coefficient(const Multivector<S>& a) {
  return a.coeff((1u << a.dim()) - 1);
}

template <class S>
[[nodiscard]] double max_abs_diff(const Multivector<S>& a,
                                  const Multivector<S>& b) {
  return (a - b).max_abs();
}

}  // namespace g2kit::ext
