#pragma once

#include <cstdint>
#include <memory>
#include <vector>

namespace iblt {

/// GF(2^r) in the polynomial basis: bit i of an element is the coefficient of x^i.
///
/// The modulus must be a primitive polynomial so that alpha = x (value 0b10)
/// generates the multiplicative group. Instances are immutable and are shared
/// through std::shared_ptr by every matrix and table built over them.
///
/// Multiplication uses log/antilog tables for r <= 16 and carry-less
/// shift-and-reduce above that.
class FieldSpec {
 public:
  static constexpr unsigned kMinDegree = 2;
  static constexpr unsigned kMaxDegree = 32;
  static constexpr unsigned kMaxTableDegree = 16;

  /// Throws UsageError unless `poly` has degree exactly r and is primitive.
  FieldSpec(unsigned r, std::uint64_t poly);

  unsigned degree() const { return r_; }
  std::uint64_t poly() const { return poly_; }
  std::uint32_t alpha() const { return 2; }
  /// 2^r - 1, the order of the multiplicative group.
  std::uint64_t group_order() const { return order_; }
  std::uint64_t size() const { return order_ + 1; }
  std::uint32_t mask() const { return static_cast<std::uint32_t>(order_); }

  bool contains(std::uint64_t v) const { return v <= order_; }
  bool same_as(const FieldSpec& o) const { return r_ == o.r_ && poly_ == o.poly_; }

  static std::uint32_t add(std::uint32_t a, std::uint32_t b) { return a ^ b; }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t square(std::uint32_t a) const { return mul(a, a); }
  std::uint32_t pow(std::uint32_t a, std::uint64_t e) const;
  /// Throws DivisionByZero for a = 0.
  std::uint32_t inv(std::uint32_t a) const;
  std::uint32_t div(std::uint32_t a, std::uint32_t b) const { return mul(a, inv(b)); }
  /// alpha^e with e reduced modulo the group order.
  std::uint32_t alpha_pow(std::uint64_t e) const;

 private:
  std::uint32_t mul_slow(std::uint32_t a, std::uint32_t b) const;

  unsigned r_;
  std::uint64_t poly_;
  std::uint64_t order_;
  std::vector<std::uint32_t> exp_;  // exp_[i] = alpha^i, length 2*order for index sums
  std::vector<std::uint32_t> log_;
};

using FieldHandle = std::shared_ptr<const FieldSpec>;

/// Primitive polynomial used for GF(2^r), r in [2, 32]. Values include the x^r term.
std::uint64_t default_poly(unsigned r);

/// Shared descriptor for GF(2^r) with default_poly(r). Throws UsageError for r outside [2, 32].
FieldHandle default_spec(unsigned r);

/// Field with an explicit modulus; a repeated (r, poly) pair returns the cached instance.
FieldHandle make_field(unsigned r, std::uint64_t poly);

/// Checks used when validating a modulus; exposed for tests.
bool is_irreducible(unsigned r, std::uint64_t poly);
bool is_primitive(unsigned r, std::uint64_t poly);

/// An element together with its field. Arithmetic between elements of different
/// fields throws UsageError.
class FieldElement {
 public:
  FieldElement(FieldHandle field, std::uint32_t value);

  std::uint32_t value() const { return value_; }
  const FieldHandle& field() const { return field_; }
  bool is_zero() const { return value_ == 0; }

  friend bool operator==(const FieldElement& a, const FieldElement& b) {
    return a.field_->same_as(*b.field_) && a.value_ == b.value_;
  }

 private:
  FieldHandle field_;
  std::uint32_t value_;
};

FieldElement add(const FieldElement& a, const FieldElement& b);
FieldElement mul(const FieldElement& a, const FieldElement& b);
FieldElement pow(const FieldElement& a, std::uint64_t e);
FieldElement inv(const FieldElement& a);

}  // namespace iblt
