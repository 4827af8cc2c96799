#include "iblt/finite_field.hpp"

#include <array>
#include <bit>
#include <map>
#include <mutex>
#include <string>
#include <utility>

#include "iblt/errors.hpp"

namespace iblt {
namespace {

// x^r + low terms. Chosen from the usual low-weight primitive trinomial and
// pentanomial tables; every entry is checked by is_primitive in the unit tests.
constexpr std::array<std::uint64_t, 33> kPrimitivePolys = {
    0,           0,          0x7,        0xB,        0x13,       0x25,       0x43,
    0x83,        0x11D,      0x211,      0x409,      0x805,      0x1053,     0x201B,
    0x4443,      0x8003,     0x1100B,    0x20009,    0x40081,    0x80027,    0x100009,
    0x200005,    0x400003,   0x800021,   0x1000087,  0x2000009,  0x4000047,  0x8000027,
    0x10000009,  0x20000005, 0x40800007, 0x80000009, 0x100400007,
};

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t poly, unsigned r) {
  std::uint64_t acc = 0;
  const std::uint64_t top = std::uint64_t{1} << r;
  while (b != 0) {
    if (b & 1) acc ^= a;
    b >>= 1;
    a <<= 1;
    if (a & top) a ^= poly;
  }
  return acc;
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t poly, unsigned r) {
  std::uint64_t acc = 1;
  while (e != 0) {
    if (e & 1) acc = mulmod(acc, a, poly, r);
    a = mulmod(a, a, poly, r);
    e >>= 1;
  }
  return acc;
}

int poly_degree(std::uint64_t p) { return p == 0 ? -1 : 63 - std::countl_zero(p); }

std::uint64_t poly_mod(std::uint64_t a, std::uint64_t b) {
  const int db = poly_degree(b);
  for (int da = poly_degree(a); da >= db; da = poly_degree(a)) a ^= b << (da - db);
  return a;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t v) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p * p <= v; ++p) {
    if (v % p != 0) continue;
    out.push_back(p);
    while (v % p == 0) v /= p;
  }
  if (v > 1) out.push_back(v);
  return out;
}

void check_degree(unsigned r) {
  if (r < FieldSpec::kMinDegree || r > FieldSpec::kMaxDegree) {
    throw UsageError("unsupported field degree r=" + std::to_string(r) + " (supported: 2..32)");
  }
}

}  // namespace

bool is_irreducible(unsigned r, std::uint64_t poly) {
  if (poly_degree(poly) != static_cast<int>(r)) return false;
  for (std::uint64_t d = 2; poly_degree(d) <= static_cast<int>(r / 2); ++d) {
    if (poly_mod(poly, d) == 0) return false;
  }
  return true;
}

bool is_primitive(unsigned r, std::uint64_t poly) {
  if (r == 0 || r > FieldSpec::kMaxDegree || poly_degree(poly) != static_cast<int>(r)) return false;
  if ((poly & 1) == 0) return false;
  const std::uint64_t order = (std::uint64_t{1} << r) - 1;
  if (powmod(2, order, poly, r) != 1) return false;
  for (std::uint64_t p : prime_factors(order)) {
    if (powmod(2, order / p, poly, r) == 1) return false;
  }
  return true;
}

FieldSpec::FieldSpec(unsigned r, std::uint64_t poly)
    : r_(r), poly_(poly), order_((std::uint64_t{1} << r) - 1) {
  check_degree(r);
  if (!is_primitive(r, poly)) {
    throw UsageError("polynomial is not primitive of degree " + std::to_string(r));
  }
  if (r_ <= kMaxTableDegree) {
    exp_.resize(2 * order_);
    log_.assign(order_ + 1, 0);
    std::uint64_t v = 1;
    for (std::uint64_t i = 0; i < order_; ++i) {
      exp_[i] = static_cast<std::uint32_t>(v);
      exp_[i + order_] = static_cast<std::uint32_t>(v);
      log_[v] = static_cast<std::uint32_t>(i);
      v = mulmod(v, 2, poly_, r_);
    }
  }
}

std::uint32_t FieldSpec::mul_slow(std::uint32_t a, std::uint32_t b) const {
  return static_cast<std::uint32_t>(mulmod(a, b, poly_, r_));
}

std::uint32_t FieldSpec::mul(std::uint32_t a, std::uint32_t b) const {
  if (a == 0 || b == 0) return 0;
  if (exp_.empty()) return mul_slow(a, b);
  return exp_[log_[a] + log_[b]];
}

std::uint32_t FieldSpec::pow(std::uint32_t a, std::uint64_t e) const {
  if (e == 0) return 1;
  if (a == 0) return 0;
  if (!exp_.empty()) return exp_[(static_cast<std::uint64_t>(log_[a]) * (e % order_)) % order_];
  std::uint32_t acc = 1;
  e %= order_;
  while (e != 0) {
    if (e & 1) acc = mul_slow(acc, a);
    a = mul_slow(a, a);
    e >>= 1;
  }
  return acc;
}

std::uint32_t FieldSpec::inv(std::uint32_t a) const {
  if (a == 0) throw DivisionByZero("zero has no multiplicative inverse");
  if (!exp_.empty()) return exp_[(order_ - log_[a]) % order_];
  return pow(a, order_ - 1);
}

std::uint32_t FieldSpec::alpha_pow(std::uint64_t e) const {
  e %= order_;
  if (!exp_.empty()) return exp_[e];
  return pow(alpha(), e);
}

std::uint64_t default_poly(unsigned r) {
  check_degree(r);
  return kPrimitivePolys[r];
}

FieldHandle make_field(unsigned r, std::uint64_t poly) {
  static std::mutex mu;
  static std::map<std::pair<unsigned, std::uint64_t>, FieldHandle> cache;
  std::lock_guard lock(mu);
  auto key = std::make_pair(r, poly);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  auto field = std::make_shared<const FieldSpec>(r, poly);
  cache.emplace(key, field);
  return field;
}

FieldHandle default_spec(unsigned r) { return make_field(r, default_poly(r)); }

FieldElement::FieldElement(FieldHandle field, std::uint32_t value)
    : field_(std::move(field)), value_(value) {
  if (!field_) throw UsageError("field element without a field");
  if (!field_->contains(value)) throw UsageError("value does not fit in GF(2^r)");
}

namespace {
const FieldHandle& common_field(const FieldElement& a, const FieldElement& b) {
  if (!a.field()->same_as(*b.field())) throw UsageError("field elements from different fields");
  return a.field();
}
}  // namespace

FieldElement add(const FieldElement& a, const FieldElement& b) {
  return {common_field(a, b), FieldSpec::add(a.value(), b.value())};
}

FieldElement mul(const FieldElement& a, const FieldElement& b) {
  const auto& f = common_field(a, b);
  return {f, f->mul(a.value(), b.value())};
}

FieldElement pow(const FieldElement& a, std::uint64_t e) {
  return {a.field(), a.field()->pow(a.value(), e)};
}

FieldElement inv(const FieldElement& a) { return {a.field(), a.field()->inv(a.value())}; }

}  // namespace iblt
