#include <doctest.h>

#include <random>
#include <set>

#include "iblt/errors.hpp"
#include "iblt/finite_field.hpp"

using namespace iblt;

namespace {

// Power table built by shifting and reducing, independent of the field code.
std::vector<std::uint32_t> power_table(unsigned r, std::uint64_t poly) {
  std::vector<std::uint32_t> t;
  std::uint64_t v = 1;
  for (std::uint64_t i = 0; i < (std::uint64_t{1} << r) - 1; ++i) {
    t.push_back(static_cast<std::uint32_t>(v));
    v <<= 1;
    if (v >> r) v ^= poly;
  }
  return t;
}

// Schoolbook carry-less product reduced bit by bit.
std::uint32_t clmul_mod(std::uint32_t a, std::uint32_t b, unsigned r, std::uint64_t poly) {
  unsigned __int128 prod = 0;
  for (unsigned i = 0; i < 32; ++i) {
    if ((b >> i) & 1) prod ^= static_cast<unsigned __int128>(a) << i;
  }
  for (int bit = 63; bit >= static_cast<int>(r); --bit) {
    if ((prod >> bit) & 1) prod ^= static_cast<unsigned __int128>(poly) << (bit - r);
  }
  return static_cast<std::uint32_t>(prod);
}

}  // namespace

TEST_CASE("gf16 examples") {
  auto f = default_spec(4);
  CHECK(f->poly() == 0b10011);
  CHECK(FieldSpec::add(0b0011, 0b0001) == 0b0010);
  CHECK(f->mul(0b0010, 0b1000) == 0b0011);
  CHECK(f->mul(0b0100, 0b1000) == 0b0110);
  CHECK(f->pow(2, 0) == 1);
  CHECK(f->pow(2, 4) == 0b0011);
  CHECK(f->pow(2, 15) == 1);
  CHECK(f->inv(1) == 1);
  CHECK(f->inv(2) == 0b1001);
  CHECK_THROWS_AS(f->inv(0), DivisionByZero);
  for (std::uint32_t x = 0; x < 16; ++x) {
    CHECK(FieldSpec::add(x, 0) == x);
    CHECK(FieldSpec::add(x, x) == 0);
    CHECK(f->mul(x, 0) == 0);
    CHECK(f->mul(x, 1) == x);
  }
}

TEST_CASE("default polynomials") {
  CHECK(default_poly(8) == 0x11D);  // x^8+x^4+x^3+x^2+1
  CHECK_THROWS_AS(default_spec(1), UsageError);
  CHECK_THROWS_AS(default_spec(33), UsageError);
  for (unsigned r = 2; r <= 32; ++r) {
    CAPTURE(r);
    CHECK(is_irreducible(r, default_poly(r)));
    CHECK(is_primitive(r, default_poly(r)));
    CHECK(default_spec(r)->degree() == r);
  }
  CHECK_FALSE(is_irreducible(4, 0b10101));  // (x^2+x+1)^2
  CHECK(is_irreducible(4, 0b11111));
  CHECK_FALSE(is_primitive(4, 0b11111));    // x has order 5
  CHECK_THROWS_AS(FieldSpec(4, 0b11111), UsageError);
  CHECK(make_field(4, 0b11001)->same_as(FieldSpec(4, 0b11001)));
  CHECK(make_field(4, 0b10011) == make_field(4, 0b10011));
}

TEST_CASE("alpha generates the group, exhaustive r <= 12") {
  for (unsigned r = 2; r <= 12; ++r) {
    auto f = default_spec(r);
    auto table = power_table(r, f->poly());
    std::set<std::uint32_t> distinct(table.begin(), table.end());
    CHECK(distinct.size() == f->group_order());
    for (std::uint64_t i = 0; i < table.size(); ++i) REQUIRE(f->alpha_pow(i) == table[i]);
  }
}

TEST_CASE("element orders divide the group order, exhaustive r <= 8") {
  for (unsigned r = 2; r <= 8; ++r) {
    auto f = default_spec(r);
    for (std::uint32_t a = 1; a <= f->mask(); ++a) {
      std::uint64_t order = 1;
      for (std::uint32_t x = a; x != 1; x = f->mul(x, a)) ++order;
      REQUIRE(f->group_order() % order == 0);
    }
  }
}

TEST_CASE("field axioms, exhaustive r <= 4") {
  for (unsigned r = 2; r <= 4; ++r) {
    auto f = default_spec(r);
    const std::uint32_t q = f->mask() + 1;
    for (std::uint32_t a = 0; a < q; ++a) {
      if (a) REQUIRE(f->mul(a, f->inv(a)) == 1);
      REQUIRE(f->square(a) == f->mul(a, a));
      for (std::uint32_t b = 0; b < q; ++b) {
        REQUIRE(f->mul(a, b) == f->mul(b, a));
        for (std::uint32_t c = 0; c < q; ++c) {
          REQUIRE(f->mul(f->mul(a, b), c) == f->mul(a, f->mul(b, c)));
          REQUIRE(f->mul(a, b ^ c) == (f->mul(a, b) ^ f->mul(a, c)));
        }
      }
    }
  }
}

TEST_CASE("table and shift-and-reduce multiplication agree with the oracle") {
  std::mt19937_64 rng(7);
  for (unsigned r : {5u, 8u, 13u, 16u, 17u, 20u, 24u, 31u, 32u}) {
    auto f = default_spec(r);
    std::uniform_int_distribution<std::uint32_t> pick(0, f->mask());
    for (int i = 0; i < 2000; ++i) {
      const auto a = pick(rng), b = pick(rng), c = pick(rng);
      REQUIRE(f->mul(a, b) == clmul_mod(a, b, r, f->poly()));
      REQUIRE(f->mul(f->mul(a, b), c) == f->mul(a, f->mul(b, c)));
      REQUIRE(f->mul(a, b ^ c) == (f->mul(a, b) ^ f->mul(a, c)));
      REQUIRE(f->pow(a, 2) == f->mul(a, a));
      if (a) REQUIRE(f->mul(a, f->inv(a)) == 1);
    }
    CHECK(f->pow(2, f->group_order()) == 1);
    CHECK(f->div(f->mul(5 & f->mask(), 3), 3) == (5 & f->mask()));
  }
}

TEST_CASE("field elements carry their field") {
  auto f4 = default_spec(4);
  auto f5 = default_spec(5);
  FieldElement a(f4, 0b0011), b(f4, 0b0001);
  CHECK(add(a, b) == FieldElement(f4, 0b0010));
  CHECK(mul(FieldElement(f4, 2), FieldElement(f4, 8)).value() == 0b0011);
  CHECK(pow(FieldElement(f4, 2), 15).value() == 1);
  CHECK(inv(FieldElement(f4, 2)).value() == 0b1001);
  CHECK_THROWS_AS(inv(FieldElement(f4, 0)), DivisionByZero);
  CHECK_THROWS_AS(add(a, FieldElement(f5, 1)), UsageError);
  CHECK_THROWS_AS(mul(a, FieldElement(f5, 1)), UsageError);
  CHECK_THROWS_AS(FieldElement(f4, 16), UsageError);
}
