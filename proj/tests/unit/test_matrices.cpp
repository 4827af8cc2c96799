#include <doctest.h>

#include <bit>
#include <numeric>
#include <set>

#include "iblt/errors.hpp"
#include "iblt/matrices.hpp"

using namespace iblt;

namespace {

std::vector<std::uint32_t> support(const MappingSpec& m, std::size_t j) {
  std::vector<std::uint32_t> rows;
  for (const auto& e : m.entries(j)) rows.push_back(e.row);
  return rows;
}

// Rank over GF(2) of the given bit-vector columns.
unsigned gf2_rank(std::vector<std::uint64_t> v) {
  unsigned rank = 0;
  for (int bit = 63; bit >= 0; --bit) {
    auto it = std::find_if(v.begin(), v.end(), [&](auto x) { return (x >> bit) & 1; });
    if (it == v.end()) continue;
    const auto pivot = *it;
    v.erase(it);
    for (auto& x : v) {
      if ((x >> bit) & 1) x ^= pivot;
    }
    ++rank;
  }
  return rank;
}

template <class F>
void subsets_up_to(std::size_t n, std::size_t k, std::vector<std::size_t>& cur, std::size_t start, F&& f) {
  if (!cur.empty()) f(cur);
  if (cur.size() == k) return;
  for (std::size_t j = start; j < n; ++j) {
    cur.push_back(j);
    subsets_up_to(n, k, cur, j + 1, f);
    cur.pop_back();
  }
}

}  // namespace

TEST_CASE("minbinom") {
  CHECK(minbinom(6, 2) == 4);
  CHECK(minbinom(7, 2) == 5);
  CHECK(minbinom(1, 3) == 3);
  CHECK(minbinom(256, 1) == 256);
  CHECK(minbinom(1u << 20, 10) == 23);  // C(22,10) < 2^20 <= C(23,10)
}

TEST_CASE("bch parity columns") {
  auto f = default_spec(4);
  CHECK(bch_parity_column(*f, 2, 0) == std::vector<std::uint32_t>{1, 1});
  CHECK(bch_parity_column(*f, 2, 1) == std::vector<std::uint32_t>{0b0010, 0b1000});
  CHECK_THROWS_AS(bch_parity_column(*f, 2, 15), UsageError);
  auto h = bch_parity_matrix(f, 2, 15);
  CHECK(h.rows() == 2);
  CHECK(h.cols() == 15);
  CHECK(h.column(1) == std::vector<std::uint32_t>{2, 8});
  CHECK_THROWS_AS(bch_parity_matrix(f, 2, 16), UsageError);
}

TEST_CASE("binary sums of up to 2d BCH columns are nonzero (r = 4)") {
  auto f = default_spec(4);
  for (unsigned d = 1; d <= 3; ++d) {
    auto h = bch_parity_matrix(f, d, 15);
    std::vector<std::size_t> cur;
    bool all_nonzero = true;
    subsets_up_to(15, 2 * d, cur, 0, [&](const std::vector<std::size_t>& s) {
      std::vector<std::uint32_t> acc(d, 0);
      for (auto j : s) {
        auto col = h.column(j);
        for (unsigned i = 0; i < d; ++i) acc[i] ^= col[i];
      }
      if (std::all_of(acc.begin(), acc.end(), [](auto v) { return v == 0; })) all_nonzero = false;
    });
    CHECK(all_nonzero);
  }
}

TEST_CASE("example2 matrix") {
  auto m = example2_matrix();
  CHECK(m.rows() == 5);
  CHECK(m.cols() == 6);
  CHECK(m.column(0) == std::vector<std::uint32_t>{1, 0, 1, 0, 0});
  for (std::size_t j = 0; j < 6; ++j) CHECK(m.weight(j) == 2);
  CHECK(m.fixed_weight() == 2u);
  CHECK(m.is_binary());
}

TEST_CASE("all columns plus ones") {
  auto m = all_columns_plus_ones(2);
  CHECK(m.rows() == 3);
  CHECK(m.cols() == 4);
  CHECK(m.column(2) == std::vector<std::uint32_t>{0, 1, 1});
  CHECK(m.column(0) == std::vector<std::uint32_t>{0, 0, 1});
  CHECK(m.has_all_ones_last_row());
  auto big = all_columns_plus_ones(8);
  for (std::size_t j = 0; j < 256; ++j) {
    REQUIRE(big.weight(j) == static_cast<std::size_t>(std::popcount(j)) + 1);
  }
  CHECK(all_columns_plus_ones(4, 10).cols() == 10);
}

TEST_CASE("constant weight plus ones") {
  auto m = constant_weight_plus_ones(6, 2);
  CHECK(m.rows() == 5);
  CHECK(support(m, 0) == std::vector<std::uint32_t>{0, 1, 4});
  CHECK(support(m, 1) == std::vector<std::uint32_t>{0, 2, 4});
  CHECK(support(m, 5) == std::vector<std::uint32_t>{2, 3, 4});
  CHECK(constant_weight_plus_ones(1, 1).rows() == 2);
  auto w = constant_weight_plus_ones(100, 3);
  std::set<std::vector<std::uint32_t>> distinct;
  for (std::size_t j = 0; j < 100; ++j) {
    REQUIRE(w.weight(j) == 4);
    distinct.insert(support(w, j));
  }
  CHECK(distinct.size() == 100);
  CHECK(w.fixed_weight() == 4u);
  CHECK(w.has_all_ones_last_row());
}

TEST_CASE("binary BCH expansion plus ones") {
  auto m = bch_binary_plus_ones(4);
  CHECK(m.rows() == 9);
  CHECK(m.cols() == 15);
  CHECK(m.column(0) == std::vector<std::uint32_t>{1, 0, 0, 0, 1, 0, 0, 0, 1});
  // alpha = 0b0010, alpha^3 = 0b1000.
  CHECK(m.column(1) == std::vector<std::uint32_t>{0, 1, 0, 0, 0, 0, 0, 1, 1});
  CHECK(m.has_all_ones_last_row());

  std::vector<std::uint64_t> bits(15, 0);
  for (std::size_t j = 0; j < 15; ++j) {
    for (auto row : support(m, j)) {
      if (row < 8) bits[j] |= std::uint64_t{1} << row;
    }
  }
  std::size_t quads = 0;
  bool independent = true;
  for (std::size_t a = 0; a < 15; ++a)
    for (std::size_t b = a + 1; b < 15; ++b)
      for (std::size_t c = b + 1; c < 15; ++c)
        for (std::size_t e = c + 1; e < 15; ++e) {
          ++quads;
          if (gf2_rank({bits[a], bits[b], bits[c], bits[e]}) != 4) independent = false;
        }
  CHECK(quads == 1365);
  CHECK(independent);
}

TEST_CASE("subelement packing") {
  std::vector<std::uint32_t> subs{0b1010, 0b0001, 0b1111};
  const auto packed = pack_subelements(subs, 4);
  CHECK(packed == (0b1010u | (0b0001u << 4) | (0b1111u << 8)));
  CHECK(unpack_subelements(packed, 3, 4) == subs);
  CHECK(largest_subfield_bits(2, 8) == 4u);
  CHECK(largest_subfield_bits(3, 8) == 2u);
  CHECK_FALSE(largest_subfield_bits(8, 4).has_value());
  CHECK(largest_subfield_bits(1, 32) == kMaxSubfieldBits);
}

TEST_CASE("B_d sequence from BCH columns") {
  auto seq = bd_sequence(default_spec(8), 2);
  CHECK(seq.elements.size() == 16);
  CHECK(seq.elements[0] == 0);
  CHECK(seq.sub_bits == 4);
  CHECK(seq.nonzero_count() == 15);
  // g_1 = (1, 1) packed.
  CHECK(seq.elements[1] == 0x11);
  std::set<std::uint32_t> distinct(seq.elements.begin(), seq.elements.end());
  CHECK(distinct.size() == 16);
  CHECK_THROWS_AS(bd_sequence(default_spec(4), 8), ConstructionInfeasible);
}

TEST_CASE("block diagonal") {
  auto seq = bd_sequence(default_spec(8), 2);
  std::vector<std::uint32_t> g(seq.elements.begin() + 1, seq.elements.end());
  auto m = block_diagonal(seq.field, g, 256);
  CHECK(m.rows() == 18);  // ceil(256 / 15)
  CHECK(m.fixed_weight() == 1u);
  for (std::size_t j = 0; j < 256; ++j) {
    auto col = m.entries(j);
    REQUIRE(col.size() == 1);
    REQUIRE(col[0].row == j / 15);
    REQUIRE(col[0].value == g[j % 15]);
  }
  CHECK(block_diagonal(seq.field, g, 15).rows() == 1);
}

TEST_CASE("h2 staircase") {
  auto f = default_spec(8);
  auto m = block_h2(f, 4, 256);
  CHECK(m.rows() == 19);
  for (std::size_t j = 0; j < 256; ++j) {
    auto rows = support(m, j);
    REQUIRE(rows.size() == 2);
    REQUIRE(rows[1] == rows[0] + 1);
    REQUIRE(rows[0] == j / 15);
  }
  auto halves = h2_halves(f, 4);
  CHECK(halves.upper.size() == 15);
  CHECK(halves.upper[0] == 0x11);  // (1, 1)
  CHECK(halves.lower[0] == 0x11);
  CHECK(block_h2(default_spec(4), 4, 10).rows() == (10 + 2) / 3 + 1);
  CHECK_THROWS_AS(block_h2(default_spec(2), 8, 4), ConstructionInfeasible);
  CHECK_THROWS_AS(block_h2(f, 3, 4), UsageError);
}

TEST_CASE("h2hat tiles") {
  auto f = default_spec(8);
  auto halves = h2_hat_halves(f);
  CHECK(halves.upper.size() == 14);  // column 0 removed
  auto m = block_h2_hat(f, 42);
  CHECK(m.rows() == 3);
  for (std::size_t j = 0; j < 42; ++j) REQUIRE(m.weight(j) == 2);
  CHECK(support(m, 0) == std::vector<std::uint32_t>{0, 1});
  CHECK(support(m, 14) == std::vector<std::uint32_t>{1, 2});
  CHECK(support(m, 28) == std::vector<std::uint32_t>{0, 2});
  auto two = block_h2_hat(f, 84);
  CHECK(two.rows() == 5);
  CHECK(support(two, 42) == std::vector<std::uint32_t>{2, 3});
  CHECK(block_h2_hat(f, 45).rows() == 5);
  CHECK_THROWS_AS(block_h2_hat(default_spec(3), 10), ConstructionInfeasible);
}

TEST_CASE("redundant padding") {
  auto f = default_spec(4);
  auto h = bch_parity_matrix(f, 2, 15);
  CHECK(pad_redundant(h, 0) == h);
  auto p = pad_redundant(h, 2);
  CHECK(p.rows() == 4);
  for (std::size_t j = 0; j < 15; ++j) {
    REQUIRE(p.weight(j) == 4);
    auto col = p.column(j);
    REQUIRE(col[2] == 1);
    REQUIRE(col[3] == 2);
  }
  auto b = pad_redundant(example2_matrix(), 1);
  CHECK(b.rows() == 6);
  CHECK(b.fixed_weight() == 3u);
}

TEST_CASE("constructions are pure") {
  CHECK(bch_binary_plus_ones(5) == bch_binary_plus_ones(5));
  CHECK(block_h2(default_spec(8), 4, 100) == block_h2(default_spec(8), 4, 100));
  CHECK(constant_weight_plus_ones(30, 2) == constant_weight_plus_ones(30, 2));
  CHECK_FALSE(all_columns_plus_ones(3) == bch_binary_plus_ones(3));
}

TEST_CASE("explicit matrices") {
  auto m = MappingSpec::from_rows("custom", {"110", "011"});
  CHECK(m.rows() == 2);
  CHECK(m.cols() == 3);
  CHECK(m.column(1) == std::vector<std::uint32_t>{1, 1});
  CHECK_FALSE(m.fixed_weight().has_value());
  CHECK_THROWS_AS(MappingSpec::from_rows("custom", {"10", "1"}), UsageError);
  CHECK_THROWS_AS(MappingSpec::from_rows("custom", {"12"}), UsageError);
  CHECK_THROWS_AS(m.entries(3), UsageError);
  CHECK(m.first_rows(1).column(1) == std::vector<std::uint32_t>{1});
}
