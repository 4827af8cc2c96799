// Randomized and exhaustive property suites over the scheme invariants.
// Shared by the unit tests and the acceptance binary.
#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "iblt/enumerate.hpp"
#include "iblt/schemes.hpp"

namespace iblt::props {

struct SuiteResult {
  std::uint64_t trials = 0;
  std::uint64_t failures = 0;
  std::string first_failure;

  void fail(const std::string& what) {
    if (failures++ == 0) first_failure = what;
  }
  bool ok() const { return trials > 0 && failures == 0; }
};

inline SchemeParams make(Family f, std::string c, std::uint64_t n, unsigned d, unsigned counter_bits = 0,
                         unsigned r = 0, std::optional<unsigned> k = std::nullopt) {
  SchemeParams p;
  p.family = f;
  p.construction = std::move(c);
  p.n = n;
  p.d = d;
  p.counter_bits = counter_bits;
  p.r = r;
  p.k = k;
  return p;
}

// One scheme of every construction, small enough for exhaustive work at n <= 16.
inline std::vector<ConfigHandle> small_schemes() {
  using F = Family;
  return {
      SchemeConfig::build(make(F::kStandardIndel, "example2", 6, 3, 2)),
      SchemeConfig::build(make(F::kStandard, "example2", 6, 1)),
      SchemeConfig::build(make(F::kStandardIndel, "all-cols+1", 16, 3, 1)),
      SchemeConfig::build(make(F::kStandardIndel, "all-cols+1", 16, 3, 2)),
      SchemeConfig::build(make(F::kStandardIndel, "const-wt+1", 16, 3, 1, 0, 2u)),
      SchemeConfig::build(make(F::kStandardIndel, "bch-bin+1", 15, 4, 2)),
      SchemeConfig::build(make(F::kGeneral, "bch-gf", 15, 3)),
      SchemeConfig::build(make(F::kGeneral, "bch-gf", 15, 2, 0, 0, 4u)),
      SchemeConfig::build(make(F::kGeneral, "bd-diag", 16, 2, 0, 8)),
      SchemeConfig::build(make(F::kGeneral, "h2", 16, 4, 0, 8)),
      SchemeConfig::build(make(F::kGeneral, "h2hat", 16, 4, 0, 8)),
  };
}

// Larger universes for the randomized trials.
inline std::vector<ConfigHandle> random_schemes() {
  using F = Family;
  return {
      SchemeConfig::build(make(F::kStandard, "all-cols+1", 1024, 3)),
      SchemeConfig::build(make(F::kStandardIndel, "all-cols+1", 256, 3, 1)),
      SchemeConfig::build(make(F::kStandardIndel, "const-wt+1", 500, 3, 1, 0, 3u)),
      SchemeConfig::build(make(F::kStandardIndel, "bch-bin+1", 255, 4, 2)),
      SchemeConfig::build(make(F::kGeneral, "bch-gf", 255, 4)),
      SchemeConfig::build(make(F::kGeneral, "bch-gf", 4095, 3, 0, 0, 5u)),
      SchemeConfig::build(make(F::kGeneral, "bd-diag", 256, 2, 0, 8)),
      SchemeConfig::build(make(F::kGeneral, "bd-diag", 5000, 3, 0, 16)),
      SchemeConfig::build(make(F::kGeneral, "h2", 256, 4, 0, 8)),
      SchemeConfig::build(make(F::kGeneral, "h2hat", 200, 4, 0, 8)),
  };
}

inline std::vector<Element> random_set(const SchemeConfig& c, std::size_t size, std::mt19937_64& rng) {
  std::vector<Element> all;
  std::vector<Element> s;
  std::uniform_int_distribution<std::uint64_t> pick(0, c.universe_size() - 1);
  size = std::min<std::size_t>(size, c.universe_size());
  while (s.size() < size) {
    const Element u = c.element_of(pick(rng));
    if (std::find(s.begin(), s.end(), u) == s.end()) s.push_back(u);
  }
  return s;
}

// Cellwise sum of two states of one scheme: counters add modulo their width,
// payloads xor. Built through deserialize so the result is a real table.
inline Table cellwise_sum(const Table& a, const Table& b) {
  const auto& c = a.config();
  std::vector<std::uint8_t> bytes((c.size_bits() + 7) / 8, 0);
  std::size_t pos = 0;
  auto put = [&](std::uint64_t v, unsigned width) {
    for (unsigned k = width; k-- > 0;) {
      if ((v >> k) & 1) bytes[pos / 8] |= static_cast<std::uint8_t>(0x80 >> (pos % 8));
      ++pos;
    }
  };
  for (std::size_t i = 0; i < a.size(); ++i) {
    put((a.cell(i).count + b.cell(i).count) & c.counter_mask(), c.counter_bits());
    put(a.cell(i).sum ^ b.cell(i).sum, c.payload_bits());
  }
  return Table::deserialize(a.config_handle(), bytes);
}

// Which cells differ between two tables.
inline std::size_t cells_changed(const Table& a, const Table& b) {
  std::size_t changed = 0;
  for (std::size_t i = 0; i < a.size(); ++i) changed += !(a.cell(i) == b.cell(i));
  return changed;
}

/// Random distinct inserts followed by deletes in another order return to zero;
/// the serialization round-trips at every step of the way.
inline SuiteResult round_trip_trials(std::uint64_t trials, std::uint64_t seed) {
  SuiteResult res;
  std::mt19937_64 rng(seed);
  const auto schemes = random_schemes();
  for (std::uint64_t t = 0; t < trials; ++t) {
    const auto& c = schemes[t % schemes.size()];
    std::uniform_int_distribution<std::size_t> size(0, c->params().d + 3);
    auto s = random_set(*c, size(rng), rng);
    Table table(c);
    for (Element u : s) table.insert(u);
    if (!(Table::deserialize(c, table.serialize()) == table)) res.fail("serialization of " + c->params().construction);
    std::shuffle(s.begin(), s.end(), rng);
    for (Element u : s) table.erase(u);
    ++res.trials;
    if (!table.is_zero()) res.fail("round trip of " + c->params().construction);
  }
  return res;
}

/// state_of(S1 xor S2) equals the cellwise sum of the two states (general
/// family); for the binary families counts add and xorSums xor over disjoint
/// unions. Also checks the fixed column weight contract.
inline SuiteResult linearity_trials(std::uint64_t trials, std::uint64_t seed) {
  SuiteResult res;
  std::mt19937_64 rng(seed);
  const auto schemes = random_schemes();
  for (std::uint64_t t = 0; t < trials; ++t) {
    const auto& c = schemes[t % schemes.size()];
    std::uniform_int_distribution<std::size_t> size(0, 4);
    const auto a = random_set(*c, size(rng), rng);
    auto b = random_set(*c, size(rng), rng);
    std::vector<Element> combined;
    if (c->is_binary()) {
      std::erase_if(b, [&](Element u) { return std::find(a.begin(), a.end(), u) != a.end(); });
      combined = a;
      combined.insert(combined.end(), b.begin(), b.end());
    } else {
      std::vector<Element> sa(a), sb(b);
      std::sort(sa.begin(), sa.end());
      std::sort(sb.begin(), sb.end());
      std::set_symmetric_difference(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(combined));
    }
    const auto expect = cellwise_sum(state_of(c, a), state_of(c, b));
    ++res.trials;
    if (!(state_of(c, combined) == expect)) res.fail("linearity of " + c->params().construction);
    if (auto k = c->mapping().fixed_weight(); k && !a.empty()) {
      Table before = state_of(c, std::span<const Element>(a).subspan(1));
      Table after = before;
      after.insert(a.front());
      // A general-family cell can only stay put if the entry is zero, which the
      // sparse columns never hold; binary counters always move.
      if (cells_changed(before, after) != *k) res.fail("fixed weight of " + c->params().construction);
    }
  }
  return res;
}

/// Every S with |S| <= 3 over every small scheme: insert in order, delete in
/// reverse, serialization round trip, and linearity against all singletons.
inline SuiteResult exhaustive_small() {
  SuiteResult res;
  for (const auto& c : small_schemes()) {
    const unsigned depth = std::min<unsigned>(3, static_cast<unsigned>(c->universe_size()));
    std::vector<Table> singles;
    for (std::size_t j = 0; j < c->universe_size(); ++j) {
      const Element u = c->element_of(j);
      singles.push_back(state_of(c, std::span<const Element>(&u, 1)));
    }
    SubsetEnumerator(c, depth).run([&](const Table& t, std::span<const Element> s) {
      ++res.trials;
      Table fresh = state_of(c, s);
      if (!(fresh == t)) res.fail("incremental state of " + c->params().construction);
      if (!(Table::deserialize(c, t.serialize()) == t)) res.fail("serialization of " + c->params().construction);
      Table expect(c);
      for (Element u : s) expect = cellwise_sum(expect, singles[c->column_of(u)]);
      if (!(expect == t)) res.fail("linearity of " + c->params().construction);
      for (auto it = s.rbegin(); it != s.rend(); ++it) fresh.erase(*it);
      if (!fresh.is_zero()) res.fail("round trip of " + c->params().construction);
      return true;
    });
  }
  return res;
}

}  // namespace iblt::props
