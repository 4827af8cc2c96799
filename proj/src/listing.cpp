#include "iblt/listing.hpp"

#include <algorithm>
#include <utility>

#include "iblt/enumerate.hpp"
#include "iblt/errors.hpp"
#include "iblt/matrices.hpp"

namespace iblt {

ListingOutcome ListingOutcome::of(std::vector<Element> elements) {
  std::sort(elements.begin(), elements.end());
  return {true, std::move(elements)};
}

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kPeel: return "peel";
    case Algorithm::kExtendedPeel: return "xpeel";
    case Algorithm::kD3OneBit: return "d3";
    case Algorithm::kPgz: return "pgz";
    case Algorithm::kK1Bd: return "k1bd";
    case Algorithm::kOracle: return "oracle";
  }
  return "?";
}

Algorithm parse_algorithm(const std::string& name) {
  for (auto a : {Algorithm::kPeel, Algorithm::kExtendedPeel, Algorithm::kD3OneBit, Algorithm::kPgz,
                 Algorithm::kK1Bd, Algorithm::kOracle}) {
    if (to_string(a) == name) return a;
  }
  throw UsageError("unknown listing algorithm '" + name + "'");
}

std::string incompatibility(Algorithm a, const SchemeConfig& config) {
  const auto& c = config.params().construction;
  switch (a) {
    case Algorithm::kPeel:
    case Algorithm::kExtendedPeel:
      return config.is_binary() ? "" : to_string(a) + " needs a standard or standard-indel scheme";
    case Algorithm::kD3OneBit:
      if (!config.is_binary()) return "d3 needs a standard-indel scheme";
      if (!config.has_all_ones_row()) return "d3 needs a matrix whose last row is all ones";
      return "";
    case Algorithm::kPgz:
      return c == kind::kBchField ? "" : "pgz needs a bch-gf scheme";
    case Algorithm::kK1Bd:
      return c == kind::kBdDiagonal ? "" : "k1bd needs a bd-diag scheme";
    case Algorithm::kOracle: return "";
  }
  return "unknown algorithm";
}

Algorithm default_algorithm(const SchemeConfig& config) {
  const auto& c = config.params().construction;
  if (c == kind::kBchField) return Algorithm::kPgz;
  if (c == kind::kBdDiagonal) return Algorithm::kK1Bd;
  if (!config.is_binary()) return Algorithm::kOracle;
  if (config.family() == Family::kStandard) return Algorithm::kPeel;
  if (config.has_all_ones_row() && config.counter_bits() == 1) return Algorithm::kD3OneBit;
  return Algorithm::kExtendedPeel;
}

namespace {

void require_binary(const Table& table, const char* who) {
  if (!table.config().is_binary()) {
    throw UsageError(std::string(who) + " needs a standard or standard-indel table");
  }
}

// Working copy plus the elements taken out of it so far.
class Extraction {
 public:
  explicit Extraction(const Table& table) : table_(table) {}

  Table& table() { return table_; }
  const Cell& cell(std::size_t i) const { return table_.cell(i); }

  bool take(Element e) {
    if (!table_.config().contains(e)) return false;
    if (std::find(out_.begin(), out_.end(), e) != out_.end()) return false;
    table_.erase(e);
    out_.push_back(e);
    return true;
  }

  // Peels pure cells until none is left. False on an invalid pure cell.
  bool peel_all() {
    for (;;) {
      std::optional<Element> pure;
      for (const auto& c : table_.cells()) {
        if (c.count == 1) {
          pure = c.sum;
          break;
        }
      }
      if (!pure) return true;
      if (!take(*pure)) return false;
    }
  }

  ListingOutcome finish() {
    if (!table_.is_zero()) return ListingOutcome::failure();
    return ListingOutcome::of(std::move(out_));
  }

 private:
  Table table_;
  std::vector<Element> out_;
};

bool covers(const SchemeConfig& config, Element e, std::size_t row) {
  for (const auto& entry : config.mapping().entries(config.column_of(e))) {
    if (entry.row == row) return true;
  }
  return false;
}

}  // namespace

ListingOutcome peel(const Table& table) {
  require_binary(table, "peel");
  Extraction x(table);
  if (!x.peel_all()) return ListingOutcome::failure();
  return x.finish();
}

ListingOutcome extended_peel(const Table& table, unsigned d) {
  require_binary(table, "extended peeling");
  const auto& config = table.config();
  const std::size_t m = table.size();
  const std::uint32_t mask = config.counter_mask();
  const std::uint64_t modulus = std::uint64_t{mask} + 1;
  const bool all_ones = config.has_all_ones_row();
  Extraction x(table);

  auto usable = [&](std::size_t i, std::size_t j) -> std::optional<Element> {
    const Cell& a = x.cell(i);
    const Cell& b = x.cell(j);
    if (((a.count - b.count) & mask) != 1) return std::nullopt;
    const Element e = a.sum ^ b.sum;
    if (!config.contains(e)) return std::nullopt;
    if (!covers(config, e, i) || covers(config, e, j)) return std::nullopt;
    return e;
  };

  for (std::uint64_t round = 0; round <= config.universe_size(); ++round) {
    if (!x.peel_all()) return ListingOutcome::failure();
    if (x.table().is_zero()) break;

    std::optional<Element> found;
    if (all_ones) {
      const std::size_t i = m - 1;
      const std::uint64_t c = x.cell(i).count;
      const std::uint64_t stored = c != 0 ? c : modulus;
      if (stored > d) return ListingOutcome::failure();
      for (std::size_t j = 0; j < m - 1 && !found; ++j) found = usable(i, j);
    } else {
      for (std::size_t i = 0; i < m && !found; ++i) {
        if (x.cell(i).empty()) continue;
        for (std::size_t j = 0; j < m && !found; ++j) {
          if (j == i || x.cell(j).empty()) continue;
          found = usable(i, j);
        }
      }
    }
    if (!found || !x.take(*found)) return ListingOutcome::failure();
  }
  return x.finish();
}

ListingOutcome list_d3_onebit(const Table& table) {
  require_binary(table, "d3 listing");
  const auto& config = table.config();
  if (!config.has_all_ones_row()) throw UsageError("d3 listing needs an all-ones last row");
  const std::size_t m = table.size();
  const std::size_t last = m - 1;
  Extraction x(table);

  // Each round removes one or two elements, so three rounds cover |S| <= 3.
  for (int round = 0; round < 3; ++round) {
    const Cell all = x.cell(last);
    const std::uint32_t parity = all.count & 1;
    if (parity == 0 && all.sum == 0) break;

    if (parity == 0) {
      // Two elements u, v with u ^ v = all.sum; a row separating them is pure.
      std::optional<Element> u;
      for (std::size_t i = 0; i < last && !u; ++i) {
        if ((x.cell(i).count & 1) == 1) u = x.cell(i).sum;
      }
      if (!u) return ListingOutcome::failure();
      if (!x.take(*u) || !x.take(*u ^ all.sum)) return ListingOutcome::failure();
      continue;
    }

    // One or three elements. A single element sits in a count-1 cell whose
    // xorSum differs from the total; a pair sits in a count-0, nonzero cell.
    std::optional<Element> next;
    for (std::size_t i = 0; i < last && !next; ++i) {
      const Cell& c = x.cell(i);
      if ((c.count & 1) == 1 && c.sum != all.sum) next = c.sum;
    }
    for (std::size_t i = 0; i < last && !next; ++i) {
      const Cell& c = x.cell(i);
      if ((c.count & 1) == 0 && c.sum != 0) next = c.sum ^ all.sum;
    }
    if (!next) next = all.sum;
    if (!x.take(*next)) return ListingOutcome::failure();
  }
  return x.finish();
}

namespace {

// Solves a * x = b over the field; nullopt when a is singular.
std::optional<std::vector<std::uint32_t>> solve(const FieldSpec& f,
                                                std::vector<std::vector<std::uint32_t>> a,
                                                std::vector<std::uint32_t> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col] == 0) ++pivot;
    if (pivot == n) return std::nullopt;
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    const std::uint32_t scale = f.inv(a[col][col]);
    for (std::size_t k = col; k < n; ++k) a[col][k] = f.mul(a[col][k], scale);
    b[col] = f.mul(b[col], scale);
    for (std::size_t row = 0; row < n; ++row) {
      if (row == col || a[row][col] == 0) continue;
      const std::uint32_t factor = a[row][col];
      for (std::size_t k = col; k < n; ++k) a[row][k] ^= f.mul(factor, a[col][k]);
      b[row] ^= f.mul(factor, b[col]);
    }
  }
  return b;
}

}  // namespace

std::optional<std::vector<std::uint64_t>> locate_errors(
    const FieldSpec& field, std::span<const std::uint32_t> odd_syndromes) {
  const std::size_t t = odd_syndromes.size();
  // s[k] = S_k for k = 1..2t.
  std::vector<std::uint32_t> s(2 * t + 1, 0);
  for (std::size_t i = 0; i < t; ++i) s[2 * i + 1] = odd_syndromes[i];
  for (std::size_t k = 2; k <= 2 * t; k += 2) s[k] = field.square(s[k / 2]);

  if (std::all_of(odd_syndromes.begin(), odd_syndromes.end(), [](auto v) { return v == 0; })) {
    return std::vector<std::uint64_t>{};
  }

  for (std::size_t nu = t; nu >= 1; --nu) {
    // sum_{j=1..nu} L_j S_{i+nu-j} = S_{i+nu}, i = 1..nu.
    std::vector<std::vector<std::uint32_t>> a(nu, std::vector<std::uint32_t>(nu));
    std::vector<std::uint32_t> b(nu);
    for (std::size_t i = 1; i <= nu; ++i) {
      for (std::size_t j = 1; j <= nu; ++j) a[i - 1][j - 1] = s[i + nu - j];
      b[i - 1] = s[i + nu];
    }
    auto lambda = solve(field, std::move(a), std::move(b));
    if (!lambda) continue;

    std::size_t degree = nu;
    while (degree > 0 && (*lambda)[degree - 1] == 0) --degree;
    if (degree == 0) return std::nullopt;

    std::vector<std::uint64_t> positions;
    const std::uint64_t order = field.group_order();
    for (std::uint64_t p = 0; p < order && positions.size() <= degree; ++p) {
      const std::uint32_t x = field.alpha_pow(order - p);  // alpha^{-p}
      std::uint32_t acc = 0;
      for (std::size_t j = degree; j >= 1; --j) acc = field.mul(acc ^ (*lambda)[j - 1], x);
      if ((acc ^ 1) == 0) positions.push_back(p);
    }
    if (positions.size() != degree) return std::nullopt;

    for (std::size_t i = 0; i < t; ++i) {
      std::uint32_t check = 0;
      for (auto p : positions) check ^= field.alpha_pow((2 * i + 1) * p);
      if (check != odd_syndromes[i]) return std::nullopt;
    }
    return positions;
  }
  return std::nullopt;
}

ListingOutcome pgz_decode(const Table& table) {
  const auto& config = table.config();
  if (config.params().construction != kind::kBchField) throw UsageError("pgz needs a bch-gf scheme");
  const unsigned d = config.params().d;
  std::vector<std::uint32_t> syndromes(d);
  for (unsigned i = 0; i < d; ++i) syndromes[i] = static_cast<std::uint32_t>(table.cell(i).sum);

  auto positions = locate_errors(*config.field(), syndromes);
  if (!positions) return ListingOutcome::failure();
  std::vector<Element> elements;
  for (auto p : *positions) {
    if (p >= config.universe_size()) return ListingOutcome::failure();
    elements.push_back(config.element_of(p));
  }
  if (!(state_of(table.config_handle(), elements) == table)) return ListingOutcome::failure();
  return ListingOutcome::of(std::move(elements));
}

ListingOutcome list_k1_bd(const Table& table) {
  const auto& config = table.config();
  if (config.params().construction != kind::kBdDiagonal) throw UsageError("k1bd needs a bd-diag scheme");
  const unsigned d = config.params().d;
  const unsigned s = *largest_subfield_bits(d, config.params().r);
  const auto subfield = default_spec(s);
  const std::uint64_t block = subfield->group_order();
  const unsigned used_bits = d * s;

  std::vector<Element> elements;
  for (std::size_t t = 0; t < table.size(); ++t) {
    const auto v = static_cast<std::uint32_t>(table.cell(t).sum);
    if (v == 0) continue;
    if (used_bits < 32 && (v >> used_bits) != 0) return ListingOutcome::failure();
    const auto subs = unpack_subelements(v, d, s);
    auto positions = locate_errors(*subfield, subs);
    if (!positions) return ListingOutcome::failure();
    for (auto p : *positions) {
      const std::uint64_t col = t * block + p;
      if (col >= config.universe_size()) return ListingOutcome::failure();
      elements.push_back(config.element_of(col));
    }
  }
  if (!(state_of(table.config_handle(), elements) == table)) return ListingOutcome::failure();
  return ListingOutcome::of(std::move(elements));
}

std::string state_key(const Table& table) {
  const auto bytes = table.serialize();
  return {bytes.begin(), bytes.end()};
}

ListingOracle::ListingOracle(ConfigHandle config, unsigned d, std::uint64_t budget)
    : config_(std::move(config)), d_(d) {
  require_budget(config_->universe_size(), d, budget);
  map_.reserve(static_cast<std::size_t>(subset_count(config_->universe_size(), d)));
  SubsetEnumerator(config_, d).run([this](const Table& t, std::span<const Element> s) {
    auto [it, inserted] = map_.try_emplace(state_key(t));
    if (inserted) {
      it->second.elements.assign(s.begin(), s.end());
    } else if (!it->second.ambiguous) {
      it->second.ambiguous = true;
      ++ambiguous_;
    }
    return true;
  });
}

ListingOutcome ListingOracle::lookup(const Table& table) const {
  auto it = map_.find(state_key(table));
  if (it == map_.end() || it->second.ambiguous) return ListingOutcome::failure();
  return ListingOutcome::of(it->second.elements);
}

ListingOutcome list_oracle(const ListingOracle& oracle, const Table& table) {
  return oracle.lookup(table);
}

ListingOutcome run_listing(Algorithm a, const Table& table, unsigned d, const ListingOracle* oracle) {
  if (auto why = incompatibility(a, table.config()); !why.empty()) throw UsageError(why);
  switch (a) {
    case Algorithm::kPeel: return peel(table);
    case Algorithm::kExtendedPeel: return extended_peel(table, d);
    case Algorithm::kD3OneBit: return list_d3_onebit(table);
    case Algorithm::kPgz: return pgz_decode(table);
    case Algorithm::kK1Bd: return list_k1_bd(table);
    case Algorithm::kOracle:
      if (oracle == nullptr) throw UsageError("oracle listing needs a precomputed oracle");
      return list_oracle(*oracle, table);
  }
  return ListingOutcome::failure();
}

}  // namespace iblt
