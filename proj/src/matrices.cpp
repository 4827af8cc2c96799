#include "iblt/matrices.hpp"

#include <algorithm>
#include <numeric>
#include <utility>

#include "iblt/errors.hpp"

namespace iblt {

MappingSpec::MappingSpec(std::string kind, std::size_t rows, std::size_t cols, FieldHandle field,
                         Generator gen, std::optional<std::size_t> fixed_weight)
    : kind_(std::move(kind)),
      rows_(rows),
      cols_(cols),
      field_(std::move(field)),
      gen_(std::move(gen)),
      fixed_weight_(fixed_weight) {
  if (cols_ <= kMaterializeLimit) {
    auto cache = std::make_shared<std::vector<Column>>(cols_);
    for (std::size_t j = 0; j < cols_; ++j) gen_(j, (*cache)[j]);
    cache_ = std::move(cache);
  }
}

MappingSpec MappingSpec::from_supports(std::string kind, std::size_t rows,
                                       std::vector<std::vector<std::uint32_t>> supports) {
  for (auto& s : supports) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    if (!s.empty() && s.back() >= rows) throw UsageError("column support exceeds row count");
  }
  std::optional<std::size_t> fixed;
  if (!supports.empty() &&
      std::all_of(supports.begin(), supports.end(),
                  [&](const auto& s) { return s.size() == supports.front().size(); })) {
    fixed = supports.front().size();
  }
  auto shared = std::make_shared<const std::vector<std::vector<std::uint32_t>>>(std::move(supports));
  const std::size_t cols = shared->size();
  return MappingSpec(
      std::move(kind), rows, cols, nullptr,
      [shared](std::size_t j, Column& out) {
        out.clear();
        for (auto row : (*shared)[j]) out.push_back({row, 1});
      },
      fixed);
}

MappingSpec MappingSpec::from_rows(std::string kind, const std::vector<std::string>& rows) {
  if (rows.empty()) throw UsageError("matrix has no rows");
  const std::size_t n = rows.front().size();
  std::vector<std::vector<std::uint32_t>> supports(n);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != n) throw UsageError("matrix rows have different lengths");
    for (std::size_t j = 0; j < n; ++j) {
      if (rows[i][j] == '1') {
        supports[j].push_back(static_cast<std::uint32_t>(i));
      } else if (rows[i][j] != '0') {
        throw UsageError("matrix rows must contain only '0' and '1'");
      }
    }
  }
  return from_supports(std::move(kind), rows.size(), std::move(supports));
}

void MappingSpec::entries(std::size_t j, Column& out) const {
  if (j >= cols_) throw UsageError("column index out of range");
  if (cache_) {
    out = (*cache_)[j];
  } else {
    gen_(j, out);
  }
}

Column MappingSpec::entries(std::size_t j) const {
  Column out;
  entries(j, out);
  return out;
}

std::vector<std::uint32_t> MappingSpec::column(std::size_t j) const {
  std::vector<std::uint32_t> dense(rows_, 0);
  for (const auto& e : entries(j)) dense[e.row] = e.value;
  return dense;
}

std::size_t MappingSpec::weight(std::size_t j) const { return entries(j).size(); }

bool MappingSpec::has_all_ones_last_row() const {
  if (rows_ == 0) return false;
  Column col;
  for (std::size_t j = 0; j < cols_; ++j) {
    entries(j, col);
    if (col.empty() || col.back().row != rows_ - 1) return false;
  }
  return true;
}

MappingSpec MappingSpec::first_rows(std::size_t count) const {
  if (count > rows_) throw UsageError("cannot keep more rows than the matrix has");
  auto parent = *this;
  return MappingSpec(
      kind_, count, cols_, field_,
      [parent, count](std::size_t j, Column& out) {
        parent.entries(j, out);
        std::erase_if(out, [count](const Entry& e) { return e.row >= count; });
      },
      std::nullopt);
}

bool operator==(const MappingSpec& a, const MappingSpec& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_ || a.is_binary() != b.is_binary()) return false;
  if (!a.is_binary() && !a.field_->same_as(*b.field_)) return false;
  Column ca, cb;
  for (std::size_t j = 0; j < a.cols_; ++j) {
    a.entries(j, ca);
    b.entries(j, cb);
    if (ca != cb) return false;
  }
  return true;
}

std::size_t minbinom(std::uint64_t n, std::uint64_t k) {
  if (k == 0) throw UsageError("minbinom requires k >= 1");
  // C(m, k) grows with m; stop as soon as it reaches n. Saturate instead of overflowing.
  for (std::uint64_t m = k;; ++m) {
    unsigned __int128 c = 1;
    for (std::uint64_t i = 0; i < k && c < n; ++i) c = c * (m - i) / (i + 1);
    if (c >= n) return m;
  }
}

std::vector<std::uint32_t> bch_parity_column(const FieldSpec& field, unsigned d, std::uint64_t j) {
  if (j >= field.group_order()) throw UsageError("BCH column index out of range");
  std::vector<std::uint32_t> col(d);
  for (unsigned i = 0; i < d; ++i) col[i] = field.alpha_pow((2 * i + 1) * j);
  return col;
}

namespace {

Column dense_to_entries(const std::vector<std::uint32_t>& dense, std::uint32_t row_offset = 0) {
  Column out;
  for (std::size_t i = 0; i < dense.size(); ++i) {
    if (dense[i] != 0) out.push_back({static_cast<std::uint32_t>(i) + row_offset, dense[i]});
  }
  return out;
}

// Raw BCH column over any field size; exponents wrap modulo the group order.
// Used for the small subfields of the packed constructions.
std::vector<std::uint32_t> bch_column_unchecked(const FieldSpec& field, unsigned d,
                                                std::uint64_t j) {
  std::vector<std::uint32_t> col(d);
  for (unsigned i = 0; i < d; ++i) col[i] = field.alpha_pow((2 * i + 1) * j);
  return col;
}

}  // namespace

MappingSpec bch_parity_matrix(const FieldHandle& field, unsigned d, std::size_t n) {
  if (d == 0) throw UsageError("BCH matrix needs d >= 1");
  if (2 * static_cast<std::uint64_t>(d) - 1 >= field->size()) {
    throw ConstructionInfeasible("BCH matrix needs 2d-1 < 2^r");
  }
  if (n == 0 || n > field->group_order()) throw UsageError("BCH matrix needs 1 <= n <= 2^r - 1");
  return MappingSpec(
      std::string(kind::kBchField), d, n, field,
      [field, d](std::size_t j, Column& out) { out = dense_to_entries(bch_parity_column(*field, d, j)); },
      d);
}

MappingSpec example2_matrix() {
  return MappingSpec::from_rows(std::string(kind::kExample2), {
                                                                 "111000",
                                                                 "000111",
                                                                 "100100",
                                                                 "010010",
                                                                 "001001",
                                                             });
}

MappingSpec all_columns_plus_ones(unsigned r, std::optional<std::size_t> n) {
  if (r == 0 || r > 32) throw UsageError("all-columns matrix needs 1 <= r <= 32");
  const std::size_t cols = n.value_or(std::size_t{1} << r);
  if (cols == 0 || cols > (std::size_t{1} << r)) throw UsageError("all-columns matrix needs n <= 2^r");
  return MappingSpec(
      std::string(kind::kAllColumns), r + 1, cols, nullptr,
      [r](std::size_t j, Column& out) {
        out.clear();
        for (unsigned i = 0; i < r; ++i) {
          if ((j >> i) & 1) out.push_back({i, 1});
        }
        out.push_back({r, 1});
      },
      std::nullopt);
}

MappingSpec constant_weight_plus_ones(std::size_t n, std::size_t k) {
  if (n == 0) throw UsageError("constant-weight matrix needs n >= 1");
  const std::size_t base = minbinom(n, k);
  std::vector<std::vector<std::uint32_t>> supports;
  supports.reserve(n);
  std::vector<std::uint32_t> comb(k);
  std::iota(comb.begin(), comb.end(), 0u);
  while (supports.size() < n) {
    auto s = comb;
    s.push_back(static_cast<std::uint32_t>(base));
    supports.push_back(std::move(s));
    // Next k-combination of [0, base) in lexicographic order.
    std::size_t i = k;
    while (i > 0 && comb[i - 1] == base - k + i - 1) --i;
    if (i == 0) break;
    ++comb[i - 1];
    for (std::size_t t = i; t < k; ++t) comb[t] = comb[t - 1] + 1;
  }
  auto spec = MappingSpec::from_supports(std::string(kind::kConstantWeight), base + 1,
                                         std::move(supports));
  return spec;
}

MappingSpec bch_binary_plus_ones(unsigned r, std::optional<std::size_t> n) {
  auto field = default_spec(r);
  const std::size_t cols = n.value_or(field->group_order());
  if (cols == 0 || cols > field->group_order()) {
    throw UsageError("binary BCH matrix needs 1 <= n <= 2^r - 1");
  }
  return MappingSpec(
      std::string(kind::kBchBinary), 2 * r + 1, cols, nullptr,
      [field, r](std::size_t j, Column& out) {
        out.clear();
        const auto col = bch_parity_column(*field, 2, j);
        for (unsigned c = 0; c < 2; ++c) {
          for (unsigned i = 0; i < r; ++i) {
            if ((col[c] >> i) & 1) out.push_back({c * r + i, 1});
          }
        }
        out.push_back({2 * r, 1});
      },
      std::nullopt);
}

std::uint32_t pack_subelements(const std::vector<std::uint32_t>& subs, unsigned sub_bits) {
  std::uint64_t packed = 0;
  for (std::size_t i = 0; i < subs.size(); ++i) packed |= std::uint64_t{subs[i]} << (i * sub_bits);
  return static_cast<std::uint32_t>(packed);
}

std::vector<std::uint32_t> unpack_subelements(std::uint32_t packed, unsigned count,
                                              unsigned sub_bits) {
  const std::uint32_t mask = (std::uint32_t{1} << sub_bits) - 1;
  std::vector<std::uint32_t> subs(count);
  for (unsigned i = 0; i < count; ++i) subs[i] = (packed >> (i * sub_bits)) & mask;
  return subs;
}

std::optional<unsigned> largest_subfield_bits(unsigned weight, unsigned budget_bits) {
  if (weight == 0) return std::nullopt;
  const unsigned s = std::min(budget_bits / weight, kMaxSubfieldBits);
  if (s < 2) return std::nullopt;
  return s;
}

BdSequence bd_sequence(const FieldHandle& field, unsigned d) {
  if (d == 0) throw UsageError("B_d-sequence needs d >= 1");
  const auto s = largest_subfield_bits(d, field->degree());
  if (!s) {
    throw ConstructionInfeasible("no subfield GF(2^s), s >= 2, with d*s <= r for r=" +
                                 std::to_string(field->degree()) + ", d=" + std::to_string(d));
  }
  BdSequence seq;
  seq.field = field;
  seq.subfield = default_spec(*s);
  seq.d = d;
  seq.sub_bits = *s;
  const std::uint64_t count = seq.subfield->group_order();
  seq.elements.reserve(count + 1);
  seq.elements.push_back(0);
  for (std::uint64_t j = 0; j < count; ++j) {
    seq.elements.push_back(pack_subelements(bch_column_unchecked(*seq.subfield, d, j), *s));
  }
  return seq;
}

MappingSpec block_diagonal(const FieldHandle& field, std::vector<std::uint32_t> g, std::size_t n) {
  if (g.empty()) throw UsageError("block-diagonal matrix needs a nonempty sequence");
  if (n == 0) throw UsageError("block-diagonal matrix needs n >= 1");
  const std::size_t l = g.size();
  const std::size_t m = (n + l - 1) / l;
  auto shared = std::make_shared<const std::vector<std::uint32_t>>(std::move(g));
  return MappingSpec(
      std::string(kind::kBdDiagonal), m, n, field,
      [shared, l](std::size_t j, Column& out) {
        out.assign(1, Entry{static_cast<std::uint32_t>(j / l), (*shared)[j % l]});
      },
      1);
}

namespace {

SplitBch split_bch(unsigned d, unsigned s, std::size_t first_col) {
  SplitBch out;
  out.subfield = default_spec(s);
  out.sub_bits = s;
  const std::uint64_t count = out.subfield->group_order();
  for (std::uint64_t j = first_col; j < count; ++j) {
    auto col = bch_column_unchecked(*out.subfield, d, j);
    std::vector<std::uint32_t> up(col.begin(), col.begin() + d / 2);
    std::vector<std::uint32_t> lo(col.begin() + d / 2, col.end());
    out.upper.push_back(pack_subelements(up, s));
    out.lower.push_back(pack_subelements(lo, s));
  }
  return out;
}

}  // namespace

SplitBch h2_halves(const FieldHandle& field, unsigned d) {
  if (d <= 2 || d % 2 != 0) throw UsageError("h2 construction needs an even d > 2");
  const auto s = largest_subfield_bits(d, 2 * field->degree());
  if (!s) throw ConstructionInfeasible("h2 construction infeasible: need d*s <= 2r with s >= 2");
  return split_bch(d, *s, 0);
}

MappingSpec block_h2(const FieldHandle& field, unsigned d, std::size_t n) {
  if (n == 0) throw UsageError("h2 construction needs n >= 1");
  auto halves = std::make_shared<const SplitBch>(h2_halves(field, d));
  const std::size_t width = halves->upper.size();
  const std::size_t m = (n + width - 1) / width + 1;
  return MappingSpec(
      std::string(kind::kH2), m, n, field,
      [halves, width](std::size_t j, Column& out) {
        const auto t = static_cast<std::uint32_t>(j / width);
        const std::size_t p = j % width;
        out = {{t, halves->upper[p]}, {t + 1, halves->lower[p]}};
      },
      2);
}

SplitBch h2_hat_halves(const FieldHandle& field) {
  const auto s = largest_subfield_bits(2, field->degree());
  if (!s) throw ConstructionInfeasible("h2hat construction infeasible: need 2*s <= r with s >= 2");
  return split_bch(4, *s, 1);
}

MappingSpec block_h2_hat(const FieldHandle& field, std::size_t n) {
  if (n == 0) throw UsageError("h2hat construction needs n >= 1");
  auto halves = std::make_shared<const SplitBch>(h2_hat_halves(field));
  const std::size_t width = halves->upper.size();
  const std::size_t tile = 3 * width;
  const std::size_t tiles = (n + tile - 1) / tile;
  return MappingSpec(
      std::string(kind::kH2Hat), 2 * tiles + 1, n, field,
      [halves, width, tile](std::size_t j, Column& out) {
        const auto base = static_cast<std::uint32_t>(2 * (j / tile));
        const std::size_t block = (j % tile) / width;
        const std::size_t p = j % width;
        const auto up = halves->upper[p];
        const auto lo = halves->lower[p];
        switch (block) {
          case 0: out = {{base, up}, {base + 1, lo}}; break;
          case 1: out = {{base + 1, up}, {base + 2, lo}}; break;
          default: out = {{base, up}, {base + 2, lo}}; break;
        }
      },
      2);
}

MappingSpec pad_redundant(const MappingSpec& spec, std::size_t extra) {
  if (extra == 0) return spec;
  const auto& field = spec.field();
  if (field && extra > field->group_order()) {
    throw UsageError("not enough distinct nonzero scalars for the padding rows");
  }
  std::vector<std::uint32_t> scale(extra, 1);
  if (field) {
    for (std::size_t t = 0; t < extra; ++t) scale[t] = field->alpha_pow(t);
  }
  const std::size_t base_rows = spec.rows();
  std::optional<std::size_t> fixed;
  if (spec.fixed_weight()) fixed = *spec.fixed_weight() + extra;
  return MappingSpec(
      spec.kind(), base_rows + extra, spec.cols(), field,
      [spec, scale, base_rows](std::size_t j, Column& out) {
        spec.entries(j, out);
        for (std::size_t t = 0; t < scale.size(); ++t) {
          out.push_back({static_cast<std::uint32_t>(base_rows + t), scale[t]});
        }
      },
      fixed);
}

}  // namespace iblt
