#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "iblt/finite_field.hpp"

namespace iblt {

/// One nonzero entry of a mapping-matrix column.
struct Entry {
  std::uint32_t row;
  std::uint32_t value;

  friend bool operator==(const Entry&, const Entry&) = default;
};

using Column = std::vector<Entry>;

/// Construction ids as they appear in scheme-config files.
namespace kind {
inline constexpr std::string_view kExample2 = "example2";
inline constexpr std::string_view kAllColumns = "all-cols+1";
inline constexpr std::string_view kConstantWeight = "const-wt+1";
inline constexpr std::string_view kBchBinary = "bch-bin+1";
inline constexpr std::string_view kBchField = "bch-gf";
inline constexpr std::string_view kBdDiagonal = "bd-diag";
inline constexpr std::string_view kH2 = "h2";
inline constexpr std::string_view kH2Hat = "h2hat";
inline constexpr std::string_view kCustom = "custom";
}  // namespace kind

/// Column-generator view of an m x n mapping matrix, binary or over GF(2^r).
///
/// Columns are produced by a pure generator and, for moderate n, materialized
/// once at construction. Entries are sorted by row and never hold zeros; for a
/// binary matrix every value is 1. Copies share the underlying storage.
class MappingSpec {
 public:
  using Generator = std::function<void(std::size_t col, Column& out)>;

  /// Columns above this count are generated on demand rather than cached.
  static constexpr std::size_t kMaterializeLimit = std::size_t{1} << 20;

  MappingSpec(std::string kind, std::size_t rows, std::size_t cols, FieldHandle field,
              Generator gen, std::optional<std::size_t> fixed_weight);

  /// Binary matrix from explicit columns (row indices of the ones).
  static MappingSpec from_supports(std::string kind, std::size_t rows,
                                   std::vector<std::vector<std::uint32_t>> supports);
  /// Binary matrix from "0101..." row strings.
  static MappingSpec from_rows(std::string kind, const std::vector<std::string>& rows);

  const std::string& kind() const { return kind_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_binary() const { return field_ == nullptr; }
  const FieldHandle& field() const { return field_; }
  /// Common column weight when the construction guarantees one.
  std::optional<std::size_t> fixed_weight() const { return fixed_weight_; }

  /// Sparse column j. Throws UsageError when j >= cols().
  void entries(std::size_t j, Column& out) const;
  Column entries(std::size_t j) const;
  /// Dense column j of length rows().
  std::vector<std::uint32_t> column(std::size_t j) const;
  std::size_t weight(std::size_t j) const;

  /// True when every column has a nonzero in the last row.
  bool has_all_ones_last_row() const;

  /// Same columns restricted to the first `count` rows.
  MappingSpec first_rows(std::size_t count) const;

  friend bool operator==(const MappingSpec& a, const MappingSpec& b);

 private:
  std::string kind_;
  std::size_t rows_;
  std::size_t cols_;
  FieldHandle field_;
  Generator gen_;
  std::shared_ptr<const std::vector<Column>> cache_;
  std::optional<std::size_t> fixed_weight_;
};

/// Smallest m with C(m, k) >= n.
std::size_t minbinom(std::uint64_t n, std::uint64_t k);

/// Column j of the BCH parity-check matrix over GF(2^r):
/// (alpha^j, alpha^{3j}, ..., alpha^{(2d-1)j}), for 0 <= j < 2^r - 1.
std::vector<std::uint32_t> bch_parity_column(const FieldSpec& field, unsigned d, std::uint64_t j);

/// The d x n matrix of bch_parity_column for n <= 2^r - 1.
MappingSpec bch_parity_matrix(const FieldHandle& field, unsigned d, std::size_t n);

/// The fixed 5 x 6 binary matrix used as the worked counter-array example.
MappingSpec example2_matrix();

/// Rows 0..r-1 hold binary(j) (LSB in row 0), row r is all ones. n defaults to 2^r.
MappingSpec all_columns_plus_ones(unsigned r, std::optional<std::size_t> n = std::nullopt);

/// First n weight-k columns of length minbinom(n,k), lexicographic by support,
/// plus an all-ones row.
MappingSpec constant_weight_plus_ones(std::size_t n, std::size_t k);

/// Binary expansion of the two-row BCH matrix over GF(2^r), then an all-ones row.
/// Bit i of alpha^{cj} goes to row c*r + i for c in {0, 1}. n defaults to 2^r - 1.
MappingSpec bch_binary_plus_ones(unsigned r, std::optional<std::size_t> n = std::nullopt);

/// Packed B_d-sequence in GF(2^r) with nonzero part taken from the columns of the
/// d-row BCH matrix over a subfield-sized GF(2^s).
struct BdSequence {
  FieldHandle field;     // GF(2^r), where the packed elements live
  FieldHandle subfield;  // GF(2^s), where the BCH columns live
  unsigned d = 0;
  unsigned sub_bits = 0;                // s
  std::vector<std::uint32_t> elements;  // g_0 = 0, g_1, ..., g_{n'}

  std::size_t nonzero_count() const { return elements.size() - 1; }
};

/// Packs sub-element i into bits [i*s, (i+1)*s).
std::uint32_t pack_subelements(const std::vector<std::uint32_t>& subs, unsigned sub_bits);
std::vector<std::uint32_t> unpack_subelements(std::uint32_t packed, unsigned count,
                                              unsigned sub_bits);

/// Subfields are enumerated element by element, so they are capped at GF(2^20).
inline constexpr unsigned kMaxSubfieldBits = 20;

/// Largest s in [2, kMaxSubfieldBits] with `weight * s <= budget_bits`, or nullopt.
std::optional<unsigned> largest_subfield_bits(unsigned weight, unsigned budget_bits);

/// Throws ConstructionInfeasible when no s >= 2 satisfies d*s <= r.
BdSequence bd_sequence(const FieldHandle& field, unsigned d);

/// m = ceil(n / l) single-entry columns where l = g.size(); column j holds
/// g[j mod l] in row floor(j / l). `g` is the nonzero part of a B_d-sequence.
MappingSpec block_diagonal(const FieldHandle& field, std::vector<std::uint32_t> g, std::size_t n);

/// Halves of the d-row BCH matrix over GF(2^s), each half packed into one element.
struct SplitBch {
  FieldHandle subfield;
  unsigned sub_bits = 0;
  std::vector<std::uint32_t> upper;
  std::vector<std::uint32_t> lower;
};

/// Staircase matrix of weight-2 columns: block t (n' columns) puts g^U in row t
/// and g^L in row t+1. m = ceil(n/n') + 1. Requires even d > 2 and d*s <= 2r.
MappingSpec block_h2(const FieldHandle& field, unsigned d, std::size_t n);
SplitBch h2_halves(const FieldHandle& field, unsigned d);

/// Tiles of the 3-row block matrix with rows (gU,0,gU), (gL,gU,0), (0,gL,gL),
/// built from the 4-row BCH matrix with column 0 removed. Consecutive tiles share
/// one row, so T tiles use 2T+1 rows. Requires 2*s <= r.
MappingSpec block_h2_hat(const FieldHandle& field, std::size_t n);
SplitBch h2_hat_halves(const FieldHandle& field);

/// Appends `extra` rows; appended row t is the all-ones row scaled by alpha^t
/// (plain all-ones rows for binary matrices). Every column weight grows by `extra`.
MappingSpec pad_redundant(const MappingSpec& spec, std::size_t extra);

}  // namespace iblt
