#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "iblt/enumerate.hpp"
#include "iblt/listing.hpp"
#include "iblt/schemes.hpp"

namespace iblt {

// ---------------------------------------------------------------------------
// B_h sequences

/// Which h-fold sums count as "the same sum" in is_bh_sequence.
enum class BhMode {
  /// Multisets with repetition, compared as multisets.
  kMultiset,
  /// Multisets compared after cancelling equal pairs and dropping zeros, i.e.
  /// by the set of elements of odd multiplicity. In characteristic 2 two
  /// multisets with the same reduction always have the same sum, so this is the
  /// form the B_h property can take there for h >= 3. For integers it equals
  /// kMultiset.
  kReduced,
  /// Plain subsets of size exactly h. Diagnostic only.
  kSubset,
};

struct BhResult {
  bool holds = true;
  std::uint64_t sums_checked = 0;  // multisets (or subsets) enumerated
  /// Two colliding multisets, as element values in nondecreasing order.
  std::optional<std::pair<std::vector<std::uint64_t>, std::vector<std::uint64_t>>> witness;
  std::uint64_t witness_sum = 0;
};

/// Sums in the integers (field == nullptr) or in GF(2^r). Elements must be
/// distinct. Throws BudgetExceeded when the enumeration exceeds `budget`.
BhResult is_bh_sequence(std::span<const std::uint64_t> elems, unsigned h, const FieldSpec* field,
                        BhMode mode = BhMode::kMultiset,
                        std::uint64_t budget = kDefaultStateBudget);

// ---------------------------------------------------------------------------
// Exhaustive checks over all stored sets of size <= d

enum class Verdict { kPass, kFail };

struct VerifyReport {
  std::string construction;
  std::uint64_t n = 0;
  unsigned d = 0;
  std::optional<unsigned> k;
  std::string property;
  std::uint64_t instances = 0;
  Verdict verdict = Verdict::kPass;
  /// Sets behind the first failure in enumeration order: two sets with equal
  /// states, or one set that failed to list.
  std::vector<std::vector<Element>> counterexample;
  std::string detail;

  bool passed() const { return verdict == Verdict::kPass; }
};

std::string to_string(Verdict v);
/// Line-oriented "key: value" form.
std::string to_text(const VerifyReport& r);

/// All S with |S| <= d map to pairwise different states.
VerifyReport check_state_uniqueness(const ConfigHandle& config, unsigned d,
                                    std::uint64_t budget = kDefaultStateBudget);

/// Every state_of(S), |S| <= d, lists back to exactly S. When `algorithm` is
/// kOracle and no oracle is given one is built under the same budget.
/// `threads` = 0 uses the hardware concurrency.
VerifyReport check_listing(const ConfigHandle& config, unsigned d, Algorithm algorithm,
                           std::uint64_t budget = kDefaultStateBudget,
                           const ListingOracle* oracle = nullptr, unsigned threads = 0);

/// Smallest number of columns of a binary matrix with zero XOR, looking only
/// at the first `rows` rows when given. nullopt when all columns are
/// independent. Needs n <= 24 and at most 64 rows; throws BudgetExceeded if
/// the subsets tried exceed `budget`.
std::optional<unsigned> min_distance(const MappingSpec& matrix,
                                     std::optional<std::size_t> rows = std::nullopt,
                                     std::uint64_t budget = std::uint64_t{1} << 24);

/// The d = 1 uniqueness report restricted to the mapping: reports the pair of
/// equal columns of a binary matrix (used for the duplicate-column case).
VerifyReport check_distance(const ConfigHandle& config, std::optional<std::size_t> rows,
                            std::uint64_t budget = std::uint64_t{1} << 24);

// ---------------------------------------------------------------------------
// Bounds

struct LowerBounds {
  double entropy = 0;  // log2 sum_{i<=d} C(n, i)
  double general = 0;  // d log2 n - d log2 d
};

LowerBounds lower_bounds(std::uint64_t n, unsigned d);

/// Exact test of bits > log2 sum_{i<=d} C(n, i), i.e. 2^bits > sum.
bool exceeds_entropy_bound(std::uint64_t bits, std::uint64_t n, unsigned d);
/// Exact test of 2^bits >= sum_{i<=d} C(n, i), the counting bound itself.
bool meets_entropy_bound(std::uint64_t bits, std::uint64_t n, unsigned d);

enum class BoundKind { kLower, kUpper };

/// One row of the overview of table sizes.
struct BoundRow {
  std::string id;
  std::string family;     // "standard", "standard-indel", "general" or "any"
  std::string condition;  // d and k the row speaks about, e.g. "d=3 k=2"
  std::string source;     // "prior work" or "this work"
  std::string formula;
  BoundKind kind = BoundKind::kUpper;
  double bits = 0;
  /// Construction shipped here that realizes the row, and its s(T) at (n, d).
  std::optional<std::string> achieved_by;
  std::optional<std::uint64_t> achieved_bits;
};

/// Every row applicable to (n, d, k). Upper rows apply when they cover at
/// least d; with k given only rows for that k (and the lower bounds) remain.
/// `family` filters by family name when nonempty.
std::vector<BoundRow> bounds_table(std::uint64_t n, unsigned d, std::optional<unsigned> k,
                                   const std::string& family = "");

/// Scheme parameters of the shipped construction behind a row, if any.
std::optional<SchemeParams> achieving_params(const std::string& row_id, std::uint64_t n,
                                             unsigned d, std::optional<unsigned> k);

/// Interval (lo, hi] that size_bits / (d log2 n) of the BCH scheme falls in:
/// lo = 1 - log2 d / log2 n, hi = ceil(log2(n+1)) / log2 n.
std::pair<double, double> bch_ratio_envelope(std::uint64_t n, unsigned d);

}  // namespace iblt
