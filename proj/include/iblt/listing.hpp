#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "iblt/schemes.hpp"

namespace iblt {

/// Result of a listing attempt. Elements are sorted ascending on success.
struct ListingOutcome {
  bool success = false;
  std::vector<Element> elements;

  static ListingOutcome failure() { return {}; }
  static ListingOutcome of(std::vector<Element> elements);

  friend bool operator==(const ListingOutcome&, const ListingOutcome&) = default;
};

enum class Algorithm { kPeel, kExtendedPeel, kD3OneBit, kPgz, kK1Bd, kOracle };

/// CLI names: peel, xpeel, d3, pgz, k1bd, oracle.
std::string to_string(Algorithm a);
Algorithm parse_algorithm(const std::string& name);

/// Empty string when `a` can list tables of `config`, otherwise the reason it cannot.
std::string incompatibility(Algorithm a, const SchemeConfig& config);
/// The natural listing algorithm of each construction.
Algorithm default_algorithm(const SchemeConfig& config);

/// Classic peeling: repeatedly take the lowest-index cell with count 1, emit its
/// xorSum, and delete that element. Fails when no pure cell is left.
ListingOutcome peel(const Table& table);

/// Peeling that, when stuck, recovers one element from a pair of cells whose
/// counters differ by exactly 1 (modulo the counter width).
///
/// With an all-ones last row the stored-set size is read from that cell's
/// counter (0 means a full counter wrap) and must not exceed d; that cell is
/// then always the first cell of the pair, so the pair differs by exactly one
/// element. Without it, pairs are tried lowest i then lowest j, skipping empty
/// cells and candidates whose own column does not cover cell i but avoid cell j.
ListingOutcome extended_peel(const Table& table, unsigned d);

/// Three-element listing for one-bit counters, driven by the (count, xorSum)
/// of the all-ones cell. Requires a binary scheme with distinct columns and an
/// all-ones last row.
ListingOutcome list_d3_onebit(const Table& table);

/// Error-locating core shared by the BCH listings.
///
/// `odd_syndromes` = (S_1, S_3, ..., S_{2t-1}) over `field`. Even syndromes come
/// from S_{2j} = S_j^2, the locator from Peterson-Gorenstein-Zierler solves of
/// decreasing size, and roots from trying alpha^{-p} for every p < 2^r - 1.
/// Returns the sorted error positions p, or nullopt when the locator's degree
/// and root count disagree or the positions do not reproduce the syndromes.
std::optional<std::vector<std::uint64_t>> locate_errors(const FieldSpec& field,
                                                        std::span<const std::uint32_t> odd_syndromes);

/// Lists a bch-gf table by syndrome decoding; the first d cells are the syndromes.
ListingOutcome pgz_decode(const Table& table);

/// Lists a bd-diag table: every cell is decoded on its own in the subfield.
ListingOutcome list_k1_bd(const Table& table);

/// Precomputed map from canonical table state to stored set, for every set of
/// at most d elements. States reached by two different sets are marked
/// ambiguous and list as failures.
class ListingOracle {
 public:
  /// Throws BudgetExceeded when sum_{i<=d} C(n,i) > budget.
  ListingOracle(ConfigHandle config, unsigned d, std::uint64_t budget);

  ListingOutcome lookup(const Table& table) const;
  unsigned d() const { return d_; }
  std::size_t states() const { return map_.size(); }
  std::size_t ambiguous_states() const { return ambiguous_; }
  const SchemeConfig& config() const { return *config_; }

 private:
  struct Entry {
    std::vector<Element> elements;
    bool ambiguous = false;
  };
  ConfigHandle config_;
  unsigned d_;
  std::unordered_map<std::string, Entry> map_;
  std::size_t ambiguous_ = 0;
};

ListingOutcome list_oracle(const ListingOracle& oracle, const Table& table);

/// Dispatches to the chosen algorithm. `oracle` is required for kOracle.
/// Throws UsageError when the algorithm does not fit the table's scheme.
ListingOutcome run_listing(Algorithm a, const Table& table, unsigned d,
                           const ListingOracle* oracle = nullptr);

/// Canonical hashing key of a table state.
std::string state_key(const Table& table);

}  // namespace iblt
