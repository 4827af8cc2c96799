#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "iblt/schemes.hpp"

namespace iblt {

/// Default cap on exhaustively enumerated states; IBLT_BUDGET overrides it.
inline constexpr std::uint64_t kDefaultStateBudget = 5'000'000;

/// kDefaultStateBudget, or the value of the IBLT_BUDGET environment variable when set.
std::uint64_t default_state_budget();

/// sum_{i <= d} C(n, i), saturating at UINT64_MAX.
std::uint64_t subset_count(std::uint64_t n, std::uint64_t d);

/// Throws BudgetExceeded when subset_count(n, d) > budget.
void require_budget(std::uint64_t n, unsigned d, std::uint64_t budget);

/// Visits the states of all subsets S with |S| <= d, in lexicographic order of
/// the sorted element sequences (a prefix comes before its extensions, so the
/// empty set is first). The table passed to the visitor holds exactly S.
/// Return false from the visitor to stop.
class SubsetEnumerator {
 public:
  using Visitor = std::function<bool(const Table&, std::span<const Element>)>;

  SubsetEnumerator(ConfigHandle config, unsigned d);

  std::size_t universe() const { return columns_.size(); }

  /// Every subset; returns false if the visitor stopped early.
  bool run(const Visitor& visit) const;
  /// The empty set only.
  bool run_empty(const Visitor& visit) const;
  /// Nonempty subsets whose smallest column is `first`.
  bool run_partition(std::size_t first, const Visitor& visit) const;

 private:
  bool extend(Table& table, std::vector<Element>& stack, std::size_t start,
              const Visitor& visit) const;

  ConfigHandle config_;
  unsigned d_;
  std::vector<Column> columns_;
};

}  // namespace iblt
