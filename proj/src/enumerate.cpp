#include "iblt/enumerate.hpp"

#include <cstdlib>
#include <limits>
#include <string>

#include "iblt/errors.hpp"

namespace iblt {

std::uint64_t default_state_budget() {
  if (const char* env = std::getenv("IBLT_BUDGET"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const auto v = std::strtoull(env, &end, 10);
    if (end != nullptr && *end == '\0') return v;
  }
  return kDefaultStateBudget;
}

std::uint64_t subset_count(std::uint64_t n, std::uint64_t d) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  unsigned __int128 total = 0;
  unsigned __int128 c = 1;
  for (std::uint64_t i = 0; i <= d && i <= n; ++i) {
    total += c;
    if (total > kMax) return kMax;
    c = c * (n - i) / (i + 1);
    if (c > kMax) c = kMax;
  }
  return static_cast<std::uint64_t>(total);
}

void require_budget(std::uint64_t n, unsigned d, std::uint64_t budget) {
  const auto count = subset_count(n, d);
  if (count > budget) {
    throw BudgetExceeded("exhaustive enumeration of " + std::to_string(count) +
                         " states exceeds the budget of " + std::to_string(budget));
  }
}

SubsetEnumerator::SubsetEnumerator(ConfigHandle config, unsigned d)
    : config_(std::move(config)), d_(d) {
  const auto n = static_cast<std::size_t>(config_->universe_size());
  columns_.resize(n);
  for (std::size_t j = 0; j < n; ++j) config_->mapping().entries(j, columns_[j]);
}

bool SubsetEnumerator::run_empty(const Visitor& visit) const {
  Table table(config_);
  return visit(table, {});
}

bool SubsetEnumerator::run_partition(std::size_t first, const Visitor& visit) const {
  if (d_ == 0 || first >= columns_.size()) return true;
  Table table(config_);
  std::vector<Element> stack;
  stack.reserve(d_);
  table.apply_column(first, columns_[first], true);
  stack.push_back(config_->element_of(first));
  if (!visit(table, stack)) return false;
  return extend(table, stack, first + 1, visit);
}

bool SubsetEnumerator::run(const Visitor& visit) const {
  if (!run_empty(visit)) return false;
  for (std::size_t first = 0; first < columns_.size(); ++first) {
    if (!run_partition(first, visit)) return false;
  }
  return true;
}

bool SubsetEnumerator::extend(Table& table, std::vector<Element>& stack, std::size_t start,
                              const Visitor& visit) const {
  if (stack.size() >= d_) return true;
  for (std::size_t j = start; j < columns_.size(); ++j) {
    table.apply_column(j, columns_[j], true);
    stack.push_back(config_->element_of(j));
    const bool go_on = visit(table, stack) && extend(table, stack, j + 1, visit);
    stack.pop_back();
    table.apply_column(j, columns_[j], false);
    if (!go_on) return false;
  }
  return true;
}

}  // namespace iblt
