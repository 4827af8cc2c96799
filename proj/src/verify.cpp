#include "iblt/verify.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "iblt/errors.hpp"

namespace iblt {

// ---------------------------------------------------------------------------
// B_h sequences

namespace {

std::uint64_t multiset_count(std::uint64_t n, unsigned h) {
  // C(n + h - 1, h), saturating.
  unsigned __int128 c = 1;
  for (unsigned i = 1; i <= h; ++i) {
    c = c * (n + i - 1) / i;
    if (c > UINT64_MAX) return UINT64_MAX;
  }
  return static_cast<std::uint64_t>(c);
}

// Calls visit(indices) for every nondecreasing (multiset) or strictly
// increasing (subset) index tuple of length h, lexicographically.
template <class F>
void for_each_tuple(std::size_t n, unsigned h, bool repeat, F&& visit) {
  if (h == 0 || n == 0) return;
  std::vector<std::size_t> idx(h, 0);
  if (!repeat) {
    if (h > n) return;
    for (unsigned i = 0; i < h; ++i) idx[i] = i;
  }
  for (;;) {
    if (!visit(idx)) return;
    int pos = static_cast<int>(h) - 1;
    while (pos >= 0) {
      const std::size_t limit = repeat ? n - 1 : n - h + static_cast<std::size_t>(pos);
      if (idx[pos] < limit) break;
      --pos;
    }
    if (pos < 0) return;
    ++idx[pos];
    for (unsigned i = static_cast<unsigned>(pos) + 1; i < h; ++i) {
      idx[i] = repeat ? idx[pos] : idx[i - 1] + 1;
    }
  }
}

std::vector<std::uint64_t> values_of(std::span<const std::uint64_t> elems,
                                     const std::vector<std::size_t>& idx) {
  std::vector<std::uint64_t> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(elems[i]);
  return out;
}

// Indices of odd multiplicity, zeros dropped.
std::vector<std::size_t> reduce(std::span<const std::uint64_t> elems,
                                const std::vector<std::size_t>& idx) {
  std::vector<std::size_t> out;
  for (std::size_t a = 0; a < idx.size();) {
    std::size_t b = a;
    while (b < idx.size() && idx[b] == idx[a]) ++b;
    if ((b - a) % 2 == 1 && elems[idx[a]] != 0) out.push_back(idx[a]);
    a = b;
  }
  return out;
}

}  // namespace

BhResult is_bh_sequence(std::span<const std::uint64_t> elems, unsigned h, const FieldSpec* field,
                        BhMode mode, std::uint64_t budget) {
  if (h == 0) throw UsageError("B_h check needs h >= 1");
  {
    std::vector<std::uint64_t> sorted(elems.begin(), elems.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw UsageError("B_h check needs distinct elements");
    }
  }
  if (field != nullptr) {
    for (auto e : elems) {
      if (!field->contains(e)) throw UsageError("element outside the field");
    }
  }
  const bool repeat = mode != BhMode::kSubset;
  const std::uint64_t total = repeat ? multiset_count(elems.size(), h) : subset_count(elems.size(), h);
  if (total > budget) {
    throw BudgetExceeded("B_h check over " + std::to_string(total) +
                         " sums exceeds the budget of " + std::to_string(budget));
  }

  BhResult result;
  // Sum -> first multiset (as indices) having it.
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> seen;
  // In reduced mode, reductions already recorded, so repeats are skipped.
  std::map<std::vector<std::size_t>, bool> reductions;
  for_each_tuple(elems.size(), h, repeat, [&](const std::vector<std::size_t>& idx) {
    ++result.sums_checked;
    std::uint64_t sum = 0;
    if (field != nullptr) {
      for (auto i : idx) sum ^= elems[i];
    } else {
      for (auto i : idx) sum += elems[i];
    }
    if (sum == 0) return true;
    if (mode == BhMode::kReduced && field != nullptr) {
      auto red = reduce(elems, idx);
      if (!reductions.emplace(red, true).second) return true;
    }
    auto [it, inserted] = seen.try_emplace(sum, idx);
    if (inserted) return true;
    result.holds = false;
    result.witness_sum = sum;
    result.witness = std::make_pair(values_of(elems, it->second), values_of(elems, idx));
    return false;
  });
  return result;
}

// ---------------------------------------------------------------------------
// Reports

std::string to_string(Verdict v) { return v == Verdict::kPass ? "pass" : "fail"; }

namespace {

std::string set_text(const std::vector<Element>& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(s[i]);
  }
  return out + "}";
}

VerifyReport report_for(const SchemeConfig& config, unsigned d, std::string property) {
  VerifyReport r;
  r.construction = config.params().construction;
  r.n = config.universe_size();
  r.d = d;
  r.k = config.params().k;
  r.property = std::move(property);
  return r;
}

}  // namespace

std::string to_text(const VerifyReport& r) {
  std::ostringstream os;
  os << "construction: " << r.construction << "\n"
     << "n: " << r.n << "\n"
     << "d: " << r.d << "\n"
     << "k: " << (r.k ? std::to_string(*r.k) : "variable") << "\n"
     << "property: " << r.property << "\n"
     << "instances: " << r.instances << "\n"
     << "verdict: " << to_string(r.verdict) << "\n";
  if (!r.counterexample.empty()) {
    os << "counterexample:";
    for (const auto& s : r.counterexample) os << " " << set_text(s);
    os << "\n";
  }
  if (!r.detail.empty()) os << "detail: " << r.detail << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Exhaustive checks

VerifyReport check_state_uniqueness(const ConfigHandle& config, unsigned d, std::uint64_t budget) {
  require_budget(config->universe_size(), d, budget);
  auto report = report_for(*config, d, "uniqueness");
  SubsetEnumerator en(config, d);

  // Keep the enumeration index of each state and recover the sets afterwards.
  std::unordered_map<std::string, std::uint64_t> first_index;
  first_index.reserve(static_cast<std::size_t>(subset_count(config->universe_size(), d)));
  std::uint64_t index = 0;
  std::optional<std::pair<std::uint64_t, std::uint64_t>> clash;
  en.run([&](const Table& t, std::span<const Element>) {
    auto [it, inserted] = first_index.try_emplace(state_key(t), index);
    if (!inserted) clash = std::make_pair(it->second, index);
    ++index;
    return inserted;
  });
  report.instances = index;
  if (!clash) return report;

  report.verdict = Verdict::kFail;
  std::uint64_t at = 0;
  std::vector<Element> a, b;
  en.run([&](const Table&, std::span<const Element> s) {
    if (at == clash->first) a.assign(s.begin(), s.end());
    if (at == clash->second) {
      b.assign(s.begin(), s.end());
      return false;
    }
    ++at;
    return true;
  });
  report.counterexample = {a, b};
  report.detail = "two sets share one table state";
  return report;
}

VerifyReport check_listing(const ConfigHandle& config, unsigned d, Algorithm algorithm,
                           std::uint64_t budget, const ListingOracle* oracle, unsigned threads) {
  if (auto why = incompatibility(algorithm, *config); !why.empty()) throw UsageError(why);
  require_budget(config->universe_size(), d, budget);
  std::optional<ListingOracle> own;
  if (algorithm == Algorithm::kOracle && oracle == nullptr) {
    own.emplace(config, d, budget);
    oracle = &*own;
  }
  auto report = report_for(*config, d, "listing:" + to_string(algorithm));
  SubsetEnumerator en(config, d);

  auto lists_back = [&](const Table& t, std::span<const Element> s) {
    const auto out = run_listing(algorithm, t, d, oracle);
    return out.success && std::equal(out.elements.begin(), out.elements.end(), s.begin(), s.end());
  };

  // One slot per smallest-element partition, plus the empty set in front.
  struct Slot {
    std::uint64_t visited = 0;  // up to and including the failure, if any
    std::optional<std::vector<Element>> failure;
  };
  const std::size_t parts = en.universe();
  std::vector<Slot> slots(parts);

  Slot empty;
  en.run_empty([&](const Table& t, std::span<const Element> s) {
    ++empty.visited;
    if (!lists_back(t, s)) empty.failure.emplace();
    return true;
  });

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(parts, 1)));
  std::vector<std::exception_ptr> errors(threads);
  auto work = [&](unsigned w) {
    try {
      for (std::size_t p = w; p < parts; p += threads) {
        Slot& slot = slots[p];
        en.run_partition(p, [&](const Table& t, std::span<const Element> s) {
          ++slot.visited;
          if (lists_back(t, s)) return true;
          slot.failure.emplace(s.begin(), s.end());
          return false;
        });
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < threads; ++w) pool.emplace_back(work, w);
  work(0);
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  report.instances = empty.visited;
  if (empty.failure) {
    report.verdict = Verdict::kFail;
    report.counterexample = {{}};
    report.detail = "listing did not return exactly the stored set";
    return report;
  }
  for (const auto& slot : slots) {
    report.instances += slot.visited;
    if (slot.failure) {
      report.verdict = Verdict::kFail;
      report.counterexample = {*slot.failure};
      report.detail = "listing did not return exactly the stored set";
      return report;
    }
  }
  return report;
}

namespace {

struct DistanceResult {
  std::optional<unsigned> distance;
  std::vector<std::size_t> columns;
};

DistanceResult min_distance_impl(const MappingSpec& matrix, std::optional<std::size_t> rows,
                                 std::uint64_t budget) {
  if (!matrix.is_binary()) throw UsageError("minimum distance needs a binary matrix");
  const std::size_t n = matrix.cols();
  const std::size_t m = rows.value_or(matrix.rows());
  if (m > matrix.rows()) throw UsageError("row limit exceeds the matrix height");
  if (m > 64) throw UsageError("minimum distance supports at most 64 rows");
  if (n > 24) throw UsageError("minimum distance is exhaustive and needs n <= 24");

  std::vector<std::uint64_t> cols(n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    for (const auto& e : matrix.entries(j)) {
      if (e.row < m) cols[j] |= std::uint64_t{1} << e.row;
    }
  }
  std::uint64_t spent = 0;
  for (unsigned w = 1; w <= n; ++w) {
    spent += subset_count(n, w) - subset_count(n, w - 1);
    if (spent > budget) {
      throw BudgetExceeded("minimum distance search exceeds the budget of " + std::to_string(budget));
    }
    DistanceResult found;
    for_each_tuple(n, w, false, [&](const std::vector<std::size_t>& idx) {
      std::uint64_t acc = 0;
      for (auto j : idx) acc ^= cols[j];
      if (acc != 0) return true;
      found.distance = w;
      found.columns = idx;
      return false;
    });
    if (found.distance) return found;
  }
  return {};
}

}  // namespace

std::optional<unsigned> min_distance(const MappingSpec& matrix, std::optional<std::size_t> rows,
                                     std::uint64_t budget) {
  return min_distance_impl(matrix, rows, budget).distance;
}

VerifyReport check_distance(const ConfigHandle& config, std::optional<std::size_t> rows,
                            std::uint64_t budget) {
  const unsigned d = config->params().d;
  auto report = report_for(*config, d, "distance");
  const auto res = min_distance_impl(config->mapping(), rows, budget);
  const std::size_t n = config->mapping().cols();
  // Sets of size <= d stay apart when every 2d columns are independent.
  if (res.distance) {
    report.instances = subset_count(n, *res.distance);
    report.detail = "minimum distance " + std::to_string(*res.distance);
    if (*res.distance < 2 * d + 1) {
      report.verdict = Verdict::kFail;
      std::vector<Element> s;
      for (auto j : res.columns) s.push_back(config->element_of(j));
      report.counterexample = {s};
    }
  } else {
    report.instances = subset_count(n, n);
    report.detail = "all columns independent";
  }
  return report;
}

// ---------------------------------------------------------------------------
// Bounds

LowerBounds lower_bounds(std::uint64_t n, unsigned d) {
  LowerBounds b;
  if (d == 0 || n == 0) return b;
  const std::uint64_t exact = subset_count(n, d);
  if (exact != UINT64_MAX) {
    b.entropy = std::log2(static_cast<double>(exact));
  } else {
    // log-sum-exp over log2 C(n, i).
    std::vector<double> terms;
    for (unsigned i = 0; i <= d && i <= n; ++i) {
      terms.push_back((std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0)) /
                      std::log(2.0));
    }
    const double top = *std::max_element(terms.begin(), terms.end());
    double acc = 0;
    for (double t : terms) acc += std::exp2(t - top);
    b.entropy = top + std::log2(acc);
  }
  b.general = d * (std::log2(static_cast<double>(n)) - std::log2(static_cast<double>(d)));
  return b;
}

bool exceeds_entropy_bound(std::uint64_t bits, std::uint64_t n, unsigned d) {
  const std::uint64_t count = subset_count(n, d);
  if (count == UINT64_MAX) return static_cast<double>(bits) > lower_bounds(n, d).entropy;
  if (bits >= 64) return true;
  return (std::uint64_t{1} << bits) > count;
}

bool meets_entropy_bound(std::uint64_t bits, std::uint64_t n, unsigned d) {
  const std::uint64_t count = subset_count(n, d);
  if (count == UINT64_MAX) return static_cast<double>(bits) >= lower_bounds(n, d).entropy;
  if (bits >= 64) return true;
  return (std::uint64_t{1} << bits) >= count;
}

namespace {

std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) { return (a + b - 1) / b; }

std::uint64_t ceil_pos(double x) { return static_cast<std::uint64_t>(std::ceil(x - 1e-12)); }

struct RowSpec {
  std::string id;
  std::string family;
  std::string source;
  std::string formula;
  BoundKind kind;
  unsigned d_row;                // largest d the row covers
  std::optional<unsigned> k;     // column weight, nullopt = variable
  bool exact_d = false;          // row speaks about exactly d_row
  std::optional<double> bits;    // nullopt = not defined at (n, d)
};

}  // namespace

std::vector<BoundRow> bounds_table(std::uint64_t n, unsigned d, std::optional<unsigned> k,
                                   const std::string& family) {
  if (n < 2) throw UsageError("bounds need n >= 2");
  if (d == 0) throw UsageError("bounds need d >= 1");
  const double L = ceil_log2(n);
  const double L1 = ceil_log2(n + 1);
  const double nn = static_cast<double>(n);
  const auto lb = lower_bounds(n, d);
  const std::string prior = "prior work";
  const std::string here = "this work";

  std::vector<RowSpec> specs;
  specs.push_back({"entropy", "any", here, "log2 sum_{i<=d} C(n,i)", BoundKind::kLower, d, {}, false,
                   lb.entropy});
  specs.push_back({"general-lower", "general", here, "d(log n - log d)", BoundKind::kLower, d, {},
                   false, lb.general});

  specs.push_back({"std-d3", "standard", prior, "2 ceil(3/log 3 * log n) ceil(log n)", BoundKind::kUpper,
                   3, {}, true, 2.0 * ceil_pos(3.0 / std::log2(3.0) * std::log2(nn)) * L});
  const double d3k2 = 2.0 * ceil_pos(2.0 * std::sqrt(nn)) * L;
  specs.push_back({"std-d3-k2-lower", "standard", prior, "2 ceil(2 sqrt n) ceil(log n)",
                   BoundKind::kLower, 3, 2u, true, d3k2});
  specs.push_back({"std-d3-k2", "standard", prior, "2 ceil(2 sqrt n) ceil(log n)", BoundKind::kUpper, 3,
                   2u, true, d3k2});
  specs.push_back({"std-d5-k3", "standard", prior, "6(2 ceil(sqrt(n/6)) + 1) ceil(log n)",
                   BoundKind::kUpper, 5, 3u, true, 6.0 * (2.0 * ceil_pos(std::sqrt(nn / 6.0)) + 1) * L});
  specs.push_back({"std-d7-k4", "standard", prior, "8 ceil(sqrt(2n)) ceil(log n)", BoundKind::kUpper, 7,
                   4u, true, 8.0 * ceil_pos(std::sqrt(2.0 * nn)) * L});
  specs.push_back({"std-d4-klog", "standard", prior, "8 ceil(log(n+1)) ceil(log n)", BoundKind::kUpper,
                   4, static_cast<unsigned>(2 * L1), true, 8.0 * L1 * L});
  specs.push_back({"std-kd", "standard", prior, "2d ceil(sqrt n) ceil(log n)", BoundKind::kUpper, d, d,
                   false, 2.0 * d * ceil_pos(std::sqrt(nn)) * L});

  specs.push_back({"indel-d3-xpeel", "standard-indel", here, "(log n + 2)(log n + 1)",
                   BoundKind::kUpper, 3, {}, true, (L + 2) * (L + 1)});
  specs.push_back({"indel-d4-xpeel", "standard-indel", here, "(log(n+1) + 2)(2 log(n+1) + 1)",
                   BoundKind::kUpper, 4, {}, true, (L1 + 2) * (2 * L1 + 1)});
  specs.push_back({"indel-d3-onebit", "standard-indel", here, "(log n + 1)^2", BoundKind::kUpper, 3,
                   {}, true, (L + 1) * (L + 1)});
  if (k) {
    specs.push_back({"indel-d3-constwt", "standard-indel", here, "(log n + 1)(minbinom(n,k) + 1)",
                     BoundKind::kUpper, 3, *k, true,
                     (L + 1) * (static_cast<double>(minbinom(n, *k)) + 1)});
  }

  const unsigned bch_rows = k && *k >= d ? *k : d;
  specs.push_back({"general-bch", "general", here, "d log(n+1)", BoundKind::kUpper, d,
                   k && *k >= d ? std::optional<unsigned>(*k) : std::nullopt, false, bch_rows * L1});

  std::optional<double> bd_bits;
  if (L >= 2) {
    try {
      const auto seq = bd_sequence(default_spec(static_cast<unsigned>(L)), d);
      bd_bits = static_cast<double>(ceil_div(n, seq.nonzero_count())) * L;
    } catch (const ConstructionInfeasible&) {
    }
  }
  specs.push_back({"general-k1-bd", "general", here, "ceil(n/l) log n, l = B_d-sequence length - 1",
                   BoundKind::kUpper, d, 1u, false, bd_bits});
  {
    const double root = std::pow(nn, 1.0 / d);
    std::optional<double> v;
    if (root > 2) v = static_cast<double>(ceil_pos(2.0 * nn / (root - 2.0))) * L;
    specs.push_back({"general-k1", "general", here, "ceil(2n/(n^(1/d) - 2)) log n", BoundKind::kUpper, d,
                     1u, false, v});
  }
  {
    const unsigned de = d % 2 == 0 ? d : d + 1;
    const double root = std::pow(nn, 2.0 / de);
    std::optional<double> v;
    if (de > 2 && root > 2) v = static_cast<double>(ceil_pos(2.0 * nn / (root - 2.0)) + 1) * L;
    specs.push_back({"general-k2", "general", here, "(ceil(2n/(n^(2/d) - 2)) + 1) log n, d even > 2",
                     BoundKind::kUpper, de, 2u, false, v});
  }
  {
    const double den = 3.0 * std::sqrt(nn) - 4.0;
    std::optional<double> v;
    if (den > 0) v = (2.0 * static_cast<double>(ceil_pos(2.0 * nn / den)) + 1) * L;
    specs.push_back({"general-k2-d4", "general", here, "(2 ceil(2n/(3 sqrt n - 4)) + 1) log n",
                     BoundKind::kUpper, 4, 2u, true, v});
  }

  std::vector<BoundRow> rows;
  for (const auto& s : specs) {
    if (!s.bits) continue;
    if (!family.empty() && s.family != family && s.family != "any") continue;
    if (s.kind == BoundKind::kUpper) {
      if (s.d_row < d) continue;
      if (k && s.k != k) continue;
    } else if (k && s.k && s.k != k) {
      continue;
    }
    if (s.kind == BoundKind::kLower && s.d_row != d) continue;
    BoundRow row;
    row.id = s.id;
    row.family = s.family;
    row.condition = (s.exact_d ? "d=" + std::to_string(s.d_row) : std::string("d any")) +
                    (s.k ? " k=" + std::to_string(*s.k) : std::string(" k variable"));
    row.source = s.source;
    row.formula = s.formula;
    row.kind = s.kind;
    row.bits = *s.bits;
    if (auto params = achieving_params(s.id, n, d, k)) {
      row.achieved_by = params->construction;
      try {
        row.achieved_bits = SchemeConfig::build(*params)->size_bits();
      } catch (const std::exception&) {
        row.achieved_by.reset();
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::optional<SchemeParams> achieving_params(const std::string& row_id, std::uint64_t n, unsigned d,
                                             std::optional<unsigned> k) {
  SchemeParams p;
  p.n = n;
  p.d = d;
  if (row_id == "indel-d3-xpeel") {
    p.family = Family::kStandardIndel;
    p.construction = std::string(kind::kAllColumns);
    p.d = 3;
    p.counter_bits = 2;
  } else if (row_id == "indel-d4-xpeel") {
    p.family = Family::kStandardIndel;
    p.construction = std::string(kind::kBchBinary);
    p.d = 4;
    p.counter_bits = 2;
  } else if (row_id == "indel-d3-onebit") {
    p.family = Family::kStandardIndel;
    p.construction = std::string(kind::kAllColumns);
    p.d = 3;
    p.counter_bits = 1;
  } else if (row_id == "indel-d3-constwt") {
    if (!k) return std::nullopt;
    p.family = Family::kStandardIndel;
    p.construction = std::string(kind::kConstantWeight);
    p.d = 3;
    p.k = k;
    p.counter_bits = 1;
  } else if (row_id == "general-bch") {
    p.family = Family::kGeneral;
    p.construction = std::string(kind::kBchField);
    if (k && *k >= d) p.k = k;
  } else if (row_id == "general-k1-bd" || row_id == "general-k1") {
    p.family = Family::kGeneral;
    p.construction = std::string(kind::kBdDiagonal);
    p.r = ceil_log2(n);
  } else if (row_id == "general-k2") {
    p.family = Family::kGeneral;
    p.construction = std::string(kind::kH2);
    p.d = d % 2 == 0 ? d : d + 1;
    p.r = ceil_log2(n);
  } else if (row_id == "general-k2-d4") {
    p.family = Family::kGeneral;
    p.construction = std::string(kind::kH2Hat);
    p.d = 4;
    p.r = ceil_log2(n);
  } else {
    return std::nullopt;
  }
  return p;
}

std::pair<double, double> bch_ratio_envelope(std::uint64_t n, unsigned d) {
  const double ln = std::log2(static_cast<double>(n));
  return {1.0 - std::log2(static_cast<double>(d)) / ln, ceil_log2(n + 1) / ln};
}

}  // namespace iblt
