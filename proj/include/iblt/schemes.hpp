#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "iblt/finite_field.hpp"
#include "iblt/matrices.hpp"

namespace iblt {

using Element = std::uint64_t;

enum class Family { kStandard, kStandardIndel, kGeneral };

std::string to_string(Family f);
Family parse_family(const std::string& s);

/// Plain description of a scheme, exactly what a scheme-config file holds.
struct SchemeParams {
  Family family = Family::kStandardIndel;
  std::string construction;
  std::uint64_t n = 0;
  unsigned d = 0;
  std::optional<unsigned> k;  // nullopt = variable column weight
  unsigned r = 0;             // 0 = derive from n where the construction allows it
  unsigned counter_bits = 0;
  std::optional<std::uint64_t> poly;               // general family: field modulus override
  std::optional<std::vector<std::string>> matrix;  // "custom" construction rows

  friend bool operator==(const SchemeParams&, const SchemeParams&) = default;
};

/// A validated scheme: parameters, mapping matrix and cell geometry.
///
/// Universe elements are {first_element(), ..., first_element() + n - 1};
/// element u uses column u - first_element(). Binary schemes start at 0 (the
/// worked 6-element example starts at 1), general schemes start at 1.
class SchemeConfig {
 public:
  /// Throws UsageError for inconsistent parameters and ConstructionInfeasible
  /// when the construction has no valid shape for them.
  static std::shared_ptr<const SchemeConfig> build(SchemeParams params);

  const SchemeParams& params() const { return params_; }
  Family family() const { return params_.family; }
  bool is_binary() const { return params_.family != Family::kGeneral; }
  const MappingSpec& mapping() const { return mapping_; }
  /// Field of the general family's cells; null for binary families.
  const FieldHandle& field() const { return mapping_.field(); }

  std::size_t cells() const { return mapping_.rows(); }
  std::uint64_t universe_size() const { return params_.n; }
  Element first_element() const { return first_; }
  Element last_element() const { return first_ + params_.n - 1; }
  bool contains(Element u) const { return u >= first_ && u - first_ < params_.n; }
  /// Throws UsageError when u is outside the universe.
  std::size_t column_of(Element u) const;
  Element element_of(std::size_t column) const { return first_ + column; }

  unsigned counter_bits() const { return params_.counter_bits; }
  std::uint32_t counter_mask() const { return counter_mask_; }
  unsigned payload_bits() const { return payload_bits_; }
  unsigned cell_bits() const { return params_.counter_bits + payload_bits_; }
  std::uint64_t size_bits() const { return cells() * cell_bits(); }

  /// Binary matrix whose last row is all ones (its cell counts every element).
  bool has_all_ones_row() const { return all_ones_row_; }

 private:
  SchemeConfig(SchemeParams params, MappingSpec mapping, Element first);

  SchemeParams params_;
  MappingSpec mapping_;
  Element first_;
  unsigned payload_bits_;
  std::uint32_t counter_mask_;
  bool all_ones_row_ = false;
};

using ConfigHandle = std::shared_ptr<const SchemeConfig>;

/// One cell. `sum` is the xorSum accumulator of binary families or the field
/// element of the general family (whose `count` is always 0).
struct Cell {
  std::uint32_t count = 0;
  std::uint64_t sum = 0;

  bool empty() const { return count == 0 && sum == 0; }
  friend bool operator==(const Cell&, const Cell&) = default;
};

/// The lookup table. Value semantics; copies share only the immutable config.
///
/// insert() does not check that u is absent (the data structure cannot know
/// without listing); callers keep that contract.
class Table {
 public:
  explicit Table(ConfigHandle config);

  const SchemeConfig& config() const { return *config_; }
  const ConfigHandle& config_handle() const { return config_; }
  std::span<const Cell> cells() const { return cells_; }
  const Cell& cell(std::size_t i) const { return cells_[i]; }
  std::size_t size() const { return cells_.size(); }
  bool is_zero() const;

  /// Throws UsageError when u is outside the universe.
  void insert(Element u);
  void erase(Element u);
  /// Applies column `col` with sign +1 (insert) or -1 (delete).
  void apply_column(std::size_t col, const Column& entries, bool insert);

  /// Canonical bit layout: cells in index order, each as counter then payload,
  /// most significant bit first, zero-padded to a byte boundary at the end only.
  std::vector<std::uint8_t> serialize() const;
  static Table deserialize(ConfigHandle config, std::span<const std::uint8_t> bytes);
  std::size_t serialized_size() const { return (config_->size_bits() + 7) / 8; }

  friend bool operator==(const Table& a, const Table& b) { return a.cells_ == b.cells_; }

 private:
  ConfigHandle config_;
  std::vector<Cell> cells_;
  Column scratch_;
};

/// Cells touched when u is inserted or deleted.
std::vector<std::size_t> mapping(const SchemeConfig& config, Element u);

/// Table holding exactly `s`; order of `s` does not matter.
Table state_of(const ConfigHandle& config, std::span<const Element> s);

inline std::uint64_t size_bits(const SchemeConfig& config) { return config.size_bits(); }

/// Bits needed to write v (0 for v = 0).
unsigned bit_width_of(std::uint64_t v);
/// ceil(log2(v)) for v >= 1.
unsigned ceil_log2(std::uint64_t v);

}  // namespace iblt
