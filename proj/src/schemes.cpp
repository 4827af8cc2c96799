#include "iblt/schemes.hpp"

#include <algorithm>
#include <bit>
#include <utility>

#include "iblt/errors.hpp"

namespace iblt {

std::string to_string(Family f) {
  switch (f) {
    case Family::kStandard: return "standard";
    case Family::kStandardIndel: return "standard-indel";
    case Family::kGeneral: return "general";
  }
  return "?";
}

Family parse_family(const std::string& s) {
  if (s == "standard") return Family::kStandard;
  if (s == "standard-indel") return Family::kStandardIndel;
  if (s == "general") return Family::kGeneral;
  throw UsageError("unknown family '" + s + "'");
}

unsigned bit_width_of(std::uint64_t v) { return static_cast<unsigned>(std::bit_width(v)); }

unsigned ceil_log2(std::uint64_t v) {
  if (v == 0) throw UsageError("ceil_log2(0) is undefined");
  return v == 1 ? 0 : bit_width_of(v - 1);
}

namespace {

bool is_general_construction(const std::string& c) {
  return c == kind::kBchField || c == kind::kBdDiagonal || c == kind::kH2 || c == kind::kH2Hat;
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw UsageError(msg);
}

MappingSpec build_binary_mapping(SchemeParams& p) {
  const std::string& c = p.construction;
  if (c == kind::kExample2) {
    require(p.n == 6, "example2 has a universe of exactly 6 elements");
    require(!p.k || *p.k == 2, "example2 columns have weight 2");
    p.k = 2;
    return example2_matrix();
  }
  if (c == kind::kCustom) {
    require(p.matrix.has_value(), "custom construction needs a \"matrix\" field");
    auto spec = MappingSpec::from_rows(std::string(kind::kCustom), *p.matrix);
    if (p.n == 0) p.n = spec.cols();
    require(p.n == spec.cols(), "n does not match the custom matrix width");
    if (p.k) require(spec.fixed_weight() == p.k, "custom matrix columns do not all have weight k");
    return spec;
  }
  require(!p.matrix.has_value(), "\"matrix\" is only valid for the custom construction");
  if (c == kind::kAllColumns) {
    if (p.r == 0) p.r = std::max(1u, ceil_log2(p.n));
    require(p.r <= 32 && p.n <= (std::uint64_t{1} << p.r), "all-cols+1 needs n <= 2^r");
    require(!p.k, "all-cols+1 has variable column weight");
    return all_columns_plus_ones(p.r, p.n);
  }
  if (c == kind::kConstantWeight) {
    require(p.k && *p.k >= 1, "const-wt+1 needs k >= 1");
    if (p.r == 0) p.r = std::max(1u, ceil_log2(p.n));
    return constant_weight_plus_ones(p.n, *p.k);
  }
  if (c == kind::kBchBinary) {
    if (p.r == 0) p.r = std::max(2u, ceil_log2(p.n + 1));
    require(p.r >= 2 && p.r <= 32, "bch-bin+1 needs 2 <= r <= 32");
    require(p.n < (std::uint64_t{1} << p.r), "bch-bin+1 needs n <= 2^r - 1");
    require(!p.k, "bch-bin+1 has variable column weight");
    return bch_binary_plus_ones(p.r, p.n);
  }
  throw UsageError("unknown construction '" + c + "'");
}

MappingSpec build_general_mapping(SchemeParams& p) {
  const std::string& c = p.construction;
  require(!p.matrix.has_value(), "\"matrix\" is only valid for the custom construction");
  if (c == kind::kBchField && p.r == 0) p.r = std::max(2u, ceil_log2(p.n + 1));
  require(p.r >= FieldSpec::kMinDegree && p.r <= FieldSpec::kMaxDegree,
          "general schemes need 2 <= r <= 32");
  auto field = p.poly ? make_field(p.r, *p.poly) : default_spec(p.r);
  if (c == kind::kBchField) {
    require(p.n <= field->group_order(), "bch-gf needs n <= 2^r - 1");
    const unsigned k = p.k.value_or(p.d);
    require(k >= p.d, "bch-gf needs k >= d (extra rows are redundant padding)");
    p.k = k;
    return pad_redundant(bch_parity_matrix(field, p.d, p.n), k - p.d);
  }
  if (c == kind::kBdDiagonal) {
    require(!p.k || *p.k == 1, "bd-diag columns have weight 1");
    p.k = 1;
    auto seq = bd_sequence(field, p.d);
    std::vector<std::uint32_t> g(seq.elements.begin() + 1, seq.elements.end());
    return block_diagonal(field, std::move(g), p.n);
  }
  if (c == kind::kH2) {
    require(!p.k || *p.k == 2, "h2 columns have weight 2");
    p.k = 2;
    return block_h2(field, p.d, p.n);
  }
  if (c == kind::kH2Hat) {
    require(p.d == 4, "h2hat is defined for d = 4");
    require(!p.k || *p.k == 2, "h2hat columns have weight 2");
    p.k = 2;
    return block_h2_hat(field, p.n);
  }
  throw UsageError("unknown construction '" + c + "'");
}

}  // namespace

SchemeConfig::SchemeConfig(SchemeParams params, MappingSpec mapping, Element first)
    : params_(std::move(params)), mapping_(std::move(mapping)), first_(first) {
  if (is_binary()) {
    payload_bits_ = std::max(1u, bit_width_of(last_element()));
    all_ones_row_ = mapping_.has_all_ones_last_row();
  } else {
    payload_bits_ = params_.r;
  }
  counter_mask_ = params_.counter_bits == 0
                      ? 0
                      : static_cast<std::uint32_t>((std::uint64_t{1} << params_.counter_bits) - 1);
}

std::shared_ptr<const SchemeConfig> SchemeConfig::build(SchemeParams p) {
  require(p.n >= 1 || p.construction == kind::kCustom, "universe size n must be >= 1");
  require(p.d >= 1, "decodability target d must be >= 1");
  require(p.n <= (std::uint64_t{1} << 32) - 1 || p.construction == kind::kCustom,
          "universe size n must be below 2^32");
  const bool general_construction = is_general_construction(p.construction);
  if (p.family == Family::kGeneral) {
    require(general_construction, "construction '" + p.construction + "' is not a general scheme");
    require(p.counter_bits == 0, "general schemes have no counter field (counter_bits must be 0)");
    auto mapping = build_general_mapping(p);
    return std::shared_ptr<const SchemeConfig>(new SchemeConfig(std::move(p), std::move(mapping), 1));
  }
  require(!general_construction,
          "construction '" + p.construction + "' needs the general family");
  require(!p.poly.has_value(), "\"poly\" applies to general schemes only");
  auto mapping = build_binary_mapping(p);
  if (p.family == Family::kStandard) {
    const unsigned want = std::max(1u, ceil_log2(p.n));
    if (p.counter_bits == 0) p.counter_bits = want;
    require(p.counter_bits == want, "standard schemes use ceil(log2 n)-bit counters");
  } else {
    if (p.counter_bits == 0) p.counter_bits = std::max(1u, ceil_log2(p.d));
    require(p.counter_bits <= 32, "counter_bits must be <= 32");
  }
  const Element first = p.construction == kind::kExample2 ? 1 : 0;
  return std::shared_ptr<const SchemeConfig>(new SchemeConfig(std::move(p), std::move(mapping), first));
}

std::size_t SchemeConfig::column_of(Element u) const {
  if (!contains(u)) {
    throw UsageError("element " + std::to_string(u) + " is outside the universe [" +
                     std::to_string(first_) + ", " + std::to_string(last_element()) + "]");
  }
  return static_cast<std::size_t>(u - first_);
}

Table::Table(ConfigHandle config) : config_(std::move(config)), cells_(config_->cells()) {}

bool Table::is_zero() const {
  return std::all_of(cells_.begin(), cells_.end(), [](const Cell& c) { return c.empty(); });
}

void Table::apply_column(std::size_t col, const Column& entries, bool insert) {
  if (config_->is_binary()) {
    const Element u = config_->element_of(col);
    const std::uint32_t mask = config_->counter_mask();
    for (const auto& e : entries) {
      Cell& c = cells_[e.row];
      c.count = (insert ? c.count + 1 : c.count - 1) & mask;
      c.sum ^= u;
    }
  } else {
    // Characteristic 2: insert and delete both add the column.
    for (const auto& e : entries) cells_[e.row].sum ^= e.value;
  }
}

void Table::insert(Element u) {
  const auto col = config_->column_of(u);
  config_->mapping().entries(col, scratch_);
  apply_column(col, scratch_, true);
}

void Table::erase(Element u) {
  const auto col = config_->column_of(u);
  config_->mapping().entries(col, scratch_);
  apply_column(col, scratch_, false);
}

namespace {

class BitWriter {
 public:
  explicit BitWriter(std::size_t bits) : bytes_((bits + 7) / 8, 0) {}
  void put(std::uint64_t v, unsigned width) {
    for (unsigned i = width; i-- > 0;) {
      if ((v >> i) & 1) bytes_[pos_ / 8] |= static_cast<std::uint8_t>(0x80 >> (pos_ % 8));
      ++pos_;
    }
  }
  std::vector<std::uint8_t> take() { return std::move(bytes_); }

 private:
  std::vector<std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

class BitReader {
 public:
  explicit BitReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}
  std::uint64_t get(unsigned width) {
    std::uint64_t v = 0;
    for (unsigned i = 0; i < width; ++i) {
      v = (v << 1) | ((bytes_[pos_ / 8] >> (7 - pos_ % 8)) & 1);
      ++pos_;
    }
    return v;
  }
  std::size_t position() const { return pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> Table::serialize() const {
  BitWriter w(config_->size_bits());
  const unsigned cb = config_->counter_bits();
  const unsigned pb = config_->payload_bits();
  for (const auto& c : cells_) {
    w.put(c.count, cb);
    w.put(c.sum, pb);
  }
  return w.take();
}

Table Table::deserialize(ConfigHandle config, std::span<const std::uint8_t> bytes) {
  Table t(std::move(config));
  if (bytes.size() != t.serialized_size()) {
    throw UsageError("table data has " + std::to_string(bytes.size()) + " bytes, expected " +
                     std::to_string(t.serialized_size()));
  }
  BitReader r(bytes);
  const unsigned cb = t.config_->counter_bits();
  const unsigned pb = t.config_->payload_bits();
  for (auto& c : t.cells_) {
    c.count = static_cast<std::uint32_t>(r.get(cb));
    c.sum = r.get(pb);
  }
  const std::size_t pad = bytes.size() * 8 - r.position();
  if (pad != 0 && r.get(static_cast<unsigned>(pad)) != 0) {
    throw UsageError("table data has nonzero padding bits");
  }
  return t;
}

std::vector<std::size_t> mapping(const SchemeConfig& config, Element u) {
  std::vector<std::size_t> out;
  for (const auto& e : config.mapping().entries(config.column_of(u))) out.push_back(e.row);
  return out;
}

Table state_of(const ConfigHandle& config, std::span<const Element> s) {
  Table t(config);
  for (Element u : s) t.insert(u);
  return t;
}

}  // namespace iblt
