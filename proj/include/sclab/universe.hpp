#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sclab {

enum class Level : uint8_t { High, Low };

// Raised when a configuration violates the universe invariants or an
// enumeration would exceed the configured cardinality cap.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The finite world every check quantifies over: a fixed set of tagged
// variables, a value bound, a fuel bound for runs, and size bounds for the
// term/context enumerations.
struct Universe {
  struct Var {
    std::string name;
    Level level;

    bool operator==(const Var&) const = default;
  };

  std::vector<Var> vars;               // nonempty, unique names, order is significant
  uint32_t vmax = 1;                   // values range over 0..vmax
  uint32_t fuel = 1;                   // max small steps per run
  uint32_t term_depth = 2;             // max AST nodes per enumerated term
  uint32_t ctx_depth = 1;              // max observer layers per enumerated context
  std::vector<uint32_t> literal_pool;  // constants available to the enumerators
  uint64_t enumeration_cap = 1u << 20; // resource guard for enumerations

  // Throws ConfigError if any invariant fails.
  void validate() const;

  // Index of a declared variable; throws ConfigError for unknown names.
  std::size_t var_index(const std::string& name) const;
  bool has_var(const std::string& name) const;
  bool is_high(std::size_t var_idx) const { return vars[var_idx].level == Level::High; }

  std::size_t var_count() const { return vars.size(); }
  uint64_t store_count() const;

  bool operator==(const Universe&) const = default;
};

// A total map from the universe's variables to values in 0..vmax.
// Fixed-capacity storage keeps stores allocation-free; the universe
// validator rejects configurations with more variables than fit.
class Store {
public:
  static constexpr std::size_t kMaxVars = 8;

  Store() = default;
  explicit Store(std::size_t n) : n_(static_cast<uint8_t>(n)) { vals_.fill(0); }

  std::size_t size() const { return n_; }
  uint16_t get(std::size_t i) const { return vals_[i]; }
  void set(std::size_t i, uint16_t v) { vals_[i] = v; }

  bool operator==(const Store& o) const {
    if (n_ != o.n_) return false;
    for (std::size_t i = 0; i < n_; ++i)
      if (vals_[i] != o.vals_[i]) return false;
    return true;
  }
  bool operator<(const Store& o) const {
    for (std::size_t i = 0; i < n_ && i < o.n_; ++i) {
      if (vals_[i] != o.vals_[i]) return vals_[i] < o.vals_[i];
    }
    return n_ < o.n_;
  }

private:
  std::array<uint16_t, kMaxVars> vals_{};
  uint8_t n_ = 0;
};

// Enumeration order and index arithmetic for the store space.
// The first declared variable is the most significant digit, so stores come
// out in lexicographic order of their rendered form.
class StoreSpace {
public:
  explicit StoreSpace(const Universe& u);

  const Universe& universe() const { return *u_; }
  std::size_t count() const { return static_cast<std::size_t>(count_); }
  const Store& at(std::size_t idx) const { return stores_[idx]; }
  std::size_t index_of(const Store& s) const;
  const std::vector<Store>& all() const { return stores_; }

private:
  const Universe* u_;
  uint64_t count_;
  std::vector<Store> stores_;
};

std::string render_store(const Store& s, const Universe& u);
Store parse_store(const std::string& text, const Universe& u);

} // namespace sclab
