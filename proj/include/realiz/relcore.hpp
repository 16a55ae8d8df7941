#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace realiz {

// Subsets of carriers with at most 64 elements.
using Mask = std::uint64_t;

inline constexpr std::size_t kMaskBits = 64;

inline Mask bit(std::size_t i) { return Mask{1} << i; }
inline bool has(Mask m, std::size_t i) { return (m >> i) & 1U; }
inline int popcount(Mask m) { return std::popcount(m); }
inline Mask full_mask(std::size_t n) { return n >= 64 ? ~Mask{0} : bit(n) - 1; }

template <class Fn>
void for_each_bit(Mask m, Fn&& fn) {
  while (m != 0) {
    fn(static_cast<std::size_t>(std::countr_zero(m)));
    m &= m - 1;
  }
}

inline std::vector<std::size_t> bits_of(Mask m) {
  std::vector<std::size_t> out;
  for_each_bit(m, [&](std::size_t i) { out.push_back(i); });
  return out;
}

// All subsets of an n-element set, ordered by size and then lexicographically
// on the sorted element lists.
inline std::vector<Mask> subsets_by_size(std::size_t n) {
  if (n > 20) throw std::invalid_argument("subsets_by_size: carrier too large");
  std::vector<Mask> all(std::size_t{1} << n);
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  std::sort(all.begin(), all.end(), [](Mask a, Mask b) {
    if (popcount(a) != popcount(b)) return popcount(a) < popcount(b);
    // the smaller least differing element comes first
    Mask d = a ^ b;
    return (a & (d & (~d + 1))) != 0;
  });
  return all;
}

struct FinSet {
  std::string name;
  std::vector<std::string> elements;

  FinSet() = default;
  FinSet(std::string n, std::vector<std::string> els) : name(std::move(n)), elements(std::move(els)) {}

  static FinSet range(std::string name, std::size_t n) {
    std::vector<std::string> els;
    for (std::size_t i = 0; i < n; ++i) els.push_back(std::to_string(i));
    return {std::move(name), std::move(els)};
  }

  std::size_t size() const { return elements.size(); }

  std::optional<std::size_t> index_of(const std::string& label) const {
    auto it = std::find(elements.begin(), elements.end(), label);
    if (it == elements.end()) return std::nullopt;
    return static_cast<std::size_t>(it - elements.begin());
  }

  bool operator==(const FinSet&) const = default;
};

// Lexicographic product: (a, b) sits at a * |B| + b.
inline FinSet product_set(const FinSet& a, const FinSet& b) {
  FinSet out;
  out.name = a.name + "*" + b.name;
  for (const auto& x : a.elements)
    for (const auto& y : b.elements) out.elements.push_back("(" + x + "," + y + ")");
  return out;
}

inline std::size_t product_size(const std::vector<std::size_t>& dims) {
  std::size_t n = 1;
  for (auto d : dims) n *= d;
  return n;
}

inline std::size_t encode(const std::vector<std::size_t>& dims, const std::vector<std::size_t>& coords) {
  std::size_t idx = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) idx = idx * dims[k] + coords[k];
  return idx;
}

inline std::vector<std::size_t> decode(const std::vector<std::size_t>& dims, std::size_t idx) {
  std::vector<std::size_t> coords(dims.size());
  for (std::size_t k = dims.size(); k-- > 0;) {
    coords[k] = idx % dims[k];
    idx /= dims[k];
  }
  return coords;
}

struct FinFun {
  std::size_t dst_size = 0;
  std::vector<std::size_t> table;

  FinFun() = default;
  FinFun(std::size_t dst, std::vector<std::size_t> t) : dst_size(dst), table(std::move(t)) {
    for (auto v : table)
      if (v >= dst_size) throw std::invalid_argument("FinFun: value out of range");
  }

  static FinFun identity(std::size_t n) {
    std::vector<std::size_t> t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = i;
    return {n, std::move(t)};
  }

  std::size_t src_size() const { return table.size(); }
  std::size_t operator()(std::size_t a) const { return table.at(a); }

  bool is_surjective() const {
    std::vector<bool> hit(dst_size, false);
    for (auto v : table) hit[v] = true;
    return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
  }

  bool is_injective() const {
    std::vector<bool> hit(dst_size, false);
    for (auto v : table) {
      if (hit[v]) return false;
      hit[v] = true;
    }
    return true;
  }

  bool operator==(const FinFun&) const = default;
};

// g after f
inline FinFun compose(const FinFun& f, const FinFun& g) {
  if (f.dst_size != g.src_size()) throw std::invalid_argument("compose: FinFun mismatch");
  std::vector<std::size_t> t(f.src_size());
  for (std::size_t a = 0; a < t.size(); ++a) t[a] = g(f(a));
  return {g.dst_size, std::move(t)};
}

// Calls fn on every function from an n-element set to an m-element set,
// in lexicographic order of value tables.
template <class Fn>
bool for_each_function(std::size_t n, std::size_t m, Fn&& fn) {
  if (m == 0 && n > 0) return true;
  std::vector<std::size_t> t(n, 0);
  while (true) {
    if (!fn(FinFun(m, t))) return false;
    std::size_t k = n;
    while (k > 0) {
      --k;
      if (++t[k] < m) break;
      t[k] = 0;
      if (k == 0) return true;
    }
    if (n == 0) return true;
  }
}

// Dense boolean matrix; row a is the set of b with (a, b) in the relation.
class Rel {
 public:
  Rel() = default;
  Rel(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), words_((cols + 63) / 64), bits_(rows * words_, 0) {}

  static Rel identity(std::size_t n) {
    Rel r(n, n);
    for (std::size_t i = 0; i < n; ++i) r.set(i, i);
    return r;
  }
  static Rel full(std::size_t n, std::size_t m) {
    Rel r(n, m);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < m; ++b) r.set(a, b);
    return r;
  }
  static Rel from_pairs(std::size_t n, std::size_t m, const std::vector<std::pair<std::size_t, std::size_t>>& ps) {
    Rel r(n, m);
    for (auto [a, b] : ps) r.set(a, b);
    return r;
  }
  static Rel graph(const FinFun& f) {
    Rel r(f.src_size(), f.dst_size);
    for (std::size_t a = 0; a < f.src_size(); ++a) r.set(a, f(a));
    return r;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  bool get(std::size_t a, std::size_t b) const { return (bits_[a * words_ + b / 64] >> (b % 64)) & 1U; }
  void set(std::size_t a, std::size_t b, bool v = true) {
    auto& w = bits_[a * words_ + b / 64];
    if (v)
      w |= bit(b % 64);
    else
      w &= ~bit(b % 64);
  }

  std::vector<std::size_t> row_elements(std::size_t a) const {
    std::vector<std::size_t> out;
    for (std::size_t w = 0; w < words_; ++w)
      for_each_bit(bits_[a * words_ + w], [&](std::size_t b) { out.push_back(w * 64 + b); });
    return out;
  }

  // Row as a mask; only valid when cols() <= 64.
  Mask row_mask(std::size_t a) const { return cols_ == 0 ? 0 : bits_[a * words_]; }
  Mask col_mask(std::size_t b) const {
    Mask m = 0;
    for (std::size_t a = 0; a < rows_; ++a)
      if (get(a, b)) m |= bit(a);
    return m;
  }

  const std::uint64_t* row_words(std::size_t a) const { return bits_.data() + a * words_; }
  std::uint64_t* row_words(std::size_t a) { return bits_.data() + a * words_; }
  std::size_t words() const { return words_; }

  std::size_t count() const {
    std::size_t n = 0;
    for (auto w : bits_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }

  bool row_empty(std::size_t a) const {
    for (std::size_t w = 0; w < words_; ++w)
      if (bits_[a * words_ + w] != 0) return false;
    return true;
  }

  std::vector<std::pair<std::size_t, std::size_t>> pairs() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t a = 0; a < rows_; ++a)
      for (std::size_t b = 0; b < cols_; ++b)
        if (get(a, b)) out.emplace_back(a, b);
    return out;
  }

  bool operator==(const Rel&) const = default;
  bool operator<(const Rel& o) const {
    if (rows_ != o.rows_) return rows_ < o.rows_;
    if (cols_ != o.cols_) return cols_ < o.cols_;
    return bits_ < o.bits_;
  }

  Rel& operator|=(const Rel& o) {
    check_same(o);
    for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] |= o.bits_[i];
    return *this;
  }
  Rel& operator&=(const Rel& o) {
    check_same(o);
    for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] &= o.bits_[i];
    return *this;
  }

  void check_same(const Rel& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("Rel: dimension mismatch");
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
};

inline Rel operator|(Rel a, const Rel& b) { return a |= b; }
inline Rel operator&(Rel a, const Rel& b) { return a &= b; }

inline bool contained(const Rel& r, const Rel& s) {
  r.check_same(s);
  for (std::size_t a = 0; a < r.rows(); ++a) {
    const auto* x = r.row_words(a);
    const auto* y = s.row_words(a);
    for (std::size_t w = 0; w < r.words(); ++w)
      if ((x[w] & ~y[w]) != 0) return false;
  }
  return true;
}

// First pair of r missing from s, in lexicographic order.
inline std::optional<std::pair<std::size_t, std::size_t>> first_missing(const Rel& r, const Rel& s) {
  r.check_same(s);
  for (std::size_t a = 0; a < r.rows(); ++a)
    for (std::size_t b = 0; b < r.cols(); ++b)
      if (r.get(a, b) && !s.get(a, b)) return std::make_pair(a, b);
  return std::nullopt;
}

// (a, c) related iff some b has r(a, b) and s(b, c).
inline Rel compose(const Rel& r, const Rel& s) {
  if (r.cols() != s.rows()) throw std::invalid_argument("compose: Rel mismatch");
  Rel out(r.rows(), s.cols());
  for (std::size_t a = 0; a < r.rows(); ++a) {
    auto* dst = out.row_words(a);
    for (std::size_t b = 0; b < r.cols(); ++b) {
      if (!r.get(a, b)) continue;
      const auto* src = s.row_words(b);
      for (std::size_t w = 0; w < out.words(); ++w) dst[w] |= src[w];
    }
  }
  return out;
}

inline Rel opposite(const Rel& r) {
  Rel out(r.cols(), r.rows());
  for (std::size_t a = 0; a < r.rows(); ++a)
    for (std::size_t b = 0; b < r.cols(); ++b)
      if (r.get(a, b)) out.set(b, a);
  return out;
}

// ((a, c), (b, d)) related iff r(a, b) and s(c, d).
inline Rel box_product(const Rel& r, const Rel& s) {
  Rel out(r.rows() * s.rows(), r.cols() * s.cols());
  for (std::size_t a = 0; a < r.rows(); ++a)
    for (std::size_t b = 0; b < r.cols(); ++b) {
      if (!r.get(a, b)) continue;
      for (std::size_t c = 0; c < s.rows(); ++c)
        for (std::size_t d = 0; d < s.cols(); ++d)
          if (s.get(c, d)) out.set(a * s.rows() + c, b * s.cols() + d);
    }
  return out;
}

// {(f a, g b) | r(a, b)}
inline Rel image_relation(const FinFun& f, const FinFun& g, const Rel& r) {
  if (f.src_size() != r.rows() || g.src_size() != r.cols()) throw std::invalid_argument("image_relation: mismatch");
  Rel out(f.dst_size, g.dst_size);
  for (std::size_t a = 0; a < r.rows(); ++a)
    for (std::size_t b = 0; b < r.cols(); ++b)
      if (r.get(a, b)) out.set(f(a), g(b));
  return out;
}

inline bool is_functional(const Rel& r) {
  for (std::size_t a = 0; a < r.rows(); ++a) {
    std::size_t n = 0;
    for (std::size_t w = 0; w < r.words(); ++w) n += static_cast<std::size_t>(std::popcount(r.row_words(a)[w]));
    if (n > 1) return false;
  }
  return true;
}

inline bool is_total(const Rel& r) {
  for (std::size_t a = 0; a < r.rows(); ++a)
    if (r.row_empty(a)) return false;
  return true;
}

inline bool is_reflexive(const Rel& r) {
  for (std::size_t a = 0; a < r.rows(); ++a)
    if (!r.get(a, a)) return false;
  return true;
}

inline bool is_transitive(const Rel& r) { return contained(compose(r, r), r); }

inline Rel reflexive_transitive_closure(Rel r) {
  for (std::size_t a = 0; a < r.rows(); ++a) r.set(a, a);
  while (true) {
    Rel next = r | compose(r, r);
    if (next == r) return r;
    r = std::move(next);
  }
}

// Calls fn on every total relation between an n- and an m-element set, each
// given as one nonempty mask per row; m must be at most 64.
template <class Fn>
bool for_each_total_relation(std::size_t n, std::size_t m, Fn&& fn) {
  if (m == 0) return n == 0 ? fn(std::vector<Mask>{}) : true;
  const Mask top = full_mask(m);
  std::vector<Mask> rows(n, 1);
  while (true) {
    if (!fn(rows)) return false;
    std::size_t k = n;
    while (k > 0) {
      --k;
      if (rows[k] < top) {
        ++rows[k];
        break;
      }
      rows[k] = 1;
      if (k == 0) return true;
    }
    if (n == 0) return true;
  }
}

inline std::string describe_map(const FinFun& f) {
  std::string s = "[";
  for (std::size_t k = 0; k < f.table.size(); ++k) s += (k ? " " : "") + std::to_string(f.table[k]);
  return s + "]";
}

inline std::string describe_pairs(const Rel& r, const FinSet& a, const FinSet& b) {
  std::string out = "{";
  bool first = true;
  for (auto [x, y] : r.pairs()) {
    if (!first) out += ",";
    first = false;
    out += "(" + a.elements.at(x) + "," + b.elements.at(y) + ")";
  }
  return out + "}";
}

}  // namespace realiz
