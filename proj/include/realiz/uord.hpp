#pragma once

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "realiz/relcore.hpp"
#include "realiz/report.hpp"

namespace realiz {

// A family of finite carriers with, for each ordered pair of sorts, a finite
// set of base relations. The uniform preorder is the down-closure of the base.
struct UOrd {
  std::vector<std::string> sorts;
  std::vector<FinSet> carriers;
  std::vector<std::vector<Rel>> base;  // indexed by i * n + j

  UOrd() = default;
  UOrd(std::vector<std::string> s, std::vector<FinSet> c)
      : sorts(std::move(s)), carriers(std::move(c)), base(sorts.size() * sorts.size()) {
    if (sorts.size() != carriers.size()) throw std::invalid_argument("UOrd: sorts and carriers differ in length");
  }

  std::size_t num_sorts() const { return sorts.size(); }
  std::size_t size(std::size_t i) const { return carriers.at(i).size(); }

  const std::vector<Rel>& bases(std::size_t i, std::size_t j) const { return base.at(i * num_sorts() + j); }
  std::vector<Rel>& bases(std::size_t i, std::size_t j) { return base.at(i * num_sorts() + j); }

  void add_base(std::size_t i, std::size_t j, Rel r) {
    if (r.rows() != size(i) || r.cols() != size(j)) throw std::invalid_argument("UOrd: base relation has wrong shape");
    bases(i, j).push_back(std::move(r));
  }

  std::optional<std::size_t> sort_index(const std::string& name) const {
    for (std::size_t i = 0; i < sorts.size(); ++i)
      if (sorts[i] == name) return i;
    return std::nullopt;
  }

  std::size_t max_carrier() const {
    std::size_t m = 0;
    for (const auto& c : carriers) m = std::max(m, c.size());
    return m;
  }
};

// Least base relation of R_ij containing r.
inline std::optional<std::size_t> covering_base(const UOrd& u, std::size_t i, std::size_t j, const Rel& r) {
  const auto& bs = u.bases(i, j);
  for (std::size_t k = 0; k < bs.size(); ++k)
    if (contained(r, bs[k])) return k;
  return std::nullopt;
}

inline bool in_down(const UOrd& u, std::size_t i, std::size_t j, const Rel& r) {
  return covering_base(u, i, j, r).has_value();
}

inline bool in_downclosure(const UOrd& u, std::size_t i, std::size_t j, const Rel& r) {
  if (i >= u.num_sorts() || j >= u.num_sorts()) throw std::out_of_range("in_downclosure: sort out of range");
  if (r.rows() != u.size(i) || r.cols() != u.size(j)) throw std::invalid_argument("in_downclosure: wrong shape");
  return in_down(u, i, j, r);
}

inline Report validate_uord(const UOrd& u) {
  Report rep;
  const std::size_t n = u.num_sorts();
  bool ok = true;
  for (std::size_t i = 0; i < n && ok; ++i)
    if (!in_down(u, i, i, Rel::identity(u.size(i)))) {
      rep.fail("uord", "identity-cover", "identity", "no base relation on sort " + u.sorts[i] + " contains the identity");
      ok = false;
    }
  if (ok) rep.pass("uord", "identity-cover", "identity");
  ok = true;
  for (std::size_t i = 0; i < n && ok; ++i)
    for (std::size_t j = 0; j < n && ok; ++j)
      for (std::size_t k = 0; k < n && ok; ++k)
        for (std::size_t a = 0; a < u.bases(i, j).size() && ok; ++a)
          for (std::size_t b = 0; b < u.bases(j, k).size() && ok; ++b)
            if (!in_down(u, i, k, compose(u.bases(i, j)[a], u.bases(j, k)[b]))) {
              rep.fail("uord", "composition-cover", "composition",
                       "composite of base #" + std::to_string(a) + " (" + u.sorts[i] + "->" + u.sorts[j] + ") and base #" +
                           std::to_string(b) + " (" + u.sorts[j] + "->" + u.sorts[k] + ") is not covered");
              ok = false;
            }
  if (ok) rep.pass("uord", "composition-cover", "composition");
  return rep;
}

inline void require_valid(const UOrd& u) {
  Report rep = validate_uord(u);
  if (const Check* c = rep.first_failure()) throw std::invalid_argument("invalid uniform preorder: " + c->witness);
}

inline UOrd from_preorder(const FinSet& carrier, const Rel& leq) {
  if (!is_reflexive(leq)) throw std::invalid_argument("from_preorder: relation is not reflexive");
  if (!is_transitive(leq)) throw std::invalid_argument("from_preorder: relation is not transitive");
  UOrd u({carrier.name}, {carrier});
  u.add_base(0, 0, leq);
  return u;
}

inline UOrd discrete(const FinSet& carrier) { return from_preorder(carrier, Rel::identity(carrier.size())); }

// One sort whose base is the given family of relations, typically graphs of
// (partial) functions.
inline UOrd from_relations(const FinSet& carrier, std::vector<Rel> rels) {
  UOrd u({carrier.name}, {carrier});
  for (auto& r : rels) u.add_base(0, 0, std::move(r));
  require_valid(u);
  return u;
}

// One sort whose base is the graphs of a family of partial functions (given
// as tables with nullopt for undefined). The family must contain a function
// above the identity and be closed under composition up to containment.
inline UOrd from_function_family(const FinSet& carrier,
                                 const std::vector<std::vector<std::optional<std::size_t>>>& family) {
  std::vector<Rel> rels;
  for (const auto& f : family) {
    if (f.size() != carrier.size()) throw std::invalid_argument("from_function_family: table has wrong size");
    Rel g(carrier.size(), carrier.size());
    for (std::size_t a = 0; a < f.size(); ++a)
      if (f[a]) {
        if (*f[a] >= carrier.size()) throw std::invalid_argument("from_function_family: value out of range");
        g.set(a, *f[a]);
      }
    rels.push_back(std::move(g));
  }
  UOrd u({carrier.name}, {carrier});
  for (auto& r : rels) u.add_base(0, 0, std::move(r));
  Report rep = validate_uord(u);
  if (const Check* c = rep.first_failure())
    throw std::invalid_argument("from_function_family: family not closed: " + c->witness);
  return u;
}

inline UOrd chain(std::size_t n) {
  Rel leq(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a; b < n; ++b) leq.set(a, b);
  return from_preorder(FinSet::range(std::to_string(n) + "-chain", n), leq);
}

inline bool is_functional_uord(const UOrd& u) {
  for (const auto& fam : u.base)
    for (const auto& r : fam)
      if (!is_functional(r)) return false;
  return true;
}

// Every base relation of one is covered by a base relation of the other.
inline bool same_downclosure(const UOrd& u, const UOrd& v) {
  if (u.num_sorts() != v.num_sorts()) return false;
  for (std::size_t i = 0; i < u.num_sorts(); ++i)
    if (u.size(i) != v.size(i)) return false;
  for (std::size_t i = 0; i < u.num_sorts(); ++i)
    for (std::size_t j = 0; j < u.num_sorts(); ++j) {
      for (const auto& r : u.bases(i, j))
        if (!in_down(v, i, j, r)) return false;
      for (const auto& r : v.bases(i, j))
        if (!in_down(u, i, j, r)) return false;
    }
  return true;
}

// A predicate on an index set M: a sort together with a map M -> A_sort.
struct Predicate {
  std::size_t sort = 0;
  std::vector<std::size_t> values;

  std::size_t index_size() const { return values.size(); }
  bool operator==(const Predicate&) const = default;
};

inline Predicate generic_predicate(const UOrd& u, std::size_t i) {
  return {i, FinFun::identity(u.size(i)).table};
}

inline Predicate reindex(const Predicate& p, const FinFun& f) {
  if (f.dst_size != p.index_size()) throw std::invalid_argument("reindex: index set mismatch");
  Predicate out{p.sort, {}};
  for (auto k : f.table) out.values.push_back(p.values[k]);
  return out;
}

inline Rel predicate_pairs(const UOrd& u, const Predicate& p, const Predicate& q) {
  if (p.index_size() != q.index_size()) throw std::invalid_argument("entails: index sets differ");
  Rel r(u.size(p.sort), u.size(q.sort));
  for (std::size_t m = 0; m < p.index_size(); ++m) r.set(p.values[m], q.values[m]);
  return r;
}

// p <= q iff {(p m, q m)} lies under a base relation; returns that relation.
inline std::optional<std::size_t> entails_witness(const UOrd& u, const Predicate& p, const Predicate& q) {
  return covering_base(u, p.sort, q.sort, predicate_pairs(u, p, q));
}

inline bool entails(const UOrd& u, const Predicate& p, const Predicate& q) { return entails_witness(u, p, q).has_value(); }

struct MonotoneMap {
  std::vector<std::size_t> sort_map;
  std::vector<FinFun> fns;

  static MonotoneMap identity(const UOrd& u) {
    MonotoneMap m;
    for (std::size_t i = 0; i < u.num_sorts(); ++i) {
      m.sort_map.push_back(i);
      m.fns.push_back(FinFun::identity(u.size(i)));
    }
    return m;
  }
};

// g after f
inline MonotoneMap compose(const MonotoneMap& f, const MonotoneMap& g) {
  MonotoneMap out;
  for (std::size_t i = 0; i < f.sort_map.size(); ++i) {
    out.sort_map.push_back(g.sort_map.at(f.sort_map[i]));
    out.fns.push_back(compose(f.fns[i], g.fns.at(f.sort_map[i])));
  }
  return out;
}

inline void check_shape(const UOrd& u, const UOrd& v, const MonotoneMap& m) {
  if (m.sort_map.size() != u.num_sorts() || m.fns.size() != u.num_sorts())
    throw std::invalid_argument("monotone map: wrong number of sorts");
  for (std::size_t i = 0; i < u.num_sorts(); ++i) {
    if (m.sort_map[i] >= v.num_sorts()) throw std::invalid_argument("monotone map: sort out of range");
    if (m.fns[i].src_size() != u.size(i) || m.fns[i].dst_size != v.size(m.sort_map[i]))
      throw std::invalid_argument("monotone map: component has wrong shape");
  }
}

// Description of the first base relation whose image is not covered.
inline std::optional<std::string> monotone_violation(const UOrd& u, const UOrd& v, const MonotoneMap& m) {
  check_shape(u, v, m);
  for (std::size_t i = 0; i < u.num_sorts(); ++i)
    for (std::size_t j = 0; j < u.num_sorts(); ++j)
      for (std::size_t k = 0; k < u.bases(i, j).size(); ++k) {
        Rel img = image_relation(m.fns[i], m.fns[j], u.bases(i, j)[k]);
        if (!in_down(v, m.sort_map[i], m.sort_map[j], img))
          return "image of base #" + std::to_string(k) + " on " + u.sorts[i] + "->" + u.sorts[j] + " is " +
                 describe_pairs(img, v.carriers[m.sort_map[i]], v.carriers[m.sort_map[j]]) + ", not covered";
      }
  return std::nullopt;
}

inline bool is_monotone(const UOrd& u, const UOrd& v, const MonotoneMap& m) { return !monotone_violation(u, v, m); }

// f <= g iff {(f_i a, g_i a)} is in S for every sort i.
inline std::optional<std::string> map_leq_violation(const UOrd& u, const UOrd& v, const MonotoneMap& f,
                                                    const MonotoneMap& g) {
  check_shape(u, v, f);
  check_shape(u, v, g);
  for (std::size_t i = 0; i < u.num_sorts(); ++i) {
    Rel r(v.size(f.sort_map[i]), v.size(g.sort_map[i]));
    for (std::size_t a = 0; a < u.size(i); ++a) r.set(f.fns[i](a), g.fns[i](a));
    if (!in_down(v, f.sort_map[i], g.sort_map[i], r))
      return "on sort " + u.sorts[i] + " the pairs " + describe_pairs(r, v.carriers[f.sort_map[i]], v.carriers[g.sort_map[i]]) +
             " are not covered";
  }
  return std::nullopt;
}

inline bool map_leq(const UOrd& u, const UOrd& v, const MonotoneMap& f, const MonotoneMap& g) {
  return !map_leq_violation(u, v, f, g);
}

// Sort tuples and carrier tuples are both ordered lexicographically.
inline UOrd product(const std::vector<UOrd>& family) {
  std::vector<std::size_t> sort_dims;
  for (const auto& u : family) sort_dims.push_back(u.num_sorts());
  const std::size_t n = product_size(sort_dims);
  std::vector<std::string> sorts;
  std::vector<FinSet> carriers;
  for (std::size_t s = 0; s < n; ++s) {
    auto tuple = decode(sort_dims, s);
    std::string name = "(";
    FinSet c("", {""});
    bool first = true;
    for (std::size_t k = 0; k < family.size(); ++k) {
      const auto& comp = family[k].carriers[tuple[k]];
      name += (k ? "," : "") + family[k].sorts[tuple[k]];
      if (first) {
        c = comp;
        first = false;
      } else {
        c = product_set(c, comp);
      }
    }
    if (family.empty()) c = FinSet("()", {"()"});
    name += ")";
    c.name = name;
    sorts.push_back(name);
    carriers.push_back(c);
  }
  UOrd out(sorts, carriers);
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = 0; t < n; ++t) {
      auto ts = decode(sort_dims, s);
      auto tt = decode(sort_dims, t);
      std::vector<Rel> acc{Rel::identity(1)};
      for (std::size_t k = 0; k < family.size(); ++k) {
        std::vector<Rel> next;
        for (const auto& a : acc)
          for (const auto& r : family[k].bases(ts[k], tt[k])) next.push_back(box_product(a, r));
        acc = std::move(next);
      }
      for (auto& r : acc) out.add_base(s, t, std::move(r));
    }
  return out;
}

inline UOrd coproduct(const std::vector<UOrd>& family) {
  std::vector<std::string> sorts;
  std::vector<FinSet> carriers;
  std::vector<std::size_t> offset;
  for (std::size_t k = 0; k < family.size(); ++k) {
    offset.push_back(sorts.size());
    for (std::size_t i = 0; i < family[k].num_sorts(); ++i) {
      sorts.push_back(std::to_string(k) + "." + family[k].sorts[i]);
      carriers.push_back(family[k].carriers[i]);
    }
  }
  UOrd out(sorts, carriers);
  for (std::size_t k = 0; k < family.size(); ++k)
    for (std::size_t i = 0; i < family[k].num_sorts(); ++i)
      for (std::size_t j = 0; j < family[k].num_sorts(); ++j)
        for (const auto& r : family[k].bases(i, j)) out.add_base(offset[k] + i, offset[k] + j, r);
  return out;
}

inline UOrd oppose(const UOrd& u) {
  UOrd out(u.sorts, u.carriers);
  for (std::size_t i = 0; i < u.num_sorts(); ++i)
    for (std::size_t j = 0; j < u.num_sorts(); ++j)
      for (const auto& r : u.bases(j, i)) out.add_base(i, j, opposite(r));
  return out;
}

// Entailment oracle on predicates over a common index set.
using EntailmentOracle = std::function<bool(const Predicate&, const Predicate&)>;

// Recovers the base relations from entailment between reindexed generic
// predicates: r is in R_ij iff the left projection of the generic predicate
// on i entails the right projection of the one on j, over r as index set.
// Keeps the maximal such relations.
inline UOrd reconstruct_from_fiber(const std::vector<std::string>& sorts, const std::vector<FinSet>& carriers,
                                   const EntailmentOracle& oracle, std::size_t max_pairs = 20) {
  UOrd out(sorts, carriers);
  const std::size_t n = sorts.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<std::pair<std::size_t, std::size_t>> cand;
      for (std::size_t a = 0; a < carriers[i].size(); ++a)
        for (std::size_t b = 0; b < carriers[j].size(); ++b)
          if (oracle(Predicate{i, {a}}, Predicate{j, {b}})) cand.emplace_back(a, b);
      if (cand.size() > max_pairs) throw std::invalid_argument("reconstruct_from_fiber: too many candidate pairs");
      const std::size_t k = cand.size();
      std::vector<std::vector<std::uint32_t>> by_size(k + 1);
      for (std::uint32_t s = 0; s < (std::uint32_t{1} << k); ++s) by_size[std::popcount(s)].push_back(s);
      std::vector<std::uint32_t> maximal;
      for (std::size_t sz = k + 1; sz-- > 0;)
        for (auto s : by_size[sz]) {
          bool covered = false;
          for (auto m : maximal)
            if ((s & ~m) == 0) covered = true;
          if (covered) continue;
          Predicate l{i, {}}, r{j, {}};
          for (std::size_t e = 0; e < k; ++e)
            if ((s >> e) & 1U) {
              l.values.push_back(cand[e].first);
              r.values.push_back(cand[e].second);
            }
          if (oracle(l, r)) maximal.push_back(s);
        }
      for (auto m : maximal) {
        Rel r(carriers[i].size(), carriers[j].size());
        for (std::size_t e = 0; e < k; ++e)
          if ((m >> e) & 1U) r.set(cand[e].first, cand[e].second);
        out.add_base(i, j, r);
      }
    }
  return out;
}

enum class Modesty { Modest, ModestWithinBound, NotModest };

struct ModestyResult {
  Modesty kind = Modesty::ModestWithinBound;
  std::string witness;  // the refuting span for NotModest
};

// Searches spans J <-e- K -f-> I with e surjective and |K| <= bound for a
// failure of modesty of mu. The answer is exact for generic predicates of
// functional instances.
inline ModestyResult check_modest(const UOrd& u, const Predicate& mu, std::size_t bound = 3) {
  const std::size_t index = mu.index_size();
  for (std::size_t ksz = 1; ksz <= bound; ++ksz)
    for (std::size_t jsz = 1; jsz <= ksz; ++jsz) {
      std::optional<ModestyResult> found;
      for_each_function(ksz, jsz, [&](const FinFun& e) {
        if (!e.is_surjective()) return true;
        return for_each_function(ksz, index, [&](const FinFun& f) {
          for (std::size_t j = 0; j < u.num_sorts(); ++j) {
            bool stop = !for_each_function(jsz, u.size(j), [&](const FinFun& phi_fn) {
              Predicate phi{j, phi_fn.table};
              if (!entails(u, reindex(phi, e), reindex(mu, f))) return true;
              // does f factor through e?
              std::vector<std::optional<std::size_t>> h(jsz);
              bool factors = true;
              for (std::size_t k = 0; k < ksz; ++k) {
                if (h[e(k)] && *h[e(k)] != f(k)) factors = false;
                h[e(k)] = f(k);
              }
              if (factors) {
                std::vector<std::size_t> ht;
                for (auto& x : h) ht.push_back(*x);
                if (entails(u, phi, reindex(mu, FinFun(index, ht)))) return true;
              }
              std::string w = "K=" + std::to_string(ksz) + " e=[";
              for (auto x : e.table) w += std::to_string(x) + " ";
              w += "] f=[";
              for (auto x : f.table) w += std::to_string(x) + " ";
              w += "] phi=" + u.sorts[j] + ":[";
              for (auto x : phi.values) w += u.carriers[j].elements[x] + " ";
              w += "]";
              found = ModestyResult{Modesty::NotModest, w};
              return false;
            });
            if (stop) return false;
          }
          return true;
        });
      });
      if (found) return *found;
    }
  bool generic = mu.values == FinFun::identity(u.size(mu.sort)).table;
  return {generic && is_functional_uord(u) ? Modesty::Modest : Modesty::ModestWithinBound, {}};
}

// Union of the base relations on sort i that contain the identity.
inline Rel condensate(const UOrd& u, std::size_t i) {
  Rel out(u.size(i), u.size(i));
  Rel id = Rel::identity(u.size(i));
  for (const auto& r : u.bases(i, i))
    if (contained(id, r)) out |= r;
  return out;
}

inline bool is_condensable(const UOrd& u) {
  for (std::size_t i = 0; i < u.num_sorts(); ++i)
    if (!in_down(u, i, i, condensate(u, i))) return false;
  return true;
}

struct BcoResult {
  Verdict verdict = Verdict::Unknown;
  std::optional<Rel> order;  // the preorder found
  std::string detail;
};

// One-sorted instances only: looks for a preorder in R such that every base
// relation lies under a partially functional distributor in R. Exhaustive up
// to 5 elements.
inline BcoResult is_bco(const UOrd& u) {
  if (u.num_sorts() != 1) return {Verdict::Unknown, std::nullopt, "only one-sorted instances are decided"};
  const std::size_t n = u.size(0);
  if (n > 5) return {Verdict::Unknown, std::nullopt, "carrier larger than 5"};
  const std::size_t pairs = n * n;
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << pairs); ++code) {
    Rel leq(n, n);
    for (std::size_t p = 0; p < pairs; ++p)
      if ((code >> p) & 1U) leq.set(p / n, p % n);
    if (!is_reflexive(leq) || !is_transitive(leq) || !in_down(u, 0, 0, leq)) continue;
    // each row of a partially functional distributor is empty or the up-set of one element
    bool all_covered = true;
    for (const auto& r : u.bases(0, 0)) {
      bool covered = false;
      std::vector<std::size_t> choice(n, 0);  // 0 = empty row, c + 1 = up-set of c
      while (!covered) {
        Rel phi(n, n);
        for (std::size_t a = 0; a < n; ++a)
          if (choice[a] > 0)
            for (std::size_t b = 0; b < n; ++b)
              if (leq.get(choice[a] - 1, b)) phi.set(a, b);
        if (contained(r, phi) && compose(compose(leq, phi), leq) == phi && in_down(u, 0, 0, phi)) covered = true;
        std::size_t k = n;
        bool done = true;
        while (k > 0) {
          --k;
          if (++choice[k] <= n) {
            done = false;
            break;
          }
          choice[k] = 0;
        }
        if (done) break;
      }
      if (!covered) {
        all_covered = false;
        break;
      }
    }
    if (all_covered) return {Verdict::Pass, leq, {}};
  }
  return {Verdict::Fail, std::nullopt, "no preorder in R generates R by partially functional distributors"};
}

// Laws of the predicate semantics over index sets of size <= max_n: entails
// is a preorder, stable under reindexing, reflected by reindexing along
// surjections, agrees with map_leq on endomaps, and determines the base up
// to mutual containment.
inline Report semantics_audit(const UOrd& u, std::size_t max_n = 3) {
  Report rep;
  auto record = [&](const char* id, const char* law, const std::string& bad, std::string detail = {}) {
    if (bad.empty())
      rep.pass("uord", id, law, std::move(detail));
    else
      rep.fail("uord", id, law, bad);
  };
  auto show = [&](const Predicate& p) {
    std::string s = u.sorts[p.sort] + ":[";
    for (std::size_t k = 0; k < p.values.size(); ++k) s += (k ? " " : "") + u.carriers[p.sort].elements[p.values[k]];
    return s + "]";
  };
  auto preds = [&](std::size_t n) {
    std::vector<Predicate> out;
    for (std::size_t i = 0; i < u.num_sorts(); ++i)
      for_each_function(n, u.size(i), [&](const FinFun& f) {
        out.push_back({i, f.table});
        return true;
      });
    return out;
  };

  std::string pre, re, stack;
  std::size_t cases = 0;
  for (std::size_t n = 0; n <= max_n; ++n) {
    auto ps = preds(n);
    std::vector<std::vector<char>> ent(ps.size(), std::vector<char>(ps.size()));
    for (std::size_t a = 0; a < ps.size(); ++a)
      for (std::size_t b = 0; b < ps.size(); ++b) ent[a][b] = entails(u, ps[a], ps[b]);
    for (std::size_t a = 0; a < ps.size() && pre.empty(); ++a) {
      if (!ent[a][a]) pre = "not reflexive at " + show(ps[a]);
      for (std::size_t b = 0; b < ps.size() && pre.empty(); ++b) {
        if (!ent[a][b]) continue;
        for (std::size_t c = 0; c < ps.size(); ++c) {
          ++cases;
          if (ent[b][c] && !ent[a][c]) {
            pre = "not transitive at " + show(ps[a]) + ", " + show(ps[b]) + ", " + show(ps[c]);
            break;
          }
        }
      }
    }
    for (std::size_t m = 0; m <= max_n; ++m)
      for_each_function(m, n, [&](const FinFun& h) {
        for (std::size_t a = 0; a < ps.size(); ++a)
          for (std::size_t b = 0; b < ps.size(); ++b) {
            bool pulled = entails(u, reindex(ps[a], h), reindex(ps[b], h));
            if (re.empty() && ent[a][b] && !pulled) re = show(ps[a]) + " |- " + show(ps[b]) + " but not along " + describe_map(h);
            if (stack.empty() && h.is_surjective() && pulled && !ent[a][b])
              stack = show(ps[a]) + " |/- " + show(ps[b]) + " but entails along " + describe_map(h);
          }
        return re.empty() && stack.empty();
      });
  }
  record("entails-preorder", "entails is reflexive and transitive", pre, std::to_string(cases) + " triples");
  record("entails-reindex", "entails is stable under reindexing", re);
  record("entails-prestack", "reindexing along surjections reflects entails", stack);

  if (u.num_sorts() == 1 && u.size(0) <= 4) {
    std::vector<MonotoneMap> maps;
    for_each_function(u.size(0), u.size(0), [&](const FinFun& f) {
      MonotoneMap m{{0}, {f}};
      if (is_monotone(u, u, m)) maps.push_back(m);
      return true;
    });
    std::string local;
    auto ps = preds(std::min<std::size_t>(max_n, 2));
    for (const auto& f : maps)
      for (const auto& g : maps) {
        bool all = true;
        for (const auto& p : ps) {
          Predicate fp{0, {}}, gp{0, {}};
          for (auto v : p.values) {
            fp.values.push_back(f.fns[0](v));
            gp.values.push_back(g.fns[0](v));
          }
          if (!entails(u, fp, gp)) all = false;
        }
        if (local.empty() && map_leq(u, u, f, g) != all)
          local = "maps " + describe_map(f.fns[0]) + ", " + describe_map(g.fns[0]);
      }
    record("map-leq-local", "f <= g iff f p |- g p for all p", local, std::to_string(maps.size()) + " monotone endomaps");
  }

  std::string round;
  UOrd back = reconstruct_from_fiber(u.sorts, u.carriers, [&](const Predicate& p, const Predicate& q) {
    return entails(u, p, q);
  });
  if (!same_downclosure(u, back)) round = "reconstructed base differs in down-closure";
  record("reconstruct-roundtrip", "bases are recovered from entailment", round);
  return rep;
}

}  // namespace realiz
