#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "realiz/meets.hpp"
#include "realiz/relcore.hpp"
#include "realiz/report.hpp"
#include "realiz/uord.hpp"

namespace realiz {

// Implication sorts j=>k and application relations @ from A_{(j=>k)*j} to A_k.
struct RcData {
  std::size_t nsorts = 0;
  std::vector<std::size_t> arrow;  // j * n + k
  std::vector<Rel> app;            // j * n + k

  std::size_t arrow_of(std::size_t j, std::size_t k) const { return arrow.at(j * nsorts + k); }
  const Rel& app_of(std::size_t j, std::size_t k) const { return app.at(j * nsorts + k); }
};

inline void check_rc_shape(const UOrd& u, const MeetData& m, const RcData& rc) {
  const std::size_t n = u.num_sorts();
  if (rc.nsorts != n || rc.arrow.size() != n * n || rc.app.size() != n * n)
    throw std::invalid_argument("relcomp: tables have wrong size");
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t s = rc.arrow_of(j, k);
      if (s >= n) throw std::invalid_argument("relcomp: arrow sort out of range");
      const Rel& a = rc.app_of(j, k);
      if (a.rows() != u.size(m.star_of(s, j)) || a.cols() != u.size(k))
        throw std::invalid_argument("relcomp: application relation has wrong shape");
    }
  if (u.max_carrier() > kMaskBits) throw std::invalid_argument("relcomp: carriers larger than 64");
}

// good(a) = {h | for all b, c: r(a & b, c) implies @(h & b, c)}
inline Mask good_set(const UOrd& u, const MeetData& m, std::size_t i, std::size_t j, std::size_t arrow, const Rel& app,
                     const Rel& r, std::size_t a) {
  Mask good = 0;
  for (std::size_t h = 0; h < u.size(arrow); ++h) {
    bool ok = true;
    for (std::size_t b = 0; b < u.size(j) && ok; ++b) {
      Mask need = r.row_mask(m.meet(u, i, j, a, b));
      Mask got = app.row_mask(m.meet(u, arrow, j, h, b));
      ok = (need & ~got) == 0;
    }
    if (ok) good |= bit(h);
  }
  return good;
}

// The first (i, base r) for which no base t in R_{i, j=>k} picks a good h
// for every a.
inline std::optional<std::string> relcomp_pair_violation(const UOrd& u, const MeetData& m, std::size_t j, std::size_t k,
                                                         std::size_t arrow, const Rel& app) {
  for (std::size_t i = 0; i < u.num_sorts(); ++i) {
    const auto& rs = u.bases(m.star_of(i, j), k);
    for (std::size_t x = 0; x < rs.size(); ++x) {
      std::vector<Mask> good(u.size(i));
      for (std::size_t a = 0; a < u.size(i); ++a) good[a] = good_set(u, m, i, j, arrow, app, rs[x], a);
      bool found = false;
      for (const auto& t : u.bases(i, arrow)) {
        bool all = true;
        for (std::size_t a = 0; a < u.size(i) && all; ++a) all = (t.row_mask(a) & good[a]) != 0;
        if (all) {
          found = true;
          break;
        }
      }
      if (!found) {
        std::string w = "j=" + u.sorts[j] + " k=" + u.sorts[k] + " i=" + u.sorts[i] + " base #" + std::to_string(x) +
                        " of " + u.sorts[m.star_of(i, j)] + "->" + u.sorts[k] + ":";
        for (std::size_t a = 0; a < u.size(i); ++a) {
          w += " good(" + u.carriers[i].elements[a] + ")={";
          bool first = true;
          for_each_bit(good[a], [&](std::size_t h) {
            w += (first ? "" : ",") + u.carriers[arrow].elements[h];
            first = false;
          });
          w += "}";
        }
        return w;
      }
    }
  }
  return std::nullopt;
}

inline Report check_relcomp(const UOrd& u, const MeetData& m, const RcData& rc) {
  check_rc_shape(u, m, rc);
  Report rep;
  std::string bad;
  for (std::size_t j = 0; j < u.num_sorts() && bad.empty(); ++j)
    for (std::size_t k = 0; k < u.num_sorts() && bad.empty(); ++k) {
      std::size_t s = rc.arrow_of(j, k);
      if (!in_down(u, m.star_of(s, j), k, rc.app_of(j, k))) bad = "application for " + u.sorts[j] + "," + u.sorts[k];
    }
  if (bad.empty())
    rep.pass("relcomp", "application-in-R", "application relations are uniform");
  else
    rep.fail("relcomp", "application-in-R", "application relations are uniform", bad);
  bad.clear();
  for (std::size_t j = 0; j < u.num_sorts() && bad.empty(); ++j)
    for (std::size_t k = 0; k < u.num_sorts() && bad.empty(); ++k)
      if (auto v = relcomp_pair_violation(u, m, j, k, rc.arrow_of(j, k), rc.app_of(j, k))) bad = *v;
  if (bad.empty())
    rep.pass("relcomp", "relational-completeness", "every r(a&-,-) is realized through application");
  else
    rep.fail("relcomp", "relational-completeness", "every r(a&-,-) is realized through application", bad);
  return rep;
}

struct RcSearch {
  std::optional<RcData> found;
  std::string witness;  // the sort pair without any candidate when not found
};

// Tries, for each pair (j, k), every arrow sort and every base relation of
// R_{s*j, k} as application. Enlarging @ only helps, so trying maximal
// candidates is exhaustive.
inline RcSearch search_relcomp(const UOrd& u, const MeetData& m) {
  const std::size_t n = u.num_sorts();
  RcData rc;
  rc.nsorts = n;
  rc.arrow.assign(n * n, 0);
  rc.app.assign(n * n, Rel());
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) {
      bool ok = false;
      std::string last;
      for (std::size_t s = 0; s < n && !ok; ++s)
        for (const auto& app : u.bases(m.star_of(s, j), k)) {
          auto v = relcomp_pair_violation(u, m, j, k, s, app);
          if (!v) {
            rc.arrow[j * n + k] = s;
            rc.app[j * n + k] = app;
            ok = true;
            break;
          }
          if (last.empty()) last = *v;
        }
      if (!ok) return {std::nullopt, last.empty() ? "no application candidates for " + u.sorts[j] + "," + u.sorts[k] : last};
    }
  return {rc, {}};
}

// (forall_u. phi => psi)(y) = intersection over u x = y of
// {h | for all b in phi x there is c in psi x with @(h & b, c)},
// on the sort j=>k for phi of sort j and psi of sort k.
inline std::vector<Mask> synth_forall_implies(const UOrd& u, const MeetData& m, const RcData& rc, std::size_t j,
                                              const std::vector<Mask>& phi, std::size_t k, const std::vector<Mask>& psi,
                                              const std::vector<std::size_t>& umap, std::size_t ny) {
  if (phi.size() != psi.size() || phi.size() != umap.size()) throw std::invalid_argument("synth: index sets differ");
  const std::size_t s = rc.arrow_of(j, k);
  const Rel& app = rc.app_of(j, k);
  std::vector<Mask> out(ny, full_mask(u.size(s)));
  for (std::size_t x = 0; x < phi.size(); ++x) {
    Mask g = 0;
    for (std::size_t h = 0; h < u.size(s); ++h) {
      bool ok = true;
      for_each_bit(phi[x], [&](std::size_t b) {
        if (ok && (app.row_mask(m.meet(u, s, j, h, b)) & psi[x]) == 0) ok = false;
      });
      if (ok) g |= bit(h);
    }
    out.at(umap[x]) &= g;
  }
  return out;
}

}  // namespace realiz
