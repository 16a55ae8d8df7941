#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "realiz/meets.hpp"
#include "realiz/relcomp.hpp"
#include "realiz/relcore.hpp"
#include "realiz/udist.hpp"
#include "realiz/uord.hpp"

namespace realiz {

struct InstanceError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A bundled or user-authored instance: a finite uniform preorder with
// optional meets, relational completeness and distributor blocks, or the
// effective SK configuration.
struct Instance {
  std::string name;
  std::string fiber = "D";  // D, heyting or effective-sk
  UOrd uord;
  std::optional<MeetData> meets;
  std::optional<RcData> rc;
  std::map<std::string, Distributor> dists;
  std::optional<std::size_t> fuel;

  bool effective() const { return fiber == "effective-sk"; }
};

namespace detail {

using nlohmann::json;

[[noreturn]] inline void bad(const std::string& path, const std::string& what) {
  throw InstanceError(path + ": " + what);
}

inline const json& need(const json& j, const char* key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) bad(path, std::string("missing \"") + key + "\"");
  return j.at(key);
}

inline std::size_t sort_ref(const UOrd& u, const json& j, const std::string& path) {
  if (j.is_number_unsigned() && j.get<std::size_t>() < u.num_sorts()) return j.get<std::size_t>();
  if (j.is_string())
    if (auto s = u.sort_index(j.get<std::string>())) return *s;
  bad(path, "unknown sort " + j.dump());
}

inline std::pair<std::size_t, std::size_t> sort_pair(const UOrd& u, const std::string& key, const std::string& path) {
  auto comma = key.find(',');
  if (comma == std::string::npos) bad(path, "sort pair \"" + key + "\" is not of the form \"i,j\"");
  return {sort_ref(u, key.substr(0, comma), path), sort_ref(u, key.substr(comma + 1), path)};
}

inline std::size_t elem_ref(const FinSet& c, const json& j, const std::string& path) {
  if (j.is_number_unsigned() && j.get<std::size_t>() < c.size()) return j.get<std::size_t>();
  if (j.is_string())
    if (auto e = c.index_of(j.get<std::string>())) return *e;
  bad(path, "unknown element " + j.dump() + " of " + c.name);
}

inline Rel rel_of(const FinSet& a, const FinSet& b, const json& j, const std::string& path) {
  if (!j.is_array()) bad(path, "relation must be an array of pairs");
  Rel r(a.size(), b.size());
  for (std::size_t k = 0; k < j.size(); ++k) {
    const auto& p = j[k];
    std::string pp = path + "[" + std::to_string(k) + "]";
    if (!p.is_array() || p.size() != 2) bad(pp, "pair must have two entries");
    r.set(elem_ref(a, p[0], pp), elem_ref(b, p[1], pp));
  }
  return r;
}

inline json rel_json(const Rel& r, const FinSet& a, const FinSet& b) {
  json out = json::array();
  for (std::size_t x = 0; x < r.rows(); ++x)
    for (auto y : r.row_elements(x)) out.push_back(json::array({a.elements[x], b.elements[y]}));
  return out;
}

inline std::string pair_key(const UOrd& u, std::size_t i, std::size_t j) { return u.sorts[i] + "," + u.sorts[j]; }

}  // namespace detail

inline Instance parse_instance(const nlohmann::json& j) {
  using detail::bad;
  using detail::need;
  if (!j.is_object()) bad("$", "instance must be an object");
  Instance in;
  if (j.contains("name")) {
    if (!j["name"].is_string()) bad("$.name", "must be a string");
    in.name = j["name"].get<std::string>();
  }
  if (j.contains("fiber")) {
    if (!j["fiber"].is_string()) bad("$.fiber", "must be a string");
    in.fiber = j["fiber"].get<std::string>();
    if (in.fiber != "D" && in.fiber != "heyting" && in.fiber != "effective-sk")
      bad("$.fiber", "expected \"D\", \"heyting\" or \"effective-sk\"");
  }
  if (j.contains("fuel")) {
    if (!j["fuel"].is_number_unsigned()) bad("$.fuel", "must be a nonnegative integer");
    in.fuel = j["fuel"].get<std::size_t>();
  }
  if (in.effective()) return in;

  const auto& uj = need(j, "uord", "$");
  const auto& sj = need(uj, "sorts", "$.uord");
  if (!sj.is_array() || sj.empty()) bad("$.uord.sorts", "must be a nonempty array");
  std::vector<std::string> names;
  std::vector<FinSet> carriers;
  for (std::size_t k = 0; k < sj.size(); ++k) {
    std::string p = "$.uord.sorts[" + std::to_string(k) + "]";
    const auto& name = need(sj[k], "name", p);
    const auto& els = need(sj[k], "elements", p);
    if (!name.is_string()) bad(p + ".name", "must be a string");
    if (!els.is_array()) bad(p + ".elements", "must be an array");
    FinSet c;
    c.name = name.get<std::string>();
    for (const auto& e : els) {
      if (!e.is_string()) bad(p + ".elements", "elements must be strings");
      if (c.index_of(e.get<std::string>())) bad(p + ".elements", "duplicate element " + e.dump());
      c.elements.push_back(e.get<std::string>());
    }
    if (std::find(names.begin(), names.end(), c.name) != names.end()) bad(p + ".name", "duplicate sort " + c.name);
    names.push_back(c.name);
    carriers.push_back(std::move(c));
  }
  in.uord = UOrd(names, carriers);
  UOrd& u = in.uord;
  const auto& bj = need(uj, "base", "$.uord");
  if (!bj.is_object()) bad("$.uord.base", "must be an object keyed by \"i,j\"");
  for (const auto& [key, rels] : bj.items()) {
    std::string p = "$.uord.base." + key;
    auto [a, b] = detail::sort_pair(u, key, p);
    if (!rels.is_array()) bad(p, "must be an array of relations");
    for (std::size_t k = 0; k < rels.size(); ++k)
      u.add_base(a, b, detail::rel_of(u.carriers[a], u.carriers[b], rels[k], p + "[" + std::to_string(k) + "]"));
  }

  const std::size_t n = u.num_sorts();
  if (j.contains("meets")) {
    const auto& mj = j["meets"];
    MeetData m;
    m.nsorts = n;
    m.unit = detail::sort_ref(u, need(mj, "unit", "$.meets"), "$.meets.unit");
    m.top = detail::elem_ref(u.carriers[m.unit], need(mj, "top", "$.meets"), "$.meets.top");
    m.star.assign(n * n, 0);
    m.wedge.assign(n * n, {});
    std::vector<bool> seen(n * n, false);
    for (const auto& [key, s] : need(mj, "star", "$.meets").items()) {
      auto [a, b] = detail::sort_pair(u, key, "$.meets.star." + key);
      m.star[a * n + b] = detail::sort_ref(u, s, "$.meets.star." + key);
      seen[a * n + b] = true;
    }
    for (std::size_t k = 0; k < n * n; ++k)
      if (!seen[k]) bad("$.meets.star", "missing pair " + detail::pair_key(u, k / n, k % n));
    const auto& wj = need(mj, "wedge", "$.meets");
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        std::string key = detail::pair_key(u, a, b), p = "$.meets.wedge." + key;
        const auto& t = need(wj, key.c_str(), "$.meets.wedge");
        const FinSet& out = u.carriers[m.star[a * n + b]];
        if (!t.is_array() || t.size() != u.size(a)) bad(p, "must have one row per element of " + u.sorts[a]);
        for (std::size_t x = 0; x < t.size(); ++x) {
          if (!t[x].is_array() || t[x].size() != u.size(b)) bad(p, "row has wrong length");
          for (std::size_t y = 0; y < t[x].size(); ++y) m.wedge[a * n + b].push_back(detail::elem_ref(out, t[x][y], p));
        }
      }
    in.meets = m;
  }
  if (j.contains("rc")) {
    if (!in.meets) bad("$.rc", "requires a meets block");
    const auto& rj = j["rc"];
    RcData rc;
    rc.nsorts = n;
    rc.arrow.assign(n * n, 0);
    rc.app.assign(n * n, Rel());
    const auto& aj = need(rj, "arrow", "$.rc");
    const auto& pj = need(rj, "app", "$.rc");
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        std::string key = detail::pair_key(u, a, b);
        rc.arrow[a * n + b] = detail::sort_ref(u, need(aj, key.c_str(), "$.rc.arrow"), "$.rc.arrow." + key);
        std::size_t src = in.meets->star_of(rc.arrow[a * n + b], a);
        rc.app[a * n + b] = detail::rel_of(u.carriers[src], u.carriers[b], need(pj, key.c_str(), "$.rc.app"), "$.rc.app." + key);
      }
    in.rc = rc;
  }
  if (j.contains("dist")) {
    if (!j["dist"].is_object()) bad("$.dist", "must be an object of named distributors");
    for (const auto& [name, dj] : j["dist"].items()) {
      Distributor d(u, u);
      for (const auto& [key, rels] : dj.items()) {
        std::string p = "$.dist." + name + "." + key;
        auto [jj, ii] = detail::sort_pair(u, key, p);
        if (!rels.is_array()) bad(p, "must be an array of relations");
        for (const auto& r : rels) d.add(jj, ii, detail::rel_of(u.carriers[jj], u.carriers[ii], r, p));
      }
      in.dists.emplace(name, std::move(d));
    }
  }
  return in;
}

inline nlohmann::json instance_json(const Instance& in) {
  using nlohmann::json;
  json j;
  j["name"] = in.name;
  j["fiber"] = in.fiber;
  if (in.fuel) j["fuel"] = *in.fuel;
  if (in.effective()) return j;
  const UOrd& u = in.uord;
  json sorts = json::array();
  for (std::size_t i = 0; i < u.num_sorts(); ++i) sorts.push_back({{"name", u.sorts[i]}, {"elements", u.carriers[i].elements}});
  json base = json::object();
  for (std::size_t a = 0; a < u.num_sorts(); ++a)
    for (std::size_t b = 0; b < u.num_sorts(); ++b) {
      if (u.bases(a, b).empty()) continue;
      json rels = json::array();
      for (const auto& r : u.bases(a, b)) rels.push_back(detail::rel_json(r, u.carriers[a], u.carriers[b]));
      base[detail::pair_key(u, a, b)] = rels;
    }
  j["uord"] = {{"sorts", sorts}, {"base", base}};
  const std::size_t n = u.num_sorts();
  if (in.meets) {
    const MeetData& m = *in.meets;
    json star = json::object(), wedge = json::object();
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        std::size_t s = m.star_of(a, b);
        star[detail::pair_key(u, a, b)] = u.sorts[s];
        json rows = json::array();
        for (std::size_t x = 0; x < u.size(a); ++x) {
          json row = json::array();
          for (std::size_t y = 0; y < u.size(b); ++y) row.push_back(u.carriers[s].elements[m.meet(u, a, b, x, y)]);
          rows.push_back(row);
        }
        wedge[detail::pair_key(u, a, b)] = rows;
      }
    j["meets"] = {{"unit", u.sorts[m.unit]}, {"top", u.carriers[m.unit].elements[m.top]}, {"star", star}, {"wedge", wedge}};
  }
  if (in.rc && in.meets) {
    json arrow = json::object(), app = json::object();
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        std::size_t s = in.rc->arrow_of(a, b);
        arrow[detail::pair_key(u, a, b)] = u.sorts[s];
        app[detail::pair_key(u, a, b)] =
            detail::rel_json(in.rc->app_of(a, b), u.carriers[in.meets->star_of(s, a)], u.carriers[b]);
      }
    j["rc"] = {{"arrow", arrow}, {"app", app}};
  }
  if (!in.dists.empty()) {
    json dists = json::object();
    for (const auto& [name, d] : in.dists) {
      json comps = json::object();
      for (std::size_t jj = 0; jj < d.dst.num_sorts(); ++jj)
        for (std::size_t ii = 0; ii < d.src.num_sorts(); ++ii) {
          if (d.at(jj, ii).empty()) continue;
          json rels = json::array();
          for (const auto& r : d.at(jj, ii)) rels.push_back(detail::rel_json(r, d.dst.carriers[jj], d.src.carriers[ii]));
          comps[detail::pair_key(u, jj, ii)] = rels;
        }
      dists[name] = comps;
    }
    j["dist"] = dists;
  }
  return j;
}

inline Instance load_instance(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InstanceError(path + ": cannot open");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(f);
  } catch (const nlohmann::json::parse_error& e) {
    throw InstanceError(path + ": " + e.what());
  }
  return parse_instance(j);
}

}  // namespace realiz
