#pragma once

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <string>
#include <tuple>

#include "json.hpp"
#include "realiz/report.hpp"
#include "realiz/uord.hpp"

namespace realiz {

inline Report sorted(Report r) {
  std::stable_sort(r.checks.begin(), r.checks.end(), [](const Check& a, const Check& b) {
    return std::tie(a.module, a.id) < std::tie(b.module, b.id);
  });
  return r;
}

// Deterministic: no timing information.
inline nlohmann::json report_json(const Report& r) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& c : sorted(r).checks)
    out.push_back({{"module", c.module},
                   {"id", c.id},
                   {"law", c.law},
                   {"verdict", verdict_name(c.verdict)},
                   {"witness", c.witness},
                   {"detail", c.detail}});
  return out;
}

inline std::string render_json(const Report& r) { return report_json(r).dump(2) + "\n"; }

inline Verdict parse_verdict(const std::string& s) {
  for (Verdict v : {Verdict::Pass, Verdict::Fail, Verdict::Unknown, Verdict::NotApplicable})
    if (s == verdict_name(v)) return v;
  throw std::invalid_argument("unknown verdict " + s);
}

inline Report parse_report_json(const nlohmann::json& j) {
  if (!j.is_array()) throw std::invalid_argument("report must be an array");
  Report r;
  for (const auto& c : j)
    r.add(c.at("module").get<std::string>(), c.at("id").get<std::string>(), c.at("law").get<std::string>(),
          parse_verdict(c.at("verdict").get<std::string>()), c.at("witness").get<std::string>(),
          c.at("detail").get<std::string>());
  return r;
}

inline std::string render_text(const Report& r, bool timings = true) {
  std::ostringstream os;
  for (const auto& c : sorted(r).checks) {
    std::string v = verdict_name(c.verdict);
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char ch) { return static_cast<char>(std::toupper(ch)); });
    os << v << "  " << c.module << "/" << c.id << "  " << c.law;
    if (!c.witness.empty()) os << "  [" << c.witness << "]";
    if (!c.detail.empty()) os << "  (" << c.detail << ")";
    if (timings) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "  %.1f ms", c.elapsed_ms);
      os << buf;
    }
    os << "\n";
  }
  std::size_t counts[4] = {0, 0, 0, 0};
  for (const auto& c : r.checks) ++counts[static_cast<int>(c.verdict)];
  os << counts[0] << " pass, " << counts[1] << " fail, " << counts[2] << " unknown, " << counts[3]
     << " not applicable\n";
  return os.str();
}

// 0 all pass, 1 any fail, 2 unknowns but no failure.
inline int exit_code(const Report& r) {
  switch (r.overall()) {
    case Verdict::Fail: return 1;
    case Verdict::Unknown: return 2;
    default: return 0;
  }
}

// One cluster per sort; an edge per pair of each base relation, labelled by
// the relation's index.
inline std::string to_dot(const UOrd& u, const std::string& name = "uord") {
  auto q = [](const std::string& s) {
    std::string out = "\"";
    for (char c : s) out += (c == '"' || c == '\\') ? std::string("\\") + c : std::string(1, c);
    return out + "\"";
  };
  auto node = [&](std::size_t i, std::size_t a) { return q(u.sorts[i] + "." + u.carriers[i].elements[a]); };
  std::ostringstream os;
  os << "digraph " << q(name) << " {\n";
  for (std::size_t i = 0; i < u.num_sorts(); ++i) {
    os << "  subgraph " << q("cluster_" + u.sorts[i]) << " {\n    label=" << q(u.sorts[i]) << ";\n";
    for (std::size_t a = 0; a < u.size(i); ++a)
      os << "    " << node(i, a) << " [label=" << q(u.carriers[i].elements[a]) << "];\n";
    os << "  }\n";
  }
  for (std::size_t i = 0; i < u.num_sorts(); ++i)
    for (std::size_t j = 0; j < u.num_sorts(); ++j)
      for (std::size_t k = 0; k < u.bases(i, j).size(); ++k) {
        const Rel& r = u.bases(i, j)[k];
        for (std::size_t a = 0; a < r.rows(); ++a)
          for (auto b : r.row_elements(a))
            os << "  " << node(i, a) << " -> " << node(j, b) << " [label=" << q("#" + std::to_string(k)) << "];\n";
      }
  os << "}\n";
  return os.str();
}

}  // namespace realiz
