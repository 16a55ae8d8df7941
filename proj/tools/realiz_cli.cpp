#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "realiz/render.hpp"
#include "realiz/suite.hpp"

using namespace realiz;

namespace {

struct Options {
  std::string format = "text";
  std::size_t fuel = 10000;
  std::size_t max_carrier = 12;
  std::size_t span_bound = 3;
  std::size_t jobs = 1;
  std::size_t samples = 100;
  std::string instance;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

std::vector<std::string> words(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

std::size_t sort_arg(const UOrd& u, const std::string& name) {
  if (auto s = u.sort_index(trim(name))) return *s;
  throw InstanceError("unknown sort \"" + name + "\"");
}

std::size_t elem_arg(const FinSet& c, const std::string& label) {
  if (auto e = c.index_of(trim(label))) return *e;
  throw InstanceError("unknown element \"" + label + "\" of " + c.name);
}

std::pair<std::size_t, std::string> sort_prefix(const UOrd& u, const std::string& s) {
  auto colon = s.find(':');
  if (colon == std::string::npos) throw InstanceError("expected SORT:VALUES, got \"" + s + "\"");
  return {sort_arg(u, s.substr(0, colon)), s.substr(colon + 1)};
}

// SORT:a,b,c  -- one carrier element per index
Predicate predicate_arg(const UOrd& u, const std::string& s) {
  auto [sort, rest] = sort_prefix(u, s);
  Predicate p{sort, {}};
  if (!trim(rest).empty())
    for (const auto& v : split(rest, ',')) p.values.push_back(elem_arg(u.carriers[sort], v));
  return p;
}

// SORT:a b|b|  -- one subset per index, elements separated by spaces
DPred dpred_arg(const UOrd& u, const std::string& s) {
  auto [sort, rest] = sort_prefix(u, s);
  DPred p{sort, {}};
  for (const auto& part : split(rest, '|')) {
    Mask m = 0;
    for (const auto& w : words(part)) m |= bit(elem_arg(u.carriers[sort], w));
    p.vals.push_back(m);
  }
  return p;
}

const MeetData& need_meets(const Instance& in) {
  if (!in.meets) throw InstanceError("this command needs a \"meets\" block");
  return *in.meets;
}

void need_finite(const Instance& in) {
  if (in.effective()) throw InstanceError("this command needs a finite instance");
}

std::optional<RcData> relcomp_of(const Instance& in) {
  if (in.rc) return in.rc;
  return search_relcomp(in.uord, need_meets(in)).found;
}

DFiber d_fiber(const Instance& in, bool need_rc) {
  need_finite(in);
  DFiber f(in.uord, need_meets(in));
  auto rc = relcomp_of(in);
  if (rc)
    f.with_relcomp(*rc);
  else if (need_rc)
    throw InstanceError("the instance has no \"rc\" block and is not relationally complete");
  return f;
}

const Distributor& dist_arg(const Instance& in, const std::string& name) {
  auto it = in.dists.find(name);
  if (it == in.dists.end()) throw InstanceError("no distributor named \"" + name + "\"");
  return it->second;
}

nlohmann::json dist_json(const Distributor& d) {
  nlohmann::json out = nlohmann::json::object();
  for (std::size_t j = 0; j < d.dst.num_sorts(); ++j)
    for (std::size_t i = 0; i < d.src.num_sorts(); ++i) {
      nlohmann::json rels = nlohmann::json::array();
      for (const auto& r : d.at(j, i)) rels.push_back(detail::rel_json(r, d.dst.carriers[j], d.src.carriers[i]));
      out[d.dst.sorts[j] + "," + d.src.sorts[i]] = rels;
    }
  return out;
}

std::string subsets_label(const UOrd& u, const std::vector<std::vector<std::size_t>>& d) {
  std::string s;
  for (std::size_t i = 0; i < d.size(); ++i) {
    s += (i ? "; " : "") + u.sorts[i] + ": {";
    for (std::size_t k = 0; k < d[i].size(); ++k) s += (k ? "," : "") + u.carriers[i].elements[d[i][k]];
    s += "}";
  }
  return s;
}

// The topos audits run over the fiber the instance selects.
template <class F>
Report topos_command(const F& f, const std::string& which, std::size_t max_n) {
  PerCategory<F> cat(f);
  auto o1 = sample_objects(cat, 1, 3), o2 = sample_objects(cat, 2, 3);
  std::vector<typename PerCategory<F>::Object> objs = o1;
  objs.insert(objs.end(), o2.begin(), o2.end());
  Report r;
  if (which == "limits") {
    r.merge(category_audit(cat, objs));
    r.merge(limits_audit(cat, o1, {o1[0], o2[0]}));
  } else if (which == "exactness") {
    r.merge(factorization_audit(cat, objs));
    r.merge(exactness_audit(cat, objs));
    r.merge(delta_audit(cat, max_n));
    r.merge(reconstruction_audit(cat, max_n, 2));
  } else if (which == "assemblies") {
    r.merge(assemblies_audit(cat, 2));
  } else if (which == "notnot") {
    r.merge(total_connectedness_audit(f, max_n, 2));
    r.merge(notnot_audit(cat, max_n, objs));
  } else if (which == "exp") {
    auto d2 = cat.delta(2);
    r.merge(exponential_audit(cat, d2, d2, d2));
    auto e = exponential(cat, d2, d2);
    r.pass("topos", "exp-global-sections", "global sections of d2^d2",
           std::to_string(cat.global_sections(e.obj).size()) + " global sections");
  }
  return r;
}

Report topos_dispatch(const Instance& in, const std::string& which, const Options& o) {
  need_finite(in);
  const std::size_t max_n = std::min<std::size_t>(o.span_bound, 3);
  if (in.fiber == "heyting") {
    auto h = heyting_source(in.uord);
    if (!h) throw InstanceError("fiber \"heyting\" needs one sort whose base is a single Heyting order");
    return topos_command(HeytingFiber(*h), which, max_n);
  }
  if (in.uord.max_carrier() > 3) throw InstanceError("topos audits over D need carriers of size <= 3");
  return topos_command(d_fiber(in, true), which, max_n);
}

Report pca_morphism(const std::string& realizer, const Options& o) {
  SkPca p;
  auto e = eval_fuel(p, parse_term(realizer), o.fuel);
  if (!e.is_defined()) throw InstanceError("the realizer does not evaluate within the fuel");
  ApplicativeMorphism id{[](const SkElem& x, const SkElem& y) { return sk_equal(x, y); },
                         [](const SkElem& x) { return std::vector<SkElem>{x}; }, e.value};
  Report r = applicative_audit(p, id, o.samples / 2, o.fuel);
  auto m = applicative_to_meetmap(p, id, o.samples / 2, o.fuel);
  r.merge(m.report);
  if (m.meetmap) r.merge(relabel(meetmap_to_applicative(p, *m.meetmap, o.samples / 2, o.fuel).report, "pca", "roundtrip-"));
  return r;
}

Report pca_abstract(const std::string& term, const std::string& vars, const Options& o) {
  TermPtr t = parse_term(term);
  std::vector<std::string> xs;
  if (vars.empty()) {
    std::set<std::string> fv;
    free_vars(t, fv);
    xs.assign(fv.begin(), fv.end());
  } else {
    for (const auto& v : split(vars, ',')) xs.push_back(trim(v));
  }
  TermPtr ab = abstract_closed(xs, t);
  Report r;
  auto v = eval_fuel(SkPca(), ab, o.fuel);
  std::string detail = "\\*" + (xs.empty() ? std::string() : xs[0]);
  for (std::size_t k = 1; k < xs.size(); ++k) detail += " " + xs[k];
  detail += ". " + show_term(t) + " = " + show_term(ab);
  if (v.is_defined())
    r.pass("pca", "abstract", "bracket abstraction", detail + " -> " + sk_show(v.value));
  else
    r.unknown("pca", "abstract", "bracket abstraction", detail + " (normal form beyond fuel)");
  r.merge(abstraction_audit(o.samples, o.fuel));
  return r;
}

int emit(const Report& r, const Options& o) {
  std::cout << (o.format == "json" ? render_json(r) : render_text(r));
  return exit_code(r);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Audits for uniform preorders, their D fibers and realizability toposes"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  if (const char* env = std::getenv("REALIZ_FUEL")) {
    try {
      o.fuel = std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "error: REALIZ_FUEL is not a number\n";
      return 3;
    }
  }
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
  app.add_option("--fuel", o.fuel, "Evaluation steps per application (env REALIZ_FUEL)")->capture_default_str();
  app.add_option("--max-carrier", o.max_carrier, "Largest carrier accepted")->capture_default_str();
  app.add_option("--span-bound", o.span_bound, "Bound on index sets in span searches")->capture_default_str();
  app.add_option("--jobs", o.jobs, "Worker threads for the suite")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--samples", o.samples, "Sample budget for infinite carriers")->capture_default_str();

  std::function<Report(const Instance&)> action;
  auto with_instance = [&](CLI::App* sub, std::function<Report(const Instance&)> f) {
    sub->add_option("instance", o.instance, "Instance file (JSON)")->required();
    sub->callback([&action, f] { action = f; });
  };
  std::string p_arg, q_arg, g_arg, h_arg, term_arg, vars_arg, out_arg, inputs_arg, realizer_arg = "\\*x y. x y";
  std::vector<std::string> tuples;

  with_instance(app.add_subcommand("validate", "Check the base is closed under identity and composition"),
                [&](const Instance& in) {
                  if (in.effective()) {
                    Report r;
                    r.pass("uord", "validate", "effective instance", "the SK configuration is built in");
                    return r;
                  }
                  Report r = validate_uord(in.uord);
                  if (in.meets) r.merge(verify_meets(in.uord, *in.meets));
                  return r;
                });

  auto* ent = app.add_subcommand("entails", "Decide p |- q for predicates SORT:a,b,...");
  ent->add_option("--p", p_arg, "Antecedent SORT:a,b,...")->required();
  ent->add_option("--q", q_arg, "Consequent SORT:a,b,...")->required();
  with_instance(ent, [&](const Instance& in) {
    need_finite(in);
    auto p = predicate_arg(in.uord, p_arg), q = predicate_arg(in.uord, q_arg);
    if (p.index_size() != q.index_size()) throw InstanceError("--p and --q have different index sets");
    Report r;
    auto w = entails_witness(in.uord, p, q);
    if (w)
      r.pass("uord", "entails", "p |- q", "covered by base #" + std::to_string(*w));
    else
      r.fail("uord", "entails", "p |- q",
             "no base relation contains " + describe_pairs(predicate_pairs(in.uord, p, q), in.uord.carriers[p.sort],
                                                           in.uord.carriers[q.sort]));
    return r;
  });

  with_instance(app.add_subcommand("meets-check", "Verify the meets block"), [&](const Instance& in) {
    need_finite(in);
    const auto& m = need_meets(in);
    Report r = verify_meets(in.uord, m);
    r.merge(injectivity_check(in.uord, m));
    r.merge(meet_predicate_audit(in.uord, m, std::min<std::size_t>(o.span_bound, 3)));
    return r;
  });

  auto* clone = app.add_subcommand("clone", "Clone operations");
  clone->require_subcommand(1);
  auto* member = clone->add_subcommand("member", "Decide membership of a relation in the clone");
  member->add_option("--inputs", inputs_arg, "Input sorts, comma separated (empty for nullary)");
  member->add_option("--output", out_arg, "Output sort")->required();
  member->add_option("--tuple", tuples, "A pair \"a1 a2 ... -> b\"; repeatable");
  with_instance(member, [&](const Instance& in) {
    need_finite(in);
    const auto& m = need_meets(in);
    CloneRel q;
    if (!trim(inputs_arg).empty())
      for (const auto& s : split(inputs_arg, ',')) q.inputs.push_back(sort_arg(in.uord, s));
    q.output = sort_arg(in.uord, out_arg);
    auto dims = input_dims(in.uord, q.inputs);
    q.rel = Rel(product_size(dims), in.uord.size(q.output));
    for (const auto& t : tuples) {
      auto arrow = t.find("->");
      if (arrow == std::string::npos) throw InstanceError("tuple \"" + t + "\" lacks \"->\"");
      auto as = words(t.substr(0, arrow));
      if (as.size() != q.inputs.size()) throw InstanceError("tuple \"" + t + "\" has the wrong arity");
      std::vector<std::size_t> coords;
      for (std::size_t k = 0; k < as.size(); ++k) coords.push_back(elem_arg(in.uord.carriers[q.inputs[k]], as[k]));
      q.rel.set(encode(dims, coords), elem_arg(in.uord.carriers[q.output], t.substr(arrow + 2)));
    }
    Report r;
    if (auto k = clone_member(in.uord, m, q))
      r.pass("meets", "clone-member", "relation lies in the clone", "below the generator of base #" + std::to_string(*k));
    else
      r.fail("meets", "clone-member", "relation lies in the clone", "no base generator covers the relation");
    return r;
  });

  with_instance(app.add_subcommand("designated", "Designated truth values of each sort"), [&](const Instance& in) {
    need_finite(in);
    Report r;
    r.pass("meets", "designated", "designated truth values",
           subsets_label(in.uord, designated_truth_values(in.uord, need_meets(in))));
    return r;
  });

  auto* d = app.add_subcommand("d", "The downset construction and its fiber");
  d->require_subcommand(1);
  with_instance(d->add_subcommand("build", "Carriers of D and their lifted bases"), [&](const Instance& in) {
    need_finite(in);
    auto pd = build_D(in.uord, PowerKind::Down, o.max_carrier);
    Report r = validate_uord(pd.uord);
    std::string s;
    for (std::size_t i = 0; i < pd.uord.num_sorts(); ++i)
      s += (i ? "; " : "") + pd.uord.sorts[i] + ": " + std::to_string(pd.uord.size(i)) + " subsets, " +
           std::to_string(pd.uord.bases(i, i).size()) + " lifted bases";
    r.pass("dlogic", "build", "D carriers", s);
    return r;
  });
  with_instance(d->add_subcommand("monad-audit", "Monad, KZ and unit laws"), [&](const Instance& in) {
    need_finite(in);
    return monad_audit(in.uord);
  });
  with_instance(d->add_subcommand("frame-audit", "Frame structure of the D fiber"), [&](const Instance& in) {
    auto f = d_fiber(in, false);
    Report r = frame_audit(f, 2);
    r.merge(frobenius_rectangle(in.uord, *in.meets));
    r.merge(geometric_inclusion_audit(in.uord, *in.meets));
    return r;
  });
  auto* prime = d->add_subcommand("prime", "Existential primality of SORT:a b|b|...");
  prime->add_option("--p", p_arg, "Predicate, one space separated subset per index")->required();
  with_instance(prime, [&](const Instance& in) {
    auto f = d_fiber(in, false);
    auto p = dpred_arg(in.uord, p_arg);
    auto res = is_prime(f, p, o.span_bound);
    Report r;
    r.add("dlogic", "prime", "existentially prime", res.verdict, res.verdict == Verdict::Pass ? "" : res.detail,
          res.verdict == Verdict::Pass ? res.detail : "");
    return r;
  });
  with_instance(d->add_subcommand("gamma", "Global sections against gamma"), [&](const Instance& in) {
    if (in.uord.max_carrier() > 3) throw InstanceError("gamma needs carriers of size <= 3");
    PerCategory<DFiber> cat(d_fiber(in, true));
    return gamma_audit(cat, 2);
  });

  auto* rc = app.add_subcommand("relcomp", "Relational completeness");
  rc->require_subcommand(1);
  with_instance(rc->add_subcommand("check", "Check the rc block"), [&](const Instance& in) {
    need_finite(in);
    if (!in.rc) throw InstanceError("this command needs an \"rc\" block");
    return check_relcomp(in.uord, need_meets(in), *in.rc);
  });
  with_instance(rc->add_subcommand("search", "Search for an arrow and application"), [&](const Instance& in) {
    need_finite(in);
    const auto& m = need_meets(in);
    auto s = search_relcomp(in.uord, m);
    Report r;
    if (s.found) {
      Instance shown = in;
      shown.rc = s.found;
      r.pass("relcomp", "relcomp-search", "an arrow and application exist", instance_json(shown)["rc"].dump());
    } else {
      r.fail("relcomp", "relcomp-search", "an arrow and application exist", s.witness);
    }
    return r;
  });
  with_instance(rc->add_subcommand("synth", "Synthesized implication and forall"), [&](const Instance& in) {
    auto f = d_fiber(in, true);
    Report r = synth_audit(f, in.uord.max_carrier() <= 4 ? 2 : 1);
    if (auto h = heyting_source(in.uord)) r.merge(heyting_agreement_audit(*h, 2));
    return r;
  });
  with_instance(rc->add_subcommand("extract-pca", "Extract a typed pca and its sub-pca"), [&](const Instance& in) {
    if (in.effective()) {
      auto ex = extract_pca(EffectiveUord(o.fuel));
      Report r = relabel(check_typed_pca(ex.pca, o.samples, o.fuel), "relcomp", "extract-");
      r.merge(relabel(check_sub_pca(ex.sub, o.samples, o.fuel), "relcomp", "extract-"));
      return r;
    }
    auto rcd = relcomp_of(in);
    Report r;
    if (!rcd) {
      r.fail("relcomp", "extract-pca", "extraction of a typed pca", "the instance is not relationally complete");
      return r;
    }
    try {
      auto ex = extract_pca(in.uord, *in.meets, *rcd);
      r = relabel(check_typed_pca(ex.pca, o.samples, o.fuel), "relcomp", "extract-");
      r.merge(relabel(check_sub_pca(ex.sub, o.samples, o.fuel), "relcomp", "extract-"));
    } catch (const std::invalid_argument& e) {
      r.fail("relcomp", "extract-pca", "extraction of a typed pca", e.what());
    }
    return r;
  });

  auto* topos = app.add_subcommand("topos", "Audits of the realizability topos");
  topos->require_subcommand(1);
  for (const char* which : {"limits", "exactness", "assemblies", "notnot", "exp"}) {
    std::string w = which;
    with_instance(topos->add_subcommand(w, "Topos " + w + " audits"),
                  [&, w](const Instance& in) { return topos_dispatch(in, w, o); });
  }

  auto* dist = app.add_subcommand("dist", "Uniform distributors");
  dist->require_subcommand(1);
  auto* dcomp = dist->add_subcommand("compose", "Compose two named distributors (diagrammatic order)");
  dcomp->add_option("--first", g_arg, "First distributor")->required();
  dcomp->add_option("--second", h_arg, "Second distributor")->required();
  with_instance(dcomp, [&](const Instance& in) {
    auto c = dist_compose(dist_arg(in, g_arg), dist_arg(in, h_arg));
    Report r;
    if (auto v = distributor_violation(c))
      r.fail("udist", "compose", "composite is a distributor", *v);
    else
      r.pass("udist", "compose", "composite is a distributor", dist_json(c).dump());
    return r;
  });
  auto* dadj = dist->add_subcommand("adjoint", "Decide whether one distributor is left adjoint to another");
  dadj->add_option("--left", g_arg, "Left distributor")->required();
  dadj->add_option("--right", h_arg, "Right distributor")->required();
  with_instance(dadj, [&](const Instance& in) {
    const auto& g = dist_arg(in, g_arg);
    const auto& h = dist_arg(in, h_arg);
    Report r = adjunction_audit(g, h);
    auto s = adjoint_search(g, h);
    r.add("udist", "adjoint-search", "the adjunction comes from a monotone map", s.verdict,
          s.verdict == Verdict::Pass ? "" : s.detail, s.verdict == Verdict::Pass ? s.detail : "");
    return r;
  });
  with_instance(dist->add_subcommand("dual-audit", "Compact closure unit and counit"), [&](const Instance& in) {
    need_finite(in);
    return dual_audit(in.uord);
  });

  auto* pca = app.add_subcommand("pca", "The SK pca");
  pca->require_subcommand(1);
  auto* axioms = pca->add_subcommand("axioms", "Typed pca axioms on enumerated SK terms");
  axioms->callback([&] { action = [&](const Instance&) { return check_typed_pca(sk_typed(SkPca(), o.fuel), o.samples, o.fuel); }; });
  auto* abs = pca->add_subcommand("abstract", "Bracket abstraction of a term");
  abs->add_option("--term", term_arg, "Term over K, S, I and variables")->required();
  abs->add_option("--vars", vars_arg, "Variables to abstract, comma separated (default: all free)");
  abs->callback([&] { action = [&](const Instance&) { return pca_abstract(term_arg, vars_arg, o); }; });
  auto* morph = pca->add_subcommand("morphism", "Applicative morphism and meet-map certificates");
  morph->add_option("--realizer", realizer_arg, "Realizer of the identity morphism")->capture_default_str();
  morph->callback([&] { action = [&](const Instance&) { return pca_morphism(realizer_arg, o); }; });

  with_instance(app.add_subcommand("suite", "Every audit applicable to the instance"), [&](const Instance& in) {
    SuiteOptions so;
    so.fuel = in.fuel && !app.get_option("--fuel")->count() ? *in.fuel : o.fuel;
    so.max_carrier = o.max_carrier;
    so.span_bound = o.span_bound;
    so.jobs = o.jobs;
    so.samples = o.samples;
    return run_suite(in, so);
  });

  std::string dot;
  with_instance(app.add_subcommand("export-dot", "Graphviz rendering of the base relations"), [&](const Instance& in) {
    need_finite(in);
    dot = to_dot(in.uord, in.name.empty() ? "uord" : in.name);
    return Report{};
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return e.get_exit_code() == 0 ? rc : 3;
  }
  try {
    Instance in;
    if (!o.instance.empty()) {
      in = load_instance(o.instance);
      if (!in.effective() && in.uord.max_carrier() > o.max_carrier)
        throw InstanceError(o.instance + ": a carrier exceeds --max-carrier " + std::to_string(o.max_carrier));
    }
    Stopwatch w;
    Report r = action(in);
    const double ms = w.ms();
    for (auto& c : r.checks)
      if (c.elapsed_ms == 0.0) c.elapsed_ms = ms;
    if (!dot.empty()) {
      std::cout << dot;
      return 0;
    }
    return emit(r, o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
