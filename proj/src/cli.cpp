#include "cgc/cli.hpp"

#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "cgc/chains.hpp"
#include "cgc/splitting.hpp"
#include "cgc/text.hpp"
#include "cgc/verify.hpp"
#include "cgc/version.hpp"

namespace cgc {

Json CommandSpec::echo() const {
  Json j;
  j["subcommand"] = subcommand;
  j["groups"] = groups;
  j["pair"] = pair;
  j["to_pair"] = to_pair;
  j["metric"] = metric;
  j["gens"] = gens;
  j["scales"] = scales;
  j["unsafe_scales"] = unsafe_scales;
  j["schedule"] = schedule;
  j["grid"] = grid;
  j["s"] = s;
  j["suite"] = suite;
  j["fixture"] = fixture;
  j["compare"] = compare;
  j["k_list"] = k_list;
  j["bound"] = bound;
  j["n_max"] = n_max;
  j["depth"] = depth;
  j["h_bound"] = h_bound;
  j["c_lo"] = c_lo;
  j["c_hi"] = c_hi;
  j["start"] = start;
  j["elements"] = elements;
  j["format"] = format;
  j["output"] = output;
  return j;
}

namespace {

// --- small parsers ----------------------------------------------------------

Rat parse_rat(const std::string& text) {
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rat(Int(text));
    Int n(text.substr(0, slash));
    Int d(text.substr(slash + 1));
    if (d <= 0) throw std::invalid_argument("nonpositive denominator");
    return Rat(n, d);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad rational '" + text + "'");
  }
}

std::vector<Rat> parse_grid(const std::string& text) {
  std::vector<Rat> grid;
  auto dots = text.find("..");
  if (dots != std::string::npos) {
    Int lo(text.substr(0, dots));
    Int hi(text.substr(dots + 2));
    for (Int v = lo; v <= hi; ++v) grid.emplace_back(v);
  } else {
    std::stringstream in(text);
    std::string tok;
    while (std::getline(in, tok, ','))
      if (!tok.empty()) grid.push_back(parse_rat(tok));
  }
  if (grid.empty()) throw std::invalid_argument("empty delta grid");
  for (size_t i = 1; i < grid.size(); ++i)
    if (grid[i] <= grid[i - 1])
      throw std::invalid_argument("delta grid must be strictly increasing");
  return grid;
}

std::vector<Int> parse_schedule(const std::string& text) {
  std::vector<Int> out;
  std::stringstream in(text);
  std::string tok;
  while (std::getline(in, tok, ','))
    if (!tok.empty()) out.emplace_back(tok);
  return out;
}

std::vector<Rat> parse_rat_list(const std::string& text) {
  std::vector<Rat> out;
  std::stringstream in(text);
  std::string tok;
  while (std::getline(in, tok, ','))
    if (!tok.empty()) out.push_back(parse_rat(tok));
  return out;
}

// --- metric construction ----------------------------------------------------

std::vector<Element> default_word_gens(const GroupDescriptor& G) {
  if (G.kind != GroupKind::IntPower)
    throw std::invalid_argument(
        "word metric needs --gens for groups without a standard basis");
  std::vector<Element> gens;
  for (long i = 0; i < G.rank_n; ++i) {
    std::vector<Int> v(static_cast<size_t>(G.rank_n), Int(0));
    v[static_cast<size_t>(i)] = 1;
    gens.push_back(Element{IntVec{v}});
    v[static_cast<size_t>(i)] = -1;
    gens.push_back(Element{IntVec{v}});
  }
  return gens;
}

std::vector<Element> symmetrize(const GroupDescriptor& G,
                                std::vector<Element> gens) {
  std::set<Element, ElementLess> all(gens.begin(), gens.end());
  for (const Element& g : gens) all.insert(negate(G, g));
  return std::vector<Element>(all.begin(), all.end());
}

OddPairSpec build_pair(const std::string& pair_text, long depth,
                       const std::string& schedule_text,
                       const std::string& scales_text) {
  auto bar = pair_text.find('|');
  if (bar == std::string::npos)
    throw std::invalid_argument("pair must be written \"ambient|subgroup\"");
  GroupDescriptor ambient = parse_descriptor(pair_text.substr(0, bar));
  GroupDescriptor sub = parse_descriptor(pair_text.substr(bar + 1));
  std::vector<Rat> scales =
      scales_text.empty() ? std::vector<Rat>{} : parse_rat_list(scales_text);
  std::vector<Int> schedule = schedule_text.empty()
                                  ? default_odd_schedule(depth)
                                  : parse_schedule(schedule_text);

  if (ambient.kind == GroupKind::Localized &&
      sub == GroupDescriptor::int_power(1))
    return make_localized_pair(ambient.prime, depth, std::move(scales));
  if (ambient.kind == GroupKind::Rationals &&
      sub == GroupDescriptor::localized(2))
    return make_rationals_over_dyadic_pair(std::move(schedule),
                                           std::move(scales));
  if (ambient.kind == GroupKind::RationalsModOne &&
      sub == GroupDescriptor::prufer(2))
    return make_qmodz_over_prufer2_pair(std::move(schedule), std::move(scales));
  if (ambient.kind == GroupKind::DirectSum && ambient.parts.size() == 2 &&
      ambient.parts[0] == sub) {
    Metric h_metric = word_metric(sub, default_word_gens(sub));
    return make_split_sum_pair(sub, std::move(h_metric), ambient.parts[1],
                               depth, std::move(scales));
  }
  throw std::invalid_argument(
      "unsupported pair; expected Z[1/p]|Z, Q|Z[1/2], Q/Z|Z(2^inf), or "
      "Sum(H, T)|H with H = Z^n");
}

struct BuiltMetric {
  Metric metric;
  std::optional<OddPairSpec> pair;
};

BuiltMetric build_metric(const CommandSpec& spec, const GroupDescriptor* G) {
  BuiltMetric built;
  if (spec.metric == "word") {
    if (!G) throw std::invalid_argument("word metric needs --group");
    std::vector<Element> gens;
    for (const std::string& t : spec.gens) gens.push_back(parse_element(*G, t));
    if (gens.empty()) gens = default_word_gens(*G);
    built.metric = word_metric(*G, symmetrize(*G, std::move(gens)));
  } else if (spec.metric == "dyadic") {
    if (G && !(*G == GroupDescriptor::localized(2)))
      throw std::invalid_argument("the dyadic metric lives on Z[1/2]");
    built.metric = dyadic_metric();
  } else if (spec.metric == "prufer") {
    if (!G || G->kind != GroupKind::Prufer)
      throw std::invalid_argument("the prufer metric needs --group Prufer(p)");
    built.metric = prufer_metric(G->prime, parse_scale_rule(spec.scales));
  } else if (spec.metric == "chain") {
    if (!G) throw std::invalid_argument("chain metric needs --group");
    auto chain = std::make_shared<OneStepChain>(
        standard_chain(*G, parse_scale_rule(spec.scales), 64,
                       !spec.unsafe_scales));
    built.metric = chain_metric(std::move(chain));
  } else if (spec.metric == "pair") {
    if (spec.pair.empty())
      throw std::invalid_argument("pair metric needs --pair \"ambient|sub\"");
    built.pair = build_pair(spec.pair, spec.depth, spec.schedule, spec.scales);
    built.metric = pair_metric(*built.pair);
  } else {
    throw std::invalid_argument("unknown metric '" + spec.metric +
                                "' (word | dyadic | prufer | chain | pair)");
  }
  return built;
}

// --- output plumbing --------------------------------------------------------

struct Emitter {
  const CommandSpec& spec;
  std::ostream& out;

  // Renders one of the three formats; csv may be empty when the subcommand
  // has no tabular schema, in which case asking for csv is a usage error.
  int emit(const std::string& table, const std::string& csv,
           Json results) const {
    std::string body;
    if (spec.format == "table") {
      body = table;
    } else if (spec.format == "csv") {
      if (csv.empty())
        throw std::invalid_argument("this subcommand has no csv schema");
      body = csv;
    } else if (spec.format == "json") {
      Json doc = report_skeleton(spec.subcommand, spec.echo());
      doc["results"] = std::move(results);
      body = doc.dump(2) + "\n";
    } else {
      throw std::invalid_argument("unknown format '" + spec.format + "'");
    }
    if (spec.output.empty()) {
      out << body;
    } else {
      std::ofstream file(spec.output, std::ios::binary);
      if (!file)
        throw std::runtime_error("cannot open output file " + spec.output);
      file << body;
    }
    return 0;
  }
};

std::string join_elements(const std::vector<Element>& xs) {
  std::string s;
  for (const Element& x : xs) {
    if (!s.empty()) s += "\n";
    s += element_text(x);
  }
  s += "\n";
  return s;
}

std::string elements_csv(const std::vector<Element>& xs) {
  std::string s = "element\n";
  for (const Element& x : xs) s += csv_field(element_text(x)) + "\n";
  return s;
}

Json elements_json(const std::vector<Element>& xs) {
  Json arr = Json::array();
  for (const Element& x : xs) arr.push_back(element_text(x));
  return arr;
}

// --- simple subcommands -----------------------------------------------------

int cmd_norm(CommandSpec& spec, const Emitter& em, bool distance) {
  GroupDescriptor G = parse_descriptor(spec.groups.at(0));
  spec.groups[0] = descriptor_text(G);
  BuiltMetric built = build_metric(spec, &G);
  const GroupDescriptor& domain = built.metric.group;
  size_t need = distance ? 2 : 1;
  if (spec.elements.size() != need)
    throw std::invalid_argument(distance ? "dist takes two elements"
                                         : "norm takes one element");
  for (std::string& e : spec.elements)
    e = element_text(parse_element(domain, e));
  Rat value =
      distance ? built.metric.distance(parse_element(domain, spec.elements[0]),
                                       parse_element(domain, spec.elements[1]))
               : built.metric.norm(parse_element(domain, spec.elements[0]));
  Json results;
  results[distance ? "distance" : "norm"] = rat_text(value);
  results["metric"] = built.metric.name;
  return em.emit(rat_text(value) + "\n", {}, std::move(results));
}

int cmd_ball(CommandSpec& spec, const Emitter& em) {
  GroupDescriptor G = parse_descriptor(spec.groups.at(0));
  spec.groups[0] = descriptor_text(G);
  std::vector<Element> ball = enumerate_ball(G, spec.bound);
  Json results;
  results["count"] = ball.size();
  results["elements"] = elements_json(ball);
  return em.emit(join_elements(ball), elements_csv(ball), std::move(results));
}

std::string coeffs_text(const std::map<long, Int>& coeffs) {
  std::string s = "{";
  bool first = true;
  for (const auto& [i, r] : coeffs) {
    if (!first) s += ", ";
    first = false;
    s += std::to_string(i) + ":" + r.str();
  }
  return s + "}";
}

int cmd_decompose(CommandSpec& spec, const Emitter& em) {
  if (spec.pair.empty())
    throw std::invalid_argument("decompose needs --pair \"ambient|sub\"");
  OddPairSpec pair = build_pair(spec.pair, spec.depth, spec.schedule,
                                spec.scales);
  if (spec.elements.size() != 1)
    throw std::invalid_argument("decompose takes one element");
  Element g = parse_element(pair.ambient, spec.elements[0]);
  spec.elements[0] = element_text(g);
  Decomposition d = decompose(pair, g);
  std::string table = "h: " + element_text(d.h) + "\ncoeffs: " +
                      coeffs_text(d.coeffs) + "\n";
  Json results;
  results["h"] = element_text(d.h);
  Json coeffs = Json::object();
  for (const auto& [i, r] : d.coeffs) coeffs[std::to_string(i)] = r.str();
  results["coeffs"] = std::move(coeffs);
  results["norm"] = rat_text(pseudo_ultrametric_norm(pair, g));
  return em.emit(table, {}, std::move(results));
}

int cmd_split(CommandSpec& spec, const Emitter& em, bool inverse) {
  std::string kind = spec.suite.empty() ? "dyadic" : spec.suite;
  Json results;
  std::string table;
  if (kind == "dyadic") {
    if (inverse) {
      if (spec.elements.size() != 2)
        throw std::invalid_argument(
            "split --inverse takes the integer and the torsion class");
      Int m(spec.elements[0]);
      Element q = parse_element(GroupDescriptor::prufer(2), spec.elements[1]);
      Rat x = dyadic_unsplit(m, q.as<PruferVal>());
      table = rat_text(x) + "\n";
      results["value"] = rat_text(x);
    } else {
      if (spec.elements.size() != 1)
        throw std::invalid_argument("split takes one element");
      Rat x = parse_element(GroupDescriptor::localized(2), spec.elements[0])
                  .as<Rational>()
                  .v;
      spec.elements[0] = rat_text(x);
      auto [m, q] = dyadic_split(x);
      table = "(" + m.str() + ", " + element_text(Element{q}) + ")\n";
      results["integer"] = m.str();
      results["torsion"] = element_text(Element{q});
    }
  } else if (kind == "rational") {
    if (inverse)
      throw std::invalid_argument("split --inverse supports only kind dyadic");
    if (spec.elements.size() != 1)
      throw std::invalid_argument("split takes one element");
    std::vector<Int> schedule = spec.schedule.empty()
                                    ? default_odd_schedule(spec.depth)
                                    : parse_schedule(spec.schedule);
    RationalSplitContext ctx = make_rational_split_context(std::move(schedule));
    Rat x = parse_element(GroupDescriptor::rationals(), spec.elements[0])
                .as<Rational>()
                .v;
    spec.elements[0] = rat_text(x);
    auto [m, q] = rational_split(ctx, x);
    table = "(" + m.str() + ", " + element_text(Element{q}) + ")\n";
    results["integer"] = m.str();
    results["torsion"] = element_text(Element{q});
  } else if (kind == "odd") {
    if (spec.pair.empty())
      throw std::invalid_argument("split --kind odd needs --pair");
    OddPairSpec pair =
        build_pair(spec.pair, spec.depth, spec.schedule, spec.scales);
    if (inverse) {
      if (spec.elements.size() != 2)
        throw std::invalid_argument(
            "split --inverse takes the subgroup part and the quotient class");
      Element h = parse_element(pair.sub.group, spec.elements[0]);
      Element q = parse_element(pair.quotient_chain->base, spec.elements[1]);
      Element g = odd_split_inverse(pair, h, q);
      table = element_text(g) + "\n";
      results["value"] = element_text(g);
    } else {
      if (spec.elements.size() != 1)
        throw std::invalid_argument("split takes one element");
      Element g = parse_element(pair.ambient, spec.elements[0]);
      spec.elements[0] = element_text(g);
      auto [h, q] = odd_split(pair, g);
      table = "(" + element_text(h) + ", " + element_text(q) + ")\n";
      results["subgroup"] = element_text(h);
      results["quotient"] = element_text(q);
    }
  } else {
    throw std::invalid_argument("unknown split kind '" + kind +
                                "' (dyadic | rational | odd)");
  }
  return em.emit(table, {}, std::move(results));
}

int cmd_transfer(CommandSpec& spec, const Emitter& em) {
  if (spec.pair.empty() || spec.to_pair.empty())
    throw std::invalid_argument("transfer needs --from and --to pairs");
  OddPairSpec A = build_pair(spec.pair, spec.depth, spec.schedule, spec.scales);
  OddPairSpec B =
      build_pair(spec.to_pair, spec.depth, spec.schedule, spec.scales);
  if (!(A.sub.group == B.sub.group))
    throw std::invalid_argument(
        "transfer uses the identity on the common subgroup; the two pairs "
        "must share it");
  auto iso = [](const Element& h) { return h; };
  if (spec.elements.size() != 1)
    throw std::invalid_argument("transfer takes one element");
  Element g = parse_element(A.ambient, spec.elements[0]);
  spec.elements[0] = element_text(g);
  Element image = transfer(A, B, iso, g);
  Json results;
  results["image"] = element_text(image);
  return em.emit(element_text(image) + "\n", {}, std::move(results));
}

int cmd_components(CommandSpec& spec, const Emitter& em) {
  GroupDescriptor G = parse_descriptor(spec.groups.at(0));
  spec.groups[0] = descriptor_text(G);
  BuiltMetric built = build_metric(spec, &G);
  Rat s = parse_rat(spec.s);
  std::vector<Element> truncation = enumerate_ball(built.metric.group, spec.bound);
  Element base = spec.elements.empty()
                     ? identity(built.metric.group)
                     : parse_element(built.metric.group, spec.elements[0]);
  if (!spec.elements.empty()) spec.elements[0] = element_text(base);
  std::vector<Element> comp = scale_component(built.metric, truncation, s, base);
  Json results;
  results["truncation_size"] = truncation.size();
  results["component_size"] = comp.size();
  results["elements"] = elements_json(comp);
  return em.emit(join_elements(comp), elements_csv(comp), std::move(results));
}

std::function<Rat(long)> growth_candidate(const std::string& name) {
  if (name == "n") return [](long n) { return Rat(n); };
  if (name == "n^2") return [](long n) { return Rat(n) * Rat(n); };
  if (name == "n^3") return [](long n) { return Rat(n) * Rat(n) * Rat(n); };
  if (name == "const") return [](long) { return Rat(1); };
  throw std::invalid_argument("unknown growth candidate '" + name +
                              "' (n | n^2 | n^3 | const)");
}

int cmd_growth(CommandSpec& spec, const Emitter& em) {
  GroupDescriptor G = parse_descriptor(spec.groups.at(0));
  spec.groups[0] = descriptor_text(G);
  BuiltMetric built = build_metric(spec, &G);
  Rat s = parse_rat(spec.s);
  GrowthTable table = growth(G, built.metric, s, spec.n_max, spec.bound);
  Json results;
  results["growth"] = growth_json(table);
  int code = 0;
  std::string extra;
  if (!spec.compare.empty()) {
    GrowthCompareReport rep = growth_compare(
        table, growth_candidate(spec.compare), spec.c_lo, spec.c_hi,
        spec.start);
    Json cj;
    cj["candidate"] = spec.compare;
    cj["witnessed"] = rep.witnessed;
    if (rep.c) cj["c"] = *rep.c;
    cj["start"] = rep.start;
    cj["label"] = rep.label;
    results["compare"] = std::move(cj);
    extra = "compare vs " + spec.compare + ": " + rep.label +
            (rep.c ? " (C = " + std::to_string(*rep.c) + ")" : "") + "\n";
    if (!rep.witnessed) code = 1;
  }
  int emitted = em.emit(growth_text(table) + extra, growth_csv(table),
                        std::move(results));
  return emitted != 0 ? emitted : code;
}

int cmd_classify(CommandSpec& spec, const Emitter& em, bool embedding) {
  if (spec.groups.size() != 2)
    throw std::invalid_argument("two group descriptors are required");
  GroupDescriptor A = parse_descriptor(spec.groups[0]);
  GroupDescriptor B = parse_descriptor(spec.groups[1]);
  spec.groups[0] = descriptor_text(A);
  spec.groups[1] = descriptor_text(B);
  ClassificationVerdict v = embedding ? embeddable(A, B) : classify(A, B);
  return em.emit(verdict_text_block(v), {}, verdict_json(v));
}

int cmd_standardize(CommandSpec& spec, const Emitter& em) {
  GroupDescriptor G = parse_descriptor(spec.groups.at(0));
  spec.groups[0] = descriptor_text(G);
  Standardization st = standardize(G);
  std::vector<Element> sample = enumerate_ball(G, spec.bound);
  // The rewrite is an isometric bijection, not an isomorphism: digit
  // extraction does not commute with carries, so only round-trip and
  // distance preservation are required.
  long mismatches = 0;
  for (const Element& x : sample) {
    if (!(st.backward(st.forward(x)) == x)) ++mismatches;
    for (const Element& y : sample) {
      Rat src = ultrametric_distance(*st.refined, x, y);
      Rat dst = ultrametric_distance(*st.target_chain, st.forward(x),
                                     st.forward(y));
      if (src != dst) ++mismatches;
    }
  }
  std::string indexes;
  for (const Int& m : st.refined->indexes) {
    if (!indexes.empty()) indexes += ",";
    indexes += m.str();
  }
  Json results;
  results["target"] = descriptor_text(st.target);
  results["refined_indexes"] = indexes;
  results["sample_size"] = sample.size();
  results["mismatches"] = mismatches;
  std::string table = "target: " + descriptor_text(st.target) +
                      "\nrefined indexes: " + indexes +
                      "\nsample: " + std::to_string(sample.size()) +
                      " elements\nmismatches: " + std::to_string(mismatches) +
                      "\n";
  int code = mismatches == 0 ? 0 : 1;
  int emitted = em.emit(table, {}, std::move(results));
  return emitted != 0 ? emitted : code;
}

// --- verify suites ----------------------------------------------------------

Json scan_json(const AxiomScan& scan, const std::vector<Element>& sample) {
  Json j;
  j["violations"] = scan.violations;
  if (scan.first) {
    Json w;
    w["axiom"] = scan.first->axiom;
    w["x"] = element_text(sample[scan.first->i]);
    w["y"] = element_text(sample[scan.first->j]);
    j["witness"] = std::move(w);
  }
  return j;
}

std::string scan_text(const std::string& suite, const AxiomScan& scan,
                      const std::vector<Element>& sample) {
  std::string s = "suite: " + suite + "\nsample: " +
                  std::to_string(sample.size()) + " elements\nviolations: " +
                  std::to_string(scan.violations) + "\n";
  if (scan.first)
    s += "witness: " + scan.first->axiom + " at " +
         element_text(sample[scan.first->i]) + ", " +
         element_text(sample[scan.first->j]) + "\n";
  s += scan.ok() ? "result: pass\n" : "result: FAIL\n";
  return s;
}

int suite_norm_axioms(CommandSpec& spec, const Emitter& em, bool ultra) {
  std::optional<GroupDescriptor> G;
  if (!spec.groups.empty()) {
    G = parse_descriptor(spec.groups[0]);
    spec.groups[0] = descriptor_text(*G);
  }
  BuiltMetric built = build_metric(spec, G ? &*G : nullptr);
  std::vector<Element> sample = enumerate_ball(built.metric.group, spec.bound);
  AxiomScan scan = ultra ? strong_triangle(built.metric, sample)
                         : norm_axioms(built.metric, sample);
  int emitted = em.emit(scan_text(spec.suite, scan, sample), {},
                        scan_json(scan, sample));
  return emitted != 0 ? emitted : (scan.ok() ? 0 : 1);
}

int suite_dyadic_split(CommandSpec& spec, const Emitter& em) {
  std::vector<Element> sample =
      enumerate_ball(GroupDescriptor::localized(2), spec.bound);
  Metric dom = dyadic_metric();
  Metric cod = sum_metric({word_metric(GroupDescriptor::int_power(1),
                                       default_word_gens(
                                           GroupDescriptor::int_power(1))),
                           prufer_metric(2)});
  ElementMap f = [](const Element& x) {
    auto [m, q] = dyadic_split(x.as<Rational>().v);
    return Element{Tuple{Element{IntVec{{m}}}, Element{q}}};
  };
  ElementMap g = [](const Element& y) {
    const auto& t = y.as<Tuple>();
    return Element{Rational{
        dyadic_unsplit(t[0].as<IntVec>().c[0], t[1].as<PruferVal>())}};
  };
  std::vector<Rat> grid = parse_grid(spec.grid.empty() ? "1..8" : spec.grid);
  // The sharp two-sided control is eps(delta) = delta + 1: units of integer
  // distance appear when a fractional class crosses 0, in both directions.
  PredictedBound predicted = [](const Rat& d) { return d + 1; };
  std::string fwd_spec = "Z[1/2] ball " + std::to_string(spec.bound);
  ControlCertificate forward =
      control_function(f, dom, cod, sample, grid, predicted, fwd_spec);
  auto [k1, k2] = displacement(f, g, sample, dom, cod);
  forward.k1 = k1;
  forward.k2 = k2;

  std::vector<Element> image;
  image.reserve(sample.size());
  for (const Element& x : sample) image.push_back(f(x));
  ControlCertificate backward = control_function(
      g, cod, dom, image, grid, predicted, "split image of " + fwd_spec);

  bool section_exact = k2 == 0;
  bool retraction_bounded = k1 <= 1;
  bool pass = forward.all_pass() && backward.all_pass() && section_exact &&
              retraction_bounded;

  Json results;
  results["forward"] = control_json(forward);
  results["backward"] = control_json(backward);
  results["section_exact"] = section_exact;
  results["retraction_bounded"] = retraction_bounded;
  results["pass"] = pass;
  std::string table = "forward control\n" + control_text(forward) +
                      "backward control\n" + control_text(backward) +
                      std::string("section exact: ") +
                      (section_exact ? "yes" : "NO") + "\n" +
                      "retraction displacement <= 1: " +
                      (retraction_bounded ? "yes" : "NO") + "\n" +
                      (pass ? "result: pass\n" : "result: FAIL\n");
  int emitted = em.emit(table, control_csv(forward), std::move(results));
  return emitted != 0 ? emitted : (pass ? 0 : 1);
}

// All elements h + sum r_i g_i with h from the subgroup ball and the
// coefficients over their full balanced ranges; by uniqueness this grid
// enumerates the truncation bijectively.
std::vector<Element> pair_truncation(const OddPairSpec& pair, long h_bound,
                                     long depth) {
  std::vector<Element> hs =
      enumerate_ball(pair.sub.group, static_cast<int>(h_bound));
  std::vector<Element> out;
  for (const Element& h : hs) out.push_back(pair.sub.from_sub(h));
  for (long i = 1; i <= depth; ++i) {
    const Int& k = pair.half_indexes[static_cast<size_t>(i - 1)];
    std::vector<Element> next;
    next.reserve(out.size() * static_cast<size_t>(2 * k + 1));
    for (const Element& g : out)
      for (Int r = -k; r <= k; ++r)
        next.push_back(add(pair.ambient, g,
                           scalar_mul(pair.ambient, r,
                                      pair.lifts[static_cast<size_t>(i - 1)])));
    out = std::move(next);
  }
  return out;
}

int suite_pair(CommandSpec& spec, const Emitter& em) {
  if (spec.pair.empty())
    throw std::invalid_argument("verify pair needs --pair \"ambient|sub\"");
  OddPairSpec pair =
      build_pair(spec.pair, spec.depth, spec.schedule, spec.scales);
  std::vector<Element> hs =
      enumerate_ball(pair.sub.group, static_cast<int>(spec.h_bound));

  // Round-trip and uniqueness: recompose is injective over the candidate
  // grid, and decompose returns exactly the generating candidate.
  long collisions = 0, mismatches = 0;
  std::map<Element, std::pair<Element, std::map<long, Int>>, ElementLess> seen;
  std::vector<std::map<long, Int>> coeff_grid{{}};
  for (long i = 1; i <= pair.depth(); ++i) {
    const Int& k = pair.half_indexes[static_cast<size_t>(i - 1)];
    std::vector<std::map<long, Int>> next;
    for (const auto& c : coeff_grid)
      for (Int r = -k; r <= k; ++r) {
        auto cc = c;
        if (r != 0) cc[i] = r;
        next.push_back(std::move(cc));
      }
    coeff_grid = std::move(next);
  }
  long total = 0;
  for (const Element& h : hs)
    for (const auto& coeffs : coeff_grid) {
      Decomposition cand;
      cand.h = h;
      cand.coeffs = coeffs;
      Element g = recompose(pair, cand);
      ++total;
      auto [it, fresh] = seen.try_emplace(g, h, coeffs);
      if (!fresh) {
        ++collisions;
        continue;
      }
      Decomposition back = decompose(pair, g);
      if (!(back.h == h) || back.coeffs != coeffs) ++mismatches;
    }
  bool pass = collisions == 0 && mismatches == 0;
  Json results;
  results["pair"] = pair.name;
  results["candidates"] = total;
  results["collisions"] = collisions;
  results["round_trip_mismatches"] = mismatches;
  results["pass"] = pass;
  std::string table =
      "pair: " + pair.name + "\ncandidates: " + std::to_string(total) +
      "\ncollisions: " + std::to_string(collisions) +
      "\nround-trip mismatches: " + std::to_string(mismatches) + "\n" +
      (pass ? "result: pass\n" : "result: FAIL\n");
  int emitted = em.emit(table, {}, std::move(results));
  return emitted != 0 ? emitted : (pass ? 0 : 1);
}

int suite_transfer(CommandSpec& spec, const Emitter& em) {
  if (spec.pair.empty())
    spec.pair = "Sum(Z^1, CyclicSum([3]; repeat-last))|Z^1";
  if (spec.to_pair.empty()) spec.to_pair = "Z[1/3]|Z^1";
  OddPairSpec A = build_pair(spec.pair, spec.depth, spec.schedule, spec.scales);
  OddPairSpec B =
      build_pair(spec.to_pair, spec.depth, spec.schedule, spec.scales);
  if (!(A.sub.group == B.sub.group))
    throw std::invalid_argument("the two pairs must share their subgroup");
  auto iso = [](const Element& h) { return h; };

  std::vector<Element> sample = pair_truncation(A, spec.h_bound, A.depth());
  ElementMap fwd = [&](const Element& x) { return transfer(A, B, iso, x); };
  ElementMap bwd = [&](const Element& y) { return transfer(B, A, iso, y); };

  long round_trip_failures = 0;
  std::set<Element, ElementLess> images;
  for (const Element& x : sample) {
    Element y = fwd(x);
    images.insert(y);
    if (!(bwd(y) == x)) ++round_trip_failures;
  }
  bool bijective = images.size() == sample.size() && round_trip_failures == 0;

  Metric dom = pair_metric(A);
  Metric cod = pair_metric(B);
  std::vector<Rat> grid = parse_grid(spec.k_list.empty() ? "1..3" : spec.k_list);
  PredictedBound predicted = [&](const Rat& K) {
    return transfer_bound(A, B, K);
  };
  ControlCertificate cert = control_function(
      fwd, dom, cod, sample, grid, predicted,
      spec.pair + " -> " + spec.to_pair + ", " + std::to_string(sample.size()) +
          " elements");
  bool pass = bijective && cert.all_pass();
  Json results;
  results["sample_size"] = sample.size();
  results["bijective"] = bijective;
  results["round_trip_failures"] = round_trip_failures;
  results["control"] = control_json(cert);
  results["pass"] = pass;
  std::string table =
      "sample: " + std::to_string(sample.size()) + " elements\nbijective: " +
      (bijective ? "yes" : "NO") + "\n" + control_text(cert) +
      (pass ? "result: pass\n" : "result: FAIL\n");
  int emitted = em.emit(table, control_csv(cert), std::move(results));
  return emitted != 0 ? emitted : (pass ? 0 : 1);
}

int suite_rational_split(CommandSpec& spec, const Emitter& em) {
  std::vector<Int> schedule = spec.schedule.empty()
                                  ? std::vector<Int>{3, 3}
                                  : parse_schedule(spec.schedule);
  RationalSplitContext ctx = make_rational_split_context(schedule);

  // Every rational with denominator dividing den_bound and |x| <= bound.
  Int den_bound = spec.h_bound;  // reused flag: the denominator product
  std::set<Rat> xs;
  for (Int a = -den_bound * spec.bound; a <= den_bound * spec.bound; ++a)
    xs.insert(Rat(a, den_bound));
  std::vector<Element> sample;
  for (const Rat& x : xs) sample.push_back(Element{Rational{x}});

  long wrong_fraction = 0, wrong_integer = 0;
  for (const Rat& x : xs) {
    auto [m, q] = rational_split(ctx, x);
    if (q.v != mod_one(x)) ++wrong_fraction;
    if (is_integer(x) && !(Rat(m) == x && q.v == 0)) ++wrong_integer;
  }

  Metric dom = pair_metric(ctx.over_dyadic);
  Metric cod = sum_metric(
      {word_metric(GroupDescriptor::int_power(1),
                   default_word_gens(GroupDescriptor::int_power(1))),
       chain_metric(std::make_shared<OneStepChain>(rationals_mod_one_chain(20)))});
  ElementMap f = [&](const Element& x) {
    auto [m, q] = rational_split(ctx, x.as<Rational>().v);
    return Element{Tuple{Element{IntVec{{m}}}, Element{q}}};
  };
  std::vector<Rat> grid = parse_grid(spec.grid.empty() ? "1..8" : spec.grid);
  ControlCertificate cert = control_function(
      f, dom, cod, sample, grid, {},
      "denominators dividing " + den_bound.str() + ", |x| <= " +
          std::to_string(spec.bound));
  bool monotone = true;
  for (size_t i = 1; i < cert.rows.size(); ++i)
    if (cert.rows[i].eps_max < cert.rows[i - 1].eps_max) monotone = false;
  bool pass = wrong_fraction == 0 && wrong_integer == 0 && monotone;
  Json results;
  results["sample_size"] = sample.size();
  results["fraction_mismatches"] = wrong_fraction;
  results["integer_mismatches"] = wrong_integer;
  results["control"] = control_json(cert);
  results["monotone"] = monotone;
  results["pass"] = pass;
  std::string table =
      "sample: " + std::to_string(sample.size()) +
      " elements\nfraction mismatches: " + std::to_string(wrong_fraction) +
      "\ninteger mismatches: " + std::to_string(wrong_integer) + "\n" +
      control_text(cert) + "monotone: " + (monotone ? "yes" : "NO") + "\n" +
      (pass ? "result: pass\n" : "result: FAIL\n");
  int emitted = em.emit(table, control_csv(cert), std::move(results));
  return emitted != 0 ? emitted : (pass ? 0 : 1);
}

int suite_even_split(CommandSpec& spec, const Emitter& em) {
  EvenEmbedding emb;
  if (spec.fixture == "identity") emb = even_embedding_identity();
  else if (spec.fixture == "integers") emb = even_embedding_integers();
  else if (spec.fixture == "diagonal") emb = even_embedding_diagonal();
  else if (spec.fixture == "bad-torsion") emb = even_embedding_bad_torsion();
  else
    throw std::invalid_argument(
        "unknown fixture '" + spec.fixture +
        "' (identity | integers | diagonal | bad-torsion)");
  EvenSplitReport rep;
  try {
    rep = even_split_restrict(emb, spec.bound);
  } catch (const std::invalid_argument& e) {
    std::string what = e.what();
    if (what.find("not a homomorphism") == std::string::npos) throw;
    Json results;
    results["fixture"] = spec.fixture;
    results["error"] = what;
    results["pass"] = false;
    int emitted = em.emit("error: " + what + "\nresult: FAIL\n", {},
                          std::move(results));
    return emitted != 0 ? emitted : 1;
  }
  bool pass = rep.pass();
  Json results;
  results["fixture"] = spec.fixture;
  results["source"] = descriptor_text(rep.source);
  results["target"] = descriptor_text(rep.target);
  results["rows"] = rep.rows.size();
  results["section_exact"] = rep.section_exact;
  results["max_displacement"] = rat_text(rep.max_displacement);
  results["image_in_sum"] = rep.image_in_sum;
  results["pass"] = pass;
  std::string table =
      "fixture: " + spec.fixture + "\nsource: " + descriptor_text(rep.source) +
      "\ntarget: " + descriptor_text(rep.target) +
      "\nrows: " + std::to_string(rep.rows.size()) +
      "\nsection exact: " + (rep.section_exact ? "yes" : "NO") +
      "\nmax displacement: " + rat_text(rep.max_displacement) + "\n" +
      (pass ? "result: pass\n" : "result: FAIL\n");
  int emitted = em.emit(table, {}, std::move(results));
  return emitted != 0 ? emitted : (pass ? 0 : 1);
}

int cmd_verify(CommandSpec& spec, const Emitter& em) {
  if (spec.suite == "norm-axioms") return suite_norm_axioms(spec, em, false);
  if (spec.suite == "ultrametric") return suite_norm_axioms(spec, em, true);
  if (spec.suite == "dyadic-split") return suite_dyadic_split(spec, em);
  if (spec.suite == "pair") return suite_pair(spec, em);
  if (spec.suite == "transfer") return suite_transfer(spec, em);
  if (spec.suite == "rational-split") return suite_rational_split(spec, em);
  if (spec.suite == "even-split") return suite_even_split(spec, em);
  throw std::invalid_argument(
      "unknown suite '" + spec.suite +
      "' (norm-axioms | ultrametric | dyadic-split | pair | transfer | "
      "rational-split | even-split)");
}

void add_common(CLI::App* sub, CommandSpec& spec) {
  sub->add_option("--format", spec.format, "table | csv | json");
  sub->add_option("--output", spec.output, "write the report to a file");
  sub->configurable(true);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CommandSpec spec;
  CLI::App app{"coarse geometry of countable abelian groups, certified on "
               "finite truncations"};
  app.set_version_flag("--version", kVersion);
  app.set_config("--config", "", "read options from an INI/TOML file");
  app.require_subcommand(1);

  auto* norm = app.add_subcommand("norm", "norm of an element");
  norm->add_option("--group", spec.groups, "group descriptor");
  norm->add_option("--metric", spec.metric, "metric kind")->required();
  norm->add_option("--gens", spec.gens, "word-metric generators");
  norm->add_option("--scales", spec.scales, "scale rule");
  norm->add_flag("--unsafe-scales", spec.unsafe_scales,
                 "skip scale validation");
  norm->add_option("--pair", spec.pair, "ambient|sub for pair metrics");
  norm->add_option("--depth", spec.depth, "pair chain depth");
  norm->add_option("--schedule", spec.schedule, "odd index schedule");
  norm->add_option("element", spec.elements, "element(s)");
  add_common(norm, spec);

  auto* dist = app.add_subcommand("dist", "distance between two elements");
  dist->add_option("--group", spec.groups, "group descriptor");
  dist->add_option("--metric", spec.metric, "metric kind")->required();
  dist->add_option("--gens", spec.gens, "word-metric generators");
  dist->add_option("--scales", spec.scales, "scale rule");
  dist->add_flag("--unsafe-scales", spec.unsafe_scales,
                 "skip scale validation");
  dist->add_option("--pair", spec.pair, "ambient|sub for pair metrics");
  dist->add_option("--depth", spec.depth, "pair chain depth");
  dist->add_option("--schedule", spec.schedule, "odd index schedule");
  dist->add_option("element", spec.elements, "element(s)");
  add_common(dist, spec);

  auto* ball = app.add_subcommand("ball", "enumerate a truncation");
  ball->add_option("--group", spec.groups, "group descriptor")->required();
  ball->add_option("--bound", spec.bound, "enumeration bound");
  add_common(ball, spec);

  auto* dec = app.add_subcommand("decompose", "coefficients over a pair");
  dec->add_option("--pair", spec.pair, "ambient|sub")->required();
  dec->add_option("--depth", spec.depth, "chain depth");
  dec->add_option("--schedule", spec.schedule, "odd index schedule");
  dec->add_option("--scales", spec.scales, "pair scale list");
  dec->add_option("element", spec.elements, "element");
  add_common(dec, spec);

  auto* split = app.add_subcommand("split", "split an element");
  split->add_option("--kind", spec.suite, "dyadic | rational | odd");
  split->add_option("--pair", spec.pair, "ambient|sub for odd splits");
  split->add_option("--depth", spec.depth, "chain depth");
  split->add_option("--schedule", spec.schedule, "odd index schedule");
  split->add_option("--scales", spec.scales, "pair scale list");
  bool inverse = false;
  split->add_flag("--inverse", inverse, "apply the section instead");
  split->add_option("element", spec.elements, "element or components");
  add_common(split, spec);

  auto* trans = app.add_subcommand("transfer", "map between aligned pairs");
  trans->add_option("--from", spec.pair, "source ambient|sub")->required();
  trans->add_option("--to", spec.to_pair, "target ambient|sub")->required();
  trans->add_option("--depth", spec.depth, "chain depth");
  trans->add_option("--schedule", spec.schedule, "odd index schedule");
  trans->add_option("--scales", spec.scales, "pair scale list");
  trans->add_option("element", spec.elements, "element");
  add_common(trans, spec);

  auto* comp = app.add_subcommand("components", "scale component of a point");
  comp->add_option("--group", spec.groups, "group descriptor")->required();
  comp->add_option("--metric", spec.metric, "metric kind")->required();
  comp->add_option("--gens", spec.gens, "word-metric generators");
  comp->add_option("--scales", spec.scales, "scale rule");
  comp->add_option("--pair", spec.pair, "ambient|sub for pair metrics");
  comp->add_option("--depth", spec.depth, "pair chain depth");
  comp->add_option("--schedule", spec.schedule, "odd index schedule");
  comp->add_option("--bound", spec.bound, "truncation bound");
  comp->add_option("--s", spec.s, "scale (strict step bound)")->required();
  comp->add_option("element", spec.elements, "base point (default identity)");
  add_common(comp, spec);

  auto* gro = app.add_subcommand("growth", "growth table at a scale");
  gro->add_option("--group", spec.groups, "group descriptor")->required();
  gro->add_option("--metric", spec.metric, "metric kind")->required();
  gro->add_option("--gens", spec.gens, "word-metric generators");
  gro->add_option("--scales", spec.scales, "scale rule");
  gro->add_option("--s", spec.s, "scale (strict step bound)")->required();
  gro->add_option("--n-max", spec.n_max, "largest chain length");
  gro->add_option("--bound", spec.bound, "truncation bound");
  gro->add_option("--compare", spec.compare, "candidate: n | n^2 | n^3 | const");
  gro->add_option("--c-lo", spec.c_lo, "smallest constant tried");
  gro->add_option("--c-hi", spec.c_hi, "largest constant tried");
  gro->add_option("--start", spec.start, "first compared index");
  add_common(gro, spec);

  auto* ver = app.add_subcommand("verify", "run a certification suite");
  ver->add_option("suite", spec.suite, "suite name")->required();
  ver->add_option("--group", spec.groups, "group descriptor");
  ver->add_option("--metric", spec.metric, "metric kind");
  ver->add_option("--gens", spec.gens, "word-metric generators");
  ver->add_option("--scales", spec.scales, "scale rule or pair scale list");
  ver->add_flag("--unsafe-scales", spec.unsafe_scales,
                "skip scale validation");
  ver->add_option("--pair", spec.pair, "ambient|sub");
  ver->add_option("--to", spec.to_pair, "target ambient|sub (transfer)");
  ver->add_option("--depth", spec.depth, "chain depth");
  ver->add_option("--schedule", spec.schedule, "odd index schedule");
  ver->add_option("--bound", spec.bound, "sample bound");
  ver->add_option("--h-bound", spec.h_bound,
                  "subgroup ball bound / denominator product");
  ver->add_option("--grid", spec.grid, "delta grid");
  ver->add_option("--k", spec.k_list, "scale checkpoints (transfer)");
  ver->add_option("--fixture", spec.fixture, "even-split fixture");
  add_common(ver, spec);

  auto* cls = app.add_subcommand("classify", "coarse equivalence verdict");
  cls->add_option("group", spec.groups, "two descriptors")->expected(2);
  add_common(cls, spec);

  auto* emb = app.add_subcommand("embed", "coarse embedding verdict");
  emb->add_option("group", spec.groups, "two descriptors")->expected(2);
  add_common(emb, spec);

  auto* std_ = app.add_subcommand("standardize",
                                  "rewrite as a sum of prime cyclic groups");
  std_->add_option("--group", spec.groups, "group descriptor")->required();
  std_->add_option("--bound", spec.bound, "verification sample bound");
  add_common(std_, spec);

  std::vector<const char*> argv;
  argv.push_back("coarse");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 2;
  }

  CLI::App* active = app.get_subcommands().at(0);
  spec.subcommand = active->get_name();
  // Suite-specific defaults where the shared flag default does not fit.
  if (active == ver) {
    if (spec.suite == "transfer" && ver->count("--depth") == 0) spec.depth = 3;
    if (spec.suite == "rational-split" && ver->count("--h-bound") == 0)
      spec.h_bound = 72;
  }
  Emitter em{spec, out};
  try {
    if (spec.subcommand == "norm") return cmd_norm(spec, em, false);
    if (spec.subcommand == "dist") return cmd_norm(spec, em, true);
    if (spec.subcommand == "ball") return cmd_ball(spec, em);
    if (spec.subcommand == "decompose") return cmd_decompose(spec, em);
    if (spec.subcommand == "split") return cmd_split(spec, em, inverse);
    if (spec.subcommand == "transfer") return cmd_transfer(spec, em);
    if (spec.subcommand == "components") return cmd_components(spec, em);
    if (spec.subcommand == "growth") return cmd_growth(spec, em);
    if (spec.subcommand == "verify") return cmd_verify(spec, em);
    if (spec.subcommand == "classify") return cmd_classify(spec, em, false);
    if (spec.subcommand == "embed") return cmd_classify(spec, em, true);
    if (spec.subcommand == "standardize") return cmd_standardize(spec, em);
    err << "unknown subcommand\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    err << "error: missing required argument (" << e.what() << ")\n";
    return 2;
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace cgc
