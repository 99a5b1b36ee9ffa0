#include "gpl/cli.hpp"

#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "gpl/convolution.hpp"
#include "gpl/deligne.hpp"
#include "gpl/dsl.hpp"
#include "gpl/finite_algebra.hpp"
#include "gpl/gauge.hpp"
#include "gpl/identities.hpp"
#include "gpl/parallel.hpp"

namespace gpl::cli {

namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& message) { raise(Errc::ConfigError, message); }

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot read " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    config_error(path + ": " + e.what());
  }
}

SpecPtr load_spec(const CommandConfig& c) {
  json j = load_json(c.spec_path);
  if (c.cap) j["weight_cap"] = *c.cap;
  return AlgebraSpec::from_json(j);
}

std::vector<Identity> selected_identities(const std::string& list, bool with_leibniz) {
  std::vector<Identity> out;
  if (list.empty()) {
    out.assign(std::begin(kCesaroIdentities), std::end(kCesaroIdentities));
    if (with_leibniz) out.push_back(Identity::Leibniz);
    return out;
  }
  std::stringstream in(list);
  for (std::string name; std::getline(in, name, ',');) {
    const auto which = parse_identity(name);
    if (!which) config_error("unknown identity " + name);
    out.push_back(*which);
  }
  return out;
}

AlgebraElement evaluate_text(const SpecPtr& spec, const std::string& text) {
  return dsl::evaluate(*dsl::parse(text), FreeModel(spec));
}

AlgebraElement gauge_part(const AlgebraElement& g) {
  if (!g.unit().is_one()) raise(Errc::NotUnital, "gauge element must have the form 1 + mu");
  return g.without_unit();
}

std::string paren(const std::string& s) { return "(" + s + ")"; }

json verify_identities(const CommandConfig& c, bool& passed) {
  const auto spec = load_spec(c);
  const FreeModel m(spec);
  const auto ids = selected_identities(c.identities, m.has_differential());
  return {{"ring", spec->ring().name()},
          {"weight_cap", spec->weight_cap()},
          {"seed", c.seed},
          {"identities", identity_suite(m, ids, c.trials, c.seed, passed)}};
}

json eval(const CommandConfig& c, bool& passed) {
  const auto spec = load_spec(c);
  const auto ast = dsl::parse(c.expr);
  const auto value = dsl::evaluate(*ast, FreeModel(spec));
  json out{{"expression", dsl::print(*ast)}, {"value", value.to_string()}};
  if (const auto d = value.without_unit().degree()) out["degree"] = *d;
  if (c.expect) {
    const auto expected = evaluate_text(spec, *c.expect);
    out["expected"] = expected.to_string();
    if (!(value == expected)) {
      passed = false;
      out["counterexample"] = {{"replay", paren(dsl::print(*ast)) + " - " + paren(expected.to_string())}};
    }
  }
  return out;
}

json gauge_inverse_cmd(const CommandConfig& c, bool& passed) {
  const auto spec = load_spec(c);
  const FreeModel m(spec);
  const auto g = evaluate_text(spec, c.expr);
  const auto mu = gauge_part(g);
  const auto inv = gauge_inverse(m, mu);
  const std::string gt = paren(g.to_string());
  const json checks{{"matches_solver", inv == gauge_inverse_solve(m, mu)},
                    {"left_inverse", gauge_product(m, inv, mu) == m.zero()},
                    {"right_inverse", gauge_product(m, mu, inv) == m.zero()}};
  json out{{"gauge", g.to_string()}, {"inverse", (AlgebraElement::one(spec) + inv).to_string()}, {"checks", checks}};
  if (!checks["left_inverse"].get<bool>()) out["counterexample"] = {{"replay", gt + "^(-1) (.) " + gt + " - 1"}};
  else if (!checks["right_inverse"].get<bool>()) out["counterexample"] = {{"replay", gt + " (.) " + gt + "^(-1) - 1"}};
  for (const auto& [k, v] : checks.items()) passed = passed && v.get<bool>();
  return out;
}

json gauge_act_cmd(const CommandConfig& c, bool& passed) {
  const auto spec = load_spec(c);
  const FreeModel m(spec);
  const auto g = evaluate_text(spec, c.gauge);
  const auto alpha = evaluate_text(spec, c.mc);
  const auto mu = gauge_part(g);
  const auto beta = gauge_act(m, mu, alpha);
  const std::string G = paren(g.to_string()), A = paren(alpha.to_string()), B = "act(" + G + ", " + A + ")";
  const std::vector<std::tuple<std::string, bool, std::string>> checks{
      {"result_is_mc", is_mc(m, beta), "d(" + B + ") + " + B + "{" + B + "}_1"},
      {"unit_acts_trivially", gauge_act(m, m.zero(), alpha) == alpha, "act(1, " + A + ") - " + A},
      {"inverse_undoes", gauge_act(m, gauge_inverse(m, mu), beta) == alpha, "act(" + G + "^(-1), " + B + ") - " + A},
      {"composition", gauge_act(m, gauge_product(m, mu, mu), alpha) == gauge_act(m, mu, beta),
       "act(" + G + " (.) " + G + ", " + A + ") - act(" + G + ", " + B + ")"}};
  json out{{"gauge", g.to_string()}, {"mc", alpha.to_string()}, {"result", beta.to_string()}, {"checks", json::object()}};
  for (const auto& [name, ok, replay] : checks) {
    out["checks"][name] = ok;
    if (!ok && passed) out["counterexample"] = {{"check", name}, {"replay", replay}};
    passed = passed && ok;
  }
  return out;
}

FiniteModel finite_model(const CommandConfig& c, json& out) {
  const auto spec = load_spec(c);
  if (spec->ring().kind() != RingKind::PrimeField) config_error("finite enumeration needs a spec over a prime field");
  const Ring coefficients = c.artinian.empty() ? spec->ring() : Ring::parse(c.artinian);
  out["ring"] = spec->ring().name();
  out["artinian"] = coefficients.name();
  out["weight_cap"] = spec->weight_cap();
  return FiniteModel(FiniteAlgebra::truncated_free(spec), coefficients);
}

json mc_enumerate(const CommandConfig& c) {
  json out;
  const FiniteModel m = finite_model(c, out);
  const auto n = static_cast<int>(m.linear_basis(1).size());
  const auto candidates = all_vectors(m.prime(), n, c.budget);
  std::vector<char> mc(candidates.size(), 0);
  parallel_for(candidates.size(), [&](std::size_t i) { mc[i] = is_mc(m, m.from_coordinates(candidates[i], 1)) ? 1 : 0; });
  json elements = json::array();
  for (std::size_t i = 0; i < candidates.size(); ++i)
    if (mc[i]) elements.push_back(candidates[i]);
  out["dimension"] = n;
  out["candidates"] = candidates.size();
  out["mc_count"] = elements.size();
  out["mc_elements"] = std::move(elements);
  return out;
}

// Orbits partition the MC set and |orbit| * |Aut| = |gauge group|.
json groupoid_checks(const GroupoidReport& r, bool& passed) {
  std::uint64_t covered = 0;
  bool stabilizer = true;
  for (const auto& o : r.orbits) {
    covered += o.size;
    stabilizer = stabilizer && o.size * o.aut_order == r.gauge_order;
  }
  const json checks{{"orbits_partition", covered == r.mc_elements.size()}, {"orbit_stabilizer", stabilizer}};
  passed = passed && covered == r.mc_elements.size() && stabilizer;
  return checks;
}

json deligne(const CommandConfig& c, bool& passed) {
  json out;
  const FiniteModel m = finite_model(c, out);
  const auto r = deligne_enumerate(m, {c.budget});
  out["groupoid"] = r.to_json();
  out["checks"] = groupoid_checks(r, passed);
  return out;
}

struct ConvolutionSetup {
  Convolution conv;
  json description;
};

ConvolutionSetup load_convolution(const CommandConfig& c) {
  const json j = load_json(c.spec_path);
  try {
    const auto p = j.value("prime", std::int64_t{2});
    const int cap = c.cap.value_or(j.value("arity_cap", 4));
    const auto& co = j.at("cooperad");
    const auto& op = j.at("operad");
    auto cp = co.is_string() ? cooperad_by_name(co.get<std::string>(), p, cap) : cooperad_from_json(co);
    auto pp = op.is_string() ? operad_by_name(op.get<std::string>(), p, cap) : operad_from_json(op);
    Convolution conv(std::move(cp), std::move(pp));
    json d{{"cooperad", co.is_string() ? co : json("inline")},
           {"operad", op.is_string() ? op : json("inline")},
           {"prime", conv.prime()},
           {"arity_cap", conv.cap()},
           {"dimension", conv.algebra()->dim()}};
    return {std::move(conv), std::move(d)};
  } catch (const json::exception& e) {
    config_error(std::string("convolution config: ") + e.what());
  }
}

json conv_check(const CommandConfig& c, bool& passed) {
  auto [conv, out] = load_convolution(c);
  const FiniteModel m = conv.model();
  std::mt19937_64 rng(c.seed);
  const int kmax = std::min(4, conv.cap() - 1);
  int comparisons = 0, failures = 0;
  json first;
  for (int trial = 0; trial < c.trials; ++trial) {
    const int df = static_cast<int>(rng() % 3);
    const int dg = conv.prime() == 2 ? static_cast<int>(rng() % 3) : 0;
    const auto f = conv.random_element(rng, df), g = conv.random_element(rng, dg);
    for (int k = 1; k <= kmax; ++k, ++comparisons) {
      if (conv.hom_brace(f, {{g, k}}) == conv.hom_brace_one_input(f, g, k)) continue;
      if (failures++ == 0)
        first = {{"f", conv.to_element(f).to_string()}, {"g", conv.to_element(g).to_string()}, {"k", k}};
    }
  }
  out["brace_paths"] = {{"comparisons", comparisons}, {"failures", failures}};
  if (failures) out["brace_paths"]["counterexample"] = first;
  passed = passed && failures == 0;

  failures = 0;
  for (int trial = 0; trial < c.trials; ++trial) {
    const auto f = conv.random_element(rng, 0), g = conv.random_element(rng, 0);
    const auto expected = conv.add(conv.unit(), conv.to_hom(gauge_product(m, conv.to_element(f), conv.to_element(g))));
    if (conv.circ_full(conv.add(conv.unit(), f), conv.add(conv.unit(), g)) == expected) continue;
    if (failures++ == 0) first = {{"f", conv.to_element(f).to_string()}, {"g", conv.to_element(g).to_string()}};
  }
  out["circ_full"] = {{"pairs", c.trials}, {"failures", failures}};
  if (failures) out["circ_full"]["counterexample"] = first;
  passed = passed && failures == 0;

  out["identities"] = identity_suite(m, selected_identities(c.identities, m.has_differential()), c.trials, c.seed, passed);
  return out;
}

json pi0(const CommandConfig& c, bool& passed) {
  auto [conv, out] = load_convolution(c);
  const auto report = conv.pi0({c.budget}, c.cofibrant);
  out["pi0"] = report.to_json();
  out["checks"] = groupoid_checks(report.groupoid, passed);
  // Homotopy certificates along random gauge actions.
  const FiniteModel m = conv.model();
  const auto& mcs = report.groupoid.mc_elements;
  std::mt19937_64 rng(c.seed);
  int certified = 0, attempted = 0;
  json first;
  for (int trial = 0; trial < c.trials && !mcs.empty(); ++trial, ++attempted) {
    const auto alpha = m.from_coordinates(mcs[rng() % mcs.size()], 1);
    const auto lambda = conv.random_element(rng, 0);
    const auto beta = gauge_act(m, conv.to_element(lambda), alpha);
    if (conv.homotopy_certificate(conv.to_hom(alpha), conv.to_hom(beta), lambda).holds) {
      ++certified;
    } else if (first.is_null()) {
      first = {{"alpha", alpha.to_string()}, {"lambda", conv.to_element(lambda).to_string()}, {"beta", beta.to_string()}};
    }
  }
  out["homotopy_certificates"] = {{"attempted", attempted}, {"certified", certified}};
  if (!first.is_null()) out["homotopy_certificates"]["counterexample"] = first;
  passed = passed && certified == attempted;
  return out;
}

json error_json(const std::string& code, std::string message) {
  const std::string prefix = code + ": ";
  if (message.starts_with(prefix)) message.erase(0, prefix.size());
  return {{"code", code}, {"message", message}};
}

void render(const json& j, const std::string& indent, std::string& out) {
  for (const auto& [key, value] : j.items()) {
    if (value.is_object()) {
      out += indent + key + ":\n";
      render(value, indent + "  ", out);
    } else if (value.is_array() && !value.empty() && value.front().is_object()) {
      out += indent + key + ":\n";
      for (const auto& item : value) {
        std::string nested;
        render(item, indent + "    ", nested);
        nested.replace(indent.size() + 2, 2, "- ");
        out += nested;
      }
    } else {
      out += indent + key + ": " + (value.is_string() ? value.get<std::string>() : value.dump()) + "\n";
    }
  }
}

}  // namespace

std::uint64_t identity_seed(std::uint64_t seed, Identity which) {
  return seed ^ ((static_cast<std::uint64_t>(which) + 1) * 0x9E3779B97F4A7C15ull);
}

Outcome execute(const CommandConfig& c) {
  Outcome o;
  bool passed = true;
  try {
    json body;
    if (c.command == "verify-identities") body = verify_identities(c, passed);
    else if (c.command == "eval") body = eval(c, passed);
    else if (c.command == "gauge-inverse") body = gauge_inverse_cmd(c, passed);
    else if (c.command == "gauge-act") body = gauge_act_cmd(c, passed);
    else if (c.command == "mc-enumerate") body = mc_enumerate(c);
    else if (c.command == "deligne") body = deligne(c, passed);
    else if (c.command == "conv-check") body = conv_check(c, passed);
    else if (c.command == "pi0") body = pi0(c, passed);
    else config_error("unknown command " + c.command);
    o.report = std::move(body);
    o.report["passed"] = passed;
    o.exit_code = passed ? kPassed : kAssertionFailed;
  } catch (const dsl::SourceError& e) {
    o.report = {{"error", error_json(errc_name(e.code()), e.what())}};
    o.report["error"]["line"] = e.span().line;
    o.report["error"]["column"] = e.span().column;
    o.exit_code = kConfigError;
  } catch (const Error& e) {
    o.report = {{"error", error_json(errc_name(e.code()), e.what())}};
    o.exit_code = kConfigError;
  } catch (const std::exception& e) {
    o.report = {{"error", error_json("InternalError", e.what())}};
    o.exit_code = kConfigError;
  }
  o.report["command"] = c.command;
  return o;
}

std::string render_text(const json& report) {
  std::string out;
  render(report, "", out);
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CommandConfig c;
  CLI::App app{"Weighted braces, gauge actions and Deligne groupoids", "gpl"};
  app.require_subcommand(1);
  auto common = [&](CLI::App* sub, bool needs_trials) {
    sub->add_option("--spec", c.spec_path, "JSON spec file")->required()->check(CLI::ExistingFile);
    sub->add_option("--format", c.format, "json or text")->check(CLI::IsMember({"json", "text"}));
    sub->add_option("--output", c.output, "write the report here instead of standard output");
    sub->add_option("--cap", c.cap, "override the weight or arity cap")->check(CLI::Range(1, 16));
    if (needs_trials) {
      sub->add_option("--trials", c.trials, "random instances per check")->check(CLI::Range(0, 1000000));
      sub->add_option("--seed", c.seed, "random seed");
    }
  };
  auto* verify = app.add_subcommand("verify-identities", "check the weighted-brace identities on random instances");
  common(verify, true);
  verify->add_option("--identities", c.identities, "comma-separated subset");
  auto* ev = app.add_subcommand("eval", "evaluate an expression");
  common(ev, false);
  ev->add_option("--expr", c.expr, "expression")->required();
  ev->add_option("--expect", c.expect, "assert that the value equals this expression");
  auto* inv = app.add_subcommand("gauge-inverse", "inverse of a gauge element 1 + mu");
  common(inv, false);
  inv->add_option("--expr", c.expr, "gauge element")->required();
  auto* act = app.add_subcommand("gauge-act", "gauge action on a Maurer-Cartan element");
  common(act, false);
  act->add_option("--gauge", c.gauge, "gauge element 1 + mu")->required();
  act->add_option("--mc", c.mc, "Maurer-Cartan element")->required();
  for (auto* sub : {app.add_subcommand("mc-enumerate", "all Maurer-Cartan elements of a finite model"),
                    app.add_subcommand("deligne", "Deligne groupoid of a finite model")}) {
    common(sub, false);
    sub->add_option("--artinian", c.artinian, "coefficient ring such as F2[t]/t^2");
    sub->add_option("--budget", c.budget, "largest enumerated set");
  }
  auto* conv = app.add_subcommand("conv-check", "coherence checks on a convolution algebra");
  common(conv, true);
  conv->add_option("--identities", c.identities, "comma-separated subset");
  auto* p0 = app.add_subcommand("pi0", "Deligne groupoid of a convolution algebra");
  common(p0, true);
  p0->add_option("--budget", c.budget, "largest enumerated set");
  p0->add_flag("--cofibrant", c.cofibrant, "record that the cooperad is cofibrant");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kPassed : kConfigError;
  }
  c.command = app.get_subcommands().front()->get_name();

  const Outcome o = execute(c);
  const std::string text = c.format == "text" ? render_text(o.report) : o.report.dump(2) + "\n";
  if (c.output.empty()) {
    out << text;
  } else {
    std::ofstream file(c.output);
    if (!(file << text)) {
      err << "cannot write " << c.output << "\n";
      return kConfigError;
    }
  }
  if (o.report.contains("error"))
    err << o.report["error"]["code"].get<std::string>() << ": " << o.report["error"]["message"].get<std::string>() << "\n";
  return o.exit_code;
}

}  // namespace gpl::cli
