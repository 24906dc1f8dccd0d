// qmb: qualitative Markovian belief change on the command line.
//
// Exit codes: 0 success, 2 invalid input, 3 inconsistent evidence.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qmb/constraints.hpp"
#include "qmb/filter.hpp"
#include "qmb/io.hpp"
#include "qmb/model.hpp"
#include "qmb/oracle.hpp"
#include "qmb/scenarios.hpp"

namespace {

using namespace qmb;
namespace sc = qmb::scenarios;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitInconsistent = 3;

struct invalid_input : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void report_error(const std::string& message) {
  const char* color = std::getenv("QMB_COLOR");
  bool use_color = color && std::string(color) == "1";
  if (use_color)
    std::cerr << "\033[31merror:\033[0m " << message << "\n";
  else
    std::cerr << "error: " << message << "\n";
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw invalid_input("cannot read file: " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

transition_model load_model(const std::string& path) {
  auto m = parse_model(slurp(path));
  auto report = validate_model(m);
  if (!report.valid())
    throw invalid_input(path + ": model not normalized\n" +
                        format_validation(report, m.space()));
  return m;
}

proposition parse_prop(const state_space& sp, const std::string& csv) {
  std::vector<std::string> ids;
  std::size_t pos = 0;
  while (pos <= csv.size()) {
    auto comma = csv.find(',', pos);
    ids.push_back(csv.substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return proposition::of(sp, ids);
}

std::string describe_observation(const state_space& sp, const proposition& o) {
  if (o == proposition::full(sp.size())) return "*";
  std::string out;
  for (int s : o.members()) {
    if (!out.empty()) out += ",";
    out += sp.name(s);
  }
  return out;
}

std::string describe_evidence(const state_space& sp, const evidence& e) {
  std::string out;
  for (const auto& o : e) {
    if (!out.empty()) out += " ";
    out += describe_observation(sp, o);
  }
  return out;
}

std::vector<plaus_value> normalized_kappa(const std::vector<plaus_value>& vec) {
  extended_nat best = extended_nat::infinity();
  for (const auto& v : vec) best = min(best, v.as_kappa());
  if (best.is_infinite()) return vec;
  std::vector<plaus_value> out;
  for (const auto& v : vec)
    out.push_back(plaus_value::kappa(
        subtract(v.as_kappa(), best, extended_nat::infinity())));
  return out;
}

// --- subcommand bodies ------------------------------------------------------

int run_validate(const std::string& model_path) {
  auto m = parse_model(slurp(model_path));
  auto report = validate_model(m);
  if (!report.valid()) {
    std::cout << format_validation(report, m.space());
    return kExitInvalid;
  }
  std::cout << "OK\n";
  // unreachable states are a warning, not an error
  for (int s : report.unreachable)
    std::cout << "note: state " << m.space().name(s)
              << " is unreachable from init\n";
  return kExitOk;
}

int run_filter_cmd(const std::string& model_path, const std::string& obs_path,
                   bool trace, bool normalize) {
  auto m = load_model(model_path);
  auto e = parse_observations(slurp(obs_path), m.space());
  auto states = run_filter(m, e, inconsistency_mode::lenient);
  auto render = [&](const filter_state& f) {
    auto vec = (normalize && m.kind() == domain_kind::kappa())
                   ? normalized_kappa(f.vec)
                   : f.vec;
    return format_state_vector(m.space(), vec);
  };
  if (trace)
    for (const auto& f : states) std::cout << render(f) << "\n";
  if (states.size() != e.size() + 1 || !states.back().consistent) {
    report_error("inconsistent evidence at time " +
                 std::to_string(states.back().time));
    return kExitInconsistent;
  }
  if (!trace) std::cout << render(states.back()) << "\n";
  return kExitOk;
}

int run_believe(const std::string& model_path, const std::string& obs_path,
                int at, const std::string& prop_csv, bool use_oracle) {
  auto m = load_model(model_path);
  auto e = parse_observations(slurp(obs_path), m.space());
  auto a = parse_prop(m.space(), prop_csv);
  bool verdict =
      use_oracle ? oracle_believes(m, e, a, at) : believes(m, e, a, at);
  std::cout << (verdict ? "BELIEVED" : "NOT-BELIEVED") << "\n";
  return kExitOk;
}

int run_rank(const std::string& model_path, const std::string& obs_path,
             int at, const std::string& prop_csv) {
  auto m = load_model(model_path);
  if (m.kind() != domain_kind::kappa())
    throw invalid_input("rank is defined for kappa models only");
  auto e = parse_observations(slurp(obs_path), m.space());
  auto a = parse_prop(m.space(), prop_csv);
  std::cout << conditional_kappa(m, e, a, at).to_string() << "\n";
  return kExitOk;
}

int run_cons_safe(const std::string& cons_path) {
  auto c = parse_constraints(slurp(cons_path));
  auto res = check_safe(c);
  if (res.safe) {
    std::cout << "SAFE\n";
  } else {
    std::cout << "UNSAFE state=" << c.space().name(res.witness_state)
              << " dominator=" << c.space().name(res.dominator.from) << ","
              << c.space().name(res.dominator.to) << "\n";
  }
  return kExitOk;
}

const char* order_name(prefix_order v) {
  switch (v) {
    case prefix_order::below:
      return "BELOW";
    case prefix_order::above:
      return "ABOVE";
    case prefix_order::equivalent:
      return "EQUIV";
    case prefix_order::incomparable:
      return "INCOMPARABLE";
  }
  return "?";
}

int run_cons_compare(const std::string& cons_path, const std::string& lhs,
                     const std::string& rhs) {
  auto c = parse_constraints(slurp(cons_path));
  auto p = parse_prefix(c.space(), lhs);
  auto q = parse_prefix(c.space(), rhs);
  std::cout << order_name(compare_prefixes(c, p, q)) << "\n";
  return kExitOk;
}

int run_cons_max(const std::string& cons_path, const std::string& obs_path,
                 int horizon) {
  auto c = parse_constraints(slurp(cons_path));
  auto e = parse_observations(slurp(obs_path), c.space());
  if (static_cast<int>(e.size()) != horizon)
    throw invalid_input("--n " + std::to_string(horizon) +
                        " does not match the observation count " +
                        std::to_string(e.size()));
  for (const auto& p : max_prefixes(c, horizon, e))
    std::cout << format_prefix(c.space(), p) << "\n";
  return kExitOk;
}

const char* entailed_name(entailed_belief_result v) {
  switch (v) {
    case entailed_belief_result::believed:
      return "BELIEVED";
    case entailed_belief_result::not_believed:
      return "NOT-BELIEVED";
    case entailed_belief_result::undetermined:
      return "UNDETERMINED";
  }
  return "?";
}

int run_cons_believe(const std::string& cons_path, const std::string& obs_path,
                     int at, const std::string& prop_csv) {
  auto c = parse_constraints(slurp(cons_path));
  auto e = parse_observations(slurp(obs_path), c.space());
  auto a = parse_prop(c.space(), prop_csv);
  std::cout << entailed_name(entailed_belief(c, e, a, at)) << "\n";
  return kExitOk;
}

int run_cons_sample(const std::string& cons_path, std::uint64_t seed) {
  auto c = parse_constraints(slurp(cons_path));
  std::cout << format_model(sample_consistent_kappa(c, seed));
  return kExitOk;
}

// --- packaged demos ---------------------------------------------------------

std::string believe_word(bool b) { return b ? "BELIEVED" : "NOT-BELIEVED"; }

int demo_stolen_plain() {
  auto m = sc::car_model();
  const auto& sp = m.space();
  auto e = sc::evidence_stolen(sp);
  std::cout << "scenario: stolen-car\n";
  std::cout << "observations: " << describe_evidence(sp, e) << "\n";
  std::cout << "evidence rank: "
            << event_plausibility(m, 3, &e, nullptr, 0).to_string() << "\n";
  auto table = enumerate_prefixes(m, 3, &e);
  std::cout << "prefixes at conditional rank 0:\n";
  for (const auto& [path, v] : table.rows) {
    proposition here(sp.size());
    here.add(path[3]);
    if (conditional_kappa(m, e, here, 3) == extended_nat(0))
      std::cout << "  " << format_prefix(sp, path) << " (joint "
                << v.to_string() << ")\n";
  }
  std::cout << "believe not-parked at 3: "
            << believe_word(believes(m, e, sc::not_parked(sp), 3)) << "\n";
  std::cout << "believe parked at 1: "
            << believe_word(believes(m, e, sc::parked(sp), 1)) << "\n";
  std::cout << "believe not-parked at 1: "
            << believe_word(believes(m, e, sc::not_parked(sp), 1)) << "\n";
  std::cout << "verdict: stolen before time 3, no belief as to when\n";
  return kExitOk;
}

int demo_borrowed_plain() {
  auto m = sc::car_model();
  const auto& sp = m.space();
  auto e = sc::evidence_borrowed3(sp);
  std::cout << "scenario: borrowed-car\n";
  std::cout << "observations: " << describe_evidence(sp, e) << "\n";
  std::cout << "borrowed run PF>G>PE>PE rank: "
            << prefix_plausibility(m, parse_prefix(sp, "PF>G>PE>PE")).to_string()
            << "\n";
  for (const char* leak : {"PF>PF>PF>PE", "PF>PF>PE>PE", "PF>PE>PE>PE"})
    std::cout << "leak run " << leak << " rank: "
              << prefix_plausibility(m, parse_prefix(sp, leak)).to_string()
              << "\n";
  auto trace = run_filter(m, e);
  std::cout << "filter final: " << format_state_vector(sp, trace.back().vec)
            << "\n";
  std::cout << "believe not-parked at 1: "
            << believe_word(believes(m, e, sc::not_parked(sp), 1)) << "\n";
  std::cout << "verdict: borrowed\n";
  return kExitOk;
}

void print_maxima(const constraint_set& c, const evidence& e, int horizon) {
  auto maxima = max_prefixes(c, horizon, e);
  std::cout << "maximal prefixes:\n";
  for (const auto& p : maxima)
    std::cout << "  " << format_prefix(c.space(), p) << "\n";
  bool all_equiv = true;
  for (const auto& p : maxima)
    for (const auto& q : maxima)
      all_equiv =
          all_equiv && compare_prefixes(c, p, q) == prefix_order::equivalent;
  std::cout << "all maxima equivalent: " << (all_equiv ? "yes" : "no") << "\n";
}

int demo_stolen_constraints() {
  auto c = sc::car_partial_constraints();
  const auto& sp = c.space();
  auto e = sc::evidence_stolen(sp);
  std::cout << "scenario: stolen-car (order constraints only)\n";
  std::cout << "observations: " << describe_evidence(sp, e) << "\n";
  std::cout << "constraints: " << (check_safe(c).safe ? "SAFE" : "UNSAFE")
            << "\n";
  print_maxima(c, e, 3);
  std::cout << "believe not-parked at 3: "
            << entailed_name(entailed_belief(c, e, sc::not_parked(sp), 3))
            << "\n";
  std::cout << "believe parked at 1: "
            << entailed_name(entailed_belief(c, e, sc::parked(sp), 1)) << "\n";
  std::cout << "verdict: stolen before time 3, no belief as to when, in every "
               "consistent model\n";
  return kExitOk;
}

int demo_borrowed_constraints() {
  auto c = sc::car_partial_constraints();
  const auto& sp = c.space();
  auto e = sc::evidence_borrowed3(sp);
  std::cout << "scenario: borrowed-car (order constraints only)\n";
  std::cout << "observations: " << describe_evidence(sp, e) << "\n";
  std::cout << "constraints: " << (check_safe(c).safe ? "SAFE" : "UNSAFE")
            << "\n";
  print_maxima(c, e, 3);
  std::cout << "believe parked at 1: "
            << entailed_name(entailed_belief(c, e, sc::parked(sp), 1)) << "\n";
  auto leaky = sc::car_partial_leak_preferred();
  std::cout << "with a gas leak preferred over theft:\n";
  std::cout << "believe parked at 1: "
            << entailed_name(entailed_belief(leaky, e, sc::parked(sp), 1))
            << "\n";
  std::cout << "verdict: undetermined until the leak/theft order is given\n";
  return kExitOk;
}

int run_demo(const std::string& name, bool constraints) {
  if (name == "stolen-car")
    return constraints ? demo_stolen_constraints() : demo_stolen_plain();
  if (name == "borrowed-car")
    return constraints ? demo_borrowed_constraints() : demo_borrowed_plain();
  throw invalid_input("unknown demo: " + name);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qualitative Markovian belief change"};
  app.require_subcommand(1);

  std::string model_path, obs_path, cons_path, prop_csv, lhs, rhs, demo_name;
  int at = 0, horizon = 0;
  std::uint64_t seed = 0;
  bool trace = false, normalize = false, use_oracle = false,
       demo_constraints = false;

  auto* validate = app.add_subcommand("validate", "check a model file");
  validate->add_option("model", model_path)->required();

  auto* filter = app.add_subcommand("filter", "run the forward filter");
  filter->add_option("model", model_path)->required();
  filter->add_option("obs", obs_path)->required();
  filter->add_flag("--trace", trace, "print one line per time step");
  filter->add_flag("--normalize", normalize,
                   "display kappa vectors rescaled to min 0");

  auto* believe = app.add_subcommand("believe", "belief query");
  believe->add_option("model", model_path)->required();
  believe->add_option("obs", obs_path)->required();
  believe->add_option("--at", at, "time index")->required();
  believe->add_option("--prop", prop_csv, "comma-separated states")->required();
  believe->add_flag("--oracle", use_oracle, "answer by enumeration");

  auto* rank = app.add_subcommand("rank", "conditional kappa rank");
  rank->add_option("model", model_path)->required();
  rank->add_option("obs", obs_path)->required();
  rank->add_option("--at", at)->required();
  rank->add_option("--prop", prop_csv)->required();

  auto* cons = app.add_subcommand("cons", "partially specified transitions");
  cons->require_subcommand(1);
  auto* cons_safe = cons->add_subcommand("safe", "safety check");
  cons_safe->add_option("constraints", cons_path)->required();
  auto* cons_compare = cons->add_subcommand("compare", "prefix order verdict");
  cons_compare->add_option("constraints", cons_path)->required();
  cons_compare->add_option("--lhs", lhs, "prefix s0>s1>...")->required();
  cons_compare->add_option("--rhs", rhs, "prefix s0>s1>...")->required();
  auto* cons_max = cons->add_subcommand("max", "maximal consistent prefixes");
  cons_max->add_option("constraints", cons_path)->required();
  cons_max->add_option("obs", obs_path)->required();
  cons_max->add_option("--n", horizon, "horizon")->required();
  auto* cons_believe = cons->add_subcommand("believe", "entailed belief");
  cons_believe->add_option("constraints", cons_path)->required();
  cons_believe->add_option("obs", obs_path)->required();
  cons_believe->add_option("--at", at)->required();
  cons_believe->add_option("--prop", prop_csv)->required();
  auto* cons_sample = cons->add_subcommand("sample", "sample a kappa witness");
  cons_sample->add_option("constraints", cons_path)->required();
  cons_sample->add_option("--seed", seed)->required();

  auto* demo = app.add_subcommand("demo", "packaged scenarios");
  demo->add_option("name", demo_name, "stolen-car | borrowed-car")->required();
  demo->add_flag("--constraints", demo_constraints,
                 "order-constraint variant");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (validate->parsed()) return run_validate(model_path);
    if (filter->parsed())
      return run_filter_cmd(model_path, obs_path, trace, normalize);
    if (believe->parsed())
      return run_believe(model_path, obs_path, at, prop_csv, use_oracle);
    if (rank->parsed()) return run_rank(model_path, obs_path, at, prop_csv);
    if (cons->parsed()) {
      if (cons_safe->parsed()) return run_cons_safe(cons_path);
      if (cons_compare->parsed()) return run_cons_compare(cons_path, lhs, rhs);
      if (cons_max->parsed()) return run_cons_max(cons_path, obs_path, horizon);
      if (cons_believe->parsed())
        return run_cons_believe(cons_path, obs_path, at, prop_csv);
      if (cons_sample->parsed()) return run_cons_sample(cons_path, seed);
    }
    if (demo->parsed()) return run_demo(demo_name, demo_constraints);
  } catch (const inconsistent_evidence& e) {
    report_error(e.what());
    return kExitInconsistent;
  } catch (const std::exception& e) {
    report_error(e.what());
    return kExitInvalid;
  }
  return kExitInvalid;
}
