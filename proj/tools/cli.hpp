#pragma once

// Command-line front end. All logic lives here so tests can drive it with
// in-memory streams; randeff_main.cpp only forwards argv.
//
// Exit codes: 0 holds, 1 fails, 2 input error, 3 guard or budget exceeded,
// 4 internal verification failure.

#include "randeff/randeff.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace randeff::cli {

enum ExitCode : int { kHolds = 0, kFails = 1, kInputError = 2, kInconclusive = 3, kInternal = 4 };

using json = nlohmann::ordered_json;

struct Options {
  bool json = false;
  std::int64_t budget_ms = 60000;
  std::uint64_t guard = kDefaultEnumerationGuard;
  std::string algorithm = "auto";
  std::size_t max_agents = kDefaultMaxAgents;
  std::size_t types_threshold = 4;
  std::uint64_t enumeration_threshold = 4096;
};

class VerificationFailure : public std::logic_error {
  using std::logic_error::logic_error;
};

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline Instance load(const std::string& path, const Options& opt) {
  const std::string text = read_file(path);
  try {
    return parse_instance(text, ParseOptions{opt.max_agents});
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

inline const RandomAssignment& need_assignment(const Instance& inst, const std::string& path) {
  if (!inst.assignment) throw InputError(path + ": instance has no assignment block");
  return *inst.assignment;
}

inline json assignment_json(const PreferenceProfile& profile, const DeterministicAssignment& d) {
  json out = json::object();
  for (std::size_t i = 0; i < d.size(); ++i) out[profile.agent_name(i)] = profile.object_name(d[i]);
  return out;
}

inline json cycle_json(const PreferenceProfile& profile, const ConsistentTradingCycle& c) {
  json out = json::array();
  for (const auto& e : c.entries) {
    out.push_back({{"agent", profile.agent_name(e.agent)},
                   {"holds", profile.object_name(e.held)},
                   {"wants", profile.object_name(e.desired)}});
  }
  return out;
}

inline json terms_json(const PreferenceProfile& profile, const Decomposition& dec) {
  json out = json::array();
  for (const auto& t : dec.terms) {
    out.push_back({{"weight", format_rational(t.weight)},
                   {"assignment", assignment_json(profile, t.assignment)}});
  }
  return out;
}

// Re-verifies a decomposition before it is printed.
inline void verify(const PreferenceProfile& profile, const RandomAssignment& p,
                   const Decomposition& dec, bool pareto) {
  if (!is_valid_decomposition(dec, p)) {
    throw VerificationFailure("decomposition does not reconstruct the assignment");
  }
  if (pareto) {
    for (const auto& t : dec.terms) {
      if (!is_pareto_optimal(profile, t.assignment)) {
        throw VerificationFailure("decomposition term is not Pareto optimal");
      }
    }
  }
}

// Ex post membership with enumeration first and the pruned search when the
// enumeration guard is exceeded. nullopt means inconclusive; `note` says why.
inline std::optional<HullMembershipResult> decide_expost(const PreferenceProfile& profile,
                                                         const RandomAssignment& p,
                                                         const Options& opt, std::string& note,
                                                         std::string& method) {
  method = opt.algorithm;
  if (method == "auto") {
    // Enumeration builds one LP column per PO generator; past a few thousand
    // candidates column generation is far cheaper.
    method = permanent_upper_bound(support(p)) <= opt.enumeration_threshold ? "enumeration"
                                                                             : "pruned";
  }
  if (method == "enumeration") {
    try {
      return is_ex_post_efficient(profile, p, opt.guard);
    } catch (const GuardExceeded&) {
      if (opt.algorithm != "auto") throw;
      method = "pruned";
    }
  }
  method = "pruned search";
  PrunedSearchOptions po;
  po.budget = std::chrono::milliseconds(opt.budget_ms);
  po.max_generators = opt.guard;
  PrunedSearchOutcome out = pruned_ex_post_search(profile, p, po);
  if (!out.result) {
    note = "pruned search: " + out.inconclusive_reason;
    return std::nullopt;
  }
  return out.result;
}

inline std::string non_member_reason(const HullMembershipResult& r) {
  if (r.reason == NonMemberReason::no_pareto_generators) {
    return "no Pareto-optimal consistent assignment";
  }
  return "LP infeasible over " + std::to_string(r.pareto_generators) + " PO generators";
}

struct Context {
  const Options& opt;
  std::ostream& out;
};

// Prints a hull verdict for `check expost` and `decompose --pareto`.
inline int report_expost(Context& ctx, const std::string& label, const PreferenceProfile& profile,
                         const RandomAssignment& p) {
  std::string note, method;
  const auto r = decide_expost(profile, p, ctx.opt, note, method);
  json j{{"command", label}};
  int code;
  if (!r) {
    code = kInconclusive;
    j["result"] = "inconclusive";
    j["reason"] = note;
    if (!ctx.opt.json) ctx.out << label << ": inconclusive (" << note << ")\n";
  } else if (r->verdict == HullVerdict::member) {
    verify(profile, p, *r->decomposition, true);
    code = kHolds;
    j["result"] = "holds";
    j["method"] = method;
    j["generators"] = r->pareto_generators;
    j["terms"] = terms_json(profile, *r->decomposition);
    if (!ctx.opt.json) {
      ctx.out << label << ": holds (" << r->decomposition->terms.size() << " Pareto-optimal terms, "
              << method << ")\n"
              << render_decomposition(profile, *r->decomposition);
    }
  } else {
    code = kFails;
    j["result"] = "fails";
    j["method"] = method;
    j["generators"] = r->pareto_generators;
    j["reason"] = non_member_reason(*r);
    if (!ctx.opt.json) ctx.out << label << ": fails (" << non_member_reason(*r) << ")\n";
  }
  if (ctx.opt.json) ctx.out << j.dump(2) << "\n";
  return code;
}

inline int check_pareto(Context& ctx, const Instance& inst, const std::string& path) {
  const RandomAssignment& p = need_assignment(inst, path);
  const std::size_t n = p.size();
  std::vector<std::size_t> object_of(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t o = 0; o < n; ++o) {
      if (p(i, o) == 1) object_of[i] = o;
      else if (p(i, o) != 0) throw InputError(path + ": pareto check needs a 0/1 assignment");
    }
  }
  const DeterministicAssignment d(std::move(object_of));
  const auto cycle = find_trading_cycle(inst.profile, d);
  json j{{"command", "check pareto"}, {"result", cycle ? "fails" : "holds"}};
  if (cycle) {
    if (!is_valid_trading_cycle(inst.profile, d, *cycle)) {
      throw VerificationFailure("reported trading cycle is invalid");
    }
    j["cycle"] = cycle_json(inst.profile, as_consistent_cycle(*cycle));
  }
  if (ctx.opt.json) {
    ctx.out << j.dump(2) << "\n";
  } else if (cycle) {
    ctx.out << "pareto: fails\ntrading cycle: " << render_cycle(inst.profile, *cycle) << "\n";
  } else {
    ctx.out << "pareto: holds\n";
  }
  return cycle ? kFails : kHolds;
}

inline int check_sd(Context& ctx, const Instance& inst, const std::string& path) {
  const RandomAssignment& p = need_assignment(inst, path);
  const auto cycle = find_consistent_cycle(inst.profile, p);
  json j{{"command", "check sd"}, {"result", cycle ? "fails" : "holds"}};
  if (cycle) {
    if (!is_valid_consistent_cycle(inst.profile, support(p), *cycle)) {
      throw VerificationFailure("reported consistent trading cycle is invalid");
    }
    j["cycle"] = cycle_json(inst.profile, *cycle);
  }
  if (ctx.opt.json) {
    ctx.out << j.dump(2) << "\n";
  } else if (cycle) {
    ctx.out << "sd: fails\nconsistent trading cycle: " << render_cycle(inst.profile, *cycle)
            << "\n";
  } else {
    ctx.out << "sd: holds\n";
  }
  return cycle ? kFails : kHolds;
}

inline int check_robust(Context& ctx, const Instance& inst, const std::string& path) {
  const RandomAssignment& p = need_assignment(inst, path);
  const PreferenceProfile& profile = inst.profile;
  std::string algorithm = ctx.opt.algorithm;
  if (algorithm == "auto") {
    algorithm =
        compute_agent_types(profile).count() <= ctx.opt.types_threshold ? "types" : "exhaustive";
  }
  json j{{"command", "check robust"}, {"algorithm", algorithm}};
  std::optional<DeterministicAssignment> witness;
  std::optional<ConsistentTradingCycle> cycle;
  if (algorithm == "types") {
    auto r = is_robust_by_types(profile, p);
    witness = r.witness;
    cycle = r.cycle;
  } else {
    RobustResult r;
    try {
      r = is_robust_ex_post_efficient(profile, p, ctx.opt.guard);
    } catch (const GuardExceeded& e) {
      j["result"] = "inconclusive";
      j["reason"] = e.what();
      if (ctx.opt.json) ctx.out << j.dump(2) << "\n";
      else ctx.out << "robust: inconclusive (" << e.what() << ")\n";
      return kInconclusive;
    }
    witness = r.witness;
  }
  if (witness && !verify_non_robust_witness(profile, p, *witness)) {
    throw VerificationFailure("non-robustness witness does not verify");
  }
  j["result"] = witness ? "fails" : "holds";
  if (witness) {
    j["witness"] = assignment_json(profile, *witness);
    if (cycle) j["cycle"] = cycle_json(profile, *cycle);
  }
  if (ctx.opt.json) {
    ctx.out << j.dump(2) << "\n";
  } else if (witness) {
    ctx.out << "robust: fails (" << algorithm << ")\nnon-Pareto-optimal consistent assignment: "
            << render_assignment(profile, *witness) << "\n";
    if (cycle) ctx.out << "trading cycle: " << render_cycle(profile, *cycle) << "\n";
  } else {
    ctx.out << "robust: holds (" << algorithm << ")\n";
  }
  return witness ? kFails : kHolds;
}

inline int decompose(Context& ctx, const Instance& inst, const std::string& path, bool pareto) {
  const RandomAssignment& p = need_assignment(inst, path);
  if (pareto) return report_expost(ctx, "decompose --pareto", inst.profile, p);
  const Decomposition dec = birkhoff_decompose(p);
  verify(inst.profile, p, dec, false);
  if (ctx.opt.json) {
    json j{{"command", "decompose"}, {"result", "holds"}, {"terms", terms_json(inst.profile, dec)}};
    ctx.out << j.dump(2) << "\n";
  } else {
    ctx.out << render_decomposition(inst.profile, dec);
  }
  return kHolds;
}

inline PreferenceProfile load_prefs(const std::string& path, const Options& opt) {
  return load(path, opt).profile;
}

}  // namespace detail

/// Runs the CLI on `args` (without the program name).
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"Efficiency checks for random assignments", "randeff"};
  app.require_subcommand(1);
  app.add_flag("--json", opt.json, "machine-readable output");
  app.add_option("--budget-ms", opt.budget_ms, "time budget for pruned searches (ms)")
      ->check(CLI::PositiveNumber);
  app.add_option("--guard", opt.guard, "limit on enumerated consistent assignments")
      ->check(CLI::PositiveNumber);
  app.add_option("--max-agents", opt.max_agents, "largest instance accepted by the parser")
      ->check(CLI::PositiveNumber);

  std::string property, file;
  auto* check = app.add_subcommand("check", "test an efficiency property");
  check->add_option("property", property)
      ->required()
      ->check(CLI::IsMember({"pareto", "sd", "robust", "expost"}));
  check->add_option("file", file)->required();
  check->add_option("--algorithm", opt.algorithm,
                    "robust: exhaustive, types or auto; expost: enumeration, pruned or auto")
      ->check(CLI::IsMember({"exhaustive", "types", "enumeration", "pruned", "auto"}));

  bool pareto_flag = false;
  auto* dec = app.add_subcommand("decompose", "decompose the assignment");
  dec->add_option("file", file)->required();
  dec->add_flag("--pareto", pareto_flag, "use Pareto-optimal terms only");

  std::string kind, prefs_path, cnf_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> n_opt;
  auto* gen = app.add_subcommand("gen", "write an instance to standard output");
  gen->add_option("kind", kind)->required()->check(CLI::IsMember({"rsd", "uniform", "sat", "random"}));
  gen->add_option("--prefs", prefs_path, "preference file (rsd, uniform)");
  gen->add_option("--cnf", cnf_path, "3-CNF file (sat)");
  gen->add_option("--n", n_opt, "number of agents (uniform, random)")->check(CLI::PositiveNumber);
  gen->add_option("--seed", seed, "random seed (random)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kHolds;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  detail::Context ctx{opt, out};
  try {
    if (*check) {
      const Instance inst = detail::load(file, opt);
      if (property == "pareto") return detail::check_pareto(ctx, inst, file);
      if (property == "sd") return detail::check_sd(ctx, inst, file);
      const bool robust_alg = opt.algorithm == "exhaustive" || opt.algorithm == "types";
      const bool expost_alg = opt.algorithm == "enumeration" || opt.algorithm == "pruned";
      if ((robust_alg && property != "robust") || (expost_alg && property != "expost")) {
        throw InputError("--algorithm " + opt.algorithm + " does not apply to check " + property);
      }
      if (property == "robust") return detail::check_robust(ctx, inst, file);
      return detail::report_expost(ctx, "expost", inst.profile,
                                   detail::need_assignment(inst, file));
    }
    if (*dec) return detail::decompose(ctx, detail::load(file, opt), file, pareto_flag);

    if (kind == "random") {
      if (!seed) throw InputError("gen random requires --seed");
      if (!n_opt) throw InputError("gen random requires --n");
      if (*n_opt > opt.max_agents) throw InputError("--n exceeds --max-agents");
      std::mt19937_64 rng(*seed);
      const PreferenceProfile profile = random_profile(rng, *n_opt);
      write_instance(out, profile, random_convex_assignment(rng, *n_opt));
      return kHolds;
    }
    if (seed) throw InputError("--seed only applies to gen random");
    if (kind == "sat") {
      if (cnf_path.empty()) throw InputError("gen sat requires --cnf");
      std::istringstream in(detail::read_file(cnf_path));
      SatInstance f = [&] {
        try {
          return parse_cnf(in);
        } catch (const InputError& e) {
          throw InputError(cnf_path + ": " + e.what());
        }
      }();
      const ReducedInstance r = build_reduction(f);
      write_instance(out, r.profile, r.p);
      return kHolds;
    }
    if (prefs_path.empty()) throw InputError("gen " + kind + " requires --prefs");
    const PreferenceProfile profile = detail::load_prefs(prefs_path, opt);
    if (kind == "rsd") {
      write_instance(out, profile, rsd_assignment(profile));
    } else {
      if (n_opt && *n_opt != profile.size()) {
        throw InputError("--n " + std::to_string(*n_opt) + " does not match the " +
                         std::to_string(profile.size()) + " agents in " + prefs_path);
      }
      write_instance(out, profile, uniform_assignment(profile.size()));
    }
    return kHolds;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const GuardExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kInconclusive;
  } catch (const VerificationFailure& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  } catch (const std::logic_error& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}

}  // namespace randeff::cli
