// Copyright 2026 The idvmech Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "idv/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>

#include "idv/catalog.hpp"
#include "idv/conditions.hpp"
#include "idv/io.hpp"
#include "idv/mechanisms.hpp"
#include "idv/payments.hpp"
#include "idv/verification.hpp"

namespace idv {
namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string num(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

template <typename T>
std::string joined(const std::vector<T>& v, char sep = ' ') {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) s += sep;
    if constexpr (std::is_floating_point_v<T>) {
      s += num(v[k]);
    } else {
      s += std::to_string(v[k]);
    }
  }
  return s;
}

std::vector<int> parse_agent_list(const std::string& text, int agents) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    int a = 0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), a);
    if (ec != std::errc() || ptr != item.data() + item.size() || a < 0 || a >= agents) {
      throw UsageError("--exclude: '" + item + "' is not an agent index in [0, " +
                       std::to_string(agents) + ")");
    }
    out.push_back(a);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

struct Options {
  std::string format = "json";
  std::string input;
  std::string scf_file;
  std::string payments_file;
  std::string condition;
  std::string anchor = "tight";
  std::string mechanism;
  std::string exclude;
  std::uint64_t seed = 0;
  bool exact = false;
  int agent = -1;
  int outcome = -1;
  std::string verify_kind;
  std::string oracle_kind;
  std::string catalog_action;
  std::string catalog_name;
  std::vector<std::string> params;
  std::string kind = "decomposable";
  int n = 2, m = 2, k = 1, grid = 3;
};

class Runner {
 public:
  Runner(const Options& opt, std::ostream& out) : opt_(opt), out_(out), csv_(opt.format == "csv") {}

  int check();
  int payments();
  int mech();
  int verify();
  int ratio();
  int oracle();
  int catalog();

 private:
  Instance instance() const { return parse_instance(read_file(opt_.input)); }

  SocialChoiceFunction scf_or_welfare(const Instance& inst) const {
    if (opt_.scf_file.empty()) return welfare_max_scf(inst);
    return parse_scf(read_file(opt_.scf_file), inst);
  }

  int emit(const CheckReport& report, const Instance& inst) {
    if (csv_) {
      out_ << "condition,verdict,slack,agent,other_agent,profile,upper,own,outcomes,detail\n";
      out_ << report.condition << ',' << (report.verdict ? "true" : "false") << ',' << num(report.slack);
      if (report.witness) {
        const Witness& w = *report.witness;
        out_ << ',' << w.agent << ',' << w.other_agent << ',' << joined(w.profile) << ','
             << joined(w.upper) << ',' << joined(w.own) << ',' << joined(w.outcomes) << ",\""
             << w.detail << '"';
      } else {
        out_ << ",,,,,,,";
      }
      out_ << '\n';
    } else {
      out_ << report_to_json(report, inst).dump(2) << '\n';
    }
    return report.verdict ? kExitOk : kExitFalse;
  }

  const Options& opt_;
  std::ostream& out_;
  bool csv_;
};

int Runner::check() {
  const Instance inst = instance();
  const std::string& c = opt_.condition;
  if (c == "sc") return emit(check_single_crossing(inst), inst);
  if (c == "strong-sc") return emit(check_strong_single_crossing(inst), inst);
  if (c == "separable-sos") return emit(check_separable_sos(inst), inst);
  if (c == "fsc" || c == "weak-fsc" || c == "wmon" || c == "cmon") {
    const SocialChoiceFunction f = scf_or_welfare(inst);
    if (c == "fsc") return emit(check_f_single_crossing(inst, f), inst);
    if (c == "weak-fsc") return emit(check_weak_f_single_crossing(inst, f), inst);
    if (c == "wmon") return emit(check_wmon(inst, f), inst);
    return emit(check_cmon(inst, f), inst);
  }
  std::vector<int> agents;
  if (opt_.agent >= 0) {
    if (opt_.agent >= inst.agents()) throw UsageError("--agent out of range");
    agents.push_back(opt_.agent);
  } else {
    for (int i = 0; i < inst.agents(); ++i) agents.push_back(i);
  }
  if (c == "monotone" || c == "decomposable") {
    CheckReport last{c, true, std::nullopt, 0.0};
    for (int i : agents) {
      last = c == "monotone" ? is_monotone(inst, i) : check_decomposable(inst, i);
      if (!last.verdict) break;
    }
    return emit(last, inst);
  }
  if (c == "sos") {
    if (opt_.outcome >= inst.outcomes().size()) throw UsageError("--outcome out of range");
    CheckReport last{"sos", true, std::nullopt, 0.0};
    for (int i : agents) {
      for (int a = 0; a < inst.outcomes().size(); ++a) {
        if (opt_.outcome >= 0 && a != opt_.outcome) continue;
        last = check_sos(inst, i, a);
        if (!last.verdict) {
          if (last.witness) last.witness->detail = "valuation of agent " + std::to_string(i) + ": " + last.witness->detail;
          return emit(last, inst);
        }
      }
    }
    return emit(last, inst);
  }
  throw UsageError("unknown condition '" + c + "'");
}

int Runner::payments() {
  const Instance inst = instance();
  const SocialChoiceFunction f = scf_or_welfare(inst);
  Anchor anchor;
  if (opt_.anchor == "zero") {
    anchor.policy = AnchorPolicy::kZero;
  } else if (opt_.anchor != "tight") {
    throw UsageError("--anchor must be tight or zero");
  }
  const PaymentRule rule = payment_identity(inst, f, anchor);
  if (csv_) {
    out_ << "profile,agent,payment\n";
    for (std::size_t p = 0; p < rule.table.profile_count(); ++p) {
      for (int i = 0; i < inst.agents(); ++i) {
        out_ << '"' << profile_key(inst.grid().unflat(p)) << "\"," << i << ',' << num(rule.table.at(p, i)) << '\n';
      }
    }
  } else {
    out_ << payments_to_json(rule.table, inst, anchor_name(rule.anchor)).dump(2) << '\n';
  }
  return kExitOk;
}

int Runner::mech() {
  const Instance original = instance();
  if (opt_.mechanism == "welfare") {
    MechanismResult result;
    result.scf = welfare_max_scf(original);
    result.payments = payment_identity(original, result.scf).table;
    if (csv_) {
      out_ << "profile,outcome,payments\n";
      for (std::size_t p = 0; p < result.payments.profile_count(); ++p) {
        const auto pay = result.payments.row(p);
        out_ << '"' << profile_key(original.grid().unflat(p)) << "\",\""
             << outcome_label(original.outcomes().at(result.scf.point(p))) << "\","
             << joined(std::vector<double>(pay.begin(), pay.end())) << '\n';
      }
    } else {
      out_ << mechanism_to_json(result, original, "welfare").dump(2) << '\n';
    }
    return kExitOk;
  }
  if (opt_.mechanism != "aexcl" && opt_.mechanism != "rsvcg") {
    throw UsageError("unknown mechanism '" + opt_.mechanism + "' (welfare|aexcl|rsvcg)");
  }
  // The exclusion mechanisms choose a single (meta-)project.
  const bool reduce = original.outcomes().max_size() > 1;
  const Instance inst = reduce ? k_to_one_reduction(original) : original;

  if (opt_.mechanism == "rsvcg" && opt_.exact) {
    const auto rows = random_sampling_vcg_exact(inst);
    bool holds = true;
    Json arr = Json::array();
    if (csv_) out_ << "profile,expected,optimum,bound,slack\n";
    for (const auto& r : rows) {
      const double bound = 0.25 * r.optimum;
      const double slack = r.expected - bound;
      holds = holds && slack >= -kTol;
      const GridProfile profile = inst.grid().unflat(r.profile);
      if (csv_) {
        out_ << '"' << profile_key(profile) << "\"," << num(r.expected) << ',' << num(r.optimum) << ','
             << num(bound) << ',' << num(slack) << '\n';
      } else {
        Json j;
        j["profile"] = profile;
        j["signals"] = inst.grid().signals(profile);
        j["expected_welfare"] = r.expected;
        j["optimum"] = r.optimum;
        j["bound"] = bound;
        j["slack"] = slack;
        arr.push_back(j);
      }
    }
    if (!csv_) {
      Json doc;
      doc["mechanism"] = "rsvcg";
      doc["mode"] = "exact";
      doc["quarter_bound_holds"] = holds;
      doc["profiles"] = arr;
      out_ << doc.dump(2) << '\n';
    }
    return holds ? kExitOk : kExitFalse;
  }

  MechanismResult result;
  if (opt_.mechanism == "aexcl") {
    result = a_exclusion_vcg_table(inst, parse_agent_list(opt_.exclude, inst.agents()));
  } else {
    if (!opt_.exclude.empty()) throw UsageError("--exclude applies to aexcl only");
    result = random_sampling_vcg(inst, opt_.seed);
  }
  if (reduce) {
    // Report chosen outcomes in the original instance's terms.
    SocialChoiceFunction f(original.grid().profile_count(), original.outcomes().size());
    for (std::size_t p = 0; p < f.profile_count(); ++p) f.set_point(p, meta_outcome_origin(result.scf.point(p)));
    result.scf = f;
  }
  if (csv_) {
    out_ << "profile,outcome,payments,excluded,seed\n";
    for (std::size_t p = 0; p < result.payments.profile_count(); ++p) {
      const auto pay = result.payments.row(p);
      out_ << '"' << profile_key(original.grid().unflat(p)) << "\",\""
           << outcome_label(original.outcomes().at(result.scf.point(p))) << "\","
           << joined(std::vector<double>(pay.begin(), pay.end())) << ',' << joined(result.excluded) << ','
           << (result.seed ? std::to_string(*result.seed) : "") << '\n';
    }
  } else {
    out_ << mechanism_to_json(result, original, opt_.mechanism).dump(2) << '\n';
  }
  return kExitOk;
}

int Runner::verify() {
  const Instance inst = instance();
  if (opt_.verify_kind == "icir") {
    if (opt_.scf_file.empty() || opt_.payments_file.empty()) {
      throw UsageError("verify icir needs -f <scf> and -p <payments>");
    }
    const SocialChoiceFunction f = parse_scf(read_file(opt_.scf_file), inst);
    const PaymentTable pay = parse_payments(read_file(opt_.payments_file), inst);
    return emit(check_ex_post_ic_ir(inst, f, pay, parse_agent_list(opt_.exclude, inst.agents())), inst);
  }
  if (opt_.verify_kind == "keylemma") {
    bool holds = true;
    double worst = std::numeric_limits<double>::infinity();
    Json arr = Json::array();
    if (csv_) out_ << "agent,outcome,profile,value,bound,slack\n";
    for (int i = 0; i < inst.agents(); ++i) {
      if (opt_.agent >= 0 && i != opt_.agent) continue;
      for (int a = 0; a < inst.outcomes().size(); ++a) {
        if (opt_.outcome >= 0 && a != opt_.outcome) continue;
        for (std::size_t p = 0; p < inst.grid().profile_count(); ++p) {
          const GridProfile profile = inst.grid().unflat(p);
          const KeyLemmaMargin km = key_lemma_margin(inst, i, a, profile);
          const double slack = km.lhs - km.rhs;
          worst = std::min(worst, slack);
          holds = holds && slack >= -kTol;
          if (csv_) {
            out_ << i << ',' << a << ",\"" << profile_key(profile) << "\"," << num(km.lhs) << ','
                 << num(km.rhs) << ',' << num(slack) << '\n';
          } else {
            Json j;
            j["agent"] = i;
            j["outcome"] = inst.outcomes().at(a);
            j["profile"] = profile;
            j["lhs"] = km.lhs;
            j["rhs"] = km.rhs;
            j["slack"] = slack;
            arr.push_back(j);
          }
        }
      }
    }
    if (!csv_) {
      Json doc;
      doc["condition"] = "key_lemma";
      doc["verdict"] = holds;
      doc["slack"] = std::isfinite(worst) ? worst : 0.0;
      doc["rows"] = arr;
      out_ << doc.dump(2) << '\n';
    }
    return holds ? kExitOk : kExitFalse;
  }
  throw UsageError("unknown verification '" + opt_.verify_kind + "' (icir|keylemma)");
}

int Runner::ratio() {
  const Instance inst = instance();
  if (opt_.scf_file.empty()) throw UsageError("ratio needs -f <scf>");
  const SocialChoiceFunction f = parse_scf(read_file(opt_.scf_file), inst);
  const RatioResult r = approximation_ratio(inst, f);
  const GridProfile worst = inst.grid().unflat(r.profile);
  if (csv_) {
    // One row per profile: welfare of f against the optimum.
    const auto opt = optimal_welfare(inst);
    const ValueTable values(inst);
    out_ << "profile,value,bound,slack\n";
    for (std::size_t p = 0; p < opt.size(); ++p) {
      double got = 0.0;
      const auto dist = f.at(p);
      for (int i = 0; i < inst.agents(); ++i) {
        for (int a = 0; a < inst.outcomes().size(); ++a) got += dist[static_cast<std::size_t>(a)] * values.at(i, p, a);
      }
      out_ << '"' << profile_key(inst.grid().unflat(p)) << "\"," << num(got) << ',' << num(opt[p]) << ','
           << num(got - r.ratio * opt[p]) << '\n';
    }
  } else {
    Json doc;
    doc["ratio"] = r.ratio;
    doc["profile"] = worst;
    doc["signals"] = inst.grid().signals(worst);
    out_ << doc.dump(2) << '\n';
  }
  return kExitOk;
}

int Runner::oracle() {
  if (opt_.oracle_kind != "maxmin") throw UsageError("unknown oracle '" + opt_.oracle_kind + "' (maxmin)");
  const Instance inst = instance();
  const MaxMinResult r = fsc_maxmin_oracle(inst);
  if (csv_) {
    out_ << "value,feasible\n" << num(r.value) << ',' << r.feasible << '\n';
  } else {
    Json doc;
    doc["value"] = r.value;
    doc["feasible"] = r.feasible;
    // Only the support of the optimal mixture; the row count can be large.
    Json support = Json::array();
    for (std::size_t row = 0; row < r.mixture.size(); ++row) {
      if (r.mixture[row] <= kTol) continue;
      Json j;
      j["row"] = row;
      j["weight"] = r.mixture[row];
      j["ratios"] = r.payoff[row];
      support.push_back(j);
    }
    doc["support"] = support;
    out_ << doc.dump(2) << '\n';
  }
  return kExitOk;
}

int Runner::catalog() {
  if (opt_.catalog_action == "list") {
    for (const auto& name : catalog::names()) out_ << name << '\n';
    return kExitOk;
  }
  if (opt_.catalog_action == "dump") {
    if (opt_.catalog_name.empty()) throw UsageError("catalog dump needs an instance name");
    catalog::Params params;
    for (const auto& kv : opt_.params) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw UsageError("--param expects key=value, got '" + kv + "'");
      const std::string value = kv.substr(eq + 1);
      double x = 0.0;
      auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), x);
      if (ec != std::errc() || ptr != value.data() + value.size()) {
        throw UsageError("--param " + kv.substr(0, eq) + ": '" + value + "' is not a number");
      }
      params[kv.substr(0, eq)] = x;
    }
    out_ << serialize_instance(catalog::build(opt_.catalog_name, params));
    return kExitOk;
  }
  if (opt_.catalog_action == "random") {
    out_ << serialize_instance(catalog::random_instance(catalog::parse_kind(opt_.kind), opt_.n, opt_.m,
                                                        opt_.k, opt_.grid, opt_.seed));
    return kExitOk;
  }
  throw UsageError("unknown catalog action '" + opt_.catalog_action + "' (list|dump|random)");
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"Interdependent-value public projects: conditions, payments, mechanisms", "idvmech"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--format", opt.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();

  auto* check = app.add_subcommand("check", "Check an implementability condition");
  check->add_option("condition", opt.condition,
                    "sc|strong-sc|fsc|weak-fsc|wmon|cmon|monotone|decomposable|sos|separable-sos")
      ->required();
  check->add_option("-i,--instance", opt.input, "Instance file")->required();
  check->add_option("-f,--scf", opt.scf_file, "Choice function file (default: welfare maximizer)");
  check->add_option("--agent", opt.agent, "Restrict to one agent (monotone, decomposable, sos)");
  check->add_option("--outcome", opt.outcome, "Restrict to one outcome index (sos)");

  auto* pay = app.add_subcommand("payments", "Payments from the payment identity");
  pay->add_option("-i,--instance", opt.input, "Instance file")->required();
  pay->add_option("-f,--scf", opt.scf_file, "Choice function file (default: welfare maximizer)");
  pay->add_option("--anchor", opt.anchor, "tight|zero")->capture_default_str();

  auto* mech = app.add_subcommand("mech", "Run a mechanism over every report profile");
  mech->add_option("mechanism", opt.mechanism, "welfare|aexcl|rsvcg")->required();
  mech->add_option("-i,--instance", opt.input, "Instance file")->required();
  mech->add_option("--exclude", opt.exclude, "Excluded agents, e.g. 0,2 (aexcl)");
  mech->add_option("--seed", opt.seed, "Sampling seed (rsvcg)")->capture_default_str();
  mech->add_flag("--exact", opt.exact, "Average over every excluded set (rsvcg)");

  auto* verify = app.add_subcommand("verify", "Brute-force verification");
  verify->add_option("kind", opt.verify_kind, "icir|keylemma")->required();
  verify->add_option("-i,--instance", opt.input, "Instance file")->required();
  verify->add_option("-f,--scf", opt.scf_file, "Choice function file (icir)");
  verify->add_option("-p,--payments", opt.payments_file, "Payments file (icir)");
  verify->add_option("--exclude", opt.exclude, "Agents with no value (icir)");
  verify->add_option("--agent", opt.agent, "Restrict to one agent (keylemma)");
  verify->add_option("--outcome", opt.outcome, "Restrict to one outcome index (keylemma)");

  auto* ratio = app.add_subcommand("ratio", "Worst-case welfare ratio of a choice function");
  ratio->add_option("-i,--instance", opt.input, "Instance file")->required();
  ratio->add_option("-f,--scf", opt.scf_file, "Choice function file")->required();

  auto* oracle = app.add_subcommand("oracle", "Max-min welfare ratio over f-single-crossing choice functions");
  oracle->add_option("kind", opt.oracle_kind, "maxmin")->required();
  oracle->add_option("-i,--instance", opt.input, "Instance file")->required();

  auto* cat = app.add_subcommand("catalog", "Built-in instances");
  cat->add_option("action", opt.catalog_action, "list|dump|random")->required();
  cat->add_option("name", opt.catalog_name, "Instance name (dump)");
  cat->add_option("--param", opt.params, "key=value parameter (dump)");
  cat->add_option("--kind", opt.kind, "decomposable|separable_sos|linear (random)")->capture_default_str();
  cat->add_option("--n", opt.n, "Agents (random)")->capture_default_str();
  cat->add_option("--m", opt.m, "Projects (random)")->capture_default_str();
  cat->add_option("--k", opt.k, "Max projects per outcome (random)")->capture_default_str();
  cat->add_option("--grid", opt.grid, "Grid points per agent (random)")->capture_default_str();
  cat->add_option("--seed", opt.seed, "Seed (random)")->capture_default_str();

  std::vector<std::string> argv_store{"idvmech"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }

  try {
    Runner run(opt, out);
    if (check->parsed()) return run.check();
    if (pay->parsed()) return run.payments();
    if (mech->parsed()) return run.mech();
    if (verify->parsed()) return run.verify();
    if (ratio->parsed()) return run.ratio();
    if (oracle->parsed()) return run.oracle();
    if (cat->parsed()) return run.catalog();
  } catch (const std::exception& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << "error: " << msg << '\n';
    return kExitError;
  }
  err << "error: no subcommand\n";
  return kExitError;
}

}  // namespace idv
