// Command line surface over the family pipeline.
//
// Verbs:
//   encode <json-array>             code of a finite sequence
//   decode <code>                   sequence behind a code
//   eval-member <spec.json> <stage> <L>   prefix of the stage-k member image
//   domain <spec.json> <bound>      domain points up to the bound
//   tangled <spec.json> <bound>     certificate plus restricted verdict
//   witness <prefix-json> <tail-spec.json> <budget>
//   chain                           stage classifications and sample members
//   tree-check <json-array>         Accept/Reject for a finite string
//   tree-explore <json-array> <depth> <cap>
//   prop <suite|all> [seed]         property suites; exit 1 on violation
//
// Exit codes: 0 success, 1 property violation, 2 malformed input, 3 budget
// exhausted.

#include "medf/family.hpp"
#include "medf/json_io.hpp"
#include "medf/mangle.hpp"
#include "medf/suites.hpp"
#include "medf/tree.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>

namespace {

using namespace medf;
using nlohmann::json;

json load_json_arg(const std::string& arg) {
  // a path to a JSON file, or inline JSON
  std::ifstream in(arg);
  if (in.good()) {
    json j;
    in >> j;
    return j;
  }
  return json::parse(arg);
}

Seq seq_arg(const std::string& arg) { return seq_from_json(load_json_arg(arg)); }

FunSpecPtr spec_arg(const std::string& arg) { return spec_from_json(load_json_arg(arg)); }

json report_to_json(const AgreementReport& r) {
  json j;
  j["points"] = seq_to_json(r.points);
  j["exhausted_bound"] = r.exhausted_bound.str();
  return j;
}

int cmd_encode(const std::string& arg, bool tsv) {
  Seq q = seq_arg(arg);
  BigInt code = encode_seq(q);
  if (tsv) {
    std::cout << code.str() << "\n";
  } else {
    std::cout << json{{"code", code.str()}}.dump() << "\n";
  }
  return 0;
}

int cmd_decode(const std::string& arg, bool tsv) {
  Seq q = decode_code(BigInt(arg));
  if (tsv) {
    for (size_t i = 0; i < q.size(); ++i) {
      std::cout << (i ? "\t" : "") << q[i].str();
    }
    std::cout << "\n";
  } else {
    std::cout << json{{"sequence", seq_to_json(q)}}.dump() << "\n";
  }
  return 0;
}

int cmd_eval_member(const std::string& spec, int stage, long length, bool tsv) {
  FunSpecPtr root = spec_arg(spec);
  FunSpecPtr member = member_node(stage, root);
  json values = json::array();
  for (long i = 0; i < length; ++i) {
    Nat v = eval(member, BigInt(i));
    if (tsv) {
      std::cout << (i ? "\t" : "") << nat_to_string(v);
    } else {
      values.push_back(nat_to_json(v));
    }
  }
  if (tsv) {
    std::cout << "\n";
  } else {
    std::cout << json{{"stage", stage}, {"values", values}}.dump() << "\n";
  }
  return 0;
}

int cmd_domain(const std::string& spec, const std::string& bound, bool tsv) {
  auto points = domain_list(spec_arg(spec), BigInt(bound));
  if (tsv) {
    for (size_t i = 0; i < points.size(); ++i) {
      std::cout << (i ? "\t" : "") << points[i].str();
    }
    std::cout << "\n";
  } else {
    std::cout << json{{"domain", seq_to_json(points)}}.dump() << "\n";
  }
  return 0;
}

int cmd_tangled(const std::string& spec, const std::string& bound, bool tsv) {
  FunSpecPtr f = spec_arg(spec);
  TangleCertificate cert = tangle_certificate(f);
  Verdict v = tangled_bounded(f, BigInt(bound));
  json j;
  switch (cert.kind) {
    case TangleCertificate::Kind::Tangled:
      j["verdict"] = "Tangled";
      j["horizon"] = cert.value.str();
      break;
    case TangleCertificate::Kind::Untangled:
      j["verdict"] = "Untangled";
      j["start"] = cert.value.str();
      break;
    case TangleCertificate::Kind::Unknown:
      j["verdict"] = "Unknown";
      j["searched_bound"] = cert.value.str();
      break;
  }
  j["restricted"] =
      v == Verdict::True ? "True" : v == Verdict::False ? "False" : "Unknown";
  if (tsv) {
    std::cout << j["verdict"].get<std::string>() << "\t"
              << j["restricted"].get<std::string>() << "\n";
  } else {
    std::cout << j.dump() << "\n";
  }
  return 0;
}

int cmd_witness(const std::string& prefix, const std::string& tail, long budget,
                bool tsv) {
  auto mw = maximality_witness(seq_arg(prefix), spec_arg(tail),
                               static_cast<size_t>(budget));
  json j;
  j["member"] = spec_to_json(mw.member);
  j["report"] = report_to_json(mw.report);
  if (tsv) {
    for (size_t i = 0; i < mw.report.points.size(); ++i) {
      std::cout << (i ? "\t" : "") << mw.report.points[i].str();
    }
    std::cout << "\n";
  } else {
    std::cout << j.dump() << "\n";
  }
  return mw.report.points.empty() ? 3 : 0;
}

int cmd_chain(bool tsv, bool with_formulas) {
  const auto& chain = family_chain();
  auto sample_root = make_eventually_constant({}, 0);
  json stages = json::array();
  for (const auto& s : chain) {
    json js;
    js["index"] = s.index;
    js["classification"] = classification_to_string(s.classification);
    js["witness_matrix"] = classification_to_string(s.fe.psi_class);
    if (with_formulas) js["membership"] = to_sexpr(s.membership);
    json sample = json::array();
    FunSpecPtr member = member_node(s.index, sample_root);
    for (BigInt i = 0; i < 6; ++i) sample.push_back(nat_to_json(eval(member, i)));
    js["sample_member_prefix"] = sample;
    stages.push_back(js);
    if (tsv) {
      std::cout << s.index << "\t" << classification_to_string(s.classification)
                << "\n";
    }
  }
  if (!tsv) std::cout << json{{"stages", stages}}.dump() << "\n";
  return 0;
}

LazySeq lazy_seq_arg(const std::string& arg) {
  LazySeq out;
  for (const BigInt& v : seq_arg(arg)) out.push_back(Nat(v));
  return out;
}

int cmd_tree_check(const std::string& arg, bool tsv) {
  TreePredicate pred = tree_from_stage(family_chain()[3]);
  bool ok = pred.accepts(lazy_seq_arg(arg));
  if (tsv) {
    std::cout << (ok ? "Accept" : "Reject") << "\n";
  } else {
    std::cout << json{{"decision", ok ? "Accept" : "Reject"}}.dump() << "\n";
  }
  return 0;
}

int cmd_tree_explore(const std::string& arg, long depth, const std::string& cap,
                     bool tsv) {
  TreePredicate pred = tree_from_stage(family_chain()[3]);
  auto found = explore(pred, lazy_seq_arg(arg), static_cast<size_t>(depth), BigInt(cap));
  json out = json::array();
  for (const auto& ext : found) {
    json s = json::array();
    for (const Nat& v : ext) s.push_back(nat_to_json(v));
    out.push_back(s);
    if (tsv) {
      for (size_t i = 0; i < ext.size(); ++i) {
        std::cout << (i ? "\t" : "") << nat_to_string(ext[i]);
      }
      std::cout << "\n";
    }
  }
  if (!tsv) std::cout << json{{"accepted", out}}.dump() << "\n";
  return 0;
}

int cmd_prop(const std::string& suite, uint64_t seed) {
  bool pass = true;
  if (suite == "all") {
    for (const auto& r : run_all_criteria(seed)) {
      std::cout << report_line(r) << "\n";
      pass = pass && r.pass;
    }
  } else {
    int id = criterion_id_by_name(suite);
    if (id < 0) {
      std::cerr << "unknown suite: " << suite << "\n";
      return 2;
    }
    auto r = run_criterion(id, seed);
    std::cout << report_line(r) << "\n";
    pass = r.pass;
  }
  return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"maximal eventually different family toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  bool tsv = false;
  app.add_flag("--tsv", tsv, "tab-separated output instead of JSON");

  std::string arg1, arg2, arg3;
  int stage = 0;
  long length = 0, depth = 0, budget = 0;
  uint64_t seed = 20240817ULL;

  auto* enc = app.add_subcommand("encode", "code of a finite sequence");
  enc->add_option("sequence", arg1)->required();

  auto* dec = app.add_subcommand("decode", "sequence behind a code");
  dec->add_option("code", arg1)->required();

  auto* evm = app.add_subcommand("eval-member", "prefix of a stage member image");
  evm->add_option("spec", arg1)->required();
  evm->add_option("stage", stage)->required()->check(CLI::Range(0, 3));
  evm->add_option("length", length)->required()->check(CLI::Range(0L, 100000L));

  auto* dom = app.add_subcommand("domain", "domain points up to a bound");
  dom->add_option("spec", arg1)->required();
  dom->add_option("bound", arg2)->required();

  auto* tan = app.add_subcommand("tangled", "tangledness certificate and verdict");
  tan->add_option("spec", arg1)->required();
  tan->add_option("bound", arg2)->required();

  auto* wit = app.add_subcommand("witness", "maximality witness search");
  wit->add_option("prefix", arg1)->required();
  wit->add_option("tail", arg2)->required();
  wit->add_option("budget", budget)->required()->check(CLI::Range(1L, 1000000L));

  bool with_formulas = false;
  auto* ch = app.add_subcommand("chain", "stage classifications and sample members");
  ch->add_flag("--formulas", with_formulas, "include membership formulas as s-expressions");

  auto* tc = app.add_subcommand("tree-check", "Accept/Reject for a finite string");
  tc->add_option("string", arg1)->required();

  auto* te = app.add_subcommand("tree-explore", "accepted extensions of a string");
  te->add_option("string", arg1)->required();
  te->add_option("depth", depth)->required()->check(CLI::Range(0L, 8L));
  te->add_option("cap", arg3)->required();

  auto* pr = app.add_subcommand("prop", "run property suites");
  pr->add_option("suite", arg1)->required();
  pr->add_option("seed", seed);

  CLI11_PARSE(app, argc, argv);

  try {
    if (enc->parsed()) return cmd_encode(arg1, tsv);
    if (dec->parsed()) return cmd_decode(arg1, tsv);
    if (evm->parsed()) return cmd_eval_member(arg1, stage, length, tsv);
    if (dom->parsed()) return cmd_domain(arg1, arg2, tsv);
    if (tan->parsed()) return cmd_tangled(arg1, arg2, tsv);
    if (wit->parsed()) return cmd_witness(arg1, arg2, budget, tsv);
    if (ch->parsed()) return cmd_chain(tsv, with_formulas);
    if (tc->parsed()) return cmd_tree_check(arg1, tsv);
    if (te->parsed()) return cmd_tree_explore(arg1, depth, arg3, tsv);
    if (pr->parsed()) return cmd_prop(arg1, seed);
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "malformed input: " << e.what() << "\n";
    return 2;
  } catch (const medf::NatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
