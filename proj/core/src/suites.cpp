#include "medf/suites.hpp"

#include "medf/family.hpp"
#include "medf/formula_library.hpp"
#include "medf/mangle.hpp"
#include "medf/tree.hpp"

#include <chrono>
#include <set>
#include <sstream>

namespace medf {

namespace {

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  auto dt = std::chrono::steady_clock::now() - t0;
  return std::chrono::duration_cast<std::chrono::duration<double>>(dt).count();
}

Seq gen_seq(Rng& rng, uint64_t maxlen, uint64_t maxval) {
  Seq q;
  uint64_t len = rng.below(maxlen + 1);
  for (uint64_t i = 0; i < len; ++i) q.emplace_back(rng.below(maxval));
  return q;
}

}  // namespace

FunSpecPtr gen_base_spec(Rng& rng) {
  if (rng.below(2) == 0) {
    return make_eventually_constant(gen_seq(rng, 4, 8), BigInt(rng.below(8)));
  }
  Seq cycle = gen_seq(rng, 2, 8);
  cycle.emplace_back(rng.below(8));  // nonempty
  return make_periodic(gen_seq(rng, 2, 8), std::move(cycle));
}

FunSpecPtr gen_spec_any_class(Rng& rng) {
  switch (rng.below(5)) {
    case 0:
    case 1:
      return gen_base_spec(rng);
    case 2:
      return make_coherent_image(gen_base_spec(rng));
    case 3:
      return make_member_image(0, gen_base_spec(rng));
    default:
      return make_member_image(1, gen_base_spec(rng));
  }
}

namespace {

// two specs differing below the cap; the first difference is returned
std::tuple<FunSpecPtr, FunSpecPtr, BigInt> gen_distinct_pair(Rng& rng, BigInt diff_cap) {
  for (;;) {
    FunSpecPtr f = gen_base_spec(rng);
    FunSpecPtr g = gen_base_spec(rng);
    auto d = first_difference(f, g, diff_cap);
    if (d) return {f, g, *d};
  }
}

CriterionResult criterion_coding(uint64_t) {
  auto t0 = std::chrono::steady_clock::now();
  CriterionResult r{1, "coding", false, ""};
  size_t failures = 0;
  for (BigInt n = 0; n < 100000; ++n) {
    if (encode_seq(decode_code(n)) != n) ++failures;
  }
  size_t seqs = 0;
  std::vector<Seq> cur = {Seq{}};
  for (int len = 0; len <= 4; ++len) {
    for (const Seq& q : cur) {
      ++seqs;
      if (decode_code(encode_seq(q)) != q) ++failures;
    }
    if (len == 4) break;
    std::vector<Seq> next;
    for (const Seq& q : cur) {
      for (BigInt v = 0; v < 8; ++v) {
        Seq e = q;
        e.push_back(v);
        next.push_back(std::move(e));
      }
    }
    cur = std::move(next);
  }
  double secs = seconds_since(t0);
  std::ostringstream os;
  os << "100000 codes and " << seqs << " sequences round-tripped, " << failures
     << " failures";
  r.details = os.str();
  r.pass = failures == 0 && secs < 5.0;
  return r;
}

CriterionResult criterion_emap(uint64_t seed) {
  CriterionResult r{2, "emap", false, ""};
  Rng rng(seed);
  size_t violations = 0;
  for (int t = 0; t < 200; ++t) {
    auto [f, g, d] = gen_distinct_pair(rng, 64);
    auto rep = agreements(make_coherent_image(f), make_coherent_image(g), 2000);
    bool ok = BigInt(rep.points.size()) == d + 1;
    for (size_t i = 0; ok && i < rep.points.size(); ++i) {
      if (rep.points[i] != BigInt(i)) ok = false;
    }
    if (!ok) ++violations;
  }
  std::ostringstream os;
  os << "200 pairs, agreements exactly initial segments, " << violations
     << " violations";
  r.details = os.str();
  r.pass = violations == 0;
  return r;
}

CriterionResult criterion_adf(uint64_t seed) {
  CriterionResult r{3, "adf", false, ""};
  Rng rng(seed);
  size_t violations = 0;
  for (int t = 0; t < 200; ++t) {
    FunSpecPtr f, g;
    BigInt d;
    for (;;) {
      std::tie(f, g, d) = gen_distinct_pair(rng, 64);
      if (d <= 10) break;  // keep the common-prefix code materializable
    }
    auto code = nat_exact(e_eval(f, d), 4096);
    if (!code) {
      ++violations;
      continue;
    }
    BigInt b = 2 * *code + 2;  // just past the last shared domain point
    auto la = domain_list(f, b);
    auto lb = domain_list(g, b);
    std::set<BigInt> sa(la.begin(), la.end());
    BigInt common = 0;
    for (const auto& k : lb) common += sa.count(k);
    if (common != d + 1) ++violations;
  }
  std::ostringstream os;
  os << "200 pairs, domain intersections counted, " << violations << " violations";
  r.details = os.str();
  r.pass = violations == 0;
  return r;
}

CriterionResult criterion_tangled(uint64_t seed) {
  CriterionResult r{4, "tangled", false, ""};
  Rng rng(seed);
  size_t contradictions = 0, brute_failures = 0, definite = 0;
  for (int t = 0; t < 500; ++t) {
    FunSpecPtr f = gen_spec_any_class(rng);
    TangleCertificate cert = tangle_certificate(f);
    Verdict v = tangled_bounded(f, 500);
    if (v == Verdict::True && cert.kind != TangleCertificate::Kind::Tangled) {
      ++contradictions;
    }
    if (v == Verdict::False && cert.kind != TangleCertificate::Kind::Untangled) {
      ++contradictions;
    }
    if (v == Verdict::Unknown) continue;
    ++definite;
    // brute-force triple check of the restricted condition
    auto dom = domain_list(f, 500);
    if (v == Verdict::True) {
      for (const BigInt& n : dom) {
        bool found = false;
        for (const BigInt& m : dom) {
          if (m < n) continue;
          bool all = true;
          for (const BigInt& m2 : dom) {
            if (m2 >= m && order_rel(f, m, m2)) {
              all = false;
              break;
            }
          }
          if (all) {
            found = true;
            break;
          }
        }
        if (!found) {
          ++brute_failures;
          break;
        }
      }
    } else {
      for (const BigInt& m : dom) {
        if (m < cert.value) continue;
        auto s = ord_successor(f, cert, m);
        if (!s || !order_rel(f, m, *s)) {
          ++brute_failures;
          break;
        }
      }
    }
  }
  std::ostringstream os;
  os << "500 specs, " << definite << " definite verdicts, " << contradictions
     << " contradictions, " << brute_failures << " brute-force failures";
  r.details = os.str();
  r.pass = contradictions == 0 && brute_failures == 0;
  return r;
}

CriterionResult criterion_hset(uint64_t seed) {
  CriterionResult r{5, "hset", false, ""};
  Rng rng(seed);
  size_t violations = 0, tested = 0;
  while (tested < 100) {
    FunSpecPtr f = rng.below(8) == 0 ? make_member_image(1, gen_base_spec(rng))
                                     : gen_base_spec(rng);
    TangleCertificate cert = tangle_certificate(f);
    if (cert.kind != TangleCertificate::Kind::Tangled) continue;
    ++tested;
    std::vector<BigInt> kept;
    for (const BigInt& m : domain_list(f, 500)) {
      if (h_member(f, cert, m)) kept.push_back(m);
    }
    for (size_t i = 0; i < kept.size(); ++i) {
      for (size_t j = i + 1; j < kept.size(); ++j) {
        if (order_rel(f, kept[i], kept[j])) ++violations;
      }
    }
  }
  std::ostringstream os;
  os << "100 tangled specs, kept sets pairwise unrelated, " << violations
     << " violations";
  r.details = os.str();
  r.pass = violations == 0;
  return r;
}

CriterionResult criterion_evdiff(uint64_t seed) {
  CriterionResult r{6, "evdiff", false, ""};
  Rng rng(seed);
  size_t violations = 0;
  for (int t = 0; t < 100; ++t) {
    FunSpecPtr f, g;
    for (;;) {
      f = rng.below(4) == 0 ? make_coherent_image(gen_base_spec(rng))
                            : gen_base_spec(rng);
      g = rng.below(4) == 0 ? make_coherent_image(gen_base_spec(rng))
                            : gen_base_spec(rng);
      auto d = first_difference(f, g, 64);
      if (d) break;
    }
    BigInt bound = member_agreement_bound(f, g);
    auto rep = agreements(make_member_image(0, f), make_member_image(0, g), 2000);
    for (const BigInt& p : rep.points) {
      if (p > bound) ++violations;
    }
  }
  std::ostringstream os;
  os << "100 pairs, member agreements within certificate bounds, " << violations
     << " violations";
  r.details = os.str();
  r.pass = violations == 0;
  return r;
}

CriterionResult criterion_witness(uint64_t seed) {
  auto t0 = std::chrono::steady_clock::now();
  CriterionResult r{7, "witness", false, ""};
  Rng rng(seed);
  size_t failures = 0;
  for (int t = 0; t < 100; ++t) {
    Seq prefix = gen_seq(rng, 4, 8);
    FunSpecPtr tail = t % 5 == 4 ? make_coherent_image(gen_base_spec(rng))
                                 : gen_base_spec(rng);
    if (tail->kind == FunSpecNode::Kind::CoherentImage) prefix.clear();
    auto mw = maximality_witness(prefix, tail, 5000);
    if (mw.report.points.size() < 10) ++failures;
    for (const BigInt& p : mw.report.points) {
      FunSpecPtr target = overlay_prefix(prefix, tail);
      if (!nat_eq(eval(mw.member, p), eval(target, p))) ++failures;
    }
  }
  double secs = seconds_since(t0);
  std::ostringstream os;
  os << "100 targets, at least 10 verified agreement points each, " << failures
     << " failures";
  r.details = os.str();
  r.pass = failures == 0 && secs < 60.0;
  return r;
}

CriterionResult criterion_classify(uint64_t) {
  CriterionResult r{8, "classify", false, ""};
  std::string a = classification_to_string(classify(lib_cond_tangled_branch()));
  std::string b = classification_to_string(classify(lib_cond_untangled_branch()));
  std::string c = classification_to_string(classify(lib_membership()));
  std::ostringstream os;
  os << "tangled branch " << a << ", untangled branch " << b << ", membership " << c;
  r.details = os.str();
  r.pass = a == "Pi3" && b == "Sigma3" && c == "Pi4";
  return r;
}

CriterionResult criterion_mangle(uint64_t seed) {
  CriterionResult r{9, "mangle", false, ""};
  Rng rng(seed);
  const auto& chain = family_chain();
  bool levels = classification_to_string(chain[0].classification) == "Pi4" &&
                classification_to_string(chain[1].classification) == "Pi3" &&
                classification_to_string(chain[2].classification) == "Pi2" &&
                classification_to_string(chain[3].classification) == "Pi1";
  size_t failures = levels ? 0 : 1;
  for (int spec = 0; spec < 2; ++spec) {
    FunSpecPtr root = gen_base_spec(rng);
    for (int k = 0; k < 3; ++k) {
      FunSpecPtr lower = member_node(k, root);
      FunSpecPtr upper = star_member(lower, chain[k]);
      for (BigInt n = 0; n <= 200; ++n) {
        if (!nat_eq(eval(upper, 2 * n), eval(lower, n))) ++failures;
      }
      for (BigInt n = 0; n <= 50; ++n) {
        Nat odd = eval(upper, 2 * n + 1);
        if (!s2_member_nat(odd)) {
          ++failures;
          continue;
        }
        auto [fh, gh] = split_even_nat(odd);
        if (BigInt(fh.size()) != n + 1) {
          ++failures;
          continue;
        }
        for (BigInt i = 0; i <= n; ++i) {
          if (!nat_eq(fh[static_cast<size_t>(i)], eval(lower, i))) ++failures;
          if (!nat_eq(gh[static_cast<size_t>(i)], least_witness(chain[k], lower, i))) {
            ++failures;
          }
        }
      }
    }
  }
  std::ostringstream os;
  os << "levels Pi4>Pi3>Pi2>Pi1 " << (levels ? "ok" : "WRONG")
     << ", evens law to 200 and split round-trips to 50, " << failures << " failures";
  r.details = os.str();
  r.pass = failures == 0;
  return r;
}

CriterionResult criterion_span(uint64_t seed) {
  CriterionResult r{10, "span", false, ""};
  Rng rng(seed);
  size_t failures = 0;
  for (int t = 0; t < 50; ++t) {
    FunSpecPtr f = gen_base_spec(rng);
    for (int k = 1; k <= 3; ++k) {
      auto rep = spanning_check(k, f, 16);
      if (rep.points.empty()) ++failures;
      for (const BigInt& p : rep.points) {
        if (p % 2 != 0) ++failures;
      }
    }
  }
  std::ostringstream os;
  os << "50 specs at stages 1..3, even agreement reports, " << failures << " failures";
  r.details = os.str();
  r.pass = failures == 0;
  return r;
}

CriterionResult criterion_tree(uint64_t seed) {
  CriterionResult r{11, "tree", false, ""};
  Rng rng(seed);
  const auto& chain = family_chain();
  TreePredicate pred = tree_from_stage(chain[3]);
  size_t member_failures = 0;
  std::vector<FunSpecPtr> members;
  for (int t = 0; t < 20; ++t) {
    FunSpecPtr root = gen_base_spec(rng);
    FunSpecPtr m3 = member_node(3, root);
    members.push_back(m3);
    TreeWalker walker(pred);
    for (BigInt i = 0; i < 500; ++i) {
      walker.push(eval(m3, i));
      if (walker.rejected()) {
        ++member_failures;
        break;
      }
    }
  }
  size_t corruption_failures = 0;
  std::vector<LazySeq> rejected_strings;
  for (int t = 0; t < 100; ++t) {
    const FunSpecPtr& m3 = members[rng.below(members.size())];
    BigInt c(rng.below(40));
    Nat original = eval(m3, c);
    Nat corrupted(BigInt(rng.below(64)));
    while (nat_eq(corrupted, original)) {
      corrupted = Nat(BigInt(rng.below(64)) + 1);
    }
    BigInt horizon = 2 * pred.coordinate_use_bound(c);
    TreeWalker walker(pred);
    std::optional<BigInt> depth;
    LazySeq str;
    for (BigInt i = 0; i < horizon; ++i) {
      Nat v = i == c ? corrupted : eval(m3, i);
      str.push_back(v);
      walker.push(std::move(v));
      if (walker.rejected()) {
        depth = i + 1;
        break;
      }
    }
    if (!depth) {
      ++corruption_failures;
    } else if (rejected_strings.size() < 40) {
      rejected_strings.push_back(str);
    }
  }
  // monotone rejection over sampled extension pairs
  size_t monotone_failures = 0, pairs = 0;
  while (pairs < 1000 && !rejected_strings.empty()) {
    const LazySeq& base = rejected_strings[rng.below(rejected_strings.size())];
    LazySeq ext = base;
    uint64_t extra = 1 + rng.below(3);
    for (uint64_t i = 0; i < extra; ++i) ext.push_back(Nat(BigInt(rng.below(8))));
    ++pairs;
    if (pred.accepts(ext)) ++monotone_failures;
  }
  std::ostringstream os;
  os << "20 members to length 500 (" << member_failures << " rejected), 100 corruptions ("
     << corruption_failures << " undetected), " << pairs << " extension pairs ("
     << monotone_failures << " non-monotone)";
  r.details = os.str();
  r.pass = member_failures == 0 && corruption_failures == 0 && monotone_failures == 0;
  return r;
}

CriterionResult criterion_determinism(uint64_t seed) {
  CriterionResult r{12, "determinism", false, ""};
  std::string a = base_report(seed);
  std::string b = base_report(seed);
  r.pass = a == b;
  r.details = r.pass ? "two runs byte-identical" : "reports differ";
  return r;
}

}  // namespace

CriterionResult run_criterion(int id, uint64_t seed) {
  Rng sub(seed + 0x1000u * static_cast<uint64_t>(id));
  uint64_t s = sub.next();
  switch (id) {
    case 1: return criterion_coding(s);
    case 2: return criterion_emap(s);
    case 3: return criterion_adf(s);
    case 4: return criterion_tangled(s);
    case 5: return criterion_hset(s);
    case 6: return criterion_evdiff(s);
    case 7: return criterion_witness(s);
    case 8: return criterion_classify(s);
    case 9: return criterion_mangle(s);
    case 10: return criterion_span(s);
    case 11: return criterion_tree(s);
    case 12: return criterion_determinism(seed);
    default: throw NatError("unknown criterion id");
  }
}

std::vector<CriterionResult> run_all_criteria(uint64_t seed) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= 12; ++id) out.push_back(run_criterion(id, seed));
  return out;
}

int criterion_id_by_name(const std::string& name) {
  static const std::vector<std::string> names = {
      "coding", "emap", "adf", "tangled", "hset", "evdiff",
      "witness", "classify", "mangle", "span", "tree", "determinism"};
  for (size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return static_cast<int>(i) + 1;
  }
  return -1;
}

std::string report_line(const CriterionResult& r) {
  std::ostringstream os;
  os << (r.pass ? "PASS" : "FAIL") << " criterion " << r.id << " (" << r.name
     << "): " << r.details;
  return os.str();
}

std::string base_report(uint64_t seed) {
  std::ostringstream os;
  for (int id = 1; id <= 11; ++id) {
    os << report_line(run_criterion(id, seed)) << "\n";
  }
  return os.str();
}

}  // namespace medf
