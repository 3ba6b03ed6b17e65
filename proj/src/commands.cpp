#include "commands.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "fuzz.hpp"
#include "specfile.hpp"
#include "subobject.hpp"

namespace qsl {

namespace {

using nlohmann::ordered_json;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrKind::BadArgument, "cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

ordered_json witness_json(const Quantale& q, const std::vector<int>& w) {
  ordered_json arr = ordered_json::array();
  for (int x : w)
    arr.push_back(x >= 0 && x < q.size() ? q.label(x) : std::to_string(x));
  return arr;
}

ordered_json profile_json(const Quantale& q) {
  const AxiomProfile& p = q.profile();
  ordered_json j;
  for (const auto& name : AxiomProfile::flag_names()) j[name] = p.flag(name);
  if (p.unital) j["unit"] = q.label(p.unit);
  if (p.p_artinian_degree)
    j["p_artinian_degree"] = *p.p_artinian_degree;
  else
    j["p_artinian_degree"] = nullptr;
  ordered_json fails = ordered_json::object();
  for (const auto& [flag, wit] : p.failures) {
    ordered_json w;
    w["witness"] = witness_json(q, wit.elems);
    if (!wit.note.empty()) w["note"] = wit.note;
    fails[flag] = w;
  }
  j["failures"] = fails;
  return j;
}

std::string profile_text(const Quantale& q) {
  const AxiomProfile& p = q.profile();
  std::ostringstream os;
  for (const auto& name : AxiomProfile::flag_names()) {
    os << "  " << name;
    for (size_t pad = name.size(); pad < 20; ++pad) os << ' ';
    os << "= " << (p.flag(name) ? "true" : "false");
    auto it = p.failures.find(name);
    if (!p.flag(name) && it != p.failures.end()) {
      os << "  (";
      if (!it->second.elems.empty()) {
        os << "witness:";
        for (int x : it->second.elems) os << ' ' << q.label(x);
      }
      if (!it->second.note.empty())
        os << (it->second.elems.empty() ? "" : "; ") << it->second.note;
      os << ")";
    }
    os << "\n";
  }
  if (p.p_artinian_degree)
    os << "  p-artinian degree   = " << *p.p_artinian_degree << "\n";
  return os.str();
}

ordered_json quantale_json(const Quantale& q, const std::string& name) {
  ordered_json j;
  if (!name.empty()) j["name"] = name;
  j["size"] = q.size();
  j["labels"] = q.labels();
  j["bottom"] = q.label(q.bottom());
  j["top"] = q.label(q.top());
  j["unit"] = q.unit() >= 0 ? ordered_json(q.label(q.unit())) : ordered_json(nullptr);
  ordered_json idem = ordered_json::array();
  for (int x = 0; x < q.size(); ++x)
    if (q.is_idem(x)) idem.push_back(q.label(x));
  j["idempotents"] = idem;
  return j;
}

ordered_json sheaf_report_json(const Quantale& q, const SheafReport& rep) {
  ordered_json j;
  j["separated"] = rep.separated;
  j["sheaf"] = rep.sheaf;
  j["truncated"] = rep.truncated;
  if (rep.witness_element >= 0) {
    j["witness_element"] = q.label(rep.witness_element);
    ordered_json cover = ordered_json::array();
    for (uint64_t m = rep.witness_cover; m; m &= m - 1)
      cover.push_back(q.label(std::countr_zero(m)));
    j["witness_cover"] = cover;
    j["witness_family"] = rep.witness_family;
  }
  if (!rep.note.empty()) j["note"] = rep.note;
  return j;
}

struct LoadedPresheaf {
  Presheaf presheaf;
  std::string description;
  std::shared_ptr<const Quantale> base;
};

// TARGET is either FILE or BUILDER@FILE with BUILDER one of terminal,
// omega_minus, omega_plus, representable:ELEM.
LoadedPresheaf load_presheaf_target(const std::string& target, const std::string& name,
                                    const CheckCaps& caps) {
  std::string builder, path = target;
  size_t at = target.find('@');
  if (at != std::string::npos) {
    builder = target.substr(0, at);
    path = target.substr(at + 1);
  }
  SpecDocument doc = parse_spec(slurp(path));
  ResolvedSpec rs = resolve_spec(doc, caps);
  LoadedPresheaf out;
  if (!builder.empty()) {
    auto base = rs.main_quantale();
    out.base = base;
    if (builder == "terminal") {
      out.presheaf = terminal_presheaf(base);
    } else if (builder == "omega_minus") {
      out.presheaf = *omega_minus(base, caps).omega;
    } else if (builder == "omega_plus") {
      out.presheaf = *omega_plus(base, caps).omega;
    } else if (builder.rfind("representable:", 0) == 0) {
      out.presheaf = representable(base, resolve_element(*base, builder.substr(14)));
    } else {
      throw Error(ErrKind::BadArgument, "unknown presheaf builder: " + builder);
    }
    out.description = builder + "@" + path;
    return out;
  }
  if (rs.presheaf_names.empty())
    throw Error(ErrKind::BadArgument, "file defines no presheaf: " + path);
  std::string chosen = name.empty() ? rs.presheaf_names.front() : name;
  auto it = rs.presheaves.find(chosen);
  if (it == rs.presheaves.end())
    throw Error(ErrKind::UnresolvedReference, "unknown presheaf: " + chosen);
  out.presheaf = it->second;
  out.base = out.presheaf.base;
  out.description = chosen + "@" + path;
  return out;
}

std::vector<Presheaf> build_pool(const ResolvedSpec& rs, std::shared_ptr<const Quantale> q,
                                 const std::vector<std::string>& tokens,
                                 std::vector<std::string>& described) {
  std::vector<Presheaf> pool;
  for (const auto& t : tokens) {
    if (t == "terminal") {
      pool.push_back(terminal_presheaf(q));
      described.push_back("terminal");
    } else if (t == "representables") {
      for (int v = 0; v < q->size(); ++v) {
        pool.push_back(representable(q, v));
        described.push_back("representable " + q->label(v));
      }
    } else if (t.rfind("representable:", 0) == 0) {
      int v = resolve_element(*q, t.substr(14));
      pool.push_back(representable(q, v));
      described.push_back("representable " + q->label(v));
    } else {
      auto it = rs.presheaves.find(t);
      if (it == rs.presheaves.end())
        throw Error(ErrKind::UnresolvedReference, "unknown pool member: " + t);
      pool.push_back(it->second);
      described.push_back(t);
    }
  }
  return pool;
}

int exit_code_for(const Error& e) {
  switch (e.kind) {
    case ErrKind::SyntaxError:
    case ErrKind::UnresolvedReference:
    case ErrKind::NonRectangularTable:
    case ErrKind::BadArgument:
      return 2;
    case ErrKind::CapExceeded:
    case ErrKind::BudgetExhausted:
      return 3;
    default:
      return 1;
  }
}

struct Options {
  std::string format = "text";
  bool timing = false;
  long long cover_cap = 1 << 16;
  long long sub_cap = 1 << 14;
  long long budget = 1ll << 22;
  CheckCaps caps() const { return CheckCaps{cover_cap, budget}; }
};

void cmd_check_quantale(const std::string& file, const Options& opt, Report& rep) {
  SpecDocument doc = parse_spec(slurp(file));
  if (doc.quantales.empty())
    throw Error(ErrKind::BadArgument, "file defines no quantale: " + file);
  const QuantaleSpec& qs = doc.quantales.front();

  if (!qs.generator) {
    // explicit tables: list every violated law, not just the first
    RawTables raw = assemble_quantale_tables(qs);
    auto violations = Quantale::check_laws(raw.leq, raw.mult);
    if (!violations.empty()) {
      rep.result["valid"] = false;
      ordered_json laws = ordered_json::array();
      std::ostringstream text;
      text << "valid: no\n";
      for (const auto& v : violations) {
        ordered_json one;
        one["law"] = to_string(v.law);
        one["witness"] = v.witness;
        one["detail"] = v.detail;
        laws.push_back(one);
        text << "  " << to_string(v.law) << ": " << v.detail << " (witness:";
        for (int w : v.witness) text << ' ' << w;
        text << ")\n";
      }
      rep.result["violations"] = laws;
      rep.exit_code = 1;
      rep.text = text.str();
      return;
    }
  }

  ResolvedSpec rs = resolve_spec(doc, opt.caps());
  auto q = rs.main_quantale();
  rep.result["quantale"] = quantale_json(*q, qs.name);
  rep.result["valid"] = true;
  rep.result["violations"] = ordered_json::array();
  rep.result["profile"] = profile_json(*q);
  std::ostringstream text;
  text << "quantale: " << (qs.name.empty() ? "(unnamed)" : qs.name) << " (" << q->size()
       << " elements)\nvalid: yes\n";
  text << "bottom = " << q->label(q->bottom()) << "  top = " << q->label(q->top());
  if (q->unit() >= 0) text << "  unit = " << q->label(q->unit());
  text << "\nprofile:\n" << profile_text(*q);
  rep.text = text.str();
}

void cmd_approx(const std::string& file, const std::string& elem, const Options& opt,
                Report& rep) {
  ResolvedSpec rs = resolve_spec(parse_spec(slurp(file)), opt.caps());
  auto q = rs.main_quantale();
  int e = resolve_element(*q, elem);
  rep.result["element"] = q->label(e);
  std::ostringstream text;
  text << "element: " << q->label(e) << "\n";
  if (q->has_minus()) {
    rep.result["minus"] = q->label(q->approx_minus(e));
    text << "q^- = " << q->label(q->approx_minus(e)) << "\n";
  } else {
    rep.result["minus"] = nullptr;
    text << "q^- = n/a (requires commutative semicartesian)\n";
  }
  if (q->has_plus()) {
    rep.result["plus"] = q->label(q->approx_plus(e));
    text << "q^+ = " << q->label(q->approx_plus(e)) << "\n";
  } else {
    rep.result["plus"] = nullptr;
    text << "q^+ = n/a (requires unital commutative semicartesian double-distributive)\n";
  }
  auto [k, v] = q->power_stabilization(e);
  rep.result["power_index"] = k;
  rep.result["power_value"] = q->label(v);
  text << "powers stabilize at exponent " << k << " with value " << q->label(v) << "\n";
  rep.text = text.str();
}

void cmd_check_sheaf(const std::string& target, const std::string& name, const Options& opt,
                     Report& rep) {
  LoadedPresheaf lp = load_presheaf_target(target, name, opt.caps());
  rep.result["presheaf"] = lp.description;
  auto violations = validate_presheaf(lp.presheaf);
  if (!violations.empty()) {
    rep.result["valid"] = false;
    ordered_json vj = ordered_json::array();
    for (const auto& v : violations) {
      ordered_json one;
      one["law"] = to_string(v.law);
      one["witness"] = v.witness;
      one["detail"] = v.detail;
      vj.push_back(one);
    }
    rep.result["violations"] = vj;
    rep.exit_code = 1;
    rep.text = "presheaf: " + lp.description + "\nvalid: no (" + violations.front().detail +
               ")\n";
    return;
  }
  rep.result["valid"] = true;
  auto sr = sheaf_check(lp.presheaf, opt.caps());
  rep.result["stalks"] = lp.presheaf.stalk;
  rep.result["report"] = sheaf_report_json(*lp.base, sr);
  rep.truncated = sr.truncated;
  std::ostringstream text;
  text << "presheaf: " << lp.description << "\nstalks:";
  for (int s : lp.presheaf.stalk) text << ' ' << s;
  text << "\nseparated: " << (sr.separated ? "yes" : "no");
  text << "\nsheaf: " << (sr.sheaf ? (sr.truncated ? "yes (up to cap)" : "yes") : "no");
  if (!sr.note.empty()) text << "\nnote: " << sr.note;
  text << "\n";
  rep.text = text.str();
  rep.exit_code = sr.sheaf ? (sr.truncated ? 3 : 0) : 1;
}

void cmd_classify(const std::string& file, const std::string& variant,
                  const std::vector<std::string>& pool_tokens, const Options& opt,
                  Report& rep) {
  ResolvedSpec rs = resolve_spec(parse_spec(slurp(file)), opt.caps());
  auto q = rs.main_quantale();
  std::vector<std::string> tokens = pool_tokens;
  if (tokens.empty()) tokens = rs.pool;
  if (tokens.empty()) tokens = {"terminal", "representables"};
  std::vector<std::string> described;
  auto pool = build_pool(rs, q, tokens, described);

  TruthVariant tv = variant == "minus" ? TruthVariant::minus : TruthVariant::plus;
  auto cr = verify_classifier(q, tv, pool, opt.sub_cap, opt.budget, opt.caps());

  rep.result["variant"] = variant;
  rep.result["pool"] = described;
  rep.result["preconditions_ok"] = cr.preconditions_ok;
  rep.result["missing_flags"] = cr.missing_flags;
  rep.result["omega_is_sheaf"] = cr.omega_is_sheaf;
  rep.result["sheaves_checked"] = cr.sheaves_checked;
  rep.result["subsheaves_checked"] = cr.subsheaves_checked;
  if (tv == TruthVariant::minus) rep.result["dense_subsheaves"] = cr.dense_subsheaves;
  if (tv == TruthVariant::plus) rep.result["sub_hom_bijection"] = cr.sub_hom_bijection;
  rep.result["hom_terminal"] =
      cr.hom_terminal >= 0 ? ordered_json(cr.hom_terminal) : ordered_json(nullptr);
  rep.result["skipped"] = cr.skipped;
  rep.result["all_ok"] = cr.all_ok;
  rep.result["failures"] = cr.failures;

  std::ostringstream text;
  text << "variant: " << variant << "\npreconditions: "
       << (cr.preconditions_ok ? "met" : "unmet");
  for (const auto& f : cr.missing_flags) text << ' ' << f;
  text << "\ntruth presheaf is a sheaf: " << (cr.omega_is_sheaf ? "yes" : "no") << "\n";
  text << "pool sheaves: " << cr.sheaves_checked
       << ", subsheaves classified: " << cr.subsheaves_checked << "\n";
  if (cr.hom_terminal >= 0)
    text << "points of the truth sheaf: " << cr.hom_terminal << "\n";
  text << "verdict: " << (cr.all_ok ? "classifier verified" : "classifier FAILED") << "\n";
  for (const auto& f : cr.failures) text << "  - " << f << "\n";
  rep.text = text.str();
  rep.exit_code = cr.all_ok ? (cr.skipped > 0 ? 3 : 0) : 1;
}

void cmd_sub(const std::string& file, const std::string& elem, const Options& opt,
             Report& rep) {
  ResolvedSpec rs = resolve_spec(parse_spec(slurp(file)), opt.caps());
  auto q = rs.main_quantale();
  int a = resolve_element(*q, elem);
  auto sr = verify_sub_iso(q, a, opt.sub_cap, opt.caps());

  rep.result["anchor"] = q->label(a);
  rep.result["subobjects"] = sr.subobject_count;
  rep.result["interval_size"] = sr.interval_size;
  rep.result["bijective"] = sr.bijective;
  rep.result["order_iso"] = sr.order_iso;
  rep.result["sups_preserved"] = sr.sups_preserved;
  rep.result["infs_preserved"] = sr.infs_preserved;
  rep.result["star_matches_mult"] = sr.star_matches_mult;
  rep.result["star_idempotent"] = sr.star_idempotent;
  rep.result["non_idempotent_witness"] =
      sr.non_idem_witness.empty() ? ordered_json(nullptr)
                                  : ordered_json(q->label(sr.non_idem_witness[0]));
  rep.result["distributivity_witness"] = witness_json(*q, sr.distrib_witness);
  rep.result["ok"] = sr.ok;
  rep.result["failures"] = sr.failures;

  std::ostringstream text;
  text << "Sub(Q(-," << q->label(a) << ")): " << sr.subobject_count << " subobjects\n";
  text << "interval [bottom," << q->label(a) << "]: " << sr.interval_size << " elements\n";
  text << "lattice isomorphism: " << (sr.bijective && sr.order_iso ? "yes" : "NO") << "\n";
  text << "* matches the multiplication cell-for-cell: "
       << (sr.star_matches_mult ? "yes" : "NO") << "\n";
  if (!sr.star_idempotent)
    text << "* is not idempotent (witness " << q->label(sr.non_idem_witness[0])
         << "), so this subobject lattice is not a Heyting algebra\n";
  if (!sr.distrib_witness.empty())
    text << "meet fails to distribute over join at (" << q->label(sr.distrib_witness[0])
         << "," << q->label(sr.distrib_witness[1]) << "," << q->label(sr.distrib_witness[2])
         << ")\n";
  text << "verdict: " << (sr.ok ? "isomorphism verified" : "FAILED") << "\n";
  for (const auto& f : sr.failures) text << "  - " << f << "\n";
  rep.text = text.str();
  rep.exit_code = sr.ok ? 0 : 1;
}

void cmd_tensor(const std::string& left, const std::string& right, const Options& opt,
                Report& rep) {
  LoadedPresheaf lf = load_presheaf_target(left, "", opt.caps());
  LoadedPresheaf rf = load_presheaf_target(right, "", opt.caps());
  bool same_base = lf.base->size() == rf.base->size();
  for (int a = 0; same_base && a < lf.base->size(); ++a)
    for (int b = 0; b < lf.base->size(); ++b) {
      same_base = lf.base->leq(a, b) == rf.base->leq(a, b) &&
                  lf.base->mul(a, b) == rf.base->mul(a, b);
      if (!same_base) break;
    }
  if (!same_base)
    throw Error(ErrKind::BadArgument, "tensor factors live over different bases");
  // share one base object so stalk tables line up
  Presheaf rp = rf.presheaf;
  rp.base = lf.base;
  DayTensor d = day_tensor(lf.presheaf, rp, opt.budget);
  rep.result["left"] = lf.description;
  rep.result["right"] = rf.description;
  rep.result["stalks"] = d.tensor.stalk;
  auto sr = sheaf_check(d.tensor, opt.caps());
  rep.result["report"] = sheaf_report_json(*lf.base, sr);
  rep.truncated = sr.truncated;
  std::ostringstream text;
  text << "tensor of " << lf.description << " and " << rf.description << "\nstalks:";
  for (int s : d.tensor.stalk) text << ' ' << s;
  text << "\nsheaf: " << (sr.sheaf ? "yes" : "no") << "\n";
  rep.text = text.str();
  rep.exit_code = 0;
}

void cmd_fuzz(int size, const std::string& seek, long long budget,
              std::optional<uint64_t> seed, Report& rep) {
  FuzzResult fr = fuzz_search(size, seek, budget, seed);
  rep.machine_timing = false;  // byte-identical reruns
  rep.result["target"] = fr.target;
  rep.result["size"] = fr.size;
  rep.result["mode"] = fr.mode;
  rep.result["seed"] = fr.seed;
  rep.result["found"] = fr.found;
  rep.result["exhausted"] = fr.exhausted;
  rep.result["lattices"] = fr.lattices;
  rep.result["examined"] = fr.examined;
  rep.result["distinct"] = fr.distinct;
  rep.result["budget_used"] = fr.budget_used;
  if (fr.witness) {
    ordered_json w;
    w["size"] = fr.witness->size();
    ordered_json leq = ordered_json::array();
    ordered_json mult = ordered_json::array();
    for (int a = 0; a < fr.witness->size(); ++a) {
      ordered_json lrow = ordered_json::array(), mrow = ordered_json::array();
      for (int b = 0; b < fr.witness->size(); ++b) {
        lrow.push_back(fr.witness->leq(a, b) ? 1 : 0);
        mrow.push_back(fr.witness->mul(a, b));
      }
      leq.push_back(lrow);
      mult.push_back(mrow);
    }
    w["leq"] = leq;
    w["mult"] = mult;
    w["canonical"] = fr.canonical;
    rep.result["witness"] = w;
  } else {
    rep.result["witness"] = nullptr;
  }

  std::ostringstream text;
  text << "target: " << fr.target << "  size: " << fr.size << "  mode: " << fr.mode << "\n";
  text << "examined " << fr.examined << " quantales (" << fr.distinct
       << " distinct up to renumbering) over " << fr.lattices << " lattices\n";
  if (fr.found)
    text << "found a witness\n";
  else if (fr.exhausted)
    text << "no witness exists at this size (search space exhausted)\n";
  else
    text << "no witness found within budget\n";
  rep.text = text.str();
  rep.exit_code = fr.found || fr.exhausted ? 0 : 3;
}

void cmd_report(const std::string& in, Report& rep) {
  Report parsed = parse_machine(slurp(in));
  rep.result["validates"] = true;
  rep.result["command"] = parsed.command;
  rep.result["exit_code"] = parsed.exit_code;
  rep.result["result"] = parsed.result;
  std::ostringstream text;
  text << "machine report validates against schema 1\ncommand:";
  for (const auto& c : parsed.command) text << ' ' << c;
  text << "\nexit_code: " << parsed.exit_code << "\n";
  rep.text = text.str();
}

}  // namespace

RunResult run_command(const std::vector<std::string>& argv) {
  auto start = std::chrono::steady_clock::now();
  Report rep;
  rep.command = argv;
  Options opt;

  CLI::App app{"finite quantale and sheaf workbench"};
  app.require_subcommand(1);
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", opt.format, "text or machine")
        ->check(CLI::IsMember({"text", "machine"}));
    sub->add_flag("--timing", opt.timing, "include elapsed time in text output");
    sub->add_option("--cap", opt.cover_cap, "cover enumeration cap per element");
    sub->add_option("--sub-cap", opt.sub_cap, "subsheaf enumeration cap");
    sub->add_option("--budget", opt.budget, "search/enumeration budget");
  };

  std::string file, elem = "top", presheaf_name, variant = "minus", seek = "nongeometric";
  std::string left, right, report_in;
  std::vector<std::string> pool_tokens;
  int fuzz_size = 4;
  uint64_t seed_value = 0;
  bool seed_given = false;

  auto* cq = app.add_subcommand("check-quantale", "validate tables and decide every axiom flag");
  cq->add_option("file", file)->required();
  add_common(cq);

  auto* ap = app.add_subcommand("approx", "idempotent approximations and power chains");
  ap->add_option("file", file)->required();
  ap->add_option("--elem", elem, "element reference")->required();
  add_common(ap);

  auto* cs = app.add_subcommand("check-sheaf", "separated/sheaf verdict for a presheaf");
  cs->add_option("target", file, "FILE or builder@FILE")->required();
  cs->add_option("--presheaf", presheaf_name, "presheaf name inside the file");
  add_common(cs);

  auto* cl = app.add_subcommand("classify", "verify the truth-value classifier over a pool");
  cl->add_option("file", file)->required();
  cl->add_option("--variant", variant)->check(CLI::IsMember({"minus", "plus"}))->required();
  cl->add_option("--pool", pool_tokens, "pool members")->delimiter(',');
  add_common(cl);

  auto* su = app.add_subcommand("sub", "subobject lattice of a representable vs the interval");
  su->add_option("file", file)->required();
  su->add_option("--elem", elem, "anchor element");
  add_common(su);

  auto* te = app.add_subcommand("tensor", "tensor two presheaves");
  te->add_option("left", left, "FILE or builder@FILE")->required();
  te->add_option("right", right, "FILE or builder@FILE")->required();
  add_common(te);

  auto* fz = app.add_subcommand("fuzz", "search small tables for a profile property");
  fz->add_option("--size", fuzz_size)->required();
  fz->add_option("--seek", seek,
                 "locale | integral-nonidempotent | nongeometric | noncoherent | "
                 "plus-preconditions-nonlocale")
      ->required();
  auto* seed_opt = fz->add_option("--seed", seed_value, "random-mode seed");
  add_common(fz);

  auto* rp = app.add_subcommand("report", "validate and re-render a machine report");
  rp->add_option("--in", report_in)->required();
  add_common(rp);

  std::vector<const char*> cargs;
  cargs.push_back("qsl");
  for (const auto& a : argv) cargs.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(cargs.size()), cargs.data());
    seed_given = seed_opt->count() > 0;

    if (cq->parsed()) cmd_check_quantale(file, opt, rep);
    else if (ap->parsed()) cmd_approx(file, elem, opt, rep);
    else if (cs->parsed()) cmd_check_sheaf(file, presheaf_name, opt, rep);
    else if (cl->parsed()) cmd_classify(file, variant, pool_tokens, opt, rep);
    else if (su->parsed()) cmd_sub(file, elem, opt, rep);
    else if (te->parsed()) cmd_tensor(left, right, opt, rep);
    else if (fz->parsed())
      cmd_fuzz(fuzz_size, seek, opt.budget,
               seed_given ? std::optional<uint64_t>(seed_value) : std::nullopt, rep);
    else if (rp->parsed()) cmd_report(report_in, rep);
  } catch (const CLI::CallForHelp&) {
    rep.text = app.help();
    rep.exit_code = 0;
    rep.result["help"] = true;
  } catch (const CLI::ParseError& e) {
    rep.exit_code = 2;
    rep.text = std::string("usage error: ") + e.what() + "\n";
    rep.result["error"] = e.what();
  } catch (const Error& e) {
    rep.exit_code = exit_code_for(e);
    rep.text = std::string("error [") + to_string(e.kind) + "]: " + e.what() + "\n";
    rep.result["error"] = e.what();
    rep.result["error_kind"] = to_string(e.kind);
    if (!e.witness.empty()) rep.result["error_witness"] = e.witness;
  } catch (const std::exception& e) {
    rep.exit_code = 2;
    rep.text = std::string("error: ") + e.what() + "\n";
    rep.result["error"] = e.what();
  }

  auto end = std::chrono::steady_clock::now();
  rep.timing_ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(end - start).count();

  RunResult out;
  out.output = opt.format == "machine" ? render_machine(rep) : render_text(rep, opt.timing);
  out.report = std::move(rep);
  return out;
}

}  // namespace qsl
