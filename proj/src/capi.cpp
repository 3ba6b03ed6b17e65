#include "qsl/qsl_c.h"

#include <cstring>
#include <memory>
#include <string>

#include "commands.hpp"
#include "specfile.hpp"
#include "subobject.hpp"

struct qsl_quantale {
  std::shared_ptr<const qsl::Quantale> q;
};

struct qsl_presheaf {
  qsl::Presheaf f;
};

namespace {

thread_local std::string g_last_error;

qsl_status status_of(const qsl::Error& e) {
  switch (e.kind) {
    case qsl::ErrKind::SyntaxError:
    case qsl::ErrKind::UnresolvedReference:
    case qsl::ErrKind::NonRectangularTable:
      return QSL_ERR_PARSE;
    case qsl::ErrKind::BadArgument:
      return QSL_ERR_BAD_ARG;
    case qsl::ErrKind::CapExceeded:
    case qsl::ErrKind::BudgetExhausted:
      return QSL_ERR_CAP;
    case qsl::ErrKind::PreconditionViolated:
    case qsl::ErrKind::NotDense:
    case qsl::ErrKind::NotGeometric:
    case qsl::ErrKind::NotIdempotentBase:
    case qsl::ErrKind::EmptyInterval:
      return QSL_ERR_PRECONDITION;
    default:
      return QSL_ERR_LAW;
  }
}

template <typename Fn>
qsl_status guarded(Fn&& fn) {
  try {
    fn();
    return QSL_OK;
  } catch (const qsl::Error& e) {
    g_last_error = e.what();
    return status_of(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return QSL_ERR_BAD_ARG;
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* qsl_last_error(void) { return g_last_error.c_str(); }

void qsl_string_free(char* s) { std::free(s); }

qsl_status qsl_quantale_chain(int k, qsl_quantale** out) {
  return guarded([&] {
    *out = new qsl_quantale{
        std::make_shared<const qsl::Quantale>(qsl::chain_quantale(k))};
  });
}

qsl_status qsl_quantale_divisor(long long n, qsl_quantale** out) {
  return guarded([&] {
    *out = new qsl_quantale{
        std::make_shared<const qsl::Quantale>(qsl::divisor_quantale(n))};
  });
}

qsl_status qsl_quantale_powerset(int m, qsl_quantale** out) {
  return guarded([&] {
    *out = new qsl_quantale{
        std::make_shared<const qsl::Quantale>(qsl::powerset_locale(m))};
  });
}

qsl_status qsl_quantale_from_tables(int n, const unsigned char* leq, const int* mult,
                                    qsl_quantale** out) {
  return guarded([&] {
    if (n < 1 || !leq || !mult)
      throw qsl::Error(qsl::ErrKind::BadArgument, "bad table arguments");
    std::vector<std::vector<char>> l(n, std::vector<char>(n));
    std::vector<std::vector<int>> m(n, std::vector<int>(n));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        l[a][b] = leq[a * n + b] ? 1 : 0;
        m[a][b] = mult[a * n + b];
      }
    *out = new qsl_quantale{
        std::make_shared<const qsl::Quantale>(qsl::Quantale::make(l, m))};
  });
}

qsl_status qsl_quantale_parse(const char* text, qsl_quantale** out) {
  return guarded([&] {
    if (!text) throw qsl::Error(qsl::ErrKind::BadArgument, "null text");
    auto rs = qsl::resolve_spec(qsl::parse_spec(text));
    *out = new qsl_quantale{rs.main_quantale()};
  });
}

void qsl_quantale_free(qsl_quantale* q) { delete q; }

int qsl_quantale_size(const qsl_quantale* q) { return q->q->size(); }
int qsl_quantale_leq(const qsl_quantale* q, int a, int b) { return q->q->leq(a, b) ? 1 : 0; }
int qsl_quantale_mult(const qsl_quantale* q, int a, int b) { return q->q->mul(a, b); }
int qsl_quantale_join(const qsl_quantale* q, int a, int b) { return q->q->join(a, b); }
int qsl_quantale_meet(const qsl_quantale* q, int a, int b) { return q->q->meet(a, b); }
int qsl_quantale_bottom(const qsl_quantale* q) { return q->q->bottom(); }
int qsl_quantale_top(const qsl_quantale* q) { return q->q->top(); }
int qsl_quantale_unit(const qsl_quantale* q) { return q->q->unit(); }

int qsl_quantale_element(const qsl_quantale* q, const char* token) {
  try {
    return qsl::resolve_element(*q->q, token ? token : "");
  } catch (...) {
    return -1;
  }
}

qsl_status qsl_quantale_label(const qsl_quantale* q, int a, char** out) {
  return guarded([&] {
    if (a < 0 || a >= q->q->size())
      throw qsl::Error(qsl::ErrKind::BadArgument, "element out of range");
    *out = dup_string(q->q->label(a));
  });
}

qsl_status qsl_quantale_profile_json(const qsl_quantale* q, char** json_out) {
  return guarded([&] {
    const auto& p = q->q->profile();
    nlohmann::ordered_json j;
    for (const auto& name : qsl::AxiomProfile::flag_names()) j[name] = p.flag(name);
    if (p.unital) j["unit"] = q->q->label(p.unit);
    j["p_artinian_degree"] =
        p.p_artinian_degree ? nlohmann::ordered_json(*p.p_artinian_degree)
                            : nlohmann::ordered_json(nullptr);
    nlohmann::ordered_json fails = nlohmann::ordered_json::object();
    for (const auto& [flag, wit] : p.failures) {
      nlohmann::ordered_json w;
      w["witness"] = wit.elems;
      if (!wit.note.empty()) w["note"] = wit.note;
      fails[flag] = w;
    }
    j["failures"] = fails;
    *json_out = dup_string(j.dump());
  });
}

qsl_status qsl_approx_minus(const qsl_quantale* q, int x, int* out) {
  return guarded([&] { *out = q->q->approx_minus(x); });
}

qsl_status qsl_approx_plus(const qsl_quantale* q, int x, int* out) {
  return guarded([&] { *out = q->q->approx_plus(x); });
}

int qsl_residual(const qsl_quantale* q, int a, int b) { return q->q->residual(a, b); }

qsl_status qsl_power_stabilization(const qsl_quantale* q, int x, int* index_out,
                                   int* value_out) {
  return guarded([&] {
    auto [k, v] = q->q->power_stabilization(x);
    *index_out = k;
    *value_out = v;
  });
}

qsl_status qsl_presheaf_terminal(const qsl_quantale* q, qsl_presheaf** out) {
  return guarded([&] { *out = new qsl_presheaf{qsl::terminal_presheaf(q->q)}; });
}

qsl_status qsl_presheaf_representable(const qsl_quantale* q, int v, qsl_presheaf** out) {
  return guarded([&] {
    if (v < 0 || v >= q->q->size())
      throw qsl::Error(qsl::ErrKind::BadArgument, "element out of range");
    *out = new qsl_presheaf{qsl::representable(q->q, v)};
  });
}

qsl_status qsl_presheaf_omega(const qsl_quantale* q, int variant, qsl_presheaf** out) {
  return guarded([&] {
    auto om = variant == 0 ? qsl::omega_minus(q->q) : qsl::omega_plus(q->q);
    *out = new qsl_presheaf{*om.omega};
  });
}

void qsl_presheaf_free(qsl_presheaf* f) { delete f; }

int qsl_presheaf_stalk(const qsl_presheaf* f, int u) { return f->f.stalk[u]; }

int qsl_presheaf_restrict(const qsl_presheaf* f, int u, int v, int s) {
  return f->f.res[u][v][s];
}

qsl_status qsl_sheaf_check_json(const qsl_presheaf* f, long long cover_cap, char** json_out) {
  return guarded([&] {
    qsl::CheckCaps caps;
    if (cover_cap > 0) caps.covers_per_element = cover_cap;
    auto rep = qsl::sheaf_check(f->f, caps);
    nlohmann::ordered_json j;
    j["separated"] = rep.separated;
    j["sheaf"] = rep.sheaf;
    j["truncated"] = rep.truncated;
    j["note"] = rep.note;
    *json_out = dup_string(j.dump());
  });
}

qsl_status qsl_run(int argc, const char* const* argv, char** output, int* exit_code) {
  return guarded([&] {
    std::vector<std::string> args;
    for (int i = 0; i < argc; ++i) args.emplace_back(argv[i]);
    auto result = qsl::run_command(args);
    if (output) *output = dup_string(result.output);
    if (exit_code) *exit_code = result.report.exit_code;
  });
}

}  // extern "C"
