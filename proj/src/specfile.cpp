#include "specfile.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "subobject.hpp"

namespace qsl {

namespace {

struct Line {
  int number = 0;
  std::string text;
};

[[noreturn]] void fail(int line, int col, const std::string& expected) {
  std::ostringstream os;
  os << "line " << line << ", col " << col << ": expected " << expected;
  Error e(ErrKind::SyntaxError, os.str());
  e.line = line;
  e.col = col;
  throw e;
}

std::vector<std::string> tokens_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string t;
  while (is >> t) out.push_back(t);
  return out;
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// keys look like `name = value`, `res u v = ...`, `at u = ...`
bool split_key(const std::string& s, std::string& key, std::string& value) {
  size_t eq = s.find('=');
  if (eq == std::string::npos) return false;
  key = trim(s.substr(0, eq));
  value = trim(s.substr(eq + 1));
  return !key.empty();
}

GeneratorCall parse_generator(const std::string& text, int line);

GeneratorCall parse_generator_inner(const std::string& text, size_t& pos, int line) {
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto read_word = [&] {
    skip_ws();
    size_t start = pos;
    while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) ||
                                 text[pos] == '_'))
      ++pos;
    return text.substr(start, pos - start);
  };
  std::string head = read_word();
  if (head == "chain" || head == "divisor" || head == "powerset") {
    skip_ws();
    size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (start == pos) fail(line, static_cast<int>(pos + 1), "a number after " + head);
    GeneratorCall g;
    g.kind = head == "chain"     ? GeneratorCall::Kind::chain
             : head == "divisor" ? GeneratorCall::Kind::divisor
                                 : GeneratorCall::Kind::powerset;
    g.arg = std::stoll(text.substr(start, pos - start));
    return g;
  }
  if (head == "product" || head == "interval") {
    skip_ws();
    if (pos >= text.size() || text[pos] != '(')
      fail(line, static_cast<int>(pos + 1), "'(' after " + head);
    ++pos;
    GeneratorCall g;
    g.kind = head == "product" ? GeneratorCall::Kind::product : GeneratorCall::Kind::interval;
    g.children.push_back(parse_generator_inner(text, pos, line));
    if (g.kind == GeneratorCall::Kind::product) {
      skip_ws();
      while (pos < text.size() && text[pos] == ',') {
        ++pos;
        g.children.push_back(parse_generator_inner(text, pos, line));
        skip_ws();
      }
    } else {
      for (std::string* bound : {&g.lo, &g.hi}) {
        skip_ws();
        if (pos >= text.size() || text[pos] != ',')
          fail(line, static_cast<int>(pos + 1), "',' and an element reference");
        ++pos;
        skip_ws();
        // element labels may themselves contain balanced parentheses, e.g. (0)
        size_t start = pos;
        int depth = 0;
        while (pos < text.size()) {
          char ch = text[pos];
          if (depth == 0 && (ch == ',' || ch == ')')) break;
          if (ch == '(') ++depth;
          if (ch == ')') --depth;
          ++pos;
        }
        *bound = trim(text.substr(start, pos - start));
        if (bound->empty()) fail(line, static_cast<int>(pos + 1), "an element reference");
      }
    }
    skip_ws();
    if (pos >= text.size() || text[pos] != ')') fail(line, static_cast<int>(pos + 1), "')'");
    ++pos;
    return g;
  }
  fail(line, static_cast<int>(pos + 1),
       "one of chain, divisor, powerset, product, interval");
}

GeneratorCall parse_generator(const std::string& text, int line) {
  size_t pos = 0;
  GeneratorCall g = parse_generator_inner(text, pos, line);
  while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  if (pos != text.size()) fail(line, static_cast<int>(pos + 1), "end of generator expression");
  return g;
}

int parse_int(const std::string& s, int line, const char* what) {
  try {
    size_t used = 0;
    int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(what);
    return v;
  } catch (...) {
    fail(line, 1, std::string("an integer ") + what);
  }
}

}  // namespace

SpecDocument parse_spec(const std::string& text) {
  std::vector<Line> lines;
  {
    std::istringstream is(text);
    std::string raw;
    int number = 0;
    while (std::getline(is, raw)) {
      ++number;
      size_t hash = raw.find('#');
      if (hash != std::string::npos) raw = raw.substr(0, hash);
      raw = trim(raw);
      if (!raw.empty()) lines.push_back({number, raw});
    }
  }
  if (lines.empty() || lines[0].text != "qsl v1")
    fail(lines.empty() ? 1 : lines[0].number, 1, "header line 'qsl v1'");

  SpecDocument doc;
  enum class Section { none, quantale, presheaf, morphism, scenario } section = Section::none;
  enum class Table { none, order_matrix, order_hasse, mult, metric } table = Table::none;

  auto current_q = [&]() -> QuantaleSpec& { return doc.quantales.back(); };
  auto current_p = [&]() -> PresheafSpec& { return doc.presheaves.back(); };
  auto current_m = [&]() -> MorphismSpec& { return doc.morphisms.back(); };

  for (size_t i = 1; i < lines.size(); ++i) {
    const auto& [number, s] = lines[i];
    if (s.front() == '[') {
      if (s == "[quantale]") {
        doc.quantales.emplace_back();
        section = Section::quantale;
      } else if (s == "[presheaf]") {
        doc.presheaves.emplace_back();
        section = Section::presheaf;
      } else if (s == "[morphism]") {
        doc.morphisms.emplace_back();
        section = Section::morphism;
      } else if (s == "[scenario]") {
        doc.scenario.emplace();
        section = Section::scenario;
      } else {
        fail(number, 1, "[quantale], [presheaf], [morphism] or [scenario]");
      }
      table = Table::none;
      continue;
    }

    std::string key, value;
    bool is_key = split_key(s, key, value);

    // table continuation rows
    if (!is_key) {
      switch (table) {
        case Table::order_matrix: {
          auto toks = tokens_of(s);
          std::vector<char> row;
          for (const auto& t : toks) {
            if (t != "0" && t != "1") fail(number, 1, "a 0/1 order matrix row");
            row.push_back(t == "1" ? 1 : 0);
          }
          current_q().order_matrix.push_back(std::move(row));
          continue;
        }
        case Table::order_hasse: {
          size_t lt = s.find('<');
          if (lt == std::string::npos) fail(number, 1, "a Hasse edge 'a < b'");
          std::string a = trim(s.substr(0, lt));
          std::string b = trim(s.substr(lt + 1));
          if (a.empty() || b.empty()) fail(number, 1, "a Hasse edge 'a < b'");
          current_q().hasse_edges.push_back({a, b});
          continue;
        }
        case Table::mult:
          current_q().mult_rows.push_back(tokens_of(s));
          continue;
        case Table::metric: {
          auto toks = tokens_of(s);
          std::vector<int> row;
          for (const auto& t : toks) row.push_back(parse_int(t, number, "metric entry"));
          current_p().ball_metric.push_back(std::move(row));
          continue;
        }
        case Table::none:
          fail(number, 1, "'key = value'");
      }
    }

    table = Table::none;
    switch (section) {
      case Section::none:
        fail(number, 1, "a section header before keys");
      case Section::quantale: {
        QuantaleSpec& q = current_q();
        if (key == "name") {
          q.name = value;
        } else if (key == "generator") {
          q.generator = parse_generator(value, number);
        } else if (key == "elements") {
          q.labels = tokens_of(value);
          q.size = static_cast<int>(q.labels.size());
        } else if (key == "size") {
          q.size = parse_int(value, number, "for size");
        } else if (key == "order") {
          if (value == "matrix") {
            q.order_form = QuantaleSpec::OrderForm::matrix;
            table = Table::order_matrix;
          } else if (value == "hasse") {
            q.order_form = QuantaleSpec::OrderForm::hasse;
            table = Table::order_hasse;
          } else {
            fail(number, 1, "'matrix' or 'hasse'");
          }
        } else if (key == "mult") {
          if (value != "table") fail(number, 1, "'table'");
          table = Table::mult;
        } else {
          fail(number, 1, "a quantale key (name, generator, elements, size, order, mult)");
        }
        break;
      }
      case Section::presheaf: {
        PresheafSpec& p = current_p();
        auto ktoks = tokens_of(key);
        if (key == "name") {
          p.name = value;
        } else if (key == "base") {
          p.base = value;
        } else if (key == "builder") {
          auto vtoks = tokens_of(value);
          if (vtoks.empty()) fail(number, 1, "a builder name");
          const std::string& b = vtoks[0];
          if (b == "terminal" && vtoks.size() == 1) {
            p.builder = PresheafSpec::Builder::terminal;
          } else if (b == "representable" && vtoks.size() == 2) {
            p.builder = PresheafSpec::Builder::representable;
            p.elem = vtoks[1];
          } else if (b == "omega_minus" && vtoks.size() == 1) {
            p.builder = PresheafSpec::Builder::omega_minus;
          } else if (b == "omega_plus" && vtoks.size() == 1) {
            p.builder = PresheafSpec::Builder::omega_plus;
          } else if (b == "shift" && vtoks.size() == 3) {
            p.builder = PresheafSpec::Builder::shift;
            p.elem = vtoks[1];
            p.source = vtoks[2];
          } else if (b == "restrict" && vtoks.size() == 3) {
            p.builder = PresheafSpec::Builder::restrict_to;
            p.elem = vtoks[1];
            p.source = vtoks[2];
          } else if (b == "ball" && vtoks.size() == 2) {
            p.builder = PresheafSpec::Builder::ball;
            p.ball_k = parse_int(vtoks[1], number, "chain height for ball");
          } else {
            fail(number, 1,
                 "terminal | representable v | omega_minus | omega_plus | shift u F | "
                 "restrict u F | ball k");
          }
        } else if (key == "A") {
          for (const auto& t : tokens_of(value))
            p.ball_A.push_back(parse_int(t, number, "base point index"));
        } else if (key == "metric") {
          if (value != "table") fail(number, 1, "'table'");
          table = Table::metric;
        } else if (key == "stalks") {
          p.stalk_tokens = tokens_of(value);
        } else if (ktoks.size() == 3 && ktoks[0] == "res") {
          p.res_lines.push_back({ktoks[1], ktoks[2], tokens_of(value)});
        } else {
          fail(number, 1, "a presheaf key (name, base, builder, A, metric, stalks, res u v)");
        }
        break;
      }
      case Section::morphism: {
        MorphismSpec& m = current_m();
        auto ktoks = tokens_of(key);
        if (key == "name") {
          m.name = value;
        } else if (key == "source") {
          m.source = value;
        } else if (key == "target") {
          m.target = value;
        } else if (ktoks.size() == 2 && ktoks[0] == "at") {
          m.components.push_back({ktoks[1], tokens_of(value)});
        } else {
          fail(number, 1, "a morphism key (name, source, target, at u)");
        }
        break;
      }
      case Section::scenario: {
        if (key == "pool") {
          doc.scenario->pool = tokens_of(value);
        } else {
          fail(number, 1, "a scenario key (pool)");
        }
        break;
      }
    }
  }
  return doc;
}

namespace {

void print_generator(std::ostream& os, const GeneratorCall& g) {
  switch (g.kind) {
    case GeneratorCall::Kind::chain: os << "chain " << g.arg; break;
    case GeneratorCall::Kind::divisor: os << "divisor " << g.arg; break;
    case GeneratorCall::Kind::powerset: os << "powerset " << g.arg; break;
    case GeneratorCall::Kind::product:
      os << "product(";
      for (size_t i = 0; i < g.children.size(); ++i) {
        if (i) os << ", ";
        print_generator(os, g.children[i]);
      }
      os << ")";
      break;
    case GeneratorCall::Kind::interval:
      os << "interval(";
      print_generator(os, g.children[0]);
      os << ", " << g.lo << ", " << g.hi << ")";
      break;
  }
}

}  // namespace

std::string print_spec(const SpecDocument& doc) {
  std::ostringstream os;
  os << "qsl v1\n";
  for (const auto& q : doc.quantales) {
    os << "\n[quantale]\n";
    if (!q.name.empty()) os << "name = " << q.name << "\n";
    if (q.generator) {
      os << "generator = ";
      print_generator(os, *q.generator);
      os << "\n";
      continue;
    }
    if (!q.labels.empty()) {
      os << "elements =";
      for (const auto& l : q.labels) os << ' ' << l;
      os << "\n";
    } else if (q.size >= 0) {
      os << "size = " << q.size << "\n";
    }
    if (q.order_form == QuantaleSpec::OrderForm::matrix) {
      os << "order = matrix\n";
      for (const auto& row : q.order_matrix) {
        for (size_t j = 0; j < row.size(); ++j) os << (j ? " " : "") << (row[j] ? 1 : 0);
        os << "\n";
      }
    } else if (q.order_form == QuantaleSpec::OrderForm::hasse) {
      os << "order = hasse\n";
      for (const auto& [a, b] : q.hasse_edges) os << a << " < " << b << "\n";
    }
    if (!q.mult_rows.empty()) {
      os << "mult = table\n";
      for (const auto& row : q.mult_rows) {
        for (size_t j = 0; j < row.size(); ++j) os << (j ? " " : "") << row[j];
        os << "\n";
      }
    }
  }
  for (const auto& p : doc.presheaves) {
    os << "\n[presheaf]\n";
    if (!p.name.empty()) os << "name = " << p.name << "\n";
    if (!p.base.empty()) os << "base = " << p.base << "\n";
    switch (p.builder) {
      case PresheafSpec::Builder::none: break;
      case PresheafSpec::Builder::terminal: os << "builder = terminal\n"; break;
      case PresheafSpec::Builder::representable:
        os << "builder = representable " << p.elem << "\n";
        break;
      case PresheafSpec::Builder::omega_minus: os << "builder = omega_minus\n"; break;
      case PresheafSpec::Builder::omega_plus: os << "builder = omega_plus\n"; break;
      case PresheafSpec::Builder::shift:
        os << "builder = shift " << p.elem << " " << p.source << "\n";
        break;
      case PresheafSpec::Builder::restrict_to:
        os << "builder = restrict " << p.elem << " " << p.source << "\n";
        break;
      case PresheafSpec::Builder::ball: os << "builder = ball " << p.ball_k << "\n"; break;
    }
    if (!p.ball_A.empty()) {
      os << "A =";
      for (int a : p.ball_A) os << ' ' << a;
      os << "\n";
    }
    if (!p.ball_metric.empty()) {
      os << "metric = table\n";
      for (const auto& row : p.ball_metric) {
        for (size_t j = 0; j < row.size(); ++j) os << (j ? " " : "") << row[j];
        os << "\n";
      }
    }
    if (!p.stalk_tokens.empty()) {
      os << "stalks =";
      for (const auto& t : p.stalk_tokens) os << ' ' << t;
      os << "\n";
    }
    for (const auto& r : p.res_lines) {
      os << "res " << r.u << " " << r.v << " =";
      for (const auto& e : r.entries) os << ' ' << e;
      os << "\n";
    }
  }
  for (const auto& m : doc.morphisms) {
    os << "\n[morphism]\n";
    if (!m.name.empty()) os << "name = " << m.name << "\n";
    os << "source = " << m.source << "\n";
    os << "target = " << m.target << "\n";
    for (const auto& [u, entries] : m.components) {
      os << "at " << u << " =";
      for (const auto& e : entries) os << ' ' << e;
      os << "\n";
    }
  }
  if (doc.scenario) {
    os << "\n[scenario]\npool =";
    for (const auto& p : doc.scenario->pool) os << ' ' << p;
    os << "\n";
  }
  return os.str();
}

int resolve_element(const Quantale& q, const std::string& token) {
  int by_label = q.element_by_label(token);
  if (by_label >= 0) return by_label;
  if (token == "top") return q.top();
  if (token == "bottom") return q.bottom();
  if (token == "unit") {
    if (q.unit() < 0)
      throw Error(ErrKind::UnresolvedReference, "quantale has no unit element");
    return q.unit();
  }
  try {
    size_t used = 0;
    int v = std::stoi(token, &used);
    if (used == token.size() && v >= 0 && v < q.size()) return v;
  } catch (...) {
  }
  throw Error(ErrKind::UnresolvedReference, "unknown element reference: " + token);
}

Quantale build_generator(const GeneratorCall& g) {
  switch (g.kind) {
    case GeneratorCall::Kind::chain: return chain_quantale(static_cast<int>(g.arg));
    case GeneratorCall::Kind::divisor: return divisor_quantale(g.arg);
    case GeneratorCall::Kind::powerset: return powerset_locale(static_cast<int>(g.arg));
    case GeneratorCall::Kind::product: {
      std::vector<Quantale> factors;
      factors.reserve(g.children.size());
      for (const auto& c : g.children) factors.push_back(build_generator(c));
      return product(factors);
    }
    case GeneratorCall::Kind::interval: {
      Quantale base = build_generator(g.children[0]);
      int lo = resolve_element(base, g.lo);
      int hi = resolve_element(base, g.hi);
      return interval(base, lo, hi);
    }
  }
  throw Error(ErrKind::BadArgument, "unknown generator kind");
}

RawTables assemble_quantale_tables(const QuantaleSpec& spec) {
  int n = spec.size;
  std::vector<std::string> labels = spec.labels;
  if (n < 0)
    throw Error(ErrKind::BadArgument, "explicit quantale needs elements or size");
  auto idx = [&](const std::string& token) -> int {
    for (int i = 0; i < n; ++i)
      if (!labels.empty() && labels[i] == token) return i;
    try {
      size_t used = 0;
      int v = std::stoi(token, &used);
      if (used == token.size() && v >= 0 && v < n) return v;
    } catch (...) {
    }
    throw Error(ErrKind::UnresolvedReference, "unknown element reference: " + token);
  };

  std::vector<std::vector<char>> leq(n, std::vector<char>(n, 0));
  if (spec.order_form == QuantaleSpec::OrderForm::matrix) {
    if (static_cast<int>(spec.order_matrix.size()) != n)
      throw Error(ErrKind::NonRectangularTable, "order matrix row count mismatch",
                  {static_cast<int>(spec.order_matrix.size()), n});
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(spec.order_matrix[i].size()) != n)
        throw Error(ErrKind::NonRectangularTable, "order matrix row length mismatch", {i});
      for (int j = 0; j < n; ++j) leq[i][j] = spec.order_matrix[i][j];
    }
  } else if (spec.order_form == QuantaleSpec::OrderForm::hasse) {
    for (int i = 0; i < n; ++i) leq[i][i] = 1;
    for (const auto& [a, b] : spec.hasse_edges) leq[idx(a)][idx(b)] = 1;
    // reflexive-transitive closure
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (leq[i][k] && leq[k][j]) leq[i][j] = 1;
  } else {
    throw Error(ErrKind::BadArgument, "explicit quantale needs an order table");
  }

  if (static_cast<int>(spec.mult_rows.size()) != n)
    throw Error(ErrKind::NonRectangularTable, "mult table row count mismatch",
                {static_cast<int>(spec.mult_rows.size()), n});
  std::vector<std::vector<int>> mult(n, std::vector<int>(n, 0));
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(spec.mult_rows[i].size()) != n)
      throw Error(ErrKind::NonRectangularTable, "mult table row length mismatch", {i});
    for (int j = 0; j < n; ++j) mult[i][j] = idx(spec.mult_rows[i][j]);
  }
  return {std::move(leq), std::move(mult), std::move(labels)};
}

namespace {

Quantale build_explicit_quantale(const QuantaleSpec& spec) {
  RawTables raw = assemble_quantale_tables(spec);
  return Quantale::make(raw.leq, raw.mult, raw.labels);
}

Presheaf build_explicit_presheaf(const PresheafSpec& spec,
                                 std::shared_ptr<const Quantale> base) {
  const Quantale& q = *base;
  const int n = q.size();
  if (static_cast<int>(spec.stalk_tokens.size()) != n)
    throw Error(ErrKind::NonRectangularTable, "stalk list length mismatch");
  Presheaf f;
  f.base = base;
  f.stalk.resize(n);
  for (int u = 0; u < n; ++u) {
    try {
      f.stalk[u] = std::stoi(spec.stalk_tokens[u]);
    } catch (...) {
      throw Error(ErrKind::BadArgument, "stalk sizes must be integers");
    }
  }
  f.res.assign(n, std::vector<std::vector<int>>(n));
  for (int u = 0; u < n; ++u)
    if (f.stalk[u] > 0) f.res[u][u].resize(f.stalk[u]);
  for (int u = 0; u < n; ++u)
    for (int s = 0; s < f.stalk[u]; ++s) f.res[u][u][s] = s;
  for (const auto& line : spec.res_lines) {
    int u = resolve_element(q, line.u);
    int v = resolve_element(q, line.v);
    if (!q.leq(v, u))
      throw Error(ErrKind::BadArgument, "restriction target is not below its source", {u, v});
    std::vector<int> table;
    table.reserve(line.entries.size());
    for (const auto& e : line.entries) {
      try {
        table.push_back(std::stoi(e));
      } catch (...) {
        throw Error(ErrKind::BadArgument, "restriction entries must be integers");
      }
    }
    f.res[u][v] = std::move(table);
  }
  auto violations = validate_presheaf(f);
  if (!violations.empty()) {
    const auto& v = violations.front();
    throw Error(v.law, "presheaf validation failed: " + v.detail, v.witness);
  }
  return f;
}

}  // namespace

std::shared_ptr<const Quantale> ResolvedSpec::main_quantale() const {
  if (quantale_names.empty())
    throw Error(ErrKind::UnresolvedReference, "no quantale defined in the document");
  return quantales.at(quantale_names.front());
}

ResolvedSpec resolve_spec(const SpecDocument& doc, const CheckCaps& caps) {
  ResolvedSpec out;
  int anon = 0;
  for (const auto& qs : doc.quantales) {
    std::string name = qs.name.empty() ? "q" + std::to_string(anon++) : qs.name;
    if (out.quantales.count(name))
      throw Error(ErrKind::BadArgument, "duplicate quantale name: " + name);
    Quantale q = qs.generator ? build_generator(*qs.generator) : build_explicit_quantale(qs);
    out.quantale_names.push_back(name);
    out.quantales[name] = std::make_shared<const Quantale>(std::move(q));
  }

  for (const auto& ps : doc.presheaves) {
    std::string name = ps.name.empty() ? "p" + std::to_string(anon++) : ps.name;
    if (out.presheaves.count(name))
      throw Error(ErrKind::BadArgument, "duplicate presheaf name: " + name);
    std::shared_ptr<const Quantale> base;
    if (!ps.base.empty()) {
      auto it = out.quantales.find(ps.base);
      if (it == out.quantales.end())
        throw Error(ErrKind::UnresolvedReference, "unknown base quantale: " + ps.base);
      base = it->second;
    } else if (ps.builder != PresheafSpec::Builder::ball &&
               ps.builder != PresheafSpec::Builder::shift &&
               ps.builder != PresheafSpec::Builder::restrict_to) {
      base = out.main_quantale();
    }

    Presheaf f;
    switch (ps.builder) {
      case PresheafSpec::Builder::terminal:
        f = terminal_presheaf(base);
        break;
      case PresheafSpec::Builder::representable:
        f = representable(base, resolve_element(*base, ps.elem));
        break;
      case PresheafSpec::Builder::omega_minus:
        f = *omega_minus(base, caps).omega;
        break;
      case PresheafSpec::Builder::omega_plus:
        f = *omega_plus(base, caps).omega;
        break;
      case PresheafSpec::Builder::shift:
      case PresheafSpec::Builder::restrict_to: {
        auto it = out.presheaves.find(ps.source);
        if (it == out.presheaves.end())
          throw Error(ErrKind::UnresolvedReference, "unknown source presheaf: " + ps.source);
        const Presheaf& src = it->second;
        int e = resolve_element(*src.base, ps.elem);
        f = ps.builder == PresheafSpec::Builder::shift ? shift_by(src, e, caps)
                                                       : restrict_to(src, e, caps);
        break;
      }
      case PresheafSpec::Builder::ball:
        f = ball_sheaf(ps.ball_metric, ps.ball_A, ps.ball_k);
        break;
      case PresheafSpec::Builder::none:
        f = build_explicit_presheaf(ps, base);
        break;
    }
    out.presheaf_names.push_back(name);
    out.presheaves[name] = std::move(f);
  }

  for (const auto& ms : doc.morphisms) {
    std::string name = ms.name.empty() ? "m" + std::to_string(anon++) : ms.name;
    auto src = out.presheaves.find(ms.source);
    auto tgt = out.presheaves.find(ms.target);
    if (src == out.presheaves.end())
      throw Error(ErrKind::UnresolvedReference, "unknown morphism source: " + ms.source);
    if (tgt == out.presheaves.end())
      throw Error(ErrKind::UnresolvedReference, "unknown morphism target: " + ms.target);
    Morphism m;
    m.source = std::make_shared<const Presheaf>(src->second);
    m.target = std::make_shared<const Presheaf>(tgt->second);
    const Quantale& q = *m.source->base;
    m.comp.assign(q.size(), {});
    for (int u = 0; u < q.size(); ++u) m.comp[u].assign(m.source->stalk[u], -1);
    for (const auto& [utok, entries] : ms.components) {
      int u = resolve_element(q, utok);
      std::vector<int> table;
      for (const auto& e : entries) {
        try {
          table.push_back(std::stoi(e));
        } catch (...) {
          throw Error(ErrKind::BadArgument, "morphism entries must be integers");
        }
      }
      m.comp[u] = std::move(table);
    }
    for (int u = 0; u < q.size(); ++u)
      if (static_cast<int>(m.comp[u].size()) != m.source->stalk[u] ||
          std::count(m.comp[u].begin(), m.comp[u].end(), -1) > 0)
        throw Error(ErrKind::BadArgument, "missing morphism component at element " +
                                              q.label(u));
    out.morphism_names.push_back(name);
    out.morphisms[name] = std::move(m);
  }

  if (doc.scenario) out.pool = doc.scenario->pool;
  return out;
}

}  // namespace qsl
