#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "presheaf.hpp"

namespace qsl {

// Nested generator expression: chain k | divisor N | powerset m |
// product(e, e, ...) | interval(e, lo, hi).
struct GeneratorCall {
  enum class Kind { chain, divisor, powerset, product, interval };
  Kind kind = Kind::chain;
  long long arg = 0;
  std::vector<GeneratorCall> children;
  std::string lo, hi;  // interval bounds, element references
};

struct QuantaleSpec {
  std::string name;
  std::optional<GeneratorCall> generator;
  std::vector<std::string> labels;
  int size = -1;
  enum class OrderForm { none, matrix, hasse } order_form = OrderForm::none;
  std::vector<std::vector<char>> order_matrix;
  std::vector<std::pair<std::string, std::string>> hasse_edges;
  std::vector<std::vector<std::string>> mult_rows;
};

struct ResLine {
  std::string u, v;
  std::vector<std::string> entries;
};

struct PresheafSpec {
  std::string name;
  std::string base;
  enum class Builder {
    none,
    terminal,
    representable,
    omega_minus,
    omega_plus,
    shift,
    restrict_to,
    ball,
  } builder = Builder::none;
  std::string elem;    // representable / shift / restrict argument
  std::string source;  // shift / restrict source presheaf
  int ball_k = 0;
  std::vector<int> ball_A;
  std::vector<std::vector<int>> ball_metric;
  std::vector<std::string> stalk_tokens;  // explicit form
  std::vector<ResLine> res_lines;
};

struct MorphismSpec {
  std::string name;
  std::string source, target;
  std::vector<std::pair<std::string, std::vector<std::string>>> components;
};

struct ScenarioSpec {
  std::vector<std::string> pool;
};

struct SpecDocument {
  std::vector<QuantaleSpec> quantales;
  std::vector<PresheafSpec> presheaves;
  std::vector<MorphismSpec> morphisms;
  std::optional<ScenarioSpec> scenario;
};

SpecDocument parse_spec(const std::string& text);
std::string print_spec(const SpecDocument& doc);

// Element reference: label, then the keywords top/bottom/unit, then index.
int resolve_element(const Quantale& q, const std::string& token);

struct ResolvedSpec {
  std::vector<std::string> quantale_names;
  std::map<std::string, std::shared_ptr<const Quantale>> quantales;
  std::vector<std::string> presheaf_names;
  std::map<std::string, Presheaf> presheaves;
  std::vector<std::string> morphism_names;
  std::map<std::string, Morphism> morphisms;
  std::vector<std::string> pool;

  std::shared_ptr<const Quantale> main_quantale() const;
};

ResolvedSpec resolve_spec(const SpecDocument& doc, const CheckCaps& caps = {});

Quantale build_generator(const GeneratorCall& g);

// Raw tables of an explicit quantale section, before any law checking.
struct RawTables {
  std::vector<std::vector<char>> leq;
  std::vector<std::vector<int>> mult;
  std::vector<std::string> labels;
};
RawTables assemble_quantale_tables(const QuantaleSpec& spec);

}  // namespace qsl
