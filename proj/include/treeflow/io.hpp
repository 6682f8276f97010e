#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "treeflow/chain_oracle.hpp"
#include "treeflow/dynamics.hpp"
#include "treeflow/lp_space.hpp"
#include "treeflow/tree.hpp"
#include "treeflow/weights.hpp"

namespace treeflow {

// Deterministic JSON document: object keys are kept sorted and numbers are
// printed with 17 significant digits, so identical inputs emit identical
// bytes regardless of insertion order.
class JsonValue {
 public:
  JsonValue() : v_(nullptr) {}

  static JsonValue object() { return JsonValue(Object{}); }
  static JsonValue array() { return JsonValue(Array{}); }
  static JsonValue str(std::string s) { return JsonValue(std::move(s)); }
  static JsonValue num(double d) { return JsonValue(d); }
  static JsonValue integer(long long i) { return JsonValue(i); }
  static JsonValue boolean(bool b) { return JsonValue(b); }

  JsonValue& operator[](const std::string& key);
  void push(JsonValue v);
  std::string dump() const;  // pretty, 2-space indent, trailing newline

 private:
  using Array = std::vector<JsonValue>;
  using Object = std::map<std::string, JsonValue>;
  using Repr = std::variant<std::nullptr_t, bool, long long, double,
                            std::string, Array, Object>;
  explicit JsonValue(Repr v) : v_(std::move(v)) {}
  void write(std::string& out, int indent) const;
  Repr v_;
};

// 17-significant-digit rendering shared by JSON and CSV emitters.
std::string format_double(double v);

// Parsers. All syntax or schema problems surface as InvalidSpec with a
// line/column diagnostic; unknown keys are errors.
TreeSpec parse_tree_spec(const std::string& text);
WeightFamily parse_weight_spec(const std::string& text, const DirectedTree& tree);
GridFunction parse_grid_function(const std::string& text, int N);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

// Serializers.
JsonValue to_json(const GridFunction& f);
JsonValue to_json(const AdmissibilityReport& rep);
JsonValue to_json(const AdmissibilityFit& fit);
JsonValue to_json(const CriterionReport& rep);
JsonValue to_json(const Witness& wit);
JsonValue to_json(const NegativeCertificate& cert);
JsonValue to_json(const OrbitProbeResult& result);

// CSV exports; all end with a trailing newline.
std::string criterion_csv(const CriterionReport& rep);
std::string grid_function_csv(const GridFunction& f, const LpConfig& cfg);
std::string orbit_csv(const std::vector<std::pair<double, GridFunction>>& orbit,
                      const LpConfig& cfg);
std::string norm_trace_csv(const std::vector<std::pair<double, double>>& trace);

}  // namespace treeflow
