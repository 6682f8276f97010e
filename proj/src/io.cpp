#include "treeflow/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "treeflow/errors.hpp"

namespace treeflow {

JsonValue& JsonValue::operator[](const std::string& key) {
  if (std::holds_alternative<std::nullptr_t>(v_)) v_ = Object{};
  return std::get<Object>(v_)[key];
}

void JsonValue::push(JsonValue v) {
  if (std::holds_alternative<std::nullptr_t>(v_)) v_ = Array{};
  std::get<Array>(v_).push_back(std::move(v));
}

std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

void write_escaped(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

void pad(std::string& out, int indent) { out.append(indent, ' '); }

}  // namespace

void JsonValue::write(std::string& out, int indent) const {
  if (std::holds_alternative<std::nullptr_t>(v_)) {
    out += "null";
  } else if (auto b = std::get_if<bool>(&v_)) {
    out += *b ? "true" : "false";
  } else if (auto i = std::get_if<long long>(&v_)) {
    out += std::to_string(*i);
  } else if (auto d = std::get_if<double>(&v_)) {
    out += format_double(*d);
  } else if (auto s = std::get_if<std::string>(&v_)) {
    write_escaped(out, *s);
  } else if (auto arr = std::get_if<Array>(&v_)) {
    if (arr->empty()) {
      out += "[]";
      return;
    }
    out += "[\n";
    for (size_t k = 0; k < arr->size(); ++k) {
      pad(out, indent + 2);
      (*arr)[k].write(out, indent + 2);
      out += k + 1 < arr->size() ? ",\n" : "\n";
    }
    pad(out, indent);
    out += ']';
  } else {
    const Object& obj = std::get<Object>(v_);
    if (obj.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    size_t k = 0;
    for (const auto& [key, val] : obj) {
      pad(out, indent + 2);
      write_escaped(out, key);
      out += ": ";
      val.write(out, indent + 2);
      out += ++k < obj.size() ? ",\n" : "\n";
    }
    pad(out, indent);
    out += '}';
  }
}

std::string JsonValue::dump() const {
  std::string out;
  write(out, 0);
  out += '\n';
  return out;
}

namespace {

using nlohmann::json;

[[noreturn]] void fail_at(const std::string& text, size_t byte,
                          const std::string& what) {
  size_t line = 1, col = 1;
  for (size_t k = 0; k < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  fail(Errc::InvalidSpec, "line " + std::to_string(line) + ", column " +
                              std::to_string(col) + ": " + what);
}

json parse_or_fail(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail_at(text, e.byte > 0 ? e.byte - 1 : 0, e.what());
  }
}

void reject_unknown_keys(const json& obj, const std::vector<std::string>& known,
                         const std::string& where) {
  for (const auto& [key, val] : obj.items()) {
    (void)val;
    bool ok = false;
    for (const auto& k : known)
      if (key == k) ok = true;
    if (!ok) fail(Errc::InvalidSpec, where + ": unknown key \"" + key + "\"");
  }
}

int require_int(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key))
    fail(Errc::InvalidSpec, where + ": missing key \"" + key + "\"");
  const json& v = obj.at(key);
  if (!v.is_number_integer())
    fail(Errc::InvalidSpec, where + ": \"" + key + "\" must be an integer");
  return v.get<int>();
}

double require_num(const json& obj, const std::string& key,
                   const std::string& where) {
  if (!obj.contains(key))
    fail(Errc::InvalidSpec, where + ": missing key \"" + key + "\"");
  const json& v = obj.at(key);
  if (!v.is_number())
    fail(Errc::InvalidSpec, where + ": \"" + key + "\" must be a number");
  return v.get<double>();
}

std::string require_str(const json& obj, const std::string& key,
                        const std::string& where) {
  if (!obj.contains(key))
    fail(Errc::InvalidSpec, where + ": missing key \"" + key + "\"");
  const json& v = obj.at(key);
  if (!v.is_string())
    fail(Errc::InvalidSpec, where + ": \"" + key + "\" must be a string");
  return v.get<std::string>();
}

WeightRule parse_rule(const json& obj, const std::string& where) {
  if (!obj.is_object()) fail(Errc::InvalidSpec, where + ": rule must be an object");
  std::string rule = require_str(obj, "rule", where);
  if (rule == "constant") {
    reject_unknown_keys(obj, {"rule", "value"}, where);
    return WeightRule::constant_rule(require_num(obj, "value", where));
  }
  if (rule == "exponential") {
    reject_unknown_keys(obj, {"rule", "a", "b"}, where);
    double a = require_num(obj, "a", where);
    double b = obj.contains("b") ? require_num(obj, "b", where) : 0.0;
    return WeightRule::exponential_rule(a, b);
  }
  if (rule == "tabulated") {
    reject_unknown_keys(obj, {"rule", "table"}, where);
    if (!obj.contains("table") || !obj.at("table").is_array())
      fail(Errc::InvalidSpec, where + ": tabulated rule needs a \"table\" array");
    std::vector<double> table;
    for (const json& v : obj.at("table")) {
      if (!v.is_number())
        fail(Errc::InvalidSpec, where + ": table entries must be numbers");
      table.push_back(v.get<double>());
    }
    return WeightRule::tabulated_rule(std::move(table));
  }
  fail(Errc::InvalidSpec, where + ": unknown rule \"" + rule + "\"");
}

}  // namespace

TreeSpec parse_tree_spec(const std::string& text) {
  json root = parse_or_fail(text);
  if (!root.is_object())
    fail(Errc::InvalidSpec, "tree spec: top level must be an object");
  reject_unknown_keys(root, {"kind", "generator", "forward_depth", "ancestor_depth"},
                      "tree spec");
  TreeSpec spec;
  std::string kind = require_str(root, "kind", "tree spec");
  if (kind == "rooted")
    spec.kind = TreeKind::rooted;
  else if (kind == "unrooted")
    spec.kind = TreeKind::unrooted;
  else
    fail(Errc::InvalidSpec, "tree spec: kind must be \"rooted\" or \"unrooted\"");

  if (!root.contains("generator") || !root.at("generator").is_object())
    fail(Errc::InvalidSpec, "tree spec: missing \"generator\" object");
  const json& gen = root.at("generator");
  reject_unknown_keys(gen, {"type", "branching", "edges"}, "generator");
  std::string type = require_str(gen, "type", "generator");
  if (type == "chain") {
    spec.generator = GeneratorType::chain;
    reject_unknown_keys(gen, {"type"}, "chain generator");
  } else if (type == "regular") {
    spec.generator = GeneratorType::regular;
    reject_unknown_keys(gen, {"type", "branching"}, "regular generator");
    spec.branching = require_int(gen, "branching", "generator");
  } else if (type == "explicit") {
    spec.generator = GeneratorType::explicit_list;
    reject_unknown_keys(gen, {"type", "edges"}, "explicit generator");
    if (!gen.contains("edges") || !gen.at("edges").is_array())
      fail(Errc::InvalidSpec, "generator: explicit type needs an \"edges\" array");
    for (const json& e : gen.at("edges")) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
          !e[1].is_number_integer())
        fail(Errc::InvalidSpec,
             "generator: edges entries must be [id, parent] integer pairs");
      spec.edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
  } else {
    fail(Errc::InvalidSpec, "generator: unknown type \"" + type + "\"");
  }

  spec.forward_depth = require_int(root, "forward_depth", "tree spec");
  spec.ancestor_depth =
      root.contains("ancestor_depth") ? require_int(root, "ancestor_depth", "tree spec") : 0;
  spec.validate();
  return spec;
}

WeightFamily parse_weight_spec(const std::string& text, const DirectedTree& tree) {
  json root = parse_or_fail(text);
  if (!root.is_object())
    fail(Errc::InvalidSpec, "weight spec: top level must be an object");
  // The base object is itself a rule, plus optional per-depth overrides.
  std::vector<std::string> known = {"rule", "value", "a", "b", "table", "per_depth"};
  reject_unknown_keys(root, known, "weight spec");
  json base = root;
  base.erase("per_depth");
  WeightFamily W(tree, parse_rule(base, "weight spec"));
  if (root.contains("per_depth")) {
    const json& pd = root.at("per_depth");
    if (!pd.is_object())
      fail(Errc::InvalidSpec, "weight spec: per_depth must map depth to rules");
    for (const auto& [key, val] : pd.items()) {
      int depth = 0;
      try {
        size_t used = 0;
        depth = std::stoi(key, &used);
        if (used != key.size()) throw std::invalid_argument(key);
      } catch (const std::exception&) {
        fail(Errc::InvalidSpec,
             "weight spec: per_depth key \"" + key + "\" is not a depth");
      }
      W.set_depth_rule(depth, parse_rule(val, "per_depth[" + key + "]"));
    }
  }
  return W;
}

GridFunction parse_grid_function(const std::string& text, int N) {
  json root = parse_or_fail(text);
  if (!root.is_object())
    fail(Errc::InvalidSpec, "grid function: top level must be an object");
  GridFunction f(N);
  for (const auto& [key, val] : root.items()) {
    int edge = 0;
    try {
      size_t used = 0;
      edge = std::stoi(key, &used);
      if (used != key.size()) throw std::invalid_argument(key);
    } catch (const std::exception&) {
      fail(Errc::InvalidSpec, "grid function: key \"" + key + "\" is not an edge id");
    }
    if (!val.is_array() || static_cast<int>(val.size()) != N)
      fail(Errc::InvalidSpec, "grid function: edge " + key + " needs exactly " +
                                  std::to_string(N) + " samples");
    auto& row = f.at(edge);
    for (int k = 0; k < N; ++k) {
      if (!val[k].is_number())
        fail(Errc::InvalidSpec, "grid function: samples must be numbers");
      row[k] = val[k].get<double>();
    }
  }
  return f;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::InvalidSpec, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::InvalidSpec, "cannot write " + path);
  out << content;
  if (!out) fail(Errc::InvalidSpec, "short write to " + path);
}

JsonValue to_json(const GridFunction& f) {
  JsonValue v = JsonValue::object();
  for (const auto& [edge, row] : f.edges) {
    JsonValue arr = JsonValue::array();
    for (double x : row) arr.push(JsonValue::num(x));
    v[std::to_string(edge)] = std::move(arr);
  }
  return v;
}

JsonValue to_json(const AdmissibilityReport& rep) {
  JsonValue v = JsonValue::object();
  v["p"] = JsonValue::num(rep.p);
  v["M"] = JsonValue::num(rep.M);
  v["w"] = JsonValue::num(rep.w);
  v["status"] = JsonValue::str(rep.admissible ? "pass" : "fail");
  v["worst_ratio"] = JsonValue::num(rep.worst_ratio);
  v["tested"] = JsonValue::integer(rep.tested);
  if (rep.violation) {
    JsonValue viol = JsonValue::object();
    viol["edge"] = JsonValue::integer(rep.violation->edge);
    viol["t"] = JsonValue::num(rep.violation->t);
    viol["s"] = JsonValue::num(rep.violation->s);
    viol["ratio"] = JsonValue::num(rep.violation->ratio);
    v["violation"] = std::move(viol);
  } else {
    v["violation"] = JsonValue();
  }
  return v;
}

JsonValue to_json(const AdmissibilityFit& fit) {
  JsonValue v = JsonValue::object();
  v["status"] = JsonValue::str("fitted");
  v["M"] = JsonValue::num(fit.M);
  v["w"] = JsonValue::num(fit.w);
  return v;
}

JsonValue to_json(const CriterionReport& rep) {
  JsonValue v = JsonValue::object();
  v["p"] = JsonValue::num(rep.p);
  v["kind"] = JsonValue::str(rep.kind == TreeKind::rooted ? "rooted" : "unrooted");
  v["horizon"] = JsonValue::integer(rep.horizon);
  v["tol_dyn"] = JsonValue::num(rep.tol_dyn);
  v["verdict"] = JsonValue::str(verdict_name(rep.verdict));
  if (rep.obstruction) v["obstruction"] = JsonValue::integer(*rep.obstruction);
  JsonValue seq = JsonValue::array();
  for (int n : rep.subsequence) seq.push(JsonValue::integer(n));
  v["subsequence"] = std::move(seq);
  if (!rep.edges.empty()) v["global_min"] = JsonValue::num(rep.global_min);
  JsonValue edges = JsonValue::array();
  for (const EdgeCriterion& ec : rep.edges) {
    JsonValue e = JsonValue::object();
    e["edge"] = JsonValue::integer(ec.edge);
    e["min_forward"] = JsonValue::num(ec.min_forward);
    e["slope"] = JsonValue::num(ec.slope);
    JsonValue fwd = JsonValue::array();
    for (double c : ec.forward) fwd.push(JsonValue::num(c));
    e["forward"] = std::move(fwd);
    if (!ec.ancestor.empty()) {
      e["ancestor_slope"] = JsonValue::num(ec.ancestor_slope);
      JsonValue anc = JsonValue::array();
      for (double c : ec.ancestor) anc.push(JsonValue::num(c));
      e["ancestor"] = std::move(anc);
    }
    edges.push(std::move(e));
  }
  v["edges"] = std::move(edges);
  return v;
}

JsonValue to_json(const Witness& wit) {
  JsonValue v = JsonValue::object();
  v["n"] = JsonValue::integer(wit.n);
  v["steps_applied"] = JsonValue::integer(wit.steps_applied);
  v["convention"] = JsonValue::str(wit.unrooted ? "T_n" : "T_{n-1}");
  v["achieved_closeness"] = JsonValue::num(wit.achieved_closeness);
  v["achieved_target_error"] = JsonValue::num(wit.achieved_target_error);
  v["g"] = to_json(wit.g);
  JsonValue nu = JsonValue::object();
  for (const auto& [edge, row] : wit.nu) {
    JsonValue arr = JsonValue::array();
    for (double x : row) arr.push(JsonValue::num(x));
    nu[std::to_string(edge)] = std::move(arr);
  }
  v["nu"] = std::move(nu);
  if (wit.unrooted) {
    JsonValue u = JsonValue::object();
    for (const auto& [edge, row] : wit.u) {
      JsonValue arr = JsonValue::array();
      for (double x : row) arr.push(JsonValue::num(x));
      u[std::to_string(edge)] = std::move(arr);
    }
    v["u"] = std::move(u);
    JsonValue j1 = JsonValue::array();
    for (int e : wit.J1) j1.push(JsonValue::integer(e));
    v["J1"] = std::move(j1);
    JsonValue j2 = JsonValue::array();
    for (int e : wit.J2) j2.push(JsonValue::integer(e));
    v["J2"] = std::move(j2);
  }
  return v;
}

JsonValue to_json(const NegativeCertificate& cert) {
  JsonValue v = JsonValue::object();
  v["gap"] = JsonValue::num(cert.gap);
  v["K"] = JsonValue::num(cert.K);
  v["g"] = to_json(cert.g);
  return v;
}

JsonValue to_json(const OrbitProbeResult& result) {
  JsonValue v = JsonValue::object();
  JsonValue arr = JsonValue::array();
  for (const OrbitApproach& a : result.approaches) {
    JsonValue e = JsonValue::object();
    e["target"] = JsonValue::integer(a.target);
    e["best_t"] = JsonValue::integer(a.best_t);
    e["distance"] = JsonValue::num(a.distance);
    arr.push(std::move(e));
  }
  v["approaches"] = std::move(arr);
  v["g"] = to_json(result.g);
  return v;
}

std::string criterion_csv(const CriterionReport& rep) {
  const bool unrooted = rep.kind == TreeKind::unrooted;
  std::string out = unrooted ? "edge_id,n,value,ancestor_value\n" : "edge_id,n,value\n";
  for (const EdgeCriterion& ec : rep.edges)
    for (size_t k = 0; k < ec.forward.size(); ++k) {
      out += std::to_string(ec.edge);
      out += ',';
      out += std::to_string(k + 1);
      out += ',';
      out += format_double(ec.forward[k]);
      if (unrooted) {
        out += ',';
        out += format_double(ec.ancestor[k]);
      }
      out += '\n';
    }
  return out;
}

std::string grid_function_csv(const GridFunction& f, const LpConfig& cfg) {
  std::string out = "edge_id,k,s,value\n";
  for (const auto& [edge, row] : f.edges)
    for (int k = 0; k < cfg.N; ++k) {
      out += std::to_string(edge);
      out += ',';
      out += std::to_string(k);
      out += ',';
      out += format_double(cfg.s(k));
      out += ',';
      out += format_double(row[k]);
      out += '\n';
    }
  return out;
}

std::string orbit_csv(const std::vector<std::pair<double, GridFunction>>& orbit,
                      const LpConfig& cfg) {
  std::string out = "t,edge_id,k,value\n";
  for (const auto& [t, f] : orbit)
    for (const auto& [edge, row] : f.edges)
      for (int k = 0; k < cfg.N; ++k) {
        out += format_double(t);
        out += ',';
        out += std::to_string(edge);
        out += ',';
        out += std::to_string(k);
        out += ',';
        out += format_double(row[k]);
        out += '\n';
      }
  return out;
}

std::string norm_trace_csv(const std::vector<std::pair<double, double>>& trace) {
  std::string out = "t,norm\n";
  for (const auto& [t, v] : trace) {
    out += format_double(t);
    out += ',';
    out += format_double(v);
    out += '\n';
  }
  return out;
}

}  // namespace treeflow
