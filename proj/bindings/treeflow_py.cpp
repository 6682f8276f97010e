#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "treeflow/chain_oracle.hpp"
#include "treeflow/dynamics.hpp"
#include "treeflow/errors.hpp"
#include "treeflow/io.hpp"
#include "treeflow/lp_space.hpp"
#include "treeflow/parallel.hpp"
#include "treeflow/semigroup.hpp"
#include "treeflow/tree.hpp"
#include "treeflow/weights.hpp"

namespace py = pybind11;
using namespace treeflow;

namespace {

std::string kind_name(TreeKind k) {
  return k == TreeKind::rooted ? "rooted" : "unrooted";
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "translation semigroups on weighted Lp spaces over directed metric trees";

  static py::exception<Error> exc_base(m, "TreeflowError");
  static py::exception<Error> exc_trunc(m, "TruncationError", exc_base.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyObject* target =
          e.code() == Errc::TruncationExceeded ? exc_trunc.ptr() : exc_base.ptr();
      PyErr_SetString(target, e.what());  // what() carries the code name
    }
  });

  py::class_<LpConfig>(m, "LpConfig")
      .def(py::init<>())
      .def_readwrite("p", &LpConfig::p)
      .def_readwrite("N", &LpConfig::N)
      .def_readwrite("tol", &LpConfig::tol)
      .def_property(
          "quadrature",
          [](const LpConfig& c) {
            return c.quadrature == Quadrature::rectangle ? "rectangle" : "trapezoid";
          },
          [](LpConfig& c, const std::string& q) {
            if (q == "rectangle")
              c.quadrature = Quadrature::rectangle;
            else if (q == "trapezoid")
              c.quadrature = Quadrature::trapezoid;
            else
              throw std::invalid_argument("quadrature must be rectangle or trapezoid");
          })
      .def("validate", &LpConfig::validate);

  py::class_<DirectedTree>(m, "DirectedTree")
      .def_property_readonly("kind", [](const DirectedTree& t) { return kind_name(t.kind()); })
      .def("edge_count", &DirectedTree::edge_count)
      .def("base_edge", &DirectedTree::base_edge)
      .def("depth", &DirectedTree::depth)
      .def("min_depth", &DirectedTree::min_depth)
      .def("max_depth", &DirectedTree::max_depth)
      .def("children", &DirectedTree::children)
      .def("is_leaf", &DirectedTree::is_leaf)
      .def("is_frontier", &DirectedTree::is_frontier)
      .def("is_chain", &DirectedTree::is_chain)
      .def("find_leaf", &DirectedTree::find_leaf)
      .def("reachable_set", &DirectedTree::reachable_set)
      .def("reachable_within_truncation", &DirectedTree::reachable_within_truncation)
      .def("ancestor", &DirectedTree::ancestor)
      .def("ancestor_or_exit", &DirectedTree::ancestor_or_exit)
      .def("same_component", &DirectedTree::same_component)
      .def("edges_at_depth", &DirectedTree::edges_at_depth)
      .def("edge_at_level", &DirectedTree::edge_at_level);

  m.def(
      "build_tree",
      [](const std::string& spec_json) { return build_tree(parse_tree_spec(spec_json)); },
      py::arg("spec_json"), "build a directed tree from a tree-spec JSON string");

  py::class_<WeightFamily>(m, "WeightFamily")
      .def("eval", &WeightFamily::eval, py::arg("edge"), py::arg("s"));

  m.def(
      "build_weights",
      [](const std::string& spec_json, const DirectedTree& tree) {
        return parse_weight_spec(spec_json, tree);
      },
      py::arg("spec_json"), py::arg("tree"), py::keep_alive<0, 2>(),
      "build a weight family from a weight-spec JSON string");

  py::class_<GridFunction>(m, "GridFunction")
      .def(py::init<int>(), py::arg("N") = 0)
      .def_readonly("N", &GridFunction::N)
      .def_readwrite("edges", &GridFunction::edges)
      .def("set_row",
           [](GridFunction& f, int edge, const std::vector<double>& row) {
             if (static_cast<int>(row.size()) != f.N)
               throw std::invalid_argument("row length must equal N");
             f.at(edge) = row;
           })
      .def("row",
           [](const GridFunction& f, int edge) {
             const std::vector<double>* r = f.find(edge);
             return r ? *r : std::vector<double>(static_cast<size_t>(f.N), 0.0);
           })
      .def("is_zero", &GridFunction::is_zero)
      .def("support_size", &GridFunction::support_size)
      .def("json", [](const GridFunction& f) { return to_json(f).dump(); });

  m.def("parse_grid_function", &parse_grid_function, py::arg("text"), py::arg("N"));
  m.def("add_scaled", &add_scaled, py::arg("x"), py::arg("a"), py::arg("y"));
  m.def("max_abs_difference", &max_abs_difference);
  m.def("norm", &norm, py::arg("f"), py::arg("tree"), py::arg("weights"), py::arg("cfg"));
  m.def("random_test_function", &random_test_function, py::arg("tree"), py::arg("seed"),
        py::arg("max_support"), py::arg("cfg"));
  m.def("check_disnorm", &check_disnorm, py::arg("f"), py::arg("tree"), py::arg("weights"),
        py::arg("n"), py::arg("cfg"));

  m.def(
      "translate",
      [](const DirectedTree& tree, const GridFunction& f, double t, const LpConfig& cfg) {
        return translate(tree, f, t, cfg);
      },
      py::arg("tree"), py::arg("f"), py::arg("t"), py::arg("cfg"),
      "exact translate; t must be grid aligned");
  m.def("translate_interp", &translate_interp, py::arg("tree"), py::arg("f"), py::arg("t"),
        py::arg("cfg"));
  m.def("check_semigroup_law", &check_semigroup_law, py::arg("tree"), py::arg("f"),
        py::arg("t1"), py::arg("t2"), py::arg("cfg"));
  m.def("check_norm_bound", &check_norm_bound, py::arg("tree"), py::arg("weights"),
        py::arg("f"), py::arg("t_grid"), py::arg("M"), py::arg("w"), py::arg("cfg"));
  m.def("strong_continuity_trend", &strong_continuity_trend, py::arg("tree"),
        py::arg("weights"), py::arg("g"), py::arg("cfg"));

  m.def(
      "holder_infimum",
      [](const std::vector<double>& rho, double p) {
        HolderOptimum opt = holder_infimum(rho, p);
        return py::make_tuple(opt.value, opt.family);
      },
      py::arg("rho"), py::arg("p"));

  py::class_<AdmissibilityReport>(m, "AdmissibilityReport")
      .def_readonly("p", &AdmissibilityReport::p)
      .def_readonly("M", &AdmissibilityReport::M)
      .def_readonly("w", &AdmissibilityReport::w)
      .def_readonly("admissible", &AdmissibilityReport::admissible)
      .def_readonly("worst_ratio", &AdmissibilityReport::worst_ratio)
      .def_readonly("tested", &AdmissibilityReport::tested)
      .def_property_readonly("violation",
                             [](const AdmissibilityReport& r) -> py::object {
                               if (!r.violation) return py::none();
                               py::dict d;
                               d["edge"] = r.violation->edge;
                               d["t"] = r.violation->t;
                               d["s"] = r.violation->s;
                               d["ratio"] = r.violation->ratio;
                               return d;
                             })
      .def("json", [](const AdmissibilityReport& r) { return to_json(r).dump(); });

  py::class_<AdmissibilityFit>(m, "AdmissibilityFit")
      .def_readonly("M", &AdmissibilityFit::M)
      .def_readonly("w", &AdmissibilityFit::w)
      .def("json", [](const AdmissibilityFit& f) { return to_json(f).dump(); });

  m.def("check_admissibility", &check_admissibility, py::arg("tree"), py::arg("weights"),
        py::arg("p"), py::arg("M"), py::arg("w"), py::arg("t_grid"), py::arg("cfg"));
  m.def("fit_admissibility", &fit_admissibility, py::arg("tree"), py::arg("weights"),
        py::arg("p"), py::arg("horizon"), py::arg("cfg"));
  m.def("build_norm_violator", &build_norm_violator, py::arg("tree"), py::arg("weights"),
        py::arg("p"), py::arg("M"), py::arg("w"), py::arg("edge"), py::arg("t"),
        py::arg("cfg"));
  m.def("min_weight", &min_weight, py::arg("tree"), py::arg("weights"), py::arg("edge"),
        py::arg("n"), py::arg("s"));

  py::class_<EdgeCriterion>(m, "EdgeCriterion")
      .def_readonly("edge", &EdgeCriterion::edge)
      .def_readonly("forward", &EdgeCriterion::forward)
      .def_readonly("ancestor", &EdgeCriterion::ancestor)
      .def_readonly("min_forward", &EdgeCriterion::min_forward)
      .def_readonly("slope", &EdgeCriterion::slope)
      .def_readonly("ancestor_slope", &EdgeCriterion::ancestor_slope);

  py::class_<CriterionReport>(m, "CriterionReport")
      .def_readonly("p", &CriterionReport::p)
      .def_property_readonly("kind",
                             [](const CriterionReport& r) { return kind_name(r.kind); })
      .def_readonly("horizon", &CriterionReport::horizon)
      .def_readonly("tol_dyn", &CriterionReport::tol_dyn)
      .def_property_readonly("verdict",
                             [](const CriterionReport& r) { return verdict_name(r.verdict); })
      .def_readonly("edges", &CriterionReport::edges)
      .def_readonly("subsequence", &CriterionReport::subsequence)
      .def_readonly("global_min", &CriterionReport::global_min)
      .def_readonly("obstruction", &CriterionReport::obstruction)
      .def("json", [](const CriterionReport& r) { return to_json(r).dump(); })
      .def("csv", [](const CriterionReport& r) { return criterion_csv(r); });

  m.def("evaluate_criterion", &evaluate_criterion, py::arg("tree"), py::arg("weights"),
        py::arg("p"), py::arg("horizon"), py::arg("cfg"), py::arg("tol_dyn") = 1e-3);

  py::class_<Witness>(m, "Witness")
      .def_readonly("g", &Witness::g)
      .def_readonly("n", &Witness::n)
      .def_readonly("steps_applied", &Witness::steps_applied)
      .def_readonly("unrooted", &Witness::unrooted)
      .def_readonly("achieved_closeness", &Witness::achieved_closeness)
      .def_readonly("achieved_target_error", &Witness::achieved_target_error)
      .def_readonly("nu", &Witness::nu)
      .def_readonly("u", &Witness::u)
      .def_readonly("J1", &Witness::J1)
      .def_readonly("J2", &Witness::J2)
      .def("json", [](const Witness& w) { return to_json(w).dump(); });

  m.def("build_witness_rooted", &build_witness_rooted, py::arg("tree"), py::arg("weights"),
        py::arg("p"), py::arg("f1"), py::arg("f2"), py::arg("eps"), py::arg("cfg"));
  m.def("build_witness_unrooted", &build_witness_unrooted, py::arg("tree"),
        py::arg("weights"), py::arg("p"), py::arg("f1"), py::arg("f2"), py::arg("eps"),
        py::arg("cfg"));

  py::class_<NegativeCertificate>(m, "NegativeCertificate")
      .def_readonly("g", &NegativeCertificate::g)
      .def_readonly("gap", &NegativeCertificate::gap)
      .def_readonly("K", &NegativeCertificate::K)
      .def("json", [](const NegativeCertificate& c) { return to_json(c).dump(); });

  m.def("negative_certificate", &negative_certificate, py::arg("tree"), py::arg("weights"),
        py::arg("p"), py::arg("edge"), py::arg("subsequence"), py::arg("cfg"),
        py::arg("tol_dyn") = 1e-3);

  py::class_<OrbitApproach>(m, "OrbitApproach")
      .def_readonly("target", &OrbitApproach::target)
      .def_readonly("best_t", &OrbitApproach::best_t)
      .def_readonly("distance", &OrbitApproach::distance);

  py::class_<OrbitProbeResult>(m, "OrbitProbeResult")
      .def_readonly("g", &OrbitProbeResult::g)
      .def_readonly("approaches", &OrbitProbeResult::approaches)
      .def("json", [](const OrbitProbeResult& r) { return to_json(r).dump(); });

  m.def("orbit_density_probe", &orbit_density_probe, py::arg("tree"), py::arg("weights"),
        py::arg("p"), py::arg("seed"), py::arg("targets"), py::arg("horizon"),
        py::arg("cfg"), py::arg("tol_dyn") = 1e-3);

  py::class_<HalfLineFunction>(m, "HalfLineFunction")
      .def_readonly("start_level", &HalfLineFunction::start_level)
      .def_readonly("N", &HalfLineFunction::N)
      .def_readonly("line", &HalfLineFunction::line)
      .def_readonly("samples", &HalfLineFunction::samples)
      .def("levels", &HalfLineFunction::levels);

  m.def("phi", &phi, py::arg("tree"), py::arg("f"), py::arg("cfg"));
  m.def("classical_weight", &classical_weight, py::arg("tree"), py::arg("weights"),
        py::arg("u"));
  m.def("classical_norm", &classical_norm, py::arg("F"), py::arg("tree"),
        py::arg("weights"), py::arg("cfg"));
  m.def("classical_translate", &classical_translate, py::arg("F"), py::arg("t"));
  m.def("classical_criterion", &classical_criterion, py::arg("tree"), py::arg("weights"),
        py::arg("p"), py::arg("horizon"), py::arg("cfg"), py::arg("tol_dyn") = 1e-3);

  m.def("set_max_threads", &set_max_threads, py::arg("n"));
  m.def("max_threads", &max_threads);
}
