#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cockedhat/arrangement.hpp"
#include "cockedhat/errors.hpp"
#include "cockedhat/estimators.hpp"
#include "cockedhat/scenario_io.hpp"
#include "cockedhat/scenarios.hpp"

namespace py = pybind11;
using namespace cockedhat;

namespace {

using XY = std::pair<double, double>;

Point2 pt(XY p) { return {p.first, p.second}; }
XY xy(Point2 p) { return {p.x, p.y}; }

Scenario make_scenario(const std::vector<XY>& points, XY target) {
  Scenario s;
  for (const auto& p : points) s.points.push_back(pt(p));
  s.target = pt(target);
  return s;
}

std::vector<Line> make_lines(const std::vector<std::tuple<double, double, double>>& lines) {
  std::vector<Line> out;
  for (const auto& [x, y, a] : lines) out.push_back({{x, y}, Angle(a)});
  return out;
}

py::dict exact_dict(const ExactResult& r) {
  py::list fav;
  for (const auto& p : r.favorable) fav.append(p.to_string());
  py::dict d;
  d["numerator"] = r.numerator;
  d["denominator"] = r.denominator;
  d["forming"] = r.forming;
  d["favorable"] = fav;
  return d;
}

py::dict estimate_dict(const EstimateResult& r) {
  py::dict d;
  d["p_hat"] = r.p_hat;
  d["trials"] = r.trials;
  d["successes"] = r.successes;
  d["ci"] = py::make_tuple(r.ci_low, r.ci_high);
  d["conditioning_count"] = r.conditioning_count ? py::cast(*r.conditioning_count) : py::none();
  return d;
}

}  // namespace

PYBIND11_MODULE(_cockedhat, m) {
  m.doc() = "Cocked-hat probabilities for three-bearing position fixes";

  py::register_exception<DegenerateError>(m, "DegenerateError", PyExc_ValueError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);

  py::class_<Scenario>(m, "Scenario")
      .def(py::init(&make_scenario), py::arg("points"), py::arg("target"))
      .def_property_readonly("points",
                             [](const Scenario& s) {
                               std::vector<XY> out;
                               for (const auto& p : s.points) out.push_back(xy(p));
                               return out;
                             })
      .def_property_readonly("target", [](const Scenario& s) { return xy(s.target); })
      .def("__len__", &Scenario::size)
      .def("to_text", &format_scenario)
      .def("hash", [](const Scenario& s) { return hex64(scenario_hash(s)); });

  py::class_<ErrorModel>(m, "ErrorModel")
      .def_static("parse", &parse_model_spec, py::arg("spec"), py::arg("n"))
      .def("__len__", &ErrorModel::size)
      .def("spec", &format_model_spec);

  m.def("random_valid_scenario",
        [](std::size_t n, std::uint64_t seed, std::optional<int> hull_case) {
          RandomStream rng(seed);
          std::optional<CaseTag> tag;
          if (hull_case) tag = static_cast<CaseTag>(*hull_case);
          return random_valid_scenario(n, rng, tag);
        },
        py::arg("n"), py::arg("seed") = 1, py::arg("hull_case") = py::none());
  m.def("random_two_ray_model",
        [](const Scenario& s, const ErrorModel& intervals, std::uint64_t seed) {
          RandomStream rng(seed);
          return random_valid_two_ray_model(s, intervals, rng);
        },
        py::arg("scenario"), py::arg("intervals"), py::arg("seed") = 1);

  m.def("classify", [](const Scenario& s) {
    const HullCase c = classify_T(s);
    return py::make_tuple(static_cast<int>(c.tag), c.index ? py::cast(*c.index) : py::none());
  });
  m.def("is_valid_model", [](const Scenario& s, const ErrorModel& em) { return validate_pairwise_intersection(s, em).valid; });
  m.def("max_valid_half_width", [](const Scenario& s) {
    std::vector<double> out;
    for (const auto& a : max_valid_half_width(s)) out.push_back(a.radians());
    return out;
  });

  m.def("exact_delta",
        [](const Scenario& s, const ErrorModel& em, const std::string& f) {
          return exact_dict(exact_two_ray_delta(s, em, parse_formulation(f)));
        },
        py::arg("scenario"), py::arg("model"), py::arg("formulation") = "constrained");
  m.def("exact_unbounded",
        [](const Scenario& s, const ErrorModel& em, std::size_t cap) { return exact_dict(exact_two_ray_unbounded(s, em, cap)); },
        py::arg("scenario"), py::arg("model"), py::arg("cap") = kDefaultEnumerationCap);
  m.def("simulate_delta",
        [](const Scenario& s, const ErrorModel& em, const std::string& f, std::uint64_t trials, std::uint64_t seed,
           unsigned workers) {
          const Formulation form = parse_formulation(f);
          EstimateResult r;
          {
            py::gil_scoped_release release;
            r = mc_estimate_delta(s, em, form, {trials, seed, workers});
          }
          return estimate_dict(r);
        },
        py::arg("scenario"), py::arg("model"), py::arg("formulation") = "constrained", py::arg("trials") = 1'000'000,
        py::arg("seed") = 1, py::arg("workers") = 0);
  m.def("simulate_unbounded",
        [](const Scenario& s, const ErrorModel& em, std::uint64_t trials, std::uint64_t seed, unsigned workers) {
          EstimateResult r;
          {
            py::gil_scoped_release release;
            r = mc_estimate_unbounded(s, em, {trials, seed, workers});
          }
          return estimate_dict(r);
        },
        py::arg("scenario"), py::arg("model"), py::arg("trials") = 1'000'000, py::arg("seed") = 1, py::arg("workers") = 0);
  m.def("special_selections", [](const Scenario& s, const ErrorModel& em) {
    const auto r = tangent_reduction(s, em);
    std::vector<std::string> patterns;
    for (const auto& w : count_special_selections(r).witnesses) patterns.push_back(w.pattern.to_string());
    return patterns;
  });

  m.def("counterexample", [](const std::string& id) {
    const auto spec = make_counterexample(parse_counterexample(id));
    py::dict props;
    for (const auto& p : spec.properties) props[py::str(p.name)] = p.passed;
    return py::make_tuple(spec.scenario, spec.model, props);
  });

  m.def("count_regions", [](const std::vector<std::tuple<double, double, double>>& lines) {
    return count_regions(make_lines(lines));
  });
  m.def("in_unbounded_component", [](XY f, const std::vector<std::tuple<double, double, double>>& lines) {
    const auto cert = in_unbounded_component(pt(f), make_lines(lines));
    return py::make_tuple(cert.unbounded,
                          cert.witness_direction ? py::cast(cert.witness_direction->radians()) : py::none());
  });
}
