#include "cockedhat/scenarios.hpp"

#include <algorithm>
#include <cmath>

#include "cockedhat/errors.hpp"

namespace cockedhat {

GeneralPositionReport validate_general_position(const Scenario& s) {
  const std::vector<Point2> pts = s.all_points();
  const double d = diameter(pts);
  GeneralPositionReport r;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      if (d == 0.0 || coincident(pts[i], pts[j], d)) r.duplicates.emplace_back(i, j);
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      for (std::size_t k = j + 1; k < pts.size(); ++k)
        if (std::abs(cross(pts[j] - pts[i], pts[k] - pts[i])) <= kRelTol * d * d)
          r.collinear_triples.push_back({i, j, k});
  r.valid = r.duplicates.empty() && r.collinear_triples.empty();
  return r;
}

HullCase classify_T(const Scenario& s) {
  if (s.size() != 3) throw UsageError("classify_T needs exactly 3 observation points");
  if (!validate_general_position(s).valid) throw DegenerateError("degenerate hull: scenario not in general position");

  const auto& p = s.points;
  const Point2 f = s.target;
  if (point_in_triangle(f, {p[0], p[1], p[2]})) return {CaseTag::kCase1, std::nullopt, {0, 1, 2}};

  auto others = [](std::size_t k) -> std::pair<std::size_t, std::size_t> {
    return {k == 0 ? 1 : 0, k == 2 ? 1 : 2};
  };
  for (std::size_t k = 0; k < 3; ++k) {
    const auto [a, b] = others(k);
    if (point_in_triangle(p[k], {p[a], p[b], f})) return {CaseTag::kCase2, k, {a, k, b}};
  }
  for (std::size_t k = 0; k < 3; ++k) {
    const auto [a, b] = others(k);
    if (orientation(p[k], f, p[a]) == -orientation(p[k], f, p[b])) return {CaseTag::kCase3, k, {a, k, b}};
  }
  throw DegenerateError("degenerate hull");
}

std::array<Cone, 3> theorem1_cones(const Scenario& s, const HullCase& c) {
  const HullCase actual = classify_T(s);
  if (actual.tag != c.tag || actual.index != c.index) throw UsageError("case mismatch");

  const auto& p = s.points;
  auto r = [&](std::size_t i) { return s.true_direction(i); };
  auto toward = [&](std::size_t from, std::size_t to) { return Angle::toward(p[from], p[to]); };

  std::array<Cone, 3> cones;
  if (c.tag == CaseTag::kCase1) {
    for (std::size_t i = 0; i < 3; ++i) cones[i] = cone_between(p[i], toward(i, (i + 2) % 3), toward(i, (i + 1) % 3));
    return cones;
  }
  const auto [a, m, b] = c.order;
  cones[m] = cone_between(p[m], r(a), r(b));
  if (c.tag == CaseTag::kCase2) {
    cones[a] = cone_between(p[a], r(m), toward(a, m));
    cones[b] = cone_between(p[b], r(m), toward(b, m));
  } else {
    cones[a] = cone_between(p[a], r(m), toward(a, b));
    cones[b] = cone_between(p[b], r(m), toward(b, a));
  }
  return cones;
}

std::vector<SignPatternRow> sign_pattern_table(const Scenario& s, const ErrorModel& m) {
  if (s.size() != 3 || m.size() != 3) throw UsageError("sign pattern table needs 3 sites");
  if (!m.all_two_ray()) throw UsageError("sign pattern table needs two-ray models");
  if (!validate_pairwise_intersection(s, m).valid) throw ValidationError("pairwise-intersection condition violated");
  std::vector<SignPatternRow> rows;
  for (std::uint32_t mask = 0; mask < 8; ++mask) {
    const SelectionPattern pat{mask, 3};
    const PatternOutcome o = evaluate_pattern(s, m, pat, Formulation::kConstrained);
    rows.push_back({pat, o.hat_forms, o.target_inside});
  }
  return rows;
}

std::string_view to_string(CounterexampleId id) {
  switch (id) {
    case CounterexampleId::kCE1: return "CE1";
    case CounterexampleId::kCE2: return "CE2";
    case CounterexampleId::kCE3: return "CE3";
  }
  return "?";
}

CounterexampleId parse_counterexample(std::string_view name) {
  for (auto id : {CounterexampleId::kCE1, CounterexampleId::kCE2, CounterexampleId::kCE3})
    if (to_string(id) == name) return id;
  throw UsageError("unknown counterexample '" + std::string(name) + "' (expected CE1, CE2 or CE3)");
}

std::size_t CounterexampleSpec::verified_count() const {
  return static_cast<std::size_t>(
      std::count_if(properties.begin(), properties.end(), [](const VerifiedProperty& p) { return p.passed; }));
}

namespace {

bool meets(const Ray& a, const Ray& b) {
  try {
    return intersect_rays(a, b).has_value();
  } catch (const DegenerateError&) {
    return false;
  }
}

bool errors_below(const ErrorModel& m, double bound, bool inclusive) {
  return std::all_of(m.sites.begin(), m.sites.end(), [&](const SiteModel& site) {
    const auto [lo, hi] = support_extremes(site);
    const double mag = std::max(-lo, hi);
    return inclusive ? mag <= bound : mag < bound;
  });
}

// Each R_i^+ misses both rays of the next site (indices mod 3).
bool plus_rays_miss_next(const Scenario& s, const ErrorModel& m) {
  for (std::size_t i = 0; i < 3; ++i) {
    const std::size_t j = (i + 1) % 3;
    const Ray plus = extreme_ray(s, m, i, 1);
    if (meets(plus, extreme_ray(s, m, j, 1)) || meets(plus, extreme_ray(s, m, j, -1))) return false;
  }
  return true;
}

// Same lines, F moved right by `shift`; errors re-expressed against the new
// true rays. Empty when a site's errors would change sign.
std::optional<std::pair<Scenario, ErrorModel>> shift_target(const Scenario& s, const ErrorModel& m, double shift) {
  Scenario moved = s;
  moved.target.x += shift;
  ErrorModel model;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const Angle lo = extreme_ray(s, m, i, -1).direction;
    const Angle hi = extreme_ray(s, m, i, 1).direction;
    const Angle phi = moved.true_direction(i);
    const Angle minus = lo - phi, plus = hi - phi;
    if (!(minus.radians() < 0.0 && plus.radians() > 0.0)) return std::nullopt;
    model.sites.emplace_back(TwoRaySiteModel::make(minus, plus));
  }
  return std::make_pair(moved, model);
}

VerifiedProperty check(std::string name, bool passed, std::string detail = {}) {
  return {std::move(name), passed, std::move(detail)};
}

std::vector<VerifiedProperty> verify_ce1(const Scenario& s, const ErrorModel& m) {
  std::vector<VerifiedProperty> out;
  out.push_back(check("each R_i^+ misses R_{i+1}^+ and R_{i+1}^-", plus_rays_miss_next(s, m)));
  const PatternOutcome all_minus = evaluate_pattern(s, m, {0, 3}, Formulation::kConjunction);
  out.push_back(check("all-minus selection forms a hat containing F", all_minus.hat_forms && all_minus.target_inside));
  const ExactResult conj = exact_two_ray_delta(s, m, Formulation::kConjunction);
  std::optional<ExactResult> cond;
  try {
    cond = exact_two_ray_delta(s, m, Formulation::kConditional);
  } catch (const ValidationError&) {
  }
  const bool probs = conj.numerator == 1 && conj.denominator == 8 && cond && cond->numerator == 1 &&
                     cond->denominator == 1;
  out.push_back(check("conjunction 1/8 and conditional 1/1", probs,
                      "conjunction " + conj.fraction() + ", conditional " + (cond ? cond->fraction() : "undefined")));
  out.push_back(check("all |eps| < pi/2", errors_below(m, 0.5 * kPi, false)));
  return out;
}

std::vector<VerifiedProperty> verify_ce2(const Scenario& s, const ErrorModel& m) {
  std::vector<VerifiedProperty> out;
  out.push_back(check("all |eps| < pi/2", errors_below(m, 0.5 * kPi, false)));
  const ExactResult lines = exact_two_ray_delta(s, m, Formulation::kLines);
  out.push_back(check("lines formulation probability 0", lines.numerator == 0, lines.fraction()));
  const auto moved = shift_target(s, m, 10.0 * s.diameter());
  bool preserved = false;
  std::string detail = "errors change sign";
  if (moved) {
    const ExactResult r = exact_two_ray_delta(moved->first, moved->second, Formulation::kLines);
    preserved = r.numerator == 0;
    detail = r.fraction();
  }
  out.push_back(check("probability 0 preserved with F moved right by 10 diameters", preserved, detail));
  return out;
}

std::vector<VerifiedProperty> verify_ce3(const Scenario& s, const ErrorModel& m) {
  std::vector<VerifiedProperty> out;
  out.push_back(check("all |eps| <= pi/2", errors_below(m, 0.5 * kPi, true)));
  const ExactResult lines = exact_two_ray_delta(s, m, Formulation::kLines);
  out.push_back(check("lines formulation probability 1", lines.numerator == lines.denominator, lines.fraction()));
  const ExactResult conj = exact_two_ray_delta(s, m, Formulation::kConjunction);
  out.push_back(check("no selection forms a cocked hat", conj.forming == 0,
                      std::to_string(conj.forming) + " of 8 form"));
  return out;
}

Scenario regular_triangle(double first_vertex_deg, double step_deg) {
  Scenario s;
  for (int k = 0; k < 3; ++k) {
    const double a = (first_vertex_deg + step_deg * k) * kPi / 180.0;
    s.points.push_back({std::cos(a), std::sin(a)});
  }
  s.target = {0.0, 0.0};
  return s;
}

CounterexampleSpec build_ce1() {
  // P_i clockwise on the unit circle about F, so R_i^+ turns away from P_{i+1}.
  const Scenario s = regular_triangle(90.0, -120.0);
  const Angle minus = Angle::degrees(-10.0);
  auto model_at = [&](double plus_deg) {
    return ErrorModel::uniform(3, TwoRaySiteModel::make(minus, Angle::degrees(plus_deg)));
  };
  auto holds_with_margin = [&](double plus_deg) {
    return plus_rays_miss_next(s, model_at(plus_deg - 0.5)) && plus_rays_miss_next(s, model_at(plus_deg)) &&
           plus_rays_miss_next(s, model_at(plus_deg + 0.5));
  };
  if (!holds_with_margin(80.0)) throw ValidationError("CE1 search: no admissible eps_plus at the start angle");
  double plus = 80.0;
  while (plus - 1.0 > 0.5 && holds_with_margin(plus - 1.0)) plus -= 1.0;
  return {CounterexampleId::kCE1, s, model_at(plus), {}};
}

CounterexampleSpec build_ce2() {
  // Sites far left of F, spread by +-alpha in bearing as seen from F, at
  // unequal distances so that no three points are collinear.
  const std::array<double, 3> dist{3.0, 1.0, 2.0};
  const std::array<int, 3> offset{-1, 0, 1};
  const ErrorModel model = ErrorModel::uniform(3, TwoRaySiteModel::symmetric(Angle::degrees(0.5)));
  for (double alpha_deg = 8.0; alpha_deg > 1e-3; alpha_deg *= 0.5) {
    Scenario s;
    for (std::size_t k = 0; k < 3; ++k) {
      const double b = offset[k] * alpha_deg * kPi / 180.0;
      s.points.push_back({-dist[k] * std::cos(b), dist[k] * std::sin(b)});
    }
    s.target = {0.0, 0.0};
    if (!validate_general_position(s).valid) continue;
    const auto props = verify_ce2(s, model);
    if (std::all_of(props.begin(), props.end(), [](const VerifiedProperty& p) { return p.passed; }))
      return {CounterexampleId::kCE2, s, model, {}};
  }
  throw ValidationError("CE2 search exhausted");
}

CounterexampleSpec build_ce3() {
  // Errors just short of +-pi/2: every plotted ray runs nearly along the
  // circumcircle, so a ray only meets the neighbour that turns back toward it.
  const Scenario s = regular_triangle(90.0, 120.0);
  for (double gap_deg = 5.0; gap_deg > 0.01; gap_deg *= 0.5) {
    const ErrorModel model = ErrorModel::uniform(3, TwoRaySiteModel::symmetric(Angle::degrees(90.0 - gap_deg)));
    const auto props = verify_ce3(s, model);
    if (std::all_of(props.begin(), props.end(), [](const VerifiedProperty& p) { return p.passed; }))
      return {CounterexampleId::kCE3, s, model, {}};
  }
  throw ValidationError("CE3 search exhausted");
}

}  // namespace

std::vector<VerifiedProperty> verify_counterexample(CounterexampleId id, const Scenario& s, const ErrorModel& m) {
  if (s.size() != 3 || m.size() != 3 || !m.all_two_ray())
    throw UsageError("counterexamples are two-ray models on three sites");
  switch (id) {
    case CounterexampleId::kCE1: return verify_ce1(s, m);
    case CounterexampleId::kCE2: return verify_ce2(s, m);
    case CounterexampleId::kCE3: return verify_ce3(s, m);
  }
  return {};
}

CounterexampleSpec make_counterexample(CounterexampleId id) {
  CounterexampleSpec spec = id == CounterexampleId::kCE1   ? build_ce1()
                            : id == CounterexampleId::kCE2 ? build_ce2()
                                                           : build_ce3();
  spec.properties = verify_counterexample(id, spec.scenario, spec.model);
  for (const auto& p : spec.properties)
    if (!p.passed) throw ValidationError(std::string(to_string(id)) + " property failed: " + p.name);
  return spec;
}

std::pair<Scenario, ErrorModel> random_valid_scenario(std::size_t n, RandomStream& rng, std::optional<CaseTag> target) {
  if (n < 3) throw UsageError("random_valid_scenario needs n >= 3");
  if (target && n != 3) throw UsageError("case targeting needs n = 3");
  for (int attempt = 0; attempt < kScenarioAttempts; ++attempt) {
    Scenario s;
    for (std::size_t i = 0; i < n; ++i) s.points.push_back({rng.uniform01(), rng.uniform01()});
    s.target = {rng.uniform01(), rng.uniform01()};
    if (!validate_general_position(s).valid) continue;
    if (target && classify_T(s).tag != *target) continue;

    std::vector<Angle> widths;
    try {
      widths = max_valid_half_width(s);
    } catch (const ValidationError&) {
      continue;
    }
    for (Angle& w : widths) w = Angle(kGeneratorSafetyFactor * w.radians());
    ErrorModel m = ErrorModel::intervals(widths);
    if (validate_pairwise_intersection(s, m).valid) return {std::move(s), std::move(m)};
  }
  throw ValidationError("random_valid_scenario: rejection budget exhausted");
}

ErrorModel random_valid_two_ray_model(const Scenario& s, const ErrorModel& interval_model, RandomStream& rng) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    ErrorModel m;
    for (const auto& site : interval_model.sites) {
      const double w = support_extremes(site).hi;
      m.sites.emplace_back(
          TwoRaySiteModel::make(Angle(-w * rng.uniform(0.2, 1.0)), Angle(w * rng.uniform(0.2, 1.0))));
    }
    if (validate_pairwise_intersection(s, m).valid) return m;
  }
  throw ValidationError("random_valid_two_ray_model: no valid model found");
}

}  // namespace cockedhat
