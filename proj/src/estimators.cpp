#include "cockedhat/estimators.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <thread>

#include "cockedhat/errors.hpp"

namespace cockedhat {

std::string_view to_string(Formulation f) {
  switch (f) {
    case Formulation::kConjunction: return "conjunction";
    case Formulation::kConditional: return "conditional";
    case Formulation::kLines: return "lines";
    case Formulation::kConstrained: return "constrained";
  }
  return "?";
}

Formulation parse_formulation(std::string_view name) {
  for (auto f : {Formulation::kConjunction, Formulation::kConditional, Formulation::kLines, Formulation::kConstrained})
    if (to_string(f) == name) return f;
  throw UsageError("unknown formulation '" + std::string(name) + "'");
}

SelectionPattern SelectionPattern::from_signs(const std::vector<int>& signs) {
  SelectionPattern p{0, signs.size()};
  for (std::size_t i = 0; i < signs.size(); ++i)
    if (signs[i] > 0) p.mask |= 1U << i;
  return p;
}

std::string SelectionPattern::to_string() const {
  std::string out = "(";
  for (std::size_t i = 0; i < n; ++i) {
    if (i) out += ',';
    out += sign(i) > 0 ? '+' : '-';
  }
  return out + ")";
}

std::string TangentPointId::to_string() const {
  return "a" + std::to_string(site + 1) + (sign > 0 ? "+" : "-");
}

unsigned default_workers() {
  if (const char* env = std::getenv("COCKEDHAT_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
  if (trials == 0) throw UsageError("wilson_interval: trials must be positive");
  if (successes > trials) throw UsageError("wilson_interval: successes exceed trials");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, std::min(p, center - half)), std::min(1.0, std::max(p, center + half))};
}

namespace {

struct Tally {
  std::uint64_t successes = 0;
  std::uint64_t forming = 0;
};

// Runs `body(chunk_index, first_trial, count)` over fixed-size chunks on a
// pool of workers. Per-chunk results are summed in chunk order, and the
// exception of the lowest failing chunk is rethrown.
template <typename Body>
Tally run_chunks(std::uint64_t trials, unsigned workers, Body body) {
  const std::uint64_t chunks = (trials + kChunkTrials - 1) / kChunkTrials;
  std::vector<Tally> tallies(chunks);
  std::vector<std::exception_ptr> errors(chunks);
  std::atomic<std::uint64_t> next{0};

  auto worker = [&] {
    for (std::uint64_t c = next++; c < chunks; c = next++) {
      const std::uint64_t first = c * kChunkTrials;
      const std::uint64_t count = std::min(kChunkTrials, trials - first);
      try {
        tallies[c] = body(c, count);
      } catch (...) {
        errors[c] = std::current_exception();
      }
    }
  };

  if (workers == 0) workers = default_workers();
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, chunks));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  Tally total;
  for (std::uint64_t c = 0; c < chunks; ++c) {
    if (errors[c]) std::rethrow_exception(errors[c]);
    total.successes += tallies[c].successes;
    total.forming += tallies[c].forming;
  }
  return total;
}

bool rays_meet(const Ray& a, const Ray& b) {
  try {
    return intersect_rays(a, b).has_value();
  } catch (const DegenerateError&) {
    return false;
  }
}

void require_realized_pairs_meet(std::span<const Ray> rays) {
  for (std::size_t i = 0; i < rays.size(); ++i)
    for (std::size_t j = i + 1; j < rays.size(); ++j)
      if (!rays_meet(rays[i], rays[j]))
        throw ValidationError("pairwise-intersection audit failed: realized rays " + std::to_string(i + 1) + " and " +
                              std::to_string(j + 1) + " do not meet");
}

void require_valid(const Scenario& s, const ErrorModel& m) {
  if (!validate_pairwise_intersection(s, m).valid) throw ValidationError("pairwise-intersection condition violated");
}

void require_three_sites(const Scenario& s, const ErrorModel& m) {
  if (s.size() != 3) throw UsageError("the cocked hat needs exactly 3 observation points");
  if (m.size() != 3) throw UsageError("model must have 3 sites");
}

EstimateResult finish(std::uint64_t successes, std::uint64_t trials, const McOptions& opt, Formulation f) {
  EstimateResult r;
  r.trials = opt.trials;
  r.successes = successes;
  r.p_hat = static_cast<double>(successes) / static_cast<double>(trials);
  std::tie(r.ci_low, r.ci_high) = wilson_interval(successes, trials);
  r.seed = opt.seed;
  r.formulation = f;
  return r;
}

// Hitting arc of the line of R_i, read off the sign of the error: the line
// lies counterclockwise of F when eps > 0. Exact even for tiny errors.
DirectionArc realized_hitting_arc(Angle true_dir, double eps) {
  const double theta = true_dir.radians() + eps;
  return DirectionArc::from_start(Angle(eps > 0.0 ? theta : theta - kPi), kPi);
}

}  // namespace

EstimateResult mc_estimate_delta(const Scenario& s, const ErrorModel& m, Formulation f, const McOptions& opt) {
  require_three_sites(s, m);
  if (opt.trials == 0) throw UsageError("trials must be positive");
  if (f == Formulation::kLines && !within_quarter_turn(m))
    throw UsageError("lines formulation needs errors within [-pi/2, pi/2]");
  if (f == Formulation::kConstrained) require_valid(s, m);

  const std::array<Ray, 3> truth{s.true_ray(0), s.true_ray(1), s.true_ray(2)};
  auto chunk = [&](std::uint64_t c, std::uint64_t count) {
    RandomStream rng = RandomStream::substream(opt.seed, c);
    Tally t;
    std::array<Ray, 3> rays;
    for (std::uint64_t k = 0; k < count; ++k) {
      for (std::size_t i = 0; i < 3; ++i) rays[i] = apply_error(truth[i], Angle(sample_error(m.sites[i], rng)));
      std::optional<Triangle> hat;
      if (f == Formulation::kLines) {
        hat = line_triangle(Line::through(rays[0]), Line::through(rays[1]), Line::through(rays[2]));
      } else {
        if (f == Formulation::kConstrained) require_realized_pairs_meet(rays);
        hat = cocked_hat(rays[0], rays[1], rays[2]);
      }
      if (!hat) continue;
      ++t.forming;
      if (point_in_triangle(s.target, *hat)) ++t.successes;
    }
    return t;
  };

  const Tally total = run_chunks(opt.trials, opt.workers, chunk);
  if (f == Formulation::kConditional) {
    if (total.forming == 0) throw ValidationError("conditioning event empty");
    EstimateResult r = finish(total.successes, total.forming, opt, f);
    r.conditioning_count = total.forming;
    return r;
  }
  return finish(total.successes, opt.trials, opt, f);
}

EstimateResult mc_estimate_unbounded(const Scenario& s, const ErrorModel& m, const McOptions& opt) {
  if (s.size() < 3) throw UsageError("unbounded-component estimate needs n >= 3");
  if (opt.trials == 0) throw UsageError("trials must be positive");
  require_valid(s, m);

  const std::size_t n = s.size();
  std::vector<Angle> truth;
  for (std::size_t i = 0; i < n; ++i) truth.push_back(s.true_direction(i));

  auto chunk = [&](std::uint64_t c, std::uint64_t count) {
    RandomStream rng = RandomStream::substream(opt.seed, c);
    Tally t;
    std::vector<Ray> rays(n);
    std::vector<DirectionArc> arcs(n);
    for (std::uint64_t k = 0; k < count; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        const double eps = sample_error(m.sites[i], rng);
        rays[i] = plotted_ray(s, i, eps);
        arcs[i] = realized_hitting_arc(truth[i], eps);
      }
      require_realized_pairs_meet(rays);
      if (arc_coverage(arcs).unbounded) ++t.successes;
    }
    return t;
  };
  const Tally total = run_chunks(opt.trials, opt.workers, chunk);
  return finish(total.successes, opt.trials, opt, Formulation::kConstrained);
}

PatternOutcome evaluate_pattern(const Scenario& s, const ErrorModel& m, SelectionPattern p, Formulation f) {
  std::array<Ray, 3> rays;
  for (std::size_t i = 0; i < 3; ++i) rays[i] = extreme_ray(s, m, i, p.sign(i));
  const auto hat = f == Formulation::kLines
                       ? line_triangle(Line::through(rays[0]), Line::through(rays[1]), Line::through(rays[2]))
                       : cocked_hat(rays[0], rays[1], rays[2]);
  return {hat.has_value(), hat && point_in_triangle(s.target, *hat)};
}

ExactResult exact_two_ray_delta(const Scenario& s, const ErrorModel& m, Formulation f) {
  require_three_sites(s, m);
  if (!m.all_two_ray()) throw UsageError("exact enumeration needs two-ray models at every site");
  if (f == Formulation::kLines && !within_quarter_turn(m))
    throw UsageError("lines formulation needs errors within [-pi/2, pi/2]");
  if (f == Formulation::kConstrained) require_valid(s, m);

  ExactResult r;
  r.patterns = 8;
  for (std::uint32_t mask = 0; mask < 8; ++mask) {
    const SelectionPattern p{mask, 3};
    const PatternOutcome o = evaluate_pattern(s, m, p, f);
    if (o.hat_forms) ++r.forming;
    if (o.target_inside) r.favorable.push_back(p);
  }
  r.numerator = r.favorable.size();
  if (f == Formulation::kConditional) {
    if (r.forming == 0) throw ValidationError("conditioning event empty");
    r.denominator = r.forming;
  } else {
    r.denominator = r.patterns;
  }
  return r;
}

ExactResult exact_two_ray_unbounded(const Scenario& s, const ErrorModel& m, std::size_t cap, unsigned workers) {
  const std::size_t n = s.size();
  if (n < 3) throw UsageError("unbounded-component enumeration needs n >= 3");
  if (!m.all_two_ray()) throw UsageError("exact enumeration needs two-ray models at every site");
  if (n > cap || n > 31) throw UsageError("enumeration too large");
  require_valid(s, m);

  std::vector<std::array<Line, 2>> lines(n);
  for (std::size_t i = 0; i < n; ++i)
    lines[i] = {Line::through(extreme_ray(s, m, i, -1)), Line::through(extreme_ray(s, m, i, 1))};

  const std::uint64_t total = std::uint64_t{1} << n;
  if (workers == 0) workers = default_workers();
  workers = static_cast<unsigned>(std::clamp<std::uint64_t>(workers, 1, total));
  std::vector<std::vector<SelectionPattern>> found(workers);
  std::vector<std::exception_ptr> errors(workers);

  auto scan = [&](unsigned w) {
    const std::uint64_t lo = total * w / workers, hi = total * (w + 1) / workers;
    std::vector<Line> chosen(n);
    try {
      for (std::uint64_t mask = lo; mask < hi; ++mask) {
        for (std::size_t i = 0; i < n; ++i) chosen[i] = lines[i][(mask >> i) & 1U];
        if (in_unbounded_component(s.target, chosen).unbounded)
          found[w].push_back({static_cast<std::uint32_t>(mask), n});
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    scan(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(scan, w);
  }

  ExactResult r;
  for (unsigned w = 0; w < workers; ++w) {
    if (errors[w]) std::rethrow_exception(errors[w]);
    r.favorable.insert(r.favorable.end(), found[w].begin(), found[w].end());
  }
  r.numerator = r.favorable.size();
  r.patterns = r.denominator = total;
  return r;
}

bool arcs_union_exceeds_half(const DirectionArc& a, const DirectionArc& b) {
  double span = -1.0;
  const double ab = ccw_sweep(a.start.radians(), b.start.radians());
  const double ba = ccw_sweep(b.start.radians(), a.start.radians());
  if (ab <= a.length + kAngleTol) {
    span = std::max(a.length, ab + b.length);
  } else if (ba <= b.length + kAngleTol) {
    span = std::max(b.length, ba + a.length);
  }
  return span > kPi + kAngleTol;
}

void check_arc_conditions(const TangentReduction& r) {
  for (std::size_t i = 0; i < r.sites.size(); ++i)
    if (!(r.sites[i].arc.length < kPi - kAngleTol))
      throw ValidationError("arc condition (i) violated at site " + std::to_string(i + 1));
  for (std::size_t i = 0; i < r.sites.size(); ++i)
    for (std::size_t j = i + 1; j < r.sites.size(); ++j)
      if (!arcs_union_exceeds_half(r.sites[i].arc, r.sites[j].arc))
        throw ValidationError("arc condition (ii) violated at sites " + std::to_string(i + 1) + ", " +
                              std::to_string(j + 1));
}

TangentReduction tangent_reduction(const Scenario& s, const ErrorModel& m) {
  if (!m.all_two_ray()) throw UsageError("tangent reduction needs two-ray models at every site");
  require_valid(s, m);

  TangentReduction out{s.target, {}};
  for (std::size_t i = 0; i < s.size(); ++i) {
    const TwoRaySiteModel& t = m.two_ray(i);
    const Angle phi = s.true_direction(i);
    const Angle lo = phi + t.eps_minus;
    const Angle hi = phi + t.eps_plus;

    // The cone sweeps counterclockwise from lo to hi, so S sits left of the
    // lo boundary and right of the hi boundary.
    TangentSite site;
    site.a_minus = Angle(lo.radians() - 0.5 * kPi);
    site.a_plus = Angle(hi.radians() + 0.5 * kPi);
    if (angular_distance(site.a_plus, site.a_minus) >= kPi - kAngleTol) throw DegenerateError("degenerate arc");

    site.m_minus = Line{s.target + site.a_minus.unit(), lo};
    site.m_plus = Line{s.target + site.a_plus.unit(), hi};
    const auto apex = intersect_lines(site.m_minus, site.m_plus);
    if (!apex) throw DegenerateError("degenerate arc");
    site.q_minus = Ray{*apex, lo};
    site.q_plus = Ray{*apex, hi};
    site.d_star = cone_between(*apex, lo, hi);

    if (std::abs(signed_distance(site.m_minus, s.target) - 1.0) > 1e-9 ||
        std::abs(signed_distance(site.m_plus, s.target) + 1.0) > 1e-9)
      throw DegenerateError("tangent lines do not enclose S");

    const double sweep = ccw_sweep(site.a_plus.radians(), site.a_minus.radians());
    site.arc = sweep < kPi ? DirectionArc::from_start(site.a_plus, sweep)
                           : DirectionArc::from_start(site.a_minus, kTwoPi - sweep);
    out.sites.push_back(site);
  }
  check_arc_conditions(out);
  return out;
}

namespace {

struct ChosenPoint {
  double angle;  // in [0, 2pi)
  TangentPointId id;
};

std::optional<SpecialSelectionWitness> special_witness(const TangentReduction& r, SelectionPattern p,
                                                       std::vector<ChosenPoint>& pts) {
  pts.clear();
  for (std::size_t i = 0; i < p.n; ++i) {
    const TangentPointId id{i, p.sign(i)};
    pts.push_back({ccw_sweep(0.0, r.tangent_point(id).radians()), id});
  }
  std::sort(pts.begin(), pts.end(), [](const ChosenPoint& a, const ChosenPoint& b) { return a.angle < b.angle; });

  std::size_t widest = 0;
  double gap_max = -1.0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const std::size_t next = (k + 1) % pts.size();
    double gap = pts[next].angle - pts[k].angle;
    if (next == 0) gap += kTwoPi;
    if (gap > gap_max) {
      gap_max = gap;
      widest = k;
    }
  }
  if (std::abs(gap_max - kPi) <= kAngleTol) throw DegenerateError("tangent points span exactly a half-circle");
  if (gap_max < kPi) return std::nullopt;

  const ChosenPoint& first = pts[(widest + 1) % pts.size()];
  const ChosenPoint& last = pts[widest];
  return SpecialSelectionWitness{p, DirectionArc::from_start(Angle(first.angle), kTwoPi - gap_max),
                                 {first.id, last.id}};
}

}  // namespace

SpecialSelections count_special_selections(const TangentReduction& r, std::size_t cap) {
  const std::size_t n = r.sites.size();
  if (n > cap || n > 31) throw UsageError("enumeration too large");
  check_arc_conditions(r);

  SpecialSelections out;
  std::vector<ChosenPoint> scratch;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    if (auto w = special_witness(r, {static_cast<std::uint32_t>(mask), n}, scratch)) out.witnesses.push_back(*w);
  }
  out.count = out.witnesses.size();
  return out;
}

std::map<TangentPointId, int> endpoint_multiplicity(const TangentReduction& r, std::size_t cap) {
  std::map<TangentPointId, int> counts;
  for (std::size_t i = 0; i < r.sites.size(); ++i) {
    counts[{i, 1}] = 0;
    counts[{i, -1}] = 0;
  }
  for (const auto& w : count_special_selections(r, cap).witnesses) {
    ++counts[w.endpoints.first];
    ++counts[w.endpoints.second];
  }
  return counts;
}

}  // namespace cockedhat
