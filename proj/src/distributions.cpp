#include "cockedhat/distributions.hpp"

#include <algorithm>
#include <stdexcept>

#include "cockedhat/errors.hpp"

namespace cockedhat {

TwoRaySiteModel TwoRaySiteModel::make(Angle minus, Angle plus) {
  if (!(minus.radians() < 0.0 && plus.radians() > 0.0) || minus.radians() <= -kPi || plus.radians() >= kPi)
    throw std::invalid_argument("two-ray model needs -pi < eps_minus < 0 < eps_plus < pi");
  return {minus, plus};
}

SymmetricIntervalSiteModel SymmetricIntervalSiteModel::make(Angle half_width) {
  if (!(half_width.radians() > 0.0 && half_width.radians() < kPi))
    throw std::invalid_argument("interval model needs 0 < half_width < pi");
  return {half_width};
}

SupportExtremes support_extremes(const SiteModel& m) {
  struct Visitor {
    SupportExtremes operator()(const TwoRaySiteModel& t) const {
      return {t.eps_minus.radians(), t.eps_plus.radians()};
    }
    SupportExtremes operator()(const SymmetricIntervalSiteModel& s) const {
      return {-s.half_width.radians(), s.half_width.radians()};
    }
    SupportExtremes operator()(const MixtureSiteModel& x) const {
      return {std::min(x.first.eps_minus.radians(), x.second.eps_minus.radians()),
              std::max(x.first.eps_plus.radians(), x.second.eps_plus.radians())};
    }
  };
  return std::visit(Visitor{}, m);
}

bool ErrorModel::all_two_ray() const {
  return std::all_of(sites.begin(), sites.end(),
                     [](const SiteModel& m) { return std::holds_alternative<TwoRaySiteModel>(m); });
}

const TwoRaySiteModel& ErrorModel::two_ray(std::size_t i) const {
  const auto* t = std::get_if<TwoRaySiteModel>(&sites.at(i));
  if (t == nullptr) throw UsageError("site " + std::to_string(i + 1) + " is not a two-ray model");
  return *t;
}

ErrorModel ErrorModel::intervals(const std::vector<Angle>& half_widths) {
  ErrorModel m;
  for (Angle w : half_widths) m.sites.emplace_back(SymmetricIntervalSiteModel::make(w));
  return m;
}

namespace {

void require_matching(const Scenario& s, const ErrorModel& m) {
  if (s.size() != m.size())
    throw UsageError("model has " + std::to_string(m.size()) + " sites, scenario has " + std::to_string(s.size()));
}

bool rays_meet(const Ray& a, const Ray& b) {
  try {
    return intersect_rays(a, b).has_value();
  } catch (const DegenerateError&) {
    return false;
  }
}

// D_i and D_j meet in a convex quadrilateral around F whose vertices, in
// cyclic order, are R_i^- x R_j^-, R_i^- x R_j^+, R_i^+ x R_j^+, R_i^+ x R_j^-.
bool quadrilateral_ok(const Scenario& s, const ErrorModel& m, std::size_t i, std::size_t j) {
  std::array<Point2, 4> q;
  const std::array<std::pair<int, int>, 4> order{{{-1, -1}, {-1, 1}, {1, 1}, {1, -1}}};
  for (std::size_t k = 0; k < 4; ++k) {
    auto p = intersect_rays(extreme_ray(s, m, i, order[k].first), extreme_ray(s, m, j, order[k].second));
    if (!p) return false;
    q[k] = *p;
  }
  const int turn = orientation(q[0], q[1], q[2]);
  if (turn == 0) return false;
  for (std::size_t k = 0; k < 4; ++k) {
    if (orientation(q[k], q[(k + 1) % 4], q[(k + 2) % 4]) != turn) return false;
    if (orientation(q[k], q[(k + 1) % 4], s.target) != turn) return false;
  }
  return true;
}

}  // namespace

SupportCone support_cone(const Scenario& s, const ErrorModel& m, std::size_t i) {
  require_matching(s, m);
  const auto [lo, hi] = support_extremes(m.sites.at(i));
  if (hi - lo >= kPi - kAngleTol) throw DegenerateError("improper support cone");
  const Angle r = s.true_direction(i);
  SupportCone out{i, cone_between(s.points[i], r + Angle(lo), r + Angle(hi)), std::nullopt};
  if (std::holds_alternative<TwoRaySiteModel>(m.sites[i])) out.d = out.k;
  return out;
}

Ray plotted_ray(const Scenario& s, std::size_t i, double eps) { return apply_error(s.true_ray(i), Angle(eps)); }

Ray extreme_ray(const Scenario& s, const ErrorModel& m, std::size_t i, int sign) {
  const auto [lo, hi] = support_extremes(m.sites.at(i));
  return plotted_ray(s, i, sign < 0 ? lo : hi);
}

PairwiseReport validate_pairwise_intersection(const Scenario& s, const ErrorModel& m) {
  require_matching(s, m);
  PairwiseReport report;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      bool pair_ok = true;
      for (int si : {1, -1}) {
        for (int sj : {1, -1}) {
          if (!rays_meet(extreme_ray(s, m, i, si), extreme_ray(s, m, j, sj))) {
            report.failures.push_back({i, j, si, sj});
            pair_ok = false;
          }
        }
      }
      const bool two_ray = std::holds_alternative<TwoRaySiteModel>(m.sites[i]) &&
                           std::holds_alternative<TwoRaySiteModel>(m.sites[j]);
      if (pair_ok && two_ray && !quadrilateral_ok(s, m, i, j)) report.quadrilateral_failures.emplace_back(i, j);
    }
  }
  report.valid = report.failures.empty() && report.quadrilateral_failures.empty();
  return report;
}

std::size_t audit_pairwise_intersection(const Scenario& s, const ErrorModel& m, std::size_t samples,
                                        std::uint64_t seed) {
  require_matching(s, m);
  RandomStream rng(seed);
  std::vector<Ray> rays(s.size());
  std::size_t checked = 0;
  for (std::size_t k = 0; k < samples; ++k) {
    for (std::size_t i = 0; i < s.size(); ++i) rays[i] = plotted_ray(s, i, sample_error(m.sites[i], rng));
    for (std::size_t i = 0; i < s.size(); ++i) {
      for (std::size_t j = i + 1; j < s.size(); ++j, ++checked) {
        if (!rays_meet(rays[i], rays[j]))
          throw ValidationError("pairwise-intersection audit failed: sites " + std::to_string(i + 1) + " and " +
                                std::to_string(j + 1) + " at sample " + std::to_string(k));
      }
    }
  }
  return checked;
}

std::vector<double> cone_margins(const Scenario& s) {
  std::vector<double> margins(s.size(), 0.49 * kPi);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const Angle r = s.true_direction(i);
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (j == i) continue;
      const Cone c = cone_c_ij(s, i, j).whole;
      const double off = ccw_sweep(c.start.radians(), r.radians());
      margins[i] = std::min({margins[i], off, c.width() - off});
    }
  }
  return margins;
}

std::vector<Angle> max_valid_half_width(const Scenario& s) {
  const std::vector<double> base = cone_margins(s);
  const double widest = *std::max_element(base.begin(), base.end());

  auto widths_at = [&](double t) {
    std::vector<Angle> w;
    for (double b : base) w.emplace_back(t * b);
    return w;
  };
  auto passes = [&](double t) {
    return validate_pairwise_intersection(s, ErrorModel::intervals(widths_at(t))).valid;
  };

  double lo = 0.0, hi = 1.0;
  if (passes(hi)) {
    lo = hi;
  } else {
    while ((hi - lo) * widest > 1e-6) {
      const double mid = 0.5 * (lo + hi);
      (passes(mid) ? lo : hi) = mid;
    }
  }
  if (lo <= 0.0) throw ValidationError("scenario admits no constrained model");
  return widths_at(lo);
}

double sample_error(const SiteModel& m, RandomStream& rng) {
  struct Visitor {
    RandomStream& rng;
    double operator()(const TwoRaySiteModel& t) const {
      return rng.coin() ? t.eps_plus.radians() : t.eps_minus.radians();
    }
    double operator()(const SymmetricIntervalSiteModel& s) const {
      const double a = s.half_width.radians();
      double e = 0.0;
      while (e == 0.0) e = rng.uniform(-a, a);
      return e;
    }
    double operator()(const MixtureSiteModel& x) const {
      return (*this)(rng.uniform01() < x.weight_first ? x.first : x.second);
    }
  };
  return std::visit(Visitor{rng}, m);
}

std::vector<Angle> sample_errors(const ErrorModel& m, RandomStream& rng) {
  std::vector<Angle> out;
  out.reserve(m.size());
  for (const auto& site : m.sites) out.emplace_back(sample_error(site, rng));
  return out;
}

bool within_quarter_turn(const ErrorModel& m) {
  return std::all_of(m.sites.begin(), m.sites.end(), [](const SiteModel& site) {
    const auto [lo, hi] = support_extremes(site);
    return lo >= -0.5 * kPi && hi <= 0.5 * kPi;
  });
}

}  // namespace cockedhat
