#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "cockedhat/geometry.hpp"
#include "cockedhat/random.hpp"
#include "cockedhat/scenario.hpp"

namespace cockedhat {

/// Error concentrated on two rays, each chosen with probability 1/2.
struct TwoRaySiteModel {
  Angle eps_minus;  // < 0
  Angle eps_plus;   // > 0

  /// Throws std::invalid_argument unless -pi < minus < 0 < plus < pi.
  static TwoRaySiteModel make(Angle minus, Angle plus);
  static TwoRaySiteModel symmetric(Angle magnitude) { return make(-magnitude, magnitude); }
};

/// Error uniform on [-half_width, half_width].
struct SymmetricIntervalSiteModel {
  Angle half_width;

  static SymmetricIntervalSiteModel make(Angle half_width);
};

/// Picks `first` with probability `weight_first`, otherwise `second`. Each
/// component satisfies the median condition, so the mixture does too.
struct MixtureSiteModel {
  TwoRaySiteModel first;
  TwoRaySiteModel second;
  double weight_first = 0.5;
};

using SiteModel = std::variant<TwoRaySiteModel, SymmetricIntervalSiteModel, MixtureSiteModel>;

/// Smallest and largest error angle in the support of a site model.
struct SupportExtremes {
  double lo;
  double hi;
};

SupportExtremes support_extremes(const SiteModel& m);

/// Independent per-site error laws.
struct ErrorModel {
  std::vector<SiteModel> sites;

  std::size_t size() const { return sites.size(); }
  bool all_two_ray() const;
  const TwoRaySiteModel& two_ray(std::size_t i) const;

  static ErrorModel uniform(std::size_t n, const SiteModel& site) { return {std::vector<SiteModel>(n, site)}; }
  static ErrorModel intervals(const std::vector<Angle>& half_widths);
};

/// Smallest cone K_i holding the plotted ray at site i, and for two-ray sites
/// D_i = cone(P_i, R_i^+, R_i^-), which coincides with it.
struct SupportCone {
  std::size_t site = 0;
  Cone k;
  std::optional<Cone> d;
};

/// Throws DegenerateError("improper support cone") when the support spans
/// pi or more.
SupportCone support_cone(const Scenario& s, const ErrorModel& m, std::size_t i);

/// The ray R_i for a given error.
Ray plotted_ray(const Scenario& s, std::size_t i, double eps);

/// Extreme ray at site i: sign < 0 picks the low end of the support.
Ray extreme_ray(const Scenario& s, const ErrorModel& m, std::size_t i, int sign);

struct PairFailure {
  std::size_t i;
  std::size_t j;
  int sign_i;
  int sign_j;

  friend bool operator==(const PairFailure&, const PairFailure&) = default;
};

struct PairwiseReport {
  bool valid = true;
  std::vector<PairFailure> failures;
  /// Pairs of two-ray sites whose D_i and D_j do not meet in a convex
  /// quadrilateral around F.
  std::vector<std::pair<std::size_t, std::size_t>> quadrilateral_failures;
};

/// Checks every pair of sites on the four extreme-ray combinations.
PairwiseReport validate_pairwise_intersection(const Scenario& s, const ErrorModel& m);

/// Draws `samples` joint errors and throws ValidationError on the first pair
/// of realized rays that fails to intersect. Returns the number of pairs checked.
std::size_t audit_pairwise_intersection(const Scenario& s, const ErrorModel& m, std::size_t samples,
                                        std::uint64_t seed);

/// Angular margin of r_i inside every C_ij, capped below pi/2.
std::vector<double> cone_margins(const Scenario& s);

inline constexpr double kGeneratorSafetyFactor = 0.9;

/// Largest half-widths t * margin_i whose interval model passes the
/// pairwise check, found by bisection on t. Throws ValidationError when no
/// positive scale passes.
std::vector<Angle> max_valid_half_width(const Scenario& s);

double sample_error(const SiteModel& m, RandomStream& rng);

/// One error per site; exact zeros are redrawn.
std::vector<Angle> sample_errors(const ErrorModel& m, RandomStream& rng);

/// True when every site's support lies in [-pi/2, pi/2].
bool within_quarter_turn(const ErrorModel& m);

}  // namespace cockedhat
