#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cockedhat/distributions.hpp"
#include "cockedhat/estimators.hpp"
#include "cockedhat/random.hpp"
#include "cockedhat/scenario.hpp"

namespace cockedhat {

/// Indices refer to P_1..P_n followed by F (index n), all 0-based.
struct GeneralPositionReport {
  bool valid = true;
  std::vector<std::pair<std::size_t, std::size_t>> duplicates;
  std::vector<std::array<std::size_t, 3>> collinear_triples;
};

GeneralPositionReport validate_general_position(const Scenario& s);

enum class CaseTag { kCase1 = 1, kCase2 = 2, kCase3 = 3 };

/// Shape of conv{P_1, P_2, P_3, F}.
///
/// Case 1: a triangle with F inside. Case 2: a triangle with F a vertex and
/// P_index inside. Case 3: a quadrilateral in which P_index F is a diagonal.
/// `order` relabels the sites as (a, m, b) with m the special site, so that
/// m plays the role of P_2 in the cone constructions.
struct HullCase {
  CaseTag tag = CaseTag::kCase1;
  std::optional<std::size_t> index;
  std::array<std::size_t, 3> order{0, 1, 2};
};

HullCase classify_T(const Scenario& s);

/// The cones C_1, C_2, C_3 (in the caller's labels) that confine the plotted
/// rays in each case. Throws UsageError when `c` does not match the scenario.
std::array<Cone, 3> theorem1_cones(const Scenario& s, const HullCase& c);

struct SignPatternRow {
  SelectionPattern pattern;
  bool hat_forms = false;
  bool target_inside = false;
};

/// All 8 sign patterns of a valid two-ray model on three sites.
std::vector<SignPatternRow> sign_pattern_table(const Scenario& s, const ErrorModel& m);

enum class CounterexampleId { kCE1 = 1, kCE2 = 2, kCE3 = 3 };

std::string_view to_string(CounterexampleId id);
CounterexampleId parse_counterexample(std::string_view name);

struct VerifiedProperty {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct CounterexampleSpec {
  CounterexampleId id = CounterexampleId::kCE1;
  Scenario scenario;
  ErrorModel model;
  std::vector<VerifiedProperty> properties;

  std::size_t verified_count() const;
  bool all_verified() const { return verified_count() == properties.size(); }
};

/// Evaluates the defining properties of a counterexample on given data.
std::vector<VerifiedProperty> verify_counterexample(CounterexampleId id, const Scenario& s, const ErrorModel& m);

/// Builds a counterexample by search and verifies it. Throws ValidationError
/// rather than return a spec with a failing property.
CounterexampleSpec make_counterexample(CounterexampleId id);

inline constexpr int kScenarioAttempts = 10'000;

/// Uniform points in the unit square, rejected until in general position,
/// with interval models at kGeneratorSafetyFactor of max_valid_half_width.
/// For n = 3, `target` restricts the hull case.
std::pair<Scenario, ErrorModel> random_valid_scenario(std::size_t n, RandomStream& rng,
                                                      std::optional<CaseTag> target = std::nullopt);

/// A two-ray model inside the given interval model (random asymmetric
/// magnitudes in [0.2, 1] of each half-width) that passes the pairwise check.
ErrorModel random_valid_two_ray_model(const Scenario& s, const ErrorModel& interval_model, RandomStream& rng);

}  // namespace cockedhat
