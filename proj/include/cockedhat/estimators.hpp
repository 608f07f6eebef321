#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cockedhat/arrangement.hpp"
#include "cockedhat/distributions.hpp"
#include "cockedhat/scenario.hpp"

namespace cockedhat {

/// How a non-forming cocked hat is treated.
enum class Formulation { kConjunction, kConditional, kLines, kConstrained };

std::string_view to_string(Formulation f);
Formulation parse_formulation(std::string_view name);

/// One sign per site; bit i set means site i uses its positive error.
struct SelectionPattern {
  std::uint32_t mask = 0;
  std::size_t n = 0;

  int sign(std::size_t i) const { return (mask >> i) & 1U ? 1 : -1; }
  static SelectionPattern from_signs(const std::vector<int>& signs);
  std::string to_string() const;  // e.g. "(+,-,+)"

  friend auto operator<=>(const SelectionPattern&, const SelectionPattern&) = default;
};

/// Exact rational probability over equiprobable selection patterns.
///
/// `denominator` is 2^n, except for the conditional formulation where it is
/// the number of patterns that form a cocked hat.
struct ExactResult {
  std::vector<SelectionPattern> favorable;
  std::uint64_t numerator = 0;
  std::uint64_t denominator = 0;
  std::uint64_t patterns = 0;
  std::uint64_t forming = 0;

  double probability() const { return static_cast<double>(numerator) / static_cast<double>(denominator); }
  std::string fraction() const { return std::to_string(numerator) + "/" + std::to_string(denominator); }
};

struct EstimateResult {
  double p_hat = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::uint64_t seed = 0;
  Formulation formulation = Formulation::kConstrained;
  /// Conditional mode: number of trials where the hat formed (the denominator).
  std::optional<std::uint64_t> conditioning_count;
};

/// Worker count from COCKEDHAT_THREADS, else the hardware concurrency.
unsigned default_workers();

struct McOptions {
  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = 1;
  unsigned workers = 0;  // 0: default_workers()
};

/// Trials are split into chunks of this size; chunk c draws from sub-stream c.
inline constexpr std::uint64_t kChunkTrials = 1U << 16;

std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = 1.96);

/// Monte Carlo Prob(F in cocked hat) for n = 3 under a formulation.
EstimateResult mc_estimate_delta(const Scenario& s, const ErrorModel& m, Formulation f, const McOptions& opt);

/// Monte Carlo Prob(F in an unbounded component of the realized lines).
EstimateResult mc_estimate_unbounded(const Scenario& s, const ErrorModel& m, const McOptions& opt);

/// Whether F lies in the cocked hat of one selection, per formulation
/// (conjunction semantics for conditional and constrained).
struct PatternOutcome {
  bool hat_forms = false;
  bool target_inside = false;
};
PatternOutcome evaluate_pattern(const Scenario& s, const ErrorModel& m, SelectionPattern p, Formulation f);

ExactResult exact_two_ray_delta(const Scenario& s, const ErrorModel& m, Formulation f);

inline constexpr std::size_t kDefaultEnumerationCap = 20;

ExactResult exact_two_ray_unbounded(const Scenario& s, const ErrorModel& m,
                                    std::size_t cap = kDefaultEnumerationCap, unsigned workers = 1);

/// A tangent point a_i^+ or a_i^-.
struct TangentPointId {
  std::size_t site = 0;
  int sign = 1;

  friend auto operator<=>(const TangentPointId&, const TangentPointId&) = default;
  std::string to_string() const;  // e.g. "a3+"
};

/// Per-site data of the reduction to the unit circle S about F.
struct TangentSite {
  Cone d_star;         // D_i translated so both boundary rays touch S
  Ray q_plus;          // translated R_i^+
  Ray q_minus;         // translated R_i^-
  Line m_plus;
  Line m_minus;
  Angle a_plus;        // direction of the tangent point of M_i^+ seen from F
  Angle a_minus;
  DirectionArc arc;    // A_i, the shorter arc between a_i^+ and a_i^-
};

struct TangentReduction {
  Point2 center;  // F; S has radius 1
  std::vector<TangentSite> sites;

  Angle tangent_point(TangentPointId id) const {
    const auto& t = sites.at(id.site);
    return id.sign > 0 ? t.a_plus : t.a_minus;
  }
};

/// Translates every D_i onto S. Throws DegenerateError("degenerate arc")
/// when a_i^+ and a_i^- are antipodal, ValidationError when the model fails
/// the pairwise check or when conditions (i)/(ii) fail.
TangentReduction tangent_reduction(const Scenario& s, const ErrorModel& m);

/// Condition (ii): A_i and A_j overlap and their union is longer than pi.
bool arcs_union_exceeds_half(const DirectionArc& a, const DirectionArc& b);

/// Throws ValidationError naming the first violated condition.
void check_arc_conditions(const TangentReduction& r);

struct SpecialSelectionWitness {
  SelectionPattern pattern;
  DirectionArc shortest_arc;  // I(delta)
  std::pair<TangentPointId, TangentPointId> endpoints;  // (start, end) of I(delta)
};

/// Patterns whose chosen tangent points lie on an open half-circle.
struct SpecialSelections {
  std::size_t count = 0;
  std::vector<SpecialSelectionWitness> witnesses;
};

SpecialSelections count_special_selections(const TangentReduction& r, std::size_t cap = kDefaultEnumerationCap);

/// How often each tangent point is an endpoint of I(delta) over special selections.
std::map<TangentPointId, int> endpoint_multiplicity(const TangentReduction& r,
                                                    std::size_t cap = kDefaultEnumerationCap);

}  // namespace cockedhat
