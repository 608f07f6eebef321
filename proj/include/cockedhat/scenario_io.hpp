#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "cockedhat/distributions.hpp"
#include "cockedhat/errors.hpp"
#include "cockedhat/scenario.hpp"

namespace cockedhat {

/// Malformed input text; `line` is 1-based (0 when not line oriented).
class ParseError : public UsageError {
 public:
  ParseError(std::string source, std::size_t line, std::string field, const std::string& message);

  std::size_t line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

/// `.scn` text: `P <x> <y>` per site, then `F <x> <y>`, 17 significant digits.
std::string format_scenario(const Scenario& s);

/// Parses `.scn` text. `#` starts a comment; blank lines are ignored.
Scenario parse_scenario(std::istream& in, const std::string& source = "<scenario>");
Scenario read_scenario_file(const std::filesystem::path& path);
void write_scenario_file(const std::filesystem::path& path, const Scenario& s);

/// FNV-1a over the canonical text of the scenario.
std::uint64_t scenario_hash(const Scenario& s);
std::string hex64(std::uint64_t v);

/// Inline forms used on the command line: "x,y;x,y;..." and "x,y".
std::vector<Point2> parse_point_list(std::string_view text, const std::string& field);

/// Lines as "x,y,angle;..." (angle accepts the same units as model specs),
/// or a file with one `L <x> <y> <angle>` record per line.
std::vector<Line> parse_line_list(std::string_view text, const std::string& field);
std::vector<Line> read_lines_file(const std::filesystem::path& path);

/// Angle literal: a number with optional unit suffix `deg` or `rad` (default rad).
double parse_angle(std::string_view text, const std::string& field);

/// Model spec: `;`-separated site entries, one entry applying to every site.
///   tworay:<minus>,<plus>   tworay:±<mag> (also +-<mag>)
///   interval:<half_width>
///   mixture:<w>/<minus>,<plus>/<minus>,<plus>
ErrorModel parse_model_spec(std::string_view spec, std::size_t n);

/// Canonical spec (radians, 17 digits) that parses back to the same model.
std::string format_model_spec(const ErrorModel& m);

}  // namespace cockedhat
