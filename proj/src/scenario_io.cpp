#include "cockedhat/scenario_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace cockedhat {

namespace {

std::string describe(const std::string& source, std::size_t line, const std::string& field, const std::string& msg) {
  std::string out = source;
  if (line > 0) out += ":" + std::to_string(line);
  if (!field.empty()) out += ": field '" + field + "'";
  return out + ": " + msg;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_number(std::string_view text, const std::string& source, std::size_t line, const std::string& field) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v))
    throw ParseError(source, line, field, "expected a finite number, got '" + std::string(text) + "'");
  return v;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Record {
  std::size_t line;
  std::vector<std::string> tokens;
};

std::vector<Record> tokenized_records(std::istream& in) {
  std::vector<Record> records;
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ss(raw);
    Record r{lineno, {}};
    for (std::string tok; ss >> tok;) r.tokens.push_back(tok);
    if (!r.tokens.empty()) records.push_back(std::move(r));
  }
  return records;
}

}  // namespace

ParseError::ParseError(std::string source, std::size_t line, std::string field, const std::string& message)
    : UsageError(describe(source, line, field, message)), line_(line), field_(std::move(field)) {}

std::string format_scenario(const Scenario& s) {
  std::string out;
  for (const auto& p : s.points) out += "P " + fmt17(p.x) + " " + fmt17(p.y) + "\n";
  out += "F " + fmt17(s.target.x) + " " + fmt17(s.target.y) + "\n";
  return out;
}

Scenario parse_scenario(std::istream& in, const std::string& source) {
  Scenario s;
  bool have_target = false;
  for (const auto& rec : tokenized_records(in)) {
    const auto& t = rec.tokens;
    const std::size_t ln = rec.line;
    if (t[0] != "P" && t[0] != "F") throw ParseError(source, ln, "record", "expected 'P' or 'F', got '" + std::string(t[0]) + "'");
    if (t.size() != 3) throw ParseError(source, ln, std::string(t[0]), "expected 2 coordinates");
    const Point2 p{parse_number(t[1], source, ln, "x"), parse_number(t[2], source, ln, "y")};
    if (t[0] == "F") {
      if (have_target) throw ParseError(source, ln, "F", "target given twice");
      s.target = p;
      have_target = true;
    } else {
      if (have_target) throw ParseError(source, ln, "P", "observation point after the target");
      s.points.push_back(p);
    }
  }
  if (!have_target) throw ParseError(source, 0, "F", "missing target record");
  if (s.points.empty()) throw ParseError(source, 0, "P", "no observation points");
  return s;
}

Scenario read_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "", "cannot open file");
  return parse_scenario(in, path.string());
}

void write_scenario_file(const std::filesystem::path& path, const Scenario& s) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path.string());
  out << "# cockedhat scenario: " << s.size() << " observation points\n" << format_scenario(s);
}

std::uint64_t scenario_hash(const Scenario& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : format_scenario(s)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::vector<Point2> parse_point_list(std::string_view text, const std::string& field) {
  std::vector<Point2> out;
  for (auto item : split(text, ';')) {
    if (item.empty()) continue;
    const auto xy = split(item, ',');
    if (xy.size() != 2) throw ParseError("<command line>", 0, field, "expected 'x,y', got '" + std::string(item) + "'");
    out.push_back({parse_number(xy[0], "<command line>", 0, field), parse_number(xy[1], "<command line>", 0, field)});
  }
  if (out.empty()) throw ParseError("<command line>", 0, field, "no points given");
  return out;
}

double parse_angle(std::string_view text, const std::string& field) {
  text = trim(text);
  double scale = 1.0;
  if (text.ends_with("deg")) {
    scale = kPi / 180.0;
    text.remove_suffix(3);
  } else if (text.ends_with("rad")) {
    text.remove_suffix(3);
  }
  return scale * parse_number(text, "<model>", 0, field);
}

std::vector<Line> parse_line_list(std::string_view text, const std::string& field) {
  std::vector<Line> out;
  for (auto item : split(text, ';')) {
    if (item.empty()) continue;
    const auto parts = split(item, ',');
    if (parts.size() != 3)
      throw ParseError("<command line>", 0, field, "expected 'x,y,angle', got '" + std::string(item) + "'");
    out.push_back({{parse_number(parts[0], "<command line>", 0, field), parse_number(parts[1], "<command line>", 0, field)},
                   Angle(parse_angle(parts[2], field))});
  }
  return out;
}

std::vector<Line> read_lines_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "", "cannot open file");
  std::vector<Line> out;
  for (const auto& rec : tokenized_records(in)) {
    const auto& t = rec.tokens;
    if (t[0] != "L" || t.size() != 4) throw ParseError(path.string(), rec.line, "record", "expected 'L <x> <y> <angle>'");
    out.push_back({{parse_number(t[1], path.string(), rec.line, "x"), parse_number(t[2], path.string(), rec.line, "y")},
                   Angle(parse_angle(t[3], "angle"))});
  }
  return out;
}

namespace {

TwoRaySiteModel parse_two_ray(std::string_view body, const std::string& field) {
  for (std::string_view pm : {"±", "+-", "pm"}) {
    if (body.starts_with(pm)) {
      const double mag = parse_angle(body.substr(pm.size()), field);
      return TwoRaySiteModel::make(Angle(-mag), Angle(mag));
    }
  }
  const auto parts = split(body, ',');
  if (parts.size() != 2) throw ParseError("<model>", 0, field, "tworay expects '<minus>,<plus>' or '±<magnitude>'");
  return TwoRaySiteModel::make(Angle(parse_angle(parts[0], field)), Angle(parse_angle(parts[1], field)));
}

SiteModel parse_site(std::string_view entry, const std::string& field) {
  const auto colon = entry.find(':');
  if (colon == std::string_view::npos) throw ParseError("<model>", 0, field, "expected '<kind>:<parameters>'");
  const std::string_view kind = trim(entry.substr(0, colon));
  const std::string_view body = trim(entry.substr(colon + 1));
  try {
    if (kind == "tworay") return parse_two_ray(body, field);
    if (kind == "interval") return SymmetricIntervalSiteModel::make(Angle(parse_angle(body, field)));
    if (kind == "mixture") {
      const auto parts = split(body, '/');
      if (parts.size() != 3) throw ParseError("<model>", 0, field, "mixture expects '<w>/<minus>,<plus>/<minus>,<plus>'");
      const double w = parse_number(parts[0], "<model>", 0, field);
      if (!(w >= 0.0 && w <= 1.0)) throw ParseError("<model>", 0, field, "mixture weight must lie in [0, 1]");
      return MixtureSiteModel{parse_two_ray(parts[1], field), parse_two_ray(parts[2], field), w};
    }
  } catch (const ParseError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ParseError("<model>", 0, field, e.what());
  }
  throw ParseError("<model>", 0, field, "unknown site model kind '" + std::string(kind) + "'");
}

}  // namespace

ErrorModel parse_model_spec(std::string_view spec, std::size_t n) {
  const auto entries = split(spec, ';');
  ErrorModel m;
  for (std::size_t i = 0; i < entries.size(); ++i) m.sites.push_back(parse_site(entries[i], "model[" + std::to_string(i + 1) + "]"));
  if (m.size() == 1 && n > 1) m = ErrorModel::uniform(n, m.sites[0]);
  if (m.size() != n)
    throw ParseError("<model>", 0, "model", "has " + std::to_string(m.size()) + " sites, scenario has " + std::to_string(n));
  return m;
}

std::string format_model_spec(const ErrorModel& m) {
  struct Visitor {
    std::string operator()(const TwoRaySiteModel& t) const { return "tworay:" + pair(t); }
    std::string operator()(const SymmetricIntervalSiteModel& s) const {
      return "interval:" + fmt17(s.half_width.radians()) + "rad";
    }
    std::string operator()(const MixtureSiteModel& x) const {
      return "mixture:" + fmt17(x.weight_first) + "/" + pair(x.first) + "/" + pair(x.second);
    }
    static std::string pair(const TwoRaySiteModel& t) {
      return fmt17(t.eps_minus.radians()) + "rad," + fmt17(t.eps_plus.radians()) + "rad";
    }
  };
  std::string out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i) out += ';';
    out += std::visit(Visitor{}, m.sites[i]);
  }
  return out;
}

}  // namespace cockedhat
