#include "s3sr/curve_io.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "s3sr/frame.hpp"
#include "s3sr/geodesic.hpp"

namespace s3sr {

namespace {

constexpr const char* kColumns = "s,x1,x2,y1,y2,a,b,omega_res";
constexpr const char* kMagic = "s3sr-curve";

double parse_double(std::string_view field, const char* what) {
  const std::string buf(field);
  if (buf.empty()) throw FormatError(std::string("empty ") + what);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(buf.c_str(), &end);
  if (end != buf.c_str() + buf.size() || errno == ERANGE) {
    throw FormatError(std::string("bad number for ") + what + ": '" + buf + "'");
  }
  return v;
}

std::optional<double> parse_optional(std::string_view field, const char* what) {
  if (field.empty()) return std::nullopt;
  return parse_double(field, what);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string optional_field(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

void parse_header(std::string_view line, CurveRecord& rec) {
  // "# s3sr-curve tag=<tag> param.<k>=<v> ... tol.<k>=<v> ..."
  std::istringstream in{std::string(line.substr(1))};
  std::string tok;
  in >> tok;
  if (tok != kMagic) throw FormatError("missing curve header");
  while (in >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw FormatError("bad header token '" + tok + "'");
    const std::string key = tok.substr(0, eq);
    const std::string val = tok.substr(eq + 1);
    if (key == "tag") {
      rec.tag = val;
    } else if (key.rfind("param.", 0) == 0) {
      rec.params[key.substr(6)] = parse_double(val, "header parameter");
    } else if (key.rfind("tol.", 0) == 0) {
      rec.tolerances[key.substr(4)] = parse_double(val, "header tolerance");
    } else {
      throw FormatError("unknown header key '" + key + "'");
    }
  }
}

nlohmann::json optional_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::optional<double> json_optional(const nlohmann::json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

bool uniform_grid(const std::vector<double>& s) {
  if (s.size() < 2) return true;
  const double h = (s.back() - s.front()) / static_cast<double>(s.size() - 1);
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (std::abs((s[i] - s[i - 1]) - h) > 1e-9 * std::max(1.0, std::abs(h))) return false;
  }
  return true;
}

CheckLine residual_line(std::string name, double value, double threshold) {
  CheckLine l;
  l.name = std::move(name);
  l.value = value;
  l.threshold = threshold;
  l.status = value <= threshold ? CheckStatus::Pass : CheckStatus::Fail;
  return l;
}

CheckLine skip_line(std::string name, std::string note) {
  CheckLine l;
  l.name = std::move(name);
  l.status = CheckStatus::Skip;
  l.note = std::move(note);
  return l;
}

}  // namespace

FileFormat parse_format(std::string_view name) {
  if (name == "csv") return FileFormat::Csv;
  if (name == "json") return FileFormat::Json;
  throw FormatError("unknown format '" + std::string(name) + "'");
}

std::string_view format_name(FileFormat f) { return f == FileFormat::Csv ? "csv" : "json"; }

void RunConfig::validate() const {
  if (!(tol > 0.0) || !std::isfinite(tol)) throw std::domain_error("tol must be a positive number");
  if (!(step > 0.0) || !std::isfinite(step)) throw std::domain_error("step must be a positive number");
  if (samples < 2) throw std::domain_error("samples must be at least 2");
}

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

CurveRecord to_record(const SampledCurve& curve, std::map<std::string, double> tolerances) {
  CurveRecord rec;
  rec.tag = curve.tag;
  rec.params = curve.params;
  rec.tolerances = std::move(tolerances);
  rec.rows.reserve(curve.size());
  for (std::size_t i = 0; i < curve.size(); ++i) {
    CurveRow row;
    row.s = curve.s[i];
    row.q = curve.points[i].quat();
    if (curve.velocities) {
      const Quat& v = (*curve.velocities)[i];
      const Frame f = frame_at(curve.points[i]);
      row.a = dot(v, f.x.v);
      row.b = dot(v, f.y.v);
      row.omega_res = omega_eval(curve.points[i].quat(), v);
    }
    rec.rows.push_back(row);
  }
  return rec;
}

SampledCurve to_curve(const CurveRecord& rec) {
  SampledCurve c;
  c.tag = rec.tag;
  c.params = rec.params;
  const bool have_ab =
      !rec.rows.empty() && std::all_of(rec.rows.begin(), rec.rows.end(), [](const CurveRow& r) { return r.a && r.b; });
  std::vector<Quat> vel;
  for (const CurveRow& r : rec.rows) {
    c.s.push_back(r.s);
    c.points.push_back(S3Point::normalized(r.q));
    if (have_ab) {
      const Frame f = frame_at(c.points.back());
      vel.push_back(*r.a * f.x.v + *r.b * f.y.v);
    }
  }
  if (have_ab) c.velocities = std::move(vel);
  return c;
}

std::string to_csv(const CurveRecord& rec) {
  if (rec.tag.find_first_of(" \t\n\r") != std::string::npos) throw FormatError("tag must not contain whitespace");
  std::string out = std::string("# ") + kMagic + " tag=" + rec.tag;
  for (const auto& [k, v] : rec.params) out += " param." + k + "=" + format_number(v);
  for (const auto& [k, v] : rec.tolerances) out += " tol." + k + "=" + format_number(v);
  out += "\n# ";
  out += kColumns;
  out += "\n";
  for (const CurveRow& r : rec.rows) {
    out += format_number(r.s);
    for (double c : r.q.components()) out += "," + format_number(c);
    out += "," + optional_field(r.a) + "," + optional_field(r.b) + "," + optional_field(r.omega_res) + "\n";
  }
  return out;
}

CurveRecord parse_csv(std::string_view text) {
  CurveRecord rec;
  bool seen_header = false;
  bool seen_columns = false;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (!seen_header) {
        parse_header(line, rec);
        seen_header = true;
      } else if (!seen_columns) {
        std::string_view cols = line.substr(1);
        while (!cols.empty() && cols.front() == ' ') cols.remove_prefix(1);
        if (cols != kColumns) throw FormatError("unexpected column list");
        seen_columns = true;
      }
      continue;
    }
    if (!seen_header || !seen_columns) throw FormatError("data before header");
    const auto f = split(line, ',');
    if (f.size() != 8) {
      throw FormatError("line " + std::to_string(line_no) + ": expected 8 fields, got " + std::to_string(f.size()));
    }
    CurveRow r;
    r.s = parse_double(f[0], "s");
    r.q = Quat::from_components({parse_double(f[1], "x1"), parse_double(f[2], "x2"), parse_double(f[3], "y1"),
                                 parse_double(f[4], "y2")});
    r.a = parse_optional(f[5], "a");
    r.b = parse_optional(f[6], "b");
    r.omega_res = parse_optional(f[7], "omega_res");
    rec.rows.push_back(r);
  }
  if (!seen_header) throw FormatError("missing curve header");
  return rec;
}

std::string to_json(const CurveRecord& rec) {
  nlohmann::json j;
  j["format"] = kMagic;
  j["tag"] = rec.tag;
  j["params"] = rec.params;
  j["tolerances"] = rec.tolerances;
  j["columns"] = split(kColumns, ',');
  nlohmann::json rows = nlohmann::json::array();
  for (const CurveRow& r : rec.rows) {
    const auto c = r.q.components();
    rows.push_back({r.s, c[0], c[1], c[2], c[3], optional_json(r.a), optional_json(r.b), optional_json(r.omega_res)});
  }
  j["rows"] = std::move(rows);
  return j.dump(1) + "\n";
}

CurveRecord parse_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.at("format").get<std::string>() != kMagic) throw FormatError("not a curve file");
    CurveRecord rec;
    rec.tag = j.at("tag").get<std::string>();
    rec.params = j.at("params").get<std::map<std::string, double>>();
    rec.tolerances = j.at("tolerances").get<std::map<std::string, double>>();
    for (const auto& row : j.at("rows")) {
      if (!row.is_array() || row.size() != 8) throw FormatError("row must have 8 entries");
      CurveRow r;
      r.s = row[0].get<double>();
      r.q = Quat::from_components({row[1].get<double>(), row[2].get<double>(), row[3].get<double>(),
                                   row[4].get<double>()});
      r.a = json_optional(row[5]);
      r.b = json_optional(row[6]);
      r.omega_res = json_optional(row[7]);
      rec.rows.push_back(r);
    }
    return rec;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("json: ") + e.what());
  }
}

std::string serialize(const CurveRecord& rec, FileFormat f) { return f == FileFormat::Csv ? to_csv(rec) : to_json(rec); }

CurveRecord parse_record(std::string_view text) {
  const auto pos = text.find_first_not_of(" \t\r\n");
  if (pos == std::string_view::npos) throw FormatError("empty curve file");
  return text[pos] == '{' ? parse_json(text) : parse_csv(text);
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool CheckReport::passed() const {
  return std::none_of(lines.begin(), lines.end(), [](const CheckLine& l) { return l.status == CheckStatus::Fail; });
}

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass:
      return "PASS";
    case CheckStatus::Fail:
      return "FAIL";
    case CheckStatus::Skip:
      return "SKIP";
  }
  return "?";
}

CheckReport check_record(const CurveRecord& rec, double tol) {
  CheckReport rep;
  const auto& rows = rec.rows;

  double min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < rows.size(); ++i) min_gap = std::min(min_gap, rows[i].s - rows[i - 1].s);
  if (rows.size() < 2) {
    rep.lines.push_back(skip_line("grid", "fewer than two samples"));
  } else {
    CheckLine l;
    l.name = "grid";
    l.value = min_gap;
    l.status = min_gap > 0.0 ? CheckStatus::Pass : CheckStatus::Fail;
    l.note = "min step";
    rep.lines.push_back(l);
  }

  double unit = 0.0;
  for (const CurveRow& r : rows) unit = std::max(unit, std::abs(r.q.modulus() - 1.0));
  rep.lines.push_back(residual_line("unit_norm", unit, 1e-8));

  const SampledCurve curve = to_curve(rec);
  const bool grid_ok = rows.size() >= 2 && min_gap > 0.0 && uniform_grid(curve.s);
  const bool enough = grid_ok && rows.size() >= 5;
  const char* why = rows.size() < 5 ? "fewer than five samples" : "grid not uniform";

  std::vector<Quat> vfd;
  if (enough) vfd = fd_velocity(curve, DifferenceOrder::Fourth);

  if (enough) {
    double h = 0.0;
    for (std::size_t i = 0; i < curve.size(); ++i) h = std::max(h, std::abs(omega_eval(curve.points[i].quat(), vfd[i])));
    rep.lines.push_back(residual_line("horizontality", h, tol));
  } else {
    rep.lines.push_back(skip_line("horizontality", why));
  }

  if (enough) {
    SampledCurve withv = curve;
    withv.velocities = vfd;
    rep.lines.push_back(residual_line("energy", verify_velocity_energy(withv).energy_residual, tol));
  } else {
    rep.lines.push_back(skip_line("energy", why));
  }

  if (enough) {
    rep.lines.push_back(residual_line("t_acceleration", acceleration_T_residual(curve, DifferenceOrder::Fourth), tol));
  } else {
    rep.lines.push_back(skip_line("t_acceleration", why));
  }

  const bool geodesic_tag = rec.tag == "geodesic" || rec.tag == "hamiltonian" || rec.tag == "shoot";
  if (!geodesic_tag) {
    rep.lines.push_back(skip_line("angle_linearity", "not a geodesic"));
  } else if (!enough) {
    rep.lines.push_back(skip_line("angle_linearity", why));
  } else {
    double speed = std::numeric_limits<double>::infinity();
    for (const Quat& v : vfd) speed = std::min(speed, v.modulus());
    if (!(speed > 1e-9)) {
      rep.lines.push_back(skip_line("angle_linearity", "zero velocity"));
    } else {
      const LineFit fit = fit_line(curve.s, angle_profile(curve.points, vfd));
      CheckLine l = residual_line("angle_linearity", fit.max_deviation, tol);
      l.note = "slope " + format_number(fit.slope);
      rep.lines.push_back(l);
    }
  }
  return rep;
}

}  // namespace s3sr
