#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "s3sr/curve.hpp"

namespace s3sr {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class FileFormat { Csv, Json };

FileFormat parse_format(std::string_view name);
std::string_view format_name(FileFormat f);

struct RunConfig {
  double tol{1e-6};
  double step{1e-3};
  std::size_t samples{256};
  std::uint64_t seed{0};
  FileFormat format{FileFormat::Csv};

  // Throws std::domain_error unless tol > 0, step > 0 and samples ≥ 2.
  void validate() const;
};

struct CurveRow {
  double s{0.0};
  Quat q;
  std::optional<double> a;
  std::optional<double> b;
  std::optional<double> omega_res;

  friend bool operator==(const CurveRow&, const CurveRow&) = default;
};

// File-level view of a curve. Rows are stored as read, without the unit check, so
// damaged files can still be inspected.
struct CurveRecord {
  std::string tag;
  std::map<std::string, double> params;
  std::map<std::string, double> tolerances;
  std::vector<CurveRow> rows;

  friend bool operator==(const CurveRecord&, const CurveRecord&) = default;
};

// a, b are the X/Y components of the stored velocity, omega_res = ω(velocity).
CurveRecord to_record(const SampledCurve& curve, std::map<std::string, double> tolerances = {});

// Points are normalized; velocities are rebuilt as aX + bY when both columns are present.
SampledCurve to_curve(const CurveRecord& rec);

// Two '#' header lines (metadata, then the column list
// s,x1,x2,y1,y2,a,b,omega_res), one LF-terminated row per sample, numbers as %.17g,
// missing optional columns empty.
std::string to_csv(const CurveRecord& rec);
CurveRecord parse_csv(std::string_view text);

std::string to_json(const CurveRecord& rec);
CurveRecord parse_json(std::string_view text);

std::string serialize(const CurveRecord& rec, FileFormat f);
// Detects the format from the first non-blank character ('{' for JSON).
CurveRecord parse_record(std::string_view text);

void write_file(const std::string& path, const std::string& contents);
std::string read_file(const std::string& path);

// 17-significant-digit rendering used by every writer.
std::string format_number(double x);

enum class CheckStatus { Pass, Fail, Skip };

struct CheckLine {
  std::string name;
  double value{0.0};
  double threshold{0.0};
  CheckStatus status{CheckStatus::Skip};
  std::string note;
};

struct CheckReport {
  std::vector<CheckLine> lines;
  bool passed() const;
};

// Checks grid monotonicity, unit norm (1e-8), horizontality of finite-difference
// velocities, energy identity, T-component of the acceleration and,
// for geodesic tags, linearity of the angle to X. Residual checks compare against tol.
CheckReport check_record(const CurveRecord& rec, double tol);

std::string to_string(CheckStatus s);

}  // namespace s3sr
