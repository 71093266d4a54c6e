#include "s3sr/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <random>
#include <stdexcept>

#include "CLI11.hpp"

#include "s3sr/connect.hpp"
#include "s3sr/curve_io.hpp"
#include "s3sr/euler.hpp"
#include "s3sr/frame.hpp"
#include "s3sr/geodesic.hpp"
#include "s3sr/shooting.hpp"

namespace s3sr {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_reals(const std::string& text, std::size_t count, const std::string& flag) {
  std::vector<double> v;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string::npos) end = text.size();
    const std::string field = text.substr(start, end - start);
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(field, &used);
    } catch (const std::exception&) {
      throw UsageError(flag + ": '" + field + "' is not a number");
    }
    if (used != field.size() || !std::isfinite(x)) throw UsageError(flag + ": '" + field + "' is not a finite number");
    v.push_back(x);
    start = end + 1;
  }
  if (v.size() != count) {
    throw UsageError(flag + ": expected " + std::to_string(count) + " comma-separated values, got " +
                     std::to_string(v.size()));
  }
  return v;
}

// Accepts | |q| − 1 | ≤ 1e-12 as is, normalizes silently up to 1e-8, normalizes with a
// warning up to 1e-3 and rejects anything further off.
S3Point parse_point(const std::string& text, const std::string& flag, std::ostream& err) {
  const auto c = parse_reals(text, 4, flag);
  const Quat q = Quat::from_components({c[0], c[1], c[2], c[3]});
  const double dev = std::abs(q.modulus() - 1.0);
  if (dev > 1e-3) throw UsageError(flag + ": not a unit quaternion (| |q| - 1 | = " + format_number(dev) + ")");
  if (dev > 1e-8) err << "warning: " << flag << " normalized (| |q| - 1 | = " << format_number(dev) << ")\n";
  if (dev > 1e-12) return S3Point::normalized(q);
  return S3Point(q, 3e-12);
}

EulerAngles parse_euler(const std::string& text, const std::string& flag) {
  const auto c = parse_reals(text, 3, flag);
  if (c[2] < 0.0 || c[2] > std::numbers::pi) throw UsageError(flag + ": theta must lie in [0, pi]");
  return EulerAngles{c[0], c[1], c[2]};
}

void print_value(std::ostream& out, const std::string& name, double v) {
  out << name << ": " << format_number(v) << "\n";
}

void emit(const SampledCurve& curve, const RunConfig& cfg, const std::string& path,
          std::map<std::string, double> tolerances) {
  write_file(path, serialize(to_record(curve, std::move(tolerances)), cfg.format));
}

double max_omega(const SampledCurve& c) {
  double m = 0.0;
  if (!c.velocities) return m;
  for (std::size_t i = 0; i < c.size(); ++i) m = std::max(m, std::abs(omega_eval(c.points[i].quat(), (*c.velocities)[i])));
  return m;
}

struct GeodesicArgs {
  std::string q0{"1,0,0,0"};
  double r{1.0};
  double theta0{0.0};
  double lambda{0.0};
  double T{0.0};
};

void add_geodesic_options(CLI::App* sub, GeodesicArgs& g) {
  sub->add_option("--q0", g.q0, "start point w,x,y,z")->capture_default_str();
  sub->add_option("--r", g.r, "speed r >= 0")->capture_default_str();
  sub->add_option("--theta0", g.theta0, "initial angle of the control")->capture_default_str();
  sub->add_option("--lambda", g.lambda, "rotation rate of the control")->capture_default_str();
  sub->add_option("--T", g.T, "final time")->required();
}

GeodesicParams checked_params(const GeodesicArgs& g) {
  if (!std::isfinite(g.T) || g.T < 0.0) throw UsageError("--T must be a finite number >= 0");
  const GeodesicParams p{g.r, g.theta0, g.lambda};
  try {
    p.validate();
  } catch (const std::domain_error& e) {
    throw UsageError(e.what());
  }
  return p;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Horizontal curves and sub-Riemannian geodesics on the unit quaternion sphere", "s3sr"};
  app.fallthrough();
  app.require_subcommand(1);

  RunConfig cfg;
  std::string format{"csv"};
  std::string out_path;
  auto* tol_opt = app.add_option("--tol", cfg.tol, "residual / convergence tolerance")->capture_default_str();
  app.add_option("--step", cfg.step, "integration step")->capture_default_str();
  app.add_option("--samples", cfg.samples, "samples of a constructed curve")->capture_default_str();
  app.add_option("--seed", cfg.seed, "seed for random choices")->capture_default_str();
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app.add_option("--out", out_path, "output file (default curve.csv or curve.json)");

  auto* connect_cmd = app.add_subcommand("connect", "horizontal curve between two points");
  std::string from, to, from_q, to_q;
  connect_cmd->add_option("--from", from, "start phi,psi,theta");
  connect_cmd->add_option("--to", to, "end phi,psi,theta");
  connect_cmd->add_option("--from-q", from_q, "start w,x,y,z");
  connect_cmd->add_option("--to-q", to_q, "end w,x,y,z");

  auto* geodesic_cmd = app.add_subcommand("geodesic", "integrate a geodesic from its controls");
  GeodesicArgs geo;
  add_geodesic_options(geodesic_cmd, geo);

  auto* hamiltonian_cmd = app.add_subcommand("hamiltonian", "integrate the Hamiltonian system with matched costate");
  GeodesicArgs ham;
  add_geodesic_options(hamiltonian_cmd, ham);

  auto* shoot_cmd = app.add_subcommand("shoot", "geodesic between two points");
  std::string shoot_p{"1,0,0,0"}, shoot_q;
  bool random_target = false;
  shoot_cmd->add_option("--p,--P", shoot_p, "start w,x,y,z")->capture_default_str();
  auto* q_opt = shoot_cmd->add_option("--q,--Q", shoot_q, "target w,x,y,z");
  shoot_cmd->add_flag("--random-target", random_target, "draw the target from --seed")->excludes(q_opt);

  auto* check_cmd = app.add_subcommand("check", "verify a curve file");
  std::string check_path;
  check_cmd->add_option("file", check_path, "curve file")->required();

  auto* frames_cmd = app.add_subcommand("frames", "print the frame X, Y, T, N at a point");
  std::string frame_q{"1,0,0,0"};
  frames_cmd->add_option("--q", frame_q, "point w,x,y,z")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    cfg.format = parse_format(format);
    cfg.validate();
    if (out_path.empty()) out_path = "curve." + std::string(format_name(cfg.format));

    if (connect_cmd->parsed()) {
      const bool euler = !from.empty() || !to.empty();
      const bool quat = !from_q.empty() || !to_q.empty();
      if (euler == quat) throw UsageError("connect needs either --from/--to or --from-q/--to-q");
      ConnectOptions opts;
      opts.samples = cfg.samples;
      if (tol_opt->count() > 0) opts.endpoint_tolerance = cfg.tol;
      SampledCurve curve;
      S3Point target;
      try {
        if (euler) {
          if (from.empty() || to.empty()) throw UsageError("connect needs both --from and --to");
          const EulerAngles a = parse_euler(from, "--from");
          const EulerAngles b = parse_euler(to, "--to");
          target = to_cartesian(b);
          curve = connect(a, b, opts);
        } else {
          if (from_q.empty() || to_q.empty()) throw UsageError("connect needs both --from-q and --to-q");
          const S3Point a = parse_point(from_q, "--from-q", err);
          target = parse_point(to_q, "--to-q", err);
          curve = connect(a, target, opts);
        }
      } catch (const ConstructionError& e) {
        err << "error: construction failed: " << e.what() << " (achieved residual " << format_number(e.residual())
            << ")\n";
        return kExitConstruction;
      }
      emit(curve, cfg, out_path, {{"endpoint", opts.endpoint_tolerance}, {"ode", opts.ode_tolerance}});
      print_value(out, "horizontality_residual", max_omega(curve));
      print_value(out, "endpoint_error", distance(curve.points.back(), target));
      out << "samples: " << curve.size() << "\n";
      return kExitOk;
    }

    if (geodesic_cmd->parsed()) {
      const GeodesicParams p = checked_params(geo);
      const S3Point q0 = parse_point(geo.q0, "--q0", err);
      const SampledCurve curve = integrate_geodesic(q0, p, geo.T, cfg.step);
      emit(curve, cfg, out_path, {{"step", cfg.step}});
      const auto e = curve.points.back().quat().components();
      out << "endpoint: " << format_number(e[0]) << "," << format_number(e[1]) << "," << format_number(e[2]) << ","
          << format_number(e[3]) << "\n";
      out << "samples: " << curve.size() << "\n";
      return kExitOk;
    }

    if (hamiltonian_cmd->parsed()) {
      const GeodesicParams p = checked_params(ham);
      const S3Point q0 = parse_point(ham.q0, "--q0", err);
      const HamiltonianState start = matched_initial_state(q0, p);
      const HamiltonianTrajectory traj = integrate_hamiltonian(start, ham.T, cfg.step);
      SampledCurve curve = project(traj);
      curve.params = {{"r", p.r}, {"theta0", p.theta0}, {"lambda", p.lambda}, {"T", ham.T}};
      emit(curve, cfg, out_path, {{"step", cfg.step}});
      const double h0 = hamiltonian(start);
      double drift = 0.0;
      for (const auto& st : traj.states) drift = std::max(drift, std::abs(hamiltonian(st) - h0));
      print_value(out, "hamiltonian", h0);
      print_value(out, "hamiltonian_drift", drift);
      out << "samples: " << curve.size() << "\n";
      return kExitOk;
    }

    if (shoot_cmd->parsed()) {
      const S3Point p = parse_point(shoot_p, "--p", err);
      S3Point q;
      if (random_target) {
        std::mt19937_64 rng(cfg.seed);
        std::normal_distribution<double> n01;
        const double w = n01(rng), x = n01(rng), y = n01(rng), z = n01(rng);
        q = S3Point::normalized(Quat{w, x, y, z});
      } else if (!shoot_q.empty()) {
        q = parse_point(shoot_q, "--q", err);
      } else {
        throw UsageError("shoot needs --q or --random-target");
      }
      ShootConfig sc;
      sc.tol = cfg.tol;
      sc.seed = cfg.seed;
      sc.step = cfg.step;
      const ShootingResult res = shoot(p, q, sc);
      emit(res.curve, cfg, out_path, {{"shoot", cfg.tol}, {"step", cfg.step}});
      print_value(out, "theta0", res.params.theta0);
      print_value(out, "lambda", res.params.lambda);
      print_value(out, "T", res.T);
      print_value(out, "endpoint_error", res.endpoint_error);
      out << "converged: " << (res.converged ? "true" : "false") << "\n";
      if (!res.converged) {
        err << "error: no start converged to --tol " << format_number(cfg.tol) << "\n";
        return kExitNoConvergence;
      }
      return kExitOk;
    }

    if (check_cmd->parsed()) {
      CurveRecord rec;
      try {
        rec = parse_record(read_file(check_path));
      } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
      }
      const CheckReport rep = check_record(rec, cfg.tol);
      for (const CheckLine& l : rep.lines) {
        out << to_string(l.status) << " " << l.name;
        if (l.status != CheckStatus::Skip) out << " " << format_number(l.value);
        if (!l.note.empty()) out << " (" << l.note << ")";
        out << "\n";
      }
      return rep.passed() ? kExitOk : kExitCheckFailed;
    }

    if (frames_cmd->parsed()) {
      const S3Point q = parse_point(frame_q, "--q", err);
      const Frame f = frame_at(q);
      const std::pair<const char*, Quat> rows[] = {{"X", f.x.v}, {"Y", f.y.v}, {"T", f.t.v}, {"N", f.n.v}};
      for (const auto& [name, v] : rows) {
        out << name << ": " << format_number(v.w + 0.0) << "," << format_number(v.x + 0.0) << ","
            << format_number(v.y + 0.0) << "," << format_number(v.z + 0.0) << "\n";
      }
      return kExitOk;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace s3sr
