#include "glgeo/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "glgeo/distance.hpp"
#include "glgeo/geodesics.hpp"
#include "glgeo/io.hpp"
#include "glgeo/matrix_functions.hpp"

namespace glgeo::cli {

namespace {

struct CommonFlags {
  double mu = 1.0;
  double mu_c = 1.0;
  double kappa = 1.0;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  int max_starts = 40;
  int max_winding = 2;
  std::string format = "json";
  std::string out_path;

  [[nodiscard]] MetricParams params() const { return {mu, mu_c, kappa}; }

  [[nodiscard]] SolverOptions solver_options() const {
    SolverOptions opts;
    if (tol) opts.residual_tol = *tol;
    opts.max_starts = max_starts;
    opts.max_winding = max_winding;
    if (seed) {
      opts.seed = *seed;
    } else if (const char* env = std::getenv("GLGEO_SEED")) {
      try {
        opts.seed = std::stoull(env);
      } catch (const std::exception&) {
        throw Error(ErrorKind::invalid_argument, "GLGEO_SEED must be an unsigned integer");
      }
    }
    opts.validate();
    return opts;
  }

  [[nodiscard]] bool csv() const { return format == "csv"; }
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--mu", flags.mu, "Weight of the deviatoric symmetric part")->capture_default_str();
  cmd->add_option("--muc", flags.mu_c, "Weight of the skew part")->capture_default_str();
  cmd->add_option("--kappa", flags.kappa, "Weight of the trace part")->capture_default_str();
  cmd->add_option("--tol", flags.tol, "Relative residual tolerance of the shooting solver");
  cmd->add_option("--seed", flags.seed, "Seed for randomized solver starts (default: $GLGEO_SEED or 0)");
  cmd->add_option("--max-starts", flags.max_starts, "Solver start budget")->capture_default_str();
  cmd->add_option("--max-winding", flags.max_winding, "Winding bound for normal logarithm branches")
      ->capture_default_str();
  cmd->add_option("--format", flags.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  cmd->add_option("--out", flags.out_path, "Write the report to PATH instead of standard output");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::parse, "cannot read file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Inline JSON or @path.
std::string resolve_literal(const std::string& arg) {
  if (!arg.empty() && arg.front() == '@') return read_file(arg.substr(1));
  return arg;
}

SquareMat matrix_arg(const std::string& arg) { return io::parse_matrix(resolve_literal(arg)); }

std::string csv_matrix_header(const std::string& prefix, std::size_t n) {
  std::string h;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      h += ',' + prefix + std::to_string(i) + std::to_string(j);
    }
  }
  return h;
}

std::string csv_matrix_entries(const SquareMat& m) {
  std::string row;
  for (double v : m.data()) row += ',' + io::format_double(v);
  return row;
}

std::string conserved_json(const ConservedQuantities& q) {
  return "{\"norm\":" + io::json_number(q.norm) + ",\"trace\":" + io::json_number(q.trace) +
         ",\"det\":" + io::json_number(q.determinant) +
         ",\"trcof\":" + io::json_number(q.trace_cofactor) + '}';
}

int emit(const CommonFlags& flags, const std::string& report, std::ostream& out) {
  if (flags.out_path.empty()) {
    out << report;
    return kOk;
  }
  std::ofstream file(flags.out_path, std::ios::binary);
  if (!file) throw Error(ErrorKind::parse, "cannot write '" + flags.out_path + "'");
  file << report;
  return kOk;
}

// ---------------------------------------------------------------------------

int cmd_dist(const CommonFlags& flags, const std::string& a_arg, const std::string& b_arg,
             std::ostream& out) {
  const DistanceQuery query{matrix_arg(a_arg), matrix_arg(b_arg), flags.params(),
                            flags.solver_options()};
  const DistanceResult result = geodesic_distance(query);
  std::string report;
  if (flags.csv()) {
    report = "value,residual,status,starts_used,converged_starts" +
             csv_matrix_header("m", result.minimizer.dim()) + '\n' +
             io::format_double(result.value) + ',' + io::format_double(result.residual) + ',' +
             std::string(to_string(result.status)) + ',' + std::to_string(result.starts_used) +
             ',' + std::to_string(result.converged_starts) +
             csv_matrix_entries(result.minimizer) + '\n';
  } else {
    report = io::distance_to_json(result) + '\n';
  }
  emit(flags, report, out);
  switch (result.status) {
    case DistanceStatus::exact_closed_form:
    case DistanceStatus::solver_converged:
      return kOk;
    case DistanceStatus::best_upper_bound:
      return kUpperBoundOnly;
    case DistanceStatus::infinite:
      return kInfinite;
  }
  return kSoftware;
}

struct GeodesicArgs {
  std::string base = "";
  std::string tangent;
  double t0 = 0.0;
  double t1 = 1.0;
  std::size_t samples = 101;
  bool verify = false;
};

int cmd_geodesic(const CommonFlags& flags, const GeodesicArgs& args, std::ostream& out) {
  const SquareMat tangent = matrix_arg(args.tangent);
  const SquareMat base =
      args.base.empty() ? SquareMat::identity(tangent.dim()) : matrix_arg(args.base);
  const GeodesicSpec spec(base, tangent, flags.params());
  if (!(args.t1 > args.t0)) {
    throw Error(ErrorKind::invalid_argument, "--t1 must be greater than --t0");
  }
  const DiscreteCurve curve = sample_geodesic(spec, args.t0, args.t1, args.samples);

  std::vector<ConservedQuantities> conserved;
  if (args.verify) {
    for (double t : curve.times()) {
      conserved.push_back(conserved_quantities(spec.params(), geodesic_tangent(spec, t)));
    }
  }

  std::string report;
  if (flags.csv()) {
    report = "t" + csv_matrix_header("x", curve.dim());
    if (args.verify) report += ",norm,trace,det,trcof";
    report += '\n';
    for (std::size_t i = 0; i < curve.size(); ++i) {
      report += io::format_double(curve.times()[i]) + csv_matrix_entries(curve.points()[i]);
      if (args.verify) {
        const auto& q = conserved[i];
        report += ',' + io::format_double(q.norm) + ',' + io::format_double(q.trace) + ',' +
                  io::format_double(q.determinant) + ',' + io::format_double(q.trace_cofactor);
      }
      report += '\n';
    }
  } else {
    report = io::curve_to_json(curve);
    if (args.verify) {
      report.pop_back();  // reopen the object
      report += ",\"conserved\":[";
      for (std::size_t i = 0; i < conserved.size(); ++i) {
        if (i > 0) report += ',';
        report += conserved_json(conserved[i]);
      }
      report += "]}";
    }
    report += '\n';
  }
  return emit(flags, report, out);
}

// Relative drift scale of each conserved quantity: its homogeneous degree in U.
double drift(double value, double reference, double norm_u, double degree) {
  const double scale = std::max(std::abs(reference), std::pow(norm_u, degree));
  const double diff = std::abs(value - reference);
  return scale > 0.0 ? diff / scale : diff;
}

int cmd_verify(const CommonFlags& flags, const std::string& curve_arg, double threshold,
               std::ostream& out) {
  const DiscreteCurve curve = io::parse_curve(resolve_literal(curve_arg));
  const MetricParams params = flags.params();
  const double residual = geodesic_residual(curve, params);

  const auto& x = curve.points();
  const auto& t = curve.times();
  const double h = (t.back() - t.front()) / static_cast<double>(curve.size() - 1);
  const double n = static_cast<double>(curve.dim());
  std::optional<ConservedQuantities> reference;
  double ref_norm = 0.0;
  ConservedQuantities worst{0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 1; i + 1 < x.size(); ++i) {
    const SquareMat u = inverse(x[i]) * ((x[i + 1] - x[i - 1]) / (2.0 * h));
    const ConservedQuantities q = conserved_quantities(params, u);
    if (!reference) {
      reference = q;
      ref_norm = u.frobenius_norm();
      continue;
    }
    worst.norm = std::max(worst.norm, drift(q.norm, reference->norm, ref_norm, 1.0));
    worst.trace = std::max(worst.trace, drift(q.trace, reference->trace, ref_norm, 1.0));
    worst.determinant =
        std::max(worst.determinant, drift(q.determinant, reference->determinant, ref_norm, n));
    worst.trace_cofactor = std::max(
        worst.trace_cofactor, drift(q.trace_cofactor, reference->trace_cofactor, ref_norm, n - 1.0));
  }

  const bool ok = residual <= threshold;
  std::string report;
  if (flags.csv()) {
    report = "residual,threshold,geodesic,drift_norm,drift_trace,drift_det,drift_trcof\n" +
             io::format_double(residual) + ',' + io::format_double(threshold) + ',' +
             (ok ? "true" : "false") + ',' + io::format_double(worst.norm) + ',' +
             io::format_double(worst.trace) + ',' + io::format_double(worst.determinant) + ',' +
             io::format_double(worst.trace_cofactor) + '\n';
  } else {
    report = "{\"residual\":" + io::json_number(residual) +
             ",\"threshold\":" + io::json_number(threshold) +
             ",\"geodesic\":" + (ok ? "true" : "false") +
             ",\"samples\":" + std::to_string(curve.size()) +
             ",\"conserved_drift\":" + conserved_json(worst) + "}\n";
  }
  emit(flags, report, out);
  return ok ? kOk : kUpperBoundOnly;
}

int cmd_hencky(const CommonFlags& flags, const std::string& f_arg, std::ostream& out) {
  const SquareMat f = matrix_arg(f_arg);
  const double distance = dist_to_SOn(f, flags.mu, flags.kappa);
  const PolarDecomposition polar = polar_decompose(f);
  const SquareMat log_u = log_psym(polar.stretch);
  std::string report;
  if (flags.csv()) {
    const std::size_t n = f.dim();
    report = "distance" + csv_matrix_header("r", n) + csv_matrix_header("u", n) +
             csv_matrix_header("l", n) + '\n' + io::format_double(distance) +
             csv_matrix_entries(polar.rotation) + csv_matrix_entries(polar.stretch) +
             csv_matrix_entries(log_u) + '\n';
  } else {
    report = "{\"distance\":" + io::json_number(distance) +
             ",\"rotation\":" + io::matrix_to_json(polar.rotation) +
             ",\"stretch\":" + io::matrix_to_json(polar.stretch) +
             ",\"log_stretch\":" + io::matrix_to_json(log_u) + "}\n";
  }
  return emit(flags, report, out);
}

int cmd_matfun(const CommonFlags& flags, const std::string& function, const std::string& m_arg,
               std::ostream& out) {
  const SquareMat m = matrix_arg(m_arg);
  std::string report;
  if (function == "normal-log") {
    const MetricParams params = flags.params();
    const auto branches = normal_log(m, flags.max_winding);
    if (flags.csv()) {
      report = "frobenius_norm,iso_norm" + csv_matrix_header("l", m.dim()) + '\n';
      for (const auto& b : branches) {
        report += io::format_double(b.value.frobenius_norm()) + ',' +
                  io::format_double(iso_norm(params, b.value)) + csv_matrix_entries(b.value) +
                  '\n';
      }
    } else {
      report = "{\"branches\":[";
      for (std::size_t i = 0; i < branches.size(); ++i) {
        const auto& b = branches[i];
        if (i > 0) report += ',';
        report += "{\"value\":" + io::matrix_to_json(b.value) +
                  ",\"frobenius_norm\":" + io::json_number(b.value.frobenius_norm()) +
                  ",\"iso_norm\":" + io::json_number(iso_norm(params, b.value)) +
                  ",\"branch_index\":[";
        for (std::size_t k = 0; k < b.branch_index.size(); ++k) {
          if (k > 0) report += ',';
          report += std::to_string(b.branch_index[k]);
        }
        report += "]}";
      }
      report += "]}\n";
    }
    return emit(flags, report, out);
  }

  SquareMat result(m.dim());
  if (function == "exp") {
    result = mat_exp(m);
  } else if (function == "log") {
    result = log_psym(m);
  } else {
    result = sqrt_psym(m);
  }
  if (flags.csv()) {
    report = csv_matrix_header("y", m.dim()).substr(1) + '\n' +
             csv_matrix_entries(result).substr(1) + '\n';
  } else {
    report = "{\"result\":" + io::matrix_to_json(result) + "}\n";
  }
  return emit(flags, report, out);
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::parse:
    case ErrorKind::invalid_argument:
    case ErrorKind::dimension_mismatch:
      return kUsage;
    case ErrorKind::singular:
    case ErrorKind::domain:
      return kDataError;
    case ErrorKind::not_converged:
      return kSoftware;
  }
  return kSoftware;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Geodesic distances on GL+(n) under left-invariant, right-O(n)-invariant metrics",
               "glgeo"};
  app.require_subcommand(1);

  CommonFlags flags;

  std::string a_arg;
  std::string b_arg;
  auto* dist = app.add_subcommand("dist", "Geodesic distance between two matrices");
  dist->add_option("--a", a_arg, "Start matrix (JSON literal or @file)")->required();
  dist->add_option("--b", b_arg, "End matrix (JSON literal or @file)")->required();
  add_common_flags(dist, flags);

  GeodesicArgs geo;
  auto* geodesic = app.add_subcommand("geodesic", "Sample the closed-form geodesic X(t)");
  geodesic->add_option("--base", geo.base, "Base point A (default: identity)");
  geodesic->add_option("--tangent", geo.tangent, "Initial tangent M in identity coordinates")
      ->required();
  geodesic->add_option("--t0", geo.t0, "First sample time")->capture_default_str();
  geodesic->add_option("--t1", geo.t1, "Last sample time")->capture_default_str();
  geodesic->add_option("--samples", geo.samples, "Number of samples (>= 2)")
      ->check(CLI::Range(std::size_t{2}, std::size_t{100000000}))
      ->capture_default_str();
  geodesic->add_flag("--verify", geo.verify, "Append conserved quantities per sample");
  add_common_flags(geodesic, flags);

  std::string curve_arg;
  double threshold = 1e-4;
  auto* verify = app.add_subcommand("verify", "Check a sampled curve against the geodesic equation");
  verify->add_option("--curve", curve_arg, "Curve JSON (inline or @file)")->required();
  verify->add_option("--threshold", threshold, "Largest residual accepted as geodesic")
      ->capture_default_str();
  add_common_flags(verify, flags);

  std::string f_arg;
  auto* hencky = app.add_subcommand("hencky", "Distance to SO(n) with polar factors");
  hencky->add_option("--f", f_arg, "Deformation gradient F (det F > 0)")->required();
  add_common_flags(hencky, flags);

  std::string function;
  std::string m_arg;
  auto* matfun = app.add_subcommand("matfun", "Matrix exponential, logarithm and square root");
  matfun->add_option("function", function, "exp | log | sqrt | normal-log")
      ->required()
      ->check(CLI::IsMember({"exp", "log", "sqrt", "normal-log"}));
  matfun->add_option("--m", m_arg, "Input matrix")->required();
  add_common_flags(matfun, flags);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "glgeo: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (dist->parsed()) return cmd_dist(flags, a_arg, b_arg, out);
    if (geodesic->parsed()) return cmd_geodesic(flags, geo, out);
    if (verify->parsed()) return cmd_verify(flags, curve_arg, threshold, out);
    if (hencky->parsed()) return cmd_hencky(flags, f_arg, out);
    if (matfun->parsed()) return cmd_matfun(flags, function, m_arg, out);
  } catch (const Error& e) {
    err << "glgeo: " << e.what() << '\n';
    return exit_code_for(e.kind());
  }
  return kUsage;
}

}  // namespace glgeo::cli
