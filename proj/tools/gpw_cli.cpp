// Command-line driver: construct, certify, rank, convergence, compare, list-cases.

#include <CLI11.hpp>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "gpw/experiments.hpp"

using namespace gpw;

namespace {

constexpr int kExitError = 2;

std::string num(double v) { return format_double(v + 0.0); }

Point parse_point(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw Error("expected a point as X,Y, got '" + s + "'");
  try {
    std::size_t used = 0;
    const std::string xs = s.substr(0, comma), ys = s.substr(comma + 1);
    const double x = std::stod(xs, &used);
    if (used != xs.size()) throw std::invalid_argument(xs);
    const double y = std::stod(ys, &used);
    if (used != ys.size()) throw std::invalid_argument(ys);
    return {x, y};
  } catch (const std::logic_error&) {
    throw Error("expected a point as X,Y, got '" + s + "'");
  }
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

using ConfigLines = std::vector<std::pair<std::string, std::string>>;

void echo(std::ostream& out, const std::string& command, const ConfigLines& lines) {
  out << "# command: " << command << '\n';
  for (const auto& [k, v] : lines) out << "# " << k << ": " << v << '\n';
}

const TestCase& case_in_domain(const TestCase& tc, Point c) {
  if (!tc.domain.contains(c))
    throw Error("center " + num(c.x) + "," + num(c.y) + " outside the domain of case " + tc.label);
  return tc;
}

void print_complex(std::ostream& out, cplx z) { out << num(z.real()) << ' ' << num(z.imag()); }

void print_coefficients(std::ostream& out, const TaylorPoly2& p) {
  out << "# rows: ix iy re im\n";
  for (int ell = 0; ell <= p.degree(); ++ell)
    for (int ix = ell; ix >= 0; --ix) {
      const cplx v = p(ix, ell - ix);
      if (v == cplx(0.0)) continue;
      out << ix << ' ' << ell - ix << ' ';
      print_complex(out, v);
      out << '\n';
    }
}

struct ConstructArgs {
  std::string label, center, family = "amplitude", normalization = "general";
  double theta = 0.0;
  int q = 3;
};

int run_construct(const ConstructArgs& a, std::ostream& out) {
  echo(out, "construct",
       {{"case", a.label}, {"center", a.center}, {"theta", num(a.theta)}, {"q", std::to_string(a.q)},
        {"family", a.family}, {"normalization", a.normalization}});
  const TestCase tc = find_test_case(a.label);
  const Point c = parse_point(a.center);
  case_in_domain(tc, c);
  const auto mode = normalization_from_string(a.normalization);
  const Direction d = normalize_direction(tc.op, c, a.theta, mode);
  out << "direction ";
  print_complex(out, d.lambda10);
  out << ' ';
  print_complex(out, d.lambda01);
  out << '\n';
  if (family_from_string(a.family) == FamilyKind::amplitude) {
    const auto g = construct_amplitude_gpw(tc.op, c, d, a.q);
    print_coefficients(out, g.Q);
    out << "certificate " << num(certificate_residual(tc.op, g)) << '\n';
  } else {
    const auto g = construct_phase_gpw(tc.op, c, d, a.q);
    print_coefficients(out, g.P);
    out << "certificate " << num(certificate_residual(tc.op, g)) << '\n';
  }
  return 0;
}

struct CertifyArgs {
  std::string label, center, family = "amplitude", normalization = "general";
  int q = 3, p = 0;
  double offset = kDefaultAngleOffset, tol = 1e-9;
};

int run_certify(const CertifyArgs& a, std::ostream& out) {
  const int p = a.p > 0 ? a.p : 2 * a.q + 3;
  echo(out, "certify",
       {{"case", a.label}, {"center", a.center}, {"q", std::to_string(a.q)}, {"p", std::to_string(p)},
        {"family", a.family}, {"normalization", a.normalization}, {"offset", num(a.offset)}, {"tol", num(a.tol)}});
  const TestCase tc = find_test_case(a.label);
  const Point c = parse_point(a.center);
  case_in_domain(tc, c);
  const auto mode = normalization_from_string(a.normalization);
  const auto fam_kind = family_from_string(a.family);
  const auto angles = angle_set(p, a.offset);
  double worst = 0, worst_rel = 0;
  out << "# rows: member theta residual relative\n";
  for (int k = 0; k < p; ++k) {
    const Direction d = normalize_direction(tc.op, c, angles[k], mode);
    double r = 0, scale = 1;
    if (fam_kind == FamilyKind::amplitude) {
      const auto g = construct_amplitude_gpw(tc.op, c, d, a.q);
      r = certificate_residual(tc.op, g);
      scale = certificate_scale(g);
    } else {
      const auto g = construct_phase_gpw(tc.op, c, d, a.q);
      r = certificate_residual(tc.op, g);
      scale = certificate_scale(g);
    }
    worst = std::max(worst, r);
    worst_rel = std::max(worst_rel, r / scale);
    out << k << ' ' << num(angles[k]) << ' ' << num(r) << ' ' << num(r / scale) << '\n';
  }
  out << "max_residual " << num(worst) << '\n';
  out << "max_relative " << num(worst_rel) << '\n';
  out << "certified " << (worst_rel <= a.tol ? "yes" : "no") << '\n';
  return 0;
}

struct RankArgs {
  std::string label, center, normalization = "general";
  int n = 3, p = 0;
  double offset = kDefaultAngleOffset, tol = kDefaultRankTolerance;
};

int run_rank(const RankArgs& a, std::ostream& out) {
  const int p = a.p > 0 ? a.p : 2 * a.n + 1;
  echo(out, "rank",
       {{"case", a.label}, {"center", a.center}, {"n", std::to_string(a.n)}, {"p", std::to_string(p)},
        {"q", std::to_string(std::max(a.n - 1, 1))}, {"normalization", a.normalization}, {"offset", num(a.offset)},
        {"tol", num(a.tol)}});
  const TestCase tc = find_test_case(a.label);
  const Point c = parse_point(a.center);
  case_in_domain(tc, c);
  const auto mode = normalization_from_string(a.normalization);
  const auto MG = family_matrix(gpw_family(tc.op, c, p, std::max(a.n - 1, 1), a.offset, mode), a.n);
  const auto MC = classical_pw_matrix(tc.op, c, p, a.n, a.offset);
  out << "MG rank " << numerical_rank(MG, a.tol) << " cond " << num(condition_number(MG)) << '\n';
  out << "MC rank " << numerical_rank(MC, a.tol) << " cond " << num(condition_number(MC)) << '\n';
  out << "expected " << std::min(2 * a.n + 1, p) << '\n';
  return 0;
}

struct SweepArgs {
  std::string label, out_path, families, normalization = "general";
  int nmin = 1, nmax = 0, centers = 50, samples = 64, kmin = 0, kmax = 12;
  std::uint64_t seed = 1;
  double offset = kDefaultAngleOffset;
  unsigned threads = 0;
};

SweepConfig sweep_config(const SweepArgs& a) {
  if (a.nmax < a.nmin) throw Error("nmax must be at least nmin");
  if (a.kmax < a.kmin) throw Error("kmax must be at least kmin");
  SweepConfig c;
  c.case_label = a.label;
  c.n_values.clear();
  for (int n = a.nmin; n <= a.nmax; ++n) c.n_values.push_back(n);
  c.num_centers = a.centers;
  c.h_values = half_decade_grid(a.kmin, a.kmax);
  c.circle_samples = a.samples;
  c.seed = a.seed;
  c.angle_offset = a.offset;
  c.normalization = normalization_from_string(a.normalization);
  c.families.clear();
  for (const auto& f : split_list(a.families)) c.families.push_back(family_from_string(f));
  c.threads = a.threads;
  return c;
}

ConfigLines sweep_lines(const SweepArgs& a, const std::string& out_path) {
  return {{"case", a.label},
          {"n", std::to_string(a.nmin) + ".." + std::to_string(a.nmax)},
          {"centers", std::to_string(a.centers)},
          {"seed", std::to_string(a.seed)},
          {"families", a.families},
          {"normalization", a.normalization},
          {"offset", num(a.offset)},
          {"samples", std::to_string(a.samples)},
          {"h", "10^(-k/2), k=" + std::to_string(a.kmin) + ".." + std::to_string(a.kmax)},
          {"threads", a.threads ? std::to_string(a.threads) : std::string("auto")},
          {"out", out_path}};
}

std::string default_out(const SweepArgs& a, const char* suffix) {
  return a.out_path.empty() ? "gpw_" + a.label + suffix + ".dat" : a.out_path;
}

void print_orders(std::ostream& out, const ConvergenceReport& rep) {
  out << "# rows: column order gradient_order error_floor match_failures\n";
  for (const auto& s : rep.series)
    out << series_column_name(s) << ' ' << (s.order ? num(*s.order) : "saturated") << ' '
        << (s.gradient_order ? num(*s.gradient_order) : "saturated") << ' ' << num(s.error_floor()) << ' '
        << s.match_failures << '\n';
}

int run_convergence_cmd(const SweepArgs& a, std::ostream& out) {
  const std::string path = default_out(a, "");
  echo(out, "convergence", sweep_lines(a, path));
  const auto rep = run_convergence(sweep_config(a));
  write_report(rep, path);
  print_orders(out, rep);
  out << "wrote " << path << " and " << metadata_path(path).string() << '\n';
  return 0;
}

int run_compare(const SweepArgs& a, std::ostream& out) {
  const std::string path = default_out(a, "_compare");
  echo(out, "compare", sweep_lines(a, path));
  const SweepConfig cfg = sweep_config(a);
  const auto rep = run_convergence(cfg);
  write_report(rep, path);
  print_orders(out, rep);
  out << "# rows: n h amplitude phase amplitude<=phase\n";
  for (int n : cfg.n_values)
    for (std::size_t ih = 0; ih < cfg.h_values.size(); ++ih) {
      if (cfg.h_values[ih] < 1.0 - 1e-12) continue;
      const double ea = rep.find(n, FamilyKind::amplitude).worst_error[ih];
      const double ep = rep.find(n, FamilyKind::phase).worst_error[ih];
      out << n << ' ' << num(cfg.h_values[ih]) << ' ' << num(ea) << ' ' << num(ep) << ' ' << (ea <= ep ? "yes" : "no")
          << '\n';
    }
  out << "wrote " << path << " and " << metadata_path(path).string() << '\n';
  return 0;
}

int run_list(std::ostream& out) {
  echo(out, "list-cases", {});
  for (const auto& tc : builtin_test_cases()) out << tc.label << "  " << tc.description << '\n';
  return 0;
}

void add_sweep_options(CLI::App* sub, SweepArgs& a) {
  sub->add_option("--case", a.label, "test case label")->required();
  sub->add_option("--nmax", a.nmax, "largest interpolation order n")->required();
  sub->add_option("--nmin", a.nmin, "smallest n")->capture_default_str();
  sub->add_option("--centers", a.centers, "number of random centers")->capture_default_str();
  sub->add_option("--seed", a.seed, "random seed")->capture_default_str();
  sub->add_option("--out", a.out_path, "data file path (metadata goes next to it)");
  sub->add_option("--families", a.families, "comma-separated subset of amplitude,phase")->capture_default_str();
  sub->add_option("--normalization", a.normalization, "general or classical-pw")->capture_default_str();
  sub->add_option("--offset", a.offset, "angle offset in radians")->capture_default_str();
  sub->add_option("--samples", a.samples, "points per circle")->capture_default_str();
  sub->add_option("--kmin", a.kmin, "h grid starts at 10^(-kmin/2)")->capture_default_str();
  sub->add_option("--kmax", a.kmax, "h grid ends at 10^(-kmax/2)")->capture_default_str();
  sub->add_option("--threads", a.threads, "worker threads (0 = all cores)")->capture_default_str();
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Generalized plane wave construction and local interpolation experiments"};
  app.require_subcommand(1);

  ConstructArgs ca;
  auto* construct = app.add_subcommand("construct", "build one GPW and print its coefficients");
  construct->add_option("--case", ca.label, "test case label")->required();
  construct->add_option("--center", ca.center, "expansion point X,Y")->required();
  construct->add_option("--theta", ca.theta, "direction angle in radians")->capture_default_str();
  construct->add_option("--q", ca.q, "quasi-Trefftz order")->capture_default_str();
  construct->add_option("--family", ca.family, "amplitude or phase")->capture_default_str();
  construct->add_option("--normalization", ca.normalization, "general or classical-pw")->capture_default_str();

  CertifyArgs cfa;
  auto* certify = app.add_subcommand("certify", "residual certificate of a GPW family");
  certify->add_option("--case", cfa.label, "test case label")->required();
  certify->add_option("--center", cfa.center, "expansion point X,Y")->required();
  certify->add_option("--q", cfa.q, "quasi-Trefftz order")->capture_default_str();
  certify->add_option("--p", cfa.p, "family size (default 2q+3)");
  certify->add_option("--family", cfa.family, "amplitude or phase")->capture_default_str();
  certify->add_option("--normalization", cfa.normalization, "general or classical-pw")->capture_default_str();
  certify->add_option("--offset", cfa.offset, "angle offset in radians")->capture_default_str();
  certify->add_option("--tol", cfa.tol, "relative residual tolerance")->capture_default_str();

  RankArgs ra;
  auto* rank = app.add_subcommand("rank", "numerical rank and conditioning of M^G and M^C");
  rank->add_option("--case", ra.label, "test case label")->required();
  rank->add_option("--center", ra.center, "expansion point X,Y")->required();
  rank->add_option("--n", ra.n, "Taylor order")->capture_default_str();
  rank->add_option("--p", ra.p, "family size (default 2n+1)");
  rank->add_option("--normalization", ra.normalization, "general or classical-pw")->capture_default_str();
  rank->add_option("--offset", ra.offset, "angle offset in radians")->capture_default_str();
  rank->add_option("--tol", ra.tol, "relative singular value tolerance")->capture_default_str();

  SweepArgs conv_args;
  conv_args.families = "amplitude";
  auto* convergence = app.add_subcommand("convergence", "h-sweep of circle errors with order fits");
  add_sweep_options(convergence, conv_args);

  SweepArgs cmp_args;
  cmp_args.families = "amplitude,phase";
  cmp_args.kmin = -2;
  auto* compare = app.add_subcommand("compare", "amplitude versus phase GPWs including h up to 10");
  add_sweep_options(compare, cmp_args);

  auto* list = app.add_subcommand("list-cases", "print the built-in test cases");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitError;
  }

  try {
    if (construct->parsed()) return run_construct(ca, out);
    if (certify->parsed()) return run_certify(cfa, out);
    if (rank->parsed()) return run_rank(ra, out);
    if (convergence->parsed()) return run_convergence_cmd(conv_args, out);
    if (compare->parsed()) return run_compare(cmp_args, out);
    if (list->parsed()) return run_list(out);
  } catch (const std::exception& e) {
    out.flush();
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv, std::cout, std::cerr); }
