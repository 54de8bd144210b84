// Local interpolation experiments: seeded random centers, circle-max errors of
// the Taylor-matched GPW combination, h-sweeps and order fits, written as
// whitespace-separated tables with a JSON sidecar.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <nlohmann/json.hpp>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "gpw/interpolation.hpp"
#include "gpw/test_cases.hpp"

namespace gpw {

enum class FamilyKind { amplitude, phase };

inline const char* to_string(FamilyKind f) { return f == FamilyKind::amplitude ? "amplitude" : "phase"; }

inline FamilyKind family_from_string(const std::string& s) {
  if (s == "amplitude") return FamilyKind::amplitude;
  if (s == "phase") return FamilyKind::phase;
  throw Error("unknown family '" + s + "' (expected amplitude or phase)");
}

inline constexpr double kCutoffThreshold = 1e-3;
inline constexpr int kMaxConsecutiveRejections = 1000;
inline constexpr double kFitLow = 1e-12;
inline constexpr double kFitHigh = 1e-2;
inline constexpr double kSaturationFactor = 10.0;
inline constexpr double kMatchTolerance = 1e-8;

/// h = 10^(-k/2) for k = kmin..kmax (decreasing).
inline std::vector<double> half_decade_grid(int kmin, int kmax) {
  std::vector<double> h;
  for (int k = kmin; k <= kmax; ++k) h.push_back(std::pow(10.0, -0.5 * k));
  return h;
}

struct SweepConfig {
  std::string case_label = "ey";
  std::vector<int> n_values{1, 2, 3, 4};
  int num_centers = 50;
  std::vector<double> h_values = half_decade_grid(0, 12);
  int circle_samples = 64;
  std::uint64_t seed = 1;
  double angle_offset = kDefaultAngleOffset;
  Normalization normalization = Normalization::general;
  std::vector<FamilyKind> families{FamilyKind::amplitude};
  // 0 picks std::thread::hardware_concurrency()
  unsigned threads = 0;

  void validate() const {
    if (num_centers < 1) throw Error("num_centers must be at least 1");
    if (h_values.empty()) throw Error("h_values must be nonempty");
    for (std::size_t i = 0; i < h_values.size(); ++i) {
      if (!(h_values[i] > 0)) throw Error("h_values must be positive");
      if (i > 0 && !(h_values[i] < h_values[i - 1])) throw Error("h_values must be strictly decreasing");
    }
    if (circle_samples < 8) throw Error("circle_samples must be at least 8");
    if (n_values.empty()) throw Error("n_values must be nonempty");
    for (int n : n_values)
      if (n < 1) throw Error("n must be a positive integer");
    if (families.empty()) throw Error("at least one family is required");
  }
};

struct SeriesResult {
  int n = 0;
  FamilyKind family = FamilyKind::amplitude;
  std::vector<double> worst_error;           // per h
  std::vector<double> worst_gradient_error;  // per h
  std::optional<double> order;
  std::optional<double> gradient_order;
  std::vector<double> condition_numbers;  // per successfully matched center
  int match_failures = 0;

  double error_floor() const { return *std::min_element(worst_error.begin(), worst_error.end()); }
};

struct ConvergenceReport {
  SweepConfig config;
  std::vector<Point> centers;
  std::size_t rejections = 0;
  std::vector<SeriesResult> series;

  const SeriesResult& find(int n, FamilyKind f) const {
    for (const auto& s : series)
      if (s.n == n && s.family == f) return s;
    throw Error("no series for n=" + std::to_string(n) + " family " + to_string(f));
  }
};

/// Uniform double in [0, 1) from the top 53 bits; portable across standard
/// libraries, unlike std::uniform_real_distribution.
inline double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Uniform i.i.d. centers in the case domain, redrawing candidates with
/// |s(center)| < threshold.
inline std::vector<Point> sample_centers(const TestCase& tc, int num, std::uint64_t seed,
                                         std::size_t* rejections = nullptr, double threshold = kCutoffThreshold) {
  std::mt19937_64 rng(seed);
  std::vector<Point> out;
  std::size_t rejected = 0;
  const auto& d = tc.domain;
  while (static_cast<int>(out.size()) < num) {
    int streak = 0;
    for (;;) {
      const double x = d.xmin + (d.xmax - d.xmin) * unit_uniform(rng);
      const double y = d.ymin + (d.ymax - d.ymin) * unit_uniform(rng);
      if (std::abs(tc.op.s.value_at({x, y})) >= threshold) {
        out.push_back({x, y});
        break;
      }
      ++rejected;
      if (++streak > kMaxConsecutiveRejections) throw Error("domain dominated by cut-off");
    }
  }
  if (rejections) *rejections = rejected;
  return out;
}

struct FieldValue {
  cplx value;
  CplxPair gradient;
};

struct CircleError {
  double value_error = 0.0;
  double gradient_error = 0.0;
};

inline double gradient_distance(const CplxPair& a, const CplxPair& b) {
  return std::hypot(std::abs(a.x - b.x), std::abs(a.y - b.y));
}

// Overflowed or undefined samples count as an infinite error.
inline double finite_or_inf(double v) { return std::isfinite(v) ? v : std::numeric_limits<double>::infinity(); }

inline Point circle_point(Point c, double h, int m, int samples) {
  const double phi = 2.0 * std::numbers::pi * m / samples;
  return {c.x + h * std::cos(phi), c.y + h * std::sin(phi)};
}

/// Max of |u - ua| and |grad u - grad ua| over `samples` equispaced points on
/// the circle of radius h about `center`.
template <typename Exact, typename Approx>
CircleError circle_error(const Exact& u_exact, const Approx& u_approx, Point center, double h, int samples) {
  if (samples < 8) throw Error("circle_samples must be at least 8");
  CircleError e;
  for (int m = 0; m < samples; ++m) {
    const Point pt = circle_point(center, h, m, samples);
    const FieldValue a = u_exact(pt), b = u_approx(pt);
    e.value_error = std::max(e.value_error, finite_or_inf(std::abs(a.value - b.value)));
    e.gradient_error = std::max(e.gradient_error, finite_or_inf(gradient_distance(a.gradient, b.gradient)));
  }
  return e;
}

/// Least-squares slope of log(err) against log(h) over points with err in
/// [lo, hi] and at least `saturation` times the smallest error of the series
/// (a plateau can sit inside the window when a center is badly conditioned);
/// empty when fewer than 3 points survive ("saturated").
inline std::optional<double> fit_order(const std::vector<double>& h, const std::vector<double>& err,
                                       double lo = kFitLow, double hi = kFitHigh,
                                       double saturation = kSaturationFactor) {
  double floor = std::numeric_limits<double>::infinity();
  for (double e : err)
    if (e > 0) floor = std::min(floor, e);
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < h.size() && i < err.size(); ++i)
    if (err[i] >= lo && err[i] <= hi && err[i] >= saturation * floor) {
      lx.push_back(std::log(h[i]));
      ly.push_back(std::log(err[i]));
    }
  if (lx.size() < 3) return std::nullopt;
  const double m = static_cast<double>(lx.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  const double denom = m * sxx - sx * sx;
  if (denom == 0.0) return std::nullopt;
  return (m * sxy - sx * sy) / denom;
}

namespace detail {

// Matched combination sum_k X_k G_k with value and gradient.
template <typename Gpw>
FieldValue combination_at(const std::vector<Gpw>& fam, const CVector& X, Point pt) {
  FieldValue f{0.0, {0.0, 0.0}};
  for (std::size_t k = 0; k < fam.size(); ++k) {
    const cplx x = X(static_cast<Eigen::Index>(k));
    const CplxPair g = fam[k].gradient(pt);
    f.value += x * fam[k].evaluate(pt);
    f.gradient.x += x * g.x;
    f.gradient.y += x * g.y;
  }
  return f;
}

struct CenterSeries {
  bool matched = false;
  double condition = 0.0;
  std::vector<CircleError> errors;  // per h
};

template <typename Gpw>
CenterSeries center_series(const TestCase& tc, Point c, int n, const std::vector<Gpw>& fam,
                           const std::vector<std::vector<FieldValue>>& exact, const SweepConfig& cfg) {
  CenterSeries out;
  const TaylorMatrix MG = family_matrix(fam, n);
  const TaylorPoly2 jet = tc.exact_taylor(c, n);
  const MatchResult match = match_solution(MG, {jet.coeffs().begin(), jet.coeffs().end()}, kMatchTolerance);
  out.condition = condition_number(MG);
  if (!match.ok) return out;
  out.matched = true;
  for (std::size_t ih = 0; ih < cfg.h_values.size(); ++ih) {
    CircleError e;
    for (int m = 0; m < cfg.circle_samples; ++m) {
      const FieldValue a = exact[ih][static_cast<std::size_t>(m)];
      const FieldValue b = combination_at(fam, match.coefficients, circle_point(c, cfg.h_values[ih], m, cfg.circle_samples));
      e.value_error = std::max(e.value_error, finite_or_inf(std::abs(a.value - b.value)));
      e.gradient_error = std::max(e.gradient_error, finite_or_inf(gradient_distance(a.gradient, b.gradient)));
    }
    out.errors.push_back(e);
  }
  return out;
}

// All (n, family) series at one center, in the report's series order.
inline std::vector<CenterSeries> run_center(const TestCase& tc, Point c, const SweepConfig& cfg) {
  std::vector<std::vector<FieldValue>> exact(cfg.h_values.size());
  for (std::size_t ih = 0; ih < cfg.h_values.size(); ++ih)
    for (int m = 0; m < cfg.circle_samples; ++m) {
      const Point pt = circle_point(c, cfg.h_values[ih], m, cfg.circle_samples);
      exact[ih].push_back({tc.exact_value(pt), tc.exact_gradient(pt)});
    }
  std::vector<CenterSeries> out;
  for (int n : cfg.n_values) {
    const int p = 2 * n + 1, q = std::max(n - 1, 1);
    for (FamilyKind f : cfg.families) {
      if (f == FamilyKind::amplitude)
        out.push_back(center_series(tc, c, n, gpw_family(tc.op, c, p, q, cfg.angle_offset, cfg.normalization), exact, cfg));
      else
        out.push_back(
            center_series(tc, c, n, phase_gpw_family(tc.op, c, p, q, cfg.angle_offset, cfg.normalization), exact, cfg));
    }
  }
  return out;
}

}  // namespace detail

/// Worst-over-centers circle errors per (n, family) and h, with order fits.
inline ConvergenceReport run_convergence(const SweepConfig& cfg) {
  cfg.validate();
  const TestCase tc = find_test_case(cfg.case_label);
  ConvergenceReport rep;
  rep.config = cfg;
  rep.centers = sample_centers(tc, cfg.num_centers, cfg.seed, &rep.rejections);

  const std::size_t nc = rep.centers.size();
  std::vector<std::vector<detail::CenterSeries>> per_center(nc);
  unsigned workers = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(nc));
  std::vector<std::thread> pool;
  std::vector<std::string> failures(workers);
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < nc; i += workers) per_center[i] = detail::run_center(tc, rep.centers[i], cfg);
      } catch (const std::exception& e) {
        failures[w] = e.what();
      }
    });
  for (auto& t : pool) t.join();
  for (const auto& f : failures)
    if (!f.empty()) throw Error(f);

  const std::size_t nh = cfg.h_values.size();
  std::size_t slot = 0;
  for (int n : cfg.n_values)
    for (FamilyKind f : cfg.families) {
      SeriesResult s;
      s.n = n;
      s.family = f;
      s.worst_error.assign(nh, 0.0);
      s.worst_gradient_error.assign(nh, 0.0);
      for (std::size_t i = 0; i < nc; ++i) {
        const auto& cs = per_center[i][slot];
        if (!cs.matched) {
          ++s.match_failures;
          continue;
        }
        s.condition_numbers.push_back(cs.condition);
        for (std::size_t ih = 0; ih < nh; ++ih) {
          s.worst_error[ih] = std::max(s.worst_error[ih], cs.errors[ih].value_error);
          s.worst_gradient_error[ih] = std::max(s.worst_gradient_error[ih], cs.errors[ih].gradient_error);
        }
      }
      if (s.match_failures == static_cast<int>(nc)) {
        s.worst_error.assign(nh, std::numeric_limits<double>::infinity());
        s.worst_gradient_error.assign(nh, std::numeric_limits<double>::infinity());
      }
      s.order = fit_order(cfg.h_values, s.worst_error);
      s.gradient_order = fit_order(cfg.h_values, s.worst_gradient_error);
      rep.series.push_back(std::move(s));
      ++slot;
    }
  return rep;
}

/// Number of h steps inside the fit window where the error grows as h shrinks.
inline int monotonicity_violations(const std::vector<double>& err) {
  int v = 0;
  for (std::size_t i = 1; i < err.size(); ++i)
    if (err[i] >= kFitLow && err[i - 1] <= kFitHigh && err[i] > err[i - 1]) ++v;
  return v;
}

inline double quantile(std::vector<double> v, double t) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const double pos = t * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

inline std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

inline std::string series_column_name(const SeriesResult& s) {
  return std::string(s.family == FamilyKind::amplitude ? "errAn" : "errPn") + std::to_string(s.n);
}

/// Data table: header `h errAn1 ... errPn1 ...`, one row per h.
inline std::string report_table(const ConvergenceReport& rep) {
  std::vector<const SeriesResult*> cols;
  for (FamilyKind f : {FamilyKind::amplitude, FamilyKind::phase})
    for (const auto& s : rep.series)
      if (s.family == f) cols.push_back(&s);
  std::ostringstream os;
  os << "h";
  for (const auto* s : cols) os << ' ' << series_column_name(*s);
  os << '\n';
  for (std::size_t ih = 0; ih < rep.config.h_values.size(); ++ih) {
    os << format_double(rep.config.h_values[ih]);
    for (const auto* s : cols) os << ' ' << format_double(s->worst_error[ih]);
    os << '\n';
  }
  return os.str();
}

inline nlohmann::json json_number(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? nlohmann::json("nan") : nlohmann::json(v > 0 ? "inf" : "-inf");
}

inline nlohmann::json report_metadata(const ConvergenceReport& rep) {
  const auto& c = rep.config;
  nlohmann::json meta;
  meta["seed"] = c.seed;
  nlohmann::json config;
  config["case"] = c.case_label;
  config["n_values"] = c.n_values;
  config["num_centers"] = c.num_centers;
  config["h_values"] = c.h_values;
  config["circle_samples"] = c.circle_samples;
  config["angle_offset"] = c.angle_offset;
  config["normalization"] = to_string(c.normalization);
  std::vector<std::string> fams;
  for (auto f : c.families) fams.push_back(to_string(f));
  config["families"] = fams;
  meta["config"] = config;
  meta["center_sampling"] = {{"distribution", "uniform on the domain rectangle (mt19937_64, top 53 bits)"},
                             {"rejection", "redraw when |s(center)| < " + format_double(kCutoffThreshold)},
                             {"rejections", rep.rejections}};
  meta["fit_window"] = {{"low", kFitLow}, {"high", kFitHigh}, {"saturation_factor", kSaturationFactor}};
  nlohmann::json series = nlohmann::json::array();
  for (const auto& s : rep.series) {
    nlohmann::json j;
    j["column"] = series_column_name(s);
    j["n"] = s.n;
    j["family"] = to_string(s.family);
    j["order"] = s.order ? nlohmann::json(*s.order) : nlohmann::json("saturated");
    j["gradient_order"] = s.gradient_order ? nlohmann::json(*s.gradient_order) : nlohmann::json("saturated");
    j["error_floor"] = json_number(s.error_floor());
    j["match_failures"] = s.match_failures;
    j["monotonicity_warnings"] = monotonicity_violations(s.worst_error);
    j["condition_number_quantiles"] = {{"min", json_number(quantile(s.condition_numbers, 0.0))},
                                       {"median", json_number(quantile(s.condition_numbers, 0.5))},
                                       {"p90", json_number(quantile(s.condition_numbers, 0.9))},
                                       {"max", json_number(quantile(s.condition_numbers, 1.0))}};
    std::vector<nlohmann::json> grad;
    for (double g : s.worst_gradient_error) grad.push_back(json_number(g));
    j["worst_gradient_error"] = grad;
    series.push_back(j);
  }
  meta["series"] = series;
  return meta;
}

inline void write_atomically(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << content;
    out.flush();
    if (!out) throw Error("cannot write '" + path.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error("cannot write '" + path.string() + "'");
  }
}

inline std::filesystem::path metadata_path(const std::filesystem::path& data_path) {
  std::filesystem::path m = data_path;
  m.replace_extension(".meta.json");
  return m;
}

/// Writes the data table to `path` and the metadata to `<stem>.meta.json`.
inline void write_report(const ConvergenceReport& rep, const std::filesystem::path& path) {
  write_atomically(path, report_table(rep));
  write_atomically(metadata_path(path), report_metadata(rep).dump(2) + "\n");
}

}  // namespace gpw
