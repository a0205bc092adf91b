// Copyright 2026 The ns2d Authors
// SPDX-License-Identifier: Apache-2.0

#include "ns2d/toolkit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace ns2d {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double inverse(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

// Kernel moments on [a, b] (0 <= a < b) for s^(alpha-1):
//   lo = int (s - a) s^(alpha-1) ds,  hi = int (b - s) s^(alpha-1) ds.
// lo weights the node nearer t (s = b - h at tau_{j+1}).
struct Moments {
  double lo;
  double hi;
};

Moments kernel_moments(double a, double b, double alpha) {
  const double h = b - a;
  if (a > 10.0 * h) {
    // Binomial series in x = h/a; |x| < 0.1 so 24 terms reach roundoff.
    const double x = h / a;
    double coef = 1.0;
    double xp = 1.0;
    double m0 = 0.0;
    double m1 = 0.0;
    for (int m = 0; m < 24; ++m) {
      m0 += coef * xp / (m + 1);
      m1 += coef * xp / (m + 2);
      coef *= (alpha - 1.0 - m) / (m + 1);
      xp *= x;
    }
    const double base = std::pow(a, alpha - 1.0);
    const double j0 = base * h * m0;
    const double j1 = base * h * h * m1;
    return {std::max(j1, 0.0), std::max(h * j0 - j1, 0.0)};
  }
  const double pa = std::pow(a, alpha);
  const double pb = std::pow(b, alpha);
  const double j0 = (pb - pa) / alpha;
  const double k1 = (b * pb - a * pa) / (alpha + 1.0);
  // int s^alpha = k1; lo = k1 - a j0, hi = b j0 - k1
  return {std::max(k1 - a * j0, 0.0), std::max(b * j0 - k1, 0.0)};
}

double interval_contribution(double ga, double gb, double ta, double tb, double t, double alpha) {
  // g linear from ga at ta to gb at tb, with tb <= t.
  const double a = t - tb;
  const double b = t - ta;
  const double h = tb - ta;
  if (h <= 0.0) return 0.0;
  const Moments m = kernel_moments(a, b, alpha);
  // g(tau) = ga (tb - tau)/h + gb (tau - ta)/h; tb - tau = s - a, tau - ta = b - s.
  return (ga * m.lo + gb * m.hi) / h;
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ToolkitError("fractional integration: alpha must lie in (0, 1)");
}

}  // namespace

// --- SampledFunction -------------------------------------------------------

SampledFunction::SampledFunction(std::vector<double> t, std::vector<double> v) : times(std::move(t)), values(std::move(v)) {
  validate();
}

void SampledFunction::validate() const {
  if (times.size() != values.size()) throw ToolkitError("sampled function: times and values differ in length");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i]) || !std::isfinite(values[i])) {
      throw ToolkitError("sampled function: non-finite entry at index " + std::to_string(i));
    }
    if (i == 0 && times[i] < 0.0) throw ToolkitError("sampled function: negative first time");
    if (i > 0 && !(times[i] > times[i - 1])) {
      throw ToolkitError("sampled function: times not strictly increasing at index " + std::to_string(i));
    }
  }
}

double SampledFunction::operator()(double t) const {
  if (times.empty() || t < times.front() || t > times.back()) return 0.0;
  auto it = std::upper_bound(times.begin(), times.end(), t);
  if (it == times.end()) return values.back();
  const std::size_t j = static_cast<std::size_t>(it - times.begin());
  if (j == 0) return values.front();
  const double w = (t - times[j - 1]) / (times[j] - times[j - 1]);
  return values[j - 1] + w * (values[j] - values[j - 1]);
}

// --- power-law fit -----------------------------------------------------------

DecayFit powerlaw_fit(const std::vector<double>& times, const std::vector<double>& values, double t_min,
                      double t_max) {
  if (times.size() != values.size()) throw ToolkitError("powerlaw_fit: times and values differ in length");
  if (!(t_min > 0.0) || !(t_max > t_min)) throw ToolkitError("powerlaw_fit: window must satisfy 0 < t_min < t_max");
  std::vector<double> x;
  std::vector<double> y;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < t_min || times[i] > t_max) continue;
    if (!(values[i] > 0.0)) {
      throw ToolkitError("powerlaw_fit: nonpositive value at t = " + format_number(times[i]));
    }
    x.push_back(std::log(times[i]));
    y.push_back(std::log(values[i]));
  }
  if (x.size() < 8) throw ToolkitError("powerlaw_fit: fewer than 8 samples in window");
  const double count = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= count;
  my /= count;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  DecayFit fit;
  fit.exponent = sxy / sxx;
  const double intercept = my - fit.exponent * mx;
  fit.constant = std::exp(intercept);
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = y[i] - (intercept + fit.exponent * x[i]);
    ss += d * d;
  }
  fit.residual = std::sqrt(ss / count);
  fit.t_min = t_min;
  fit.t_max = t_max;
  fit.samples = x.size();
  fit.reliable = fit.residual <= DecayFit::kReliableResidual;
  return fit;
}

// --- HlsParams -------------------------------------------------------------

HlsParams HlsParams::from_alpha_r(double alpha, double r) {
  HlsParams p{alpha, r, 0.0};
  check_alpha(alpha);
  if (!(r > 1.0 && r < 1.0 / alpha)) throw ToolkitError("fractional integration: r must lie in (1, 1/alpha)");
  p.q = 1.0 / (1.0 / r - alpha);
  return p;
}

HlsParams HlsParams::for_lebesgue_exponent(double p) {
  if (!(p > 4.0)) throw ToolkitError("fractional integration: the perturbation instantiation needs p > 4");
  if (std::isinf(p)) return HlsParams{0.5, 1.0, 2.0};
  return HlsParams{(p - 4.0) / (2.0 * p), p / (p - 2.0), 2.0};
}

double HlsParams::relation_defect() const { return std::abs(inverse(q) - (inverse(r) - alpha)); }

void HlsParams::validate() const {
  check_alpha(alpha);
  if (!(r > 1.0 && r < 1.0 / alpha)) throw ToolkitError("fractional integration: r must lie in (1, 1/alpha)");
  if (relation_defect() > 1e-12) throw ToolkitError("fractional integration: exponent relation 1/q = 1/r - alpha violated");
}

// --- fractional integration --------------------------------------------------

double hls_evaluate(const SampledFunction& g, double alpha, double t) {
  check_alpha(alpha);
  const auto& ts = g.times;
  const auto& gs = g.values;
  if (ts.size() < 2 || t <= ts.front()) return 0.0;
  double sum = 0.0;
  for (std::size_t j = 0; j + 1 < ts.size(); ++j) {
    if (ts[j] >= t) break;
    if (ts[j + 1] <= t) {
      sum += interval_contribution(gs[j], gs[j + 1], ts[j], ts[j + 1], t, alpha);
    } else {
      const double gt = gs[j] + (t - ts[j]) / (ts[j + 1] - ts[j]) * (gs[j + 1] - gs[j]);
      sum += interval_contribution(gs[j], gt, ts[j], t, t, alpha);
    }
  }
  return sum;
}

SampledFunction hls_operator(const SampledFunction& g, double alpha) {
  check_alpha(alpha);
  g.validate();
  SampledFunction f;
  f.times = g.times;
  f.values.assign(g.size(), 0.0);
  for (std::size_t i = 1; i < g.size(); ++i) {
    double sum = 0.0;
    const double t = g.times[i];
    for (std::size_t j = 0; j < i; ++j) {
      sum += interval_contribution(g.values[j], g.values[j + 1], g.times[j], g.times[j + 1], t, alpha);
    }
    f.values[i] = sum;
  }
  return f;
}

double trapezoid(const std::vector<double>& times, const std::vector<double>& values) {
  double sum = 0.0;
  for (std::size_t i = 1; i < times.size(); ++i) {
    sum += 0.5 * (times[i] - times[i - 1]) * (values[i] + values[i - 1]);
  }
  return sum;
}

double time_lp_norm(const SampledFunction& g, double r) {
  if (std::isinf(r)) {
    double m = 0.0;
    for (double v : g.values) m = std::max(m, std::abs(v));
    return m;
  }
  std::vector<double> powered(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) powered[i] = std::pow(std::abs(g.values[i]), r);
  return std::pow(trapezoid(g.times, powered), 1.0 / r);
}

HlsRatio hls_ratio(const SampledFunction& g, double alpha, double r, double q) {
  check_alpha(alpha);
  if (!(q >= 1.0) || std::isinf(q)) throw ToolkitError("fractional integration: q must be finite and >= 1");
  g.validate();
  HlsRatio out;
  if (g.size() < 2) return out;
  const SampledFunction f = hls_operator(g, alpha);

  // Geometric extension beyond the support S, out to S + 1e8 S.
  const double support = g.times.back();
  const double span = support - g.times.front();
  std::vector<double> times = f.times;
  std::vector<double> values = f.values;
  constexpr int kPerDecade = 40;
  constexpr int kDecades = 16;
  for (int k = 0; k <= kPerDecade * kDecades; ++k) {
    const double delta = span * std::pow(10.0, -8.0 + static_cast<double>(k) / kPerDecade);
    times.push_back(support + delta);
    values.push_back(hls_evaluate(g, alpha, support + delta));
  }
  std::vector<double> powered(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) powered[i] = std::pow(std::abs(values[i]), q);
  const double body = trapezoid(times, powered);

  // |f(t)| <= ||g||_1 (t - S)^(alpha - 1) after the support.
  std::vector<double> absg(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) absg[i] = std::abs(g.values[i]);
  const double g1 = trapezoid(g.times, absg);
  const double x = times.back() - support;
  const double expo = (alpha - 1.0) * q + 1.0;
  out.f_tail = (expo < 0.0) ? std::pow(g1, q) * std::pow(x, expo) / (-expo) : kInf;

  out.f_norm = std::pow(body + out.f_tail, 1.0 / q);
  out.g_norm = time_lp_norm(g, r);
  out.ratio = out.g_norm > 0.0 ? out.f_norm / out.g_norm : 0.0;
  return out;
}

SampledFunction rescale(const SampledFunction& g, double lambda, double s) {
  SampledFunction out;
  out.times.reserve(g.size());
  out.values.reserve(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    out.times.push_back(s * g.times[i]);
    out.values.push_back(lambda * g.values[i]);
  }
  return out;
}

SampledFunction indicator_function(double width, double horizon, std::size_t nodes) {
  if (!(width > 0.0) || !(horizon > width) || nodes < 3) throw ToolkitError("indicator_function: bad arguments");
  SampledFunction g;
  const auto inside = std::max<std::size_t>(2, static_cast<std::size_t>(std::lround(nodes * width / horizon)));
  for (std::size_t i = 0; i < inside; ++i) {
    g.times.push_back(width * static_cast<double>(i) / static_cast<double>(inside - 1));
    g.values.push_back(1.0);
  }
  g.times.push_back(width + 1e-12);
  g.values.push_back(0.0);
  const std::size_t outside = nodes > inside ? nodes - inside : 1;
  for (std::size_t i = 1; i <= outside; ++i) {
    g.times.push_back(width + (horizon - width) * static_cast<double>(i) / static_cast<double>(outside));
    g.values.push_back(0.0);
  }
  g.validate();
  return g;
}

AuditReport hls_bound_audit(const std::vector<SampledFunction>& family, const HlsParams& params) {
  params.validate();
  if (family.empty()) throw ToolkitError("hls_bound_audit: empty family");
  AuditReport report;
  report.name = "hls_bound";
  report.params = {{"alpha", params.alpha}, {"r", params.r}, {"q", params.q}, {"family_size", family.size()}};

  double max_ratio = 0.0;
  double amplitude_drift = 0.0;
  double dilation_drift = 0.0;
  Json rows = Json::array();
  for (const auto& g : family) {
    const HlsRatio base = hls_ratio(g, params.alpha, params.r, params.q);
    if (base.g_norm == 0.0) continue;
    double row_max_drift = 0.0;
    for (double lambda : {0.5, 3.0}) {
      const HlsRatio scaled = hls_ratio(rescale(g, lambda, 1.0), params.alpha, params.r, params.q);
      amplitude_drift = std::max(amplitude_drift, std::abs(scaled.ratio / base.ratio - 1.0));
    }
    for (double s : {0.5, 2.0}) {
      const HlsRatio dilated = hls_ratio(rescale(g, 1.0, s), params.alpha, params.r, params.q);
      const double drift = std::abs(dilated.ratio / base.ratio - 1.0);
      row_max_drift = std::max(row_max_drift, drift);
    }
    dilation_drift = std::max(dilation_drift, row_max_drift);
    max_ratio = std::max(max_ratio, base.ratio);
    rows.push_back({{"ratio", base.ratio}, {"f_norm", base.f_norm}, {"g_norm", base.g_norm}, {"dilation_drift", row_max_drift}});
  }
  report.fitted_constant = max_ratio;
  report.details["members"] = std::move(rows);
  report.details["amplitude_drift"] = amplitude_drift;
  report.details["dilation_drift"] = dilation_drift;
  const bool ok = std::isfinite(max_ratio) && amplitude_drift <= 1e-12 && dilation_drift <= 1e-6;
  report.status = ok ? Status::pass : Status::fail;
  return report;
}

// --- interpolation inequality --------------------------------------------------

double gn_relation_defect(double p, double r, double q, double theta) {
  return std::abs(inverse(p) - (theta * (inverse(r) - 0.5) + (1.0 - theta) * inverse(q)));
}

namespace {

void check_gn(double p, double r, double q, double theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) throw ToolkitError("gn: theta must lie in [0, 1]");
  if (!(p >= 1.0) || !(r >= 1.0) || !(q >= 1.0)) throw ToolkitError("gn: exponents must be >= 1");
  if (gn_relation_defect(p, r, q, theta) > 1e-12) throw ToolkitError("gn: exponent relation violated");
  if (theta == 1.0 && std::isfinite(r) && r > 1.0) {
    const double m = 1.0 - 2.0 / r;
    if (m >= 0.0 && std::abs(m - std::round(m)) < 1e-12) throw ToolkitError("gn: excluded borderline tuple (theta = 1)");
  }
}

double field_norm(const SpectralVectorField& u, double p) { return std::isinf(p) ? norm_sup(u) : norm_lp(u, p); }

double gradient_norm(const SpectralVectorField& u, double r) {
  const SpectralTensorField g = gradient(u);
  return std::isinf(r) ? norm_sup(g) : norm_lp(g, r);
}

}  // namespace

double gn_ratio(const SpectralVectorField& u, double p, double r, double q, double theta) {
  check_gn(p, r, q, theta);
  const double lhs = field_norm(u, p);
  if (lhs == 0.0) return 0.0;
  const double grad = theta > 0.0 ? std::pow(gradient_norm(u, r), theta) : 1.0;
  const double low = theta < 1.0 ? std::pow(field_norm(u, q), 1.0 - theta) : 1.0;
  return lhs / (grad * low);
}

AuditReport gn_audit(const std::vector<SpectralVectorField>& family, double p, double r, double q, double theta) {
  check_gn(p, r, q, theta);
  if (family.empty()) throw ToolkitError("gn_audit: empty family");
  AuditReport report;
  report.name = "gagliardo_nirenberg";
  report.params = {{"p", p}, {"r", r}, {"q", q}, {"theta", theta}, {"family_size", family.size()}};
  double max_ratio = 0.0;
  double drift = 0.0;
  Json rows = Json::array();
  for (const auto& u : family) {
    if (std::abs(u.c1[0]) != 0.0 || std::abs(u.c2[0]) != 0.0) throw ToolkitError("gn_audit: field is not mean-zero");
    const double base = gn_ratio(u, p, r, q, theta);
    if (base == 0.0) continue;
    for (double lambda : {0.5, 3.0}) {
      drift = std::max(drift, std::abs(gn_ratio(lambda * u, p, r, q, theta) / base - 1.0));
    }
    max_ratio = std::max(max_ratio, base);
    rows.push_back({{"n", u.grid.n()}, {"ratio", base}});
  }
  report.fitted_constant = max_ratio;
  report.details["members"] = std::move(rows);
  report.details["amplitude_drift"] = drift;
  report.status = (std::isfinite(max_ratio) && drift <= 1e-12) ? Status::pass : Status::fail;
  return report;
}

// --- improper time integrals -------------------------------------------------

TimeIntegral time_integral_sq_sup(const SampledFunction& series, double tail_bound) {
  series.validate();
  if (!(tail_bound >= 0.0)) throw ToolkitError("time_integral_sq_sup: tail bound must be >= 0");
  std::vector<double> sq(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (series.values[i] < 0.0) throw ToolkitError("time_integral_sq_sup: negative sample");
    sq[i] = series.values[i] * series.values[i];
  }
  TimeIntegral out;
  out.truncated = trapezoid(series.times, sq);
  out.tail = tail_bound;
  out.value = out.truncated + out.tail;
  out.tail_fraction = out.value > 0.0 ? out.tail / out.value : 0.0;
  out.flagged = out.tail_fraction > TimeIntegral::kMaxTailFraction;
  return out;
}

// --- CSV -------------------------------------------------------------------

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(const std::filesystem::path& path, const SampledFunction& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ToolkitError("cannot write " + path.string());
  out << "t,value\n";
  for (std::size_t i = 0; i < f.size(); ++i) out << format_number(f.times[i]) << ',' << format_number(f.values[i]) << '\n';
}

SampledFunction read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ToolkitError("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "t,value") throw ToolkitError(path.string() + ": expected header t,value");
  SampledFunction f;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ToolkitError(path.string() + ":" + std::to_string(lineno) + ": missing comma");
    try {
      std::size_t used = 0;
      const double t = std::stod(line.substr(0, comma), &used);
      const double v = std::stod(line.substr(comma + 1));
      f.times.push_back(t);
      f.values.push_back(v);
    } catch (const std::exception&) {
      throw ToolkitError(path.string() + ":" + std::to_string(lineno) + ": malformed number");
    }
  }
  f.validate();
  return f;
}

void write_csv(const std::filesystem::path& path, const std::vector<NormSeries>& series) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ToolkitError("cannot write " + path.string());
  out << "t,norm_kind,value\n";
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.times.size(); ++i) {
      out << format_number(s.times[i]) << ',' << s.kind << ',' << format_number(s.values[i]) << '\n';
    }
  }
}

}  // namespace ns2d
