#include "lb/landscape.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

namespace lb {

std::string to_string(Exposedness e) {
  switch (e) {
    case Exposedness::exposed: return "exposed";
    case Exposedness::not_exposed: return "not-exposed";
    default: return "inconclusive";
  }
}

namespace {

void fill_derived_columns(const ModelParams& params, LandscapeTable& table) {
  const int m = table.size();
  table.hstar.resize(m);
  table.psi.resize(m);
  table.nontrivial.resize(m);
  for (int i = 0; i < m; ++i) {
    table.hstar[i] = potential_hstar(params, table.a_grid[i]);
    table.psi[i] = table.results[i].energy;
    table.nontrivial[i] = !table.results[i].is_trivial;
  }
  table.envelope = convex_envelope(table.a_grid, table.psi);
}

void require_grid(const std::vector<double>& grid, const char* what) {
  if (grid.empty()) throw std::invalid_argument(std::string(what) + ": empty grid");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1]))
      throw std::invalid_argument(std::string(what) + ": grid must be strictly ascending");
}

}  // namespace

LandscapeTable sweep_mean(const ModelParams& params, const std::vector<double>& a_grid,
                          const MinimizeOptions& opts) {
  require_grid(a_grid, "sweep_mean");
  if (a_grid.size() < 3) throw std::invalid_argument("sweep_mean: need at least 3 grid points");
  LandscapeTable table;
  table.a_grid = a_grid;
  table.results.reserve(a_grid.size());
  for (std::size_t i = 0; i < a_grid.size(); ++i) {
    std::vector<PeriodicProfile> warm;
    if (i > 0) warm.push_back(table.results.back().profile);
    table.results.push_back(minimize_constrained(params, a_grid[i], opts, warm));
  }
  fill_derived_columns(params, table);
  return table;
}

DualTable sweep_lambda(const ModelParams& params, const std::vector<double>& lambda_grid,
                       const MinimizeOptions& opts) {
  require_grid(lambda_grid, "sweep_lambda");
  DualTable table;
  table.lambda_grid = lambda_grid;
  for (std::size_t j = 0; j < lambda_grid.size(); ++j) {
    std::vector<PeriodicProfile> warm;
    if (j > 0) warm.push_back(table.results.back().profile);
    table.results.push_back(minimize_lagrangian(params, lambda_grid[j], opts, warm));
    table.psi_dual.push_back(table.results.back().energy);
    table.mean_at_opt.push_back(table.results.back().profile.mean);
  }
  return table;
}

std::vector<double> convex_envelope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  if (n != ys.size()) throw std::invalid_argument("convex_envelope: length mismatch");
  if (n < 2) throw std::invalid_argument("convex_envelope: need at least 2 points");
  for (std::size_t i = 1; i < n; ++i)
    if (!(xs[i] > xs[i - 1]))
      throw std::invalid_argument("convex_envelope: xs must be strictly ascending");

  // Lower hull, Andrew's monotone chain. The orientation test uses the cross
  // product only, no divisions, for robustness on near-collinear points.
  std::vector<std::size_t> hull;
  for (std::size_t i = 0; i < n; ++i) {
    while (hull.size() >= 2) {
      const std::size_t p = hull[hull.size() - 2];
      const std::size_t q = hull[hull.size() - 1];
      const double cross =
          (xs[q] - xs[p]) * (ys[i] - ys[p]) - (ys[q] - ys[p]) * (xs[i] - xs[p]);
      if (cross <= 0.0)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(i);
  }

  std::vector<bool> on_hull(n, false);
  for (std::size_t h : hull) on_hull[h] = true;

  std::vector<double> env(n);
  std::size_t seg = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (on_hull[i]) {
      env[i] = ys[i];
      while (seg + 1 < hull.size() && hull[seg + 1] <= i) ++seg;
      continue;
    }
    while (seg + 1 < hull.size() && hull[seg + 1] < i) ++seg;
    const std::size_t l = hull[seg];
    const std::size_t r = hull[seg + 1];
    const double t = (xs[i] - xs[l]) / (xs[r] - xs[l]);
    // Clamp so roundoff on near-collinear chords can never push the envelope
    // above the data.
    env[i] = std::min(ys[i], ys[l] + t * (ys[r] - ys[l]));
  }
  return env;
}

DualityReport check_duality(const LandscapeTable& landscape, const DualTable& dual) {
  DualityReport rep;
  for (std::size_t j = 0; j < dual.lambda_grid.size(); ++j) {
    const double lam = dual.lambda_grid[j];
    double lo = std::numeric_limits<double>::infinity();
    for (int i = 0; i < landscape.size(); ++i)
      lo = std::min(lo, landscape.psi[i] - lam * landscape.a_grid[i]);
    const double dev = dual.psi_dual[j] - lo;
    rep.deviations.push_back(dev);
    rep.max_abs_deviation = std::max(rep.max_abs_deviation, std::abs(dev));
    rep.max_upper_violation = std::max(rep.max_upper_violation, dev);
  }
  return rep;
}

ConvexityReport check_convexity(const LandscapeTable& landscape) {
  ConvexityReport rep;
  for (int i = 1; i + 1 < landscape.size(); ++i) {
    const double chord = 0.5 * (landscape.psi[i - 1] + landscape.psi[i + 1]);
    const double tol = 1e-4 * (1.0 + std::abs(landscape.psi[i]));
    const double excess = landscape.psi[i] - chord - tol;
    if (excess > 0.0) {
      rep.violations.push_back(i);
      rep.max_violation = std::max(rep.max_violation, excess);
    }
  }
  return rep;
}

namespace {

// Least-squares projection of a sampled periodic shape onto K harmonics of
// omega; the mean is pinned separately by the constraint.
PeriodicProfile project_onto(double mean, int harmonics, double omega,
                             const std::vector<double>& samples) {
  const int n = static_cast<int>(samples.size());
  std::vector<double> ca(harmonics, 0.0), sb(harmonics, 0.0);
  for (int k = 1; k <= harmonics; ++k) {
    double c = 0.0, s = 0.0;
    for (int j = 0; j < n; ++j) {
      const double theta = 2.0 * M_PI * k * j / n;
      c += samples[j] * std::cos(theta);
      s += samples[j] * std::sin(theta);
    }
    ca[k - 1] = 2.0 * c / n;
    sb[k - 1] = 2.0 * s / n;
  }
  return PeriodicProfile(mean, std::move(ca), std::move(sb), omega);
}

// Long-period seed spending a theta-fraction of the period in the left
// minimizer's structure and the rest in the right one, with smooth blends.
PeriodicProfile mixture_seed(const PeriodicProfile& left, const PeriodicProfile& right,
                             double mean, double theta, double omega_mix, int harmonics) {
  const int n = 8 * (4 * harmonics + 2);
  const double period = 2.0 * M_PI / omega_mix;
  std::vector<double> samples(n);
  auto window = [&](double u) {
    auto sg = [](double x) { return 0.5 * (1.0 + std::tanh(x / 0.012)); };
    return sg(u - 0.015) * sg(theta - 0.015 - u);
  };
  for (int j = 0; j < n; ++j) {
    const double u = static_cast<double>(j) / n;
    const double t = u * period;
    const double w = window(u);
    samples[j] = w * evaluate(left, t, 0) + (1.0 - w) * evaluate(right, t, 0);
  }
  return project_onto(mean, harmonics, omega_mix, samples);
}

// A line through a computed grid minimizer, tangent to the constant-state
// branch h* on one side. Mixtures of that minimizer with the tangency
// constant realize values on this line (plus an interface cost vanishing
// with the period), so it is the sharpest support the table can certify.
struct SupportLine {
  int through;        // grid index of the supporting minimizer
  double slope;
  double const_mean;  // tangency point on the h* branch

  double at(const LandscapeTable& t, double x) const {
    return t.psi[through] + slope * (x - t.a_grid[through]);
  }
};

// Solve psi_p - s a_p = min_c [h*(c) - s c] for the slope s; const_right
// selects the branch of the tilted floor lying right of a_p.
std::optional<SupportLine> tangent_through(const ModelParams& params,
                                           const LandscapeTable& landscape, int p,
                                           bool const_right) {
  const double a_p = landscape.a_grid[p];
  const double psi_p = landscape.psi[p];
  auto gap = [&](double s) {
    return psi_p - s * a_p - constant_state_floor(params, s).value;
  };
  // gap is monotone in s with derivative (tilted argmin - a_p); scan for a
  // sign change around the local secant scale, then bisect.
  const double s0 = (landscape.psi[landscape.size() - 1] - landscape.psi[0]) /
                    (landscape.a_grid[landscape.size() - 1] - landscape.a_grid[0]);
  double lo = s0 - 3.0, hi = s0 + 3.0;
  double glo = gap(lo);
  double step = (hi - lo) / 256.0;
  double found_lo = 0.0, found_hi = 0.0;
  bool found = false;
  for (int k = 1; k <= 256; ++k) {
    const double s = lo + k * step;
    const double g = gap(s);
    if ((glo <= 0.0 && g >= 0.0) || (glo >= 0.0 && g <= 0.0)) {
      found_lo = s - step;
      found_hi = s;
      found = true;
      break;
    }
    glo = g;
  }
  if (!found) return std::nullopt;
  double s_lo = found_lo, s_hi = found_hi;
  double g_lo = gap(s_lo);
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (s_lo + s_hi);
    const double g = gap(mid);
    if ((g_lo <= 0.0) == (g <= 0.0)) {
      s_lo = mid;
      g_lo = g;
    } else {
      s_hi = mid;
    }
  }
  const double s = 0.5 * (s_lo + s_hi);
  const double c = constant_state_floor(params, s).argmin;
  if (const_right && !(c > a_p)) return std::nullopt;
  if (!const_right && !(c < a_p)) return std::nullopt;
  return SupportLine{p, s, c};
}

// Re-solve grid point i as a long-period two-phase profile mixing the
// support minimizer with the tangency constant. The period is pinned to
// 2 pi / omega_mix: one shared period across a region turns the interface
// cost into a common offset that cancels in midpoint tests.
bool mixture_resolve(const ModelParams& params, LandscapeTable& landscape, int i,
                     const SupportLine& line, const MinimizeOptions& opts, double omega_mix,
                     std::vector<PeriodicProfile>& family_warm) {
  const double a_i = landscape.a_grid[i];
  const double a_p = landscape.a_grid[line.through];
  double a_l = a_p, a_r = line.const_mean;
  PeriodicProfile left = landscape.results[line.through].profile;
  PeriodicProfile right = PeriodicProfile::constant(line.const_mean, 1);
  if (a_l > a_r) {
    std::swap(a_l, a_r);
    std::swap(left, right);
  }
  if (!(a_l < a_i && a_i < a_r)) return false;
  const double theta = (a_r - a_i) / (a_r - a_l);

  MinimizeOptions mix = opts;
  mix.harmonics = static_cast<int>(std::ceil(1.4 / omega_mix));
  mix.grid = 4 * mix.harmonics + 2;
  mix.omega_min = omega_mix / 1.001;
  mix.omega_max = omega_mix * 1.001;
  mix.starts = 1;  // the constant competitor; seeds carry the structure
  mix.max_iters = std::max(opts.max_iters, 2500);
  // The repair needs value accuracy, not a tight stationarity certificate;
  // a looser gradient tolerance keeps these large solves affordable.
  mix.grad_tol = std::max(opts.grad_tol, 1e-6);

  std::vector<PeriodicProfile> seeds;
  seeds.push_back(mixture_seed(left, right, a_i, theta, omega_mix, mix.harmonics));
  for (const PeriodicProfile& w : family_warm) seeds.push_back(w);

  MinimizeResult redo = minimize_constrained(params, a_i, mix, seeds);
  if (redo.energy < landscape.results[i].energy) {
    family_warm.push_back(redo.profile);
    if (family_warm.size() > 3) family_warm.erase(family_warm.begin());
    landscape.results[i] = std::move(redo);
    return true;
  }
  return false;
}

// One mixture-repair sweep over a cluster of midpoint violations
// [first, last]. Support candidates are pure points a few steps outside the
// cluster on either side; the line chosen is the highest one at the cluster
// center (the tightest certified support).
void repair_region(const ModelParams& params, LandscapeTable& landscape, int first, int last,
                   const MinimizeOptions& opts, double omega_mix) {
  const int m = landscape.size();
  std::optional<SupportLine> best;
  const double mid = 0.5 * (landscape.a_grid[first] + landscape.a_grid[last]);
  for (int d = 1; d <= 5; ++d) {
    if (first - d >= 0)
      if (auto cand = tangent_through(params, landscape, first - d, true))
        if (!best || cand->at(landscape, mid) > best->at(landscape, mid)) best = cand;
    if (last + d < m)
      if (auto cand = tangent_through(params, landscape, last + d, false))
        if (!best || cand->at(landscape, mid) > best->at(landscape, mid)) best = cand;
  }
  if (!best) return;

  std::vector<PeriodicProfile> family_warm;
  const double lo = std::min(landscape.a_grid[best->through], best->const_mean);
  const double hi = std::max(landscape.a_grid[best->through], best->const_mean);
  for (int i = 0; i < m; ++i) {
    const double a_i = landscape.a_grid[i];
    if (!(lo < a_i && a_i < hi) || i == best->through) continue;
    const double tol = 1e-4 * (1.0 + std::abs(landscape.psi[i]));
    if (landscape.psi[i] > best->at(landscape, a_i) + 0.1 * tol)
      mixture_resolve(params, landscape, i, *best, opts, omega_mix, family_warm);
  }
}

}  // namespace

ConvexityReport resolve_convexity(const ModelParams& params, LandscapeTable& landscape,
                                  const MinimizeOptions& opts) {
  ConvexityReport rep = check_convexity(landscape);
  if (rep.violations.empty()) return rep;

  // First pass: ordinary re-solves with doubled starts, warm-started from the
  // neighbors, for plain local-minimum failures.
  MinimizeOptions boosted = opts;
  boosted.starts = 2 * opts.starts;
  for (int i : rep.violations) {
    std::vector<PeriodicProfile> warm;
    if (i > 0) warm.push_back(landscape.results[i - 1].profile);
    if (i + 1 < landscape.size()) warm.push_back(landscape.results[i + 1].profile);
    MinimizeResult redo = minimize_constrained(params, landscape.a_grid[i], boosted, warm);
    if (redo.energy < landscape.results[i].energy) landscape.results[i] = std::move(redo);
  }
  fill_derived_columns(params, landscape);
  rep = check_convexity(landscape);
  if (rep.violations.empty()) return rep;

  // Remaining violations sit where the value function convexifies through
  // phase mixing: no single-period profile reaches the hull there. Repair
  // every violation cluster with two-phase profiles supported on the
  // sharpest certified tangent line.
  for (int round = 0; round < 3 && !rep.violations.empty(); ++round) {
    std::size_t v = 0;
    while (v < rep.violations.size()) {
      std::size_t w = v;
      while (w + 1 < rep.violations.size() &&
             rep.violations[w + 1] - rep.violations[w] <= 2)
        ++w;
      repair_region(params, landscape, rep.violations[v], rep.violations[w], opts, 0.01);
      v = w + 1;
    }
    fill_derived_columns(params, landscape);
    rep = check_convexity(landscape);
  }
  return rep;
}

Exposedness exposedness(const LandscapeTable& landscape, int index) {
  const int m = landscape.size();
  if (index < 0 || index >= m) throw std::invalid_argument("exposedness: index out of range");
  const auto& a = landscape.a_grid;
  const auto& psi = landscape.psi;

  // Discrete subdifferential from one-sided secants; midpoint as the
  // candidate supporting slope.
  double slope_left = -std::numeric_limits<double>::infinity();
  double slope_right = std::numeric_limits<double>::infinity();
  if (index > 0) slope_left = (psi[index] - psi[index - 1]) / (a[index] - a[index - 1]);
  if (index + 1 < m) slope_right = (psi[index + 1] - psi[index]) / (a[index + 1] - a[index]);
  double lambda;
  if (index == 0)
    lambda = slope_right;
  else if (index == m - 1)
    lambda = slope_left;
  else
    lambda = 0.5 * (slope_left + slope_right);

  const double delta = 1e-4;
  bool all_above = true;
  bool some_below = false;
  for (int j = 0; j < m; ++j) {
    if (j == index) continue;
    const double margin = psi[j] - psi[index] - lambda * (a[j] - a[index]);
    const double scale = delta * std::abs(a[j] - a[index]);
    if (!(margin > scale)) all_above = false;
    if (margin < -scale) some_below = true;
  }
  if (all_above) return Exposedness::exposed;
  if (some_below) return Exposedness::not_exposed;
  return Exposedness::inconclusive;
}

ConditionReport existence_condition(const ModelParams& params, const LandscapeTable& landscape,
                                    const MinimizeOptions& opts) {
  (void)opts;
  int zero_index = -1;
  for (int i = 0; i < landscape.size(); ++i)
    if (landscape.a_grid[i] == 0.0 || std::abs(landscape.a_grid[i]) < 1e-12) zero_index = i;
  if (zero_index < 0)
    throw std::invalid_argument("existence_condition: landscape grid must contain a = 0");

  ConditionReport rep;
  const ConstantFloor floor = constant_state_floor(params);
  rep.psi_at_zero = landscape.psi[zero_index];
  rep.m_f = floor.value;
  rep.floor_argmin = floor.argmin;
  rep.condition_holds = rep.psi_at_zero < rep.m_f - rep.margin;
  rep.exposedness_verdict = exposedness(landscape, zero_index);
  const MinimizeResult& at_zero = landscape.results[zero_index];
  if (!at_zero.is_trivial) rep.minimizer_period = at_zero.profile.period();
  return rep;
}

GapReport conjecture_gap(const LandscapeTable& landscape) {
  GapReport rep;
  const int m = landscape.size();
  rep.gaps.resize(m);
  for (int i = 0; i < m; ++i) {
    rep.gaps[i] = landscape.envelope[i] - landscape.psi[i];
    if (i == 0 || rep.gaps[i] > rep.max_gap) {
      rep.max_gap = rep.gaps[i];
      rep.at_a = landscape.a_grid[i];
      rep.at_index = i;
    }
    const double tol = 1e-4 * (1.0 + std::abs(landscape.psi[i]));
    if (rep.gaps[i] > 10.0 * tol) rep.significant = true;
  }
  return rep;
}

}  // namespace lb
