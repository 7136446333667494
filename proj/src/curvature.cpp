#include "bgkit/curvature.hpp"

#include "bgkit/errors.hpp"
#include "bgkit/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace bgkit {

std::string to_string(Status s) {
  switch (s) {
    case Status::verified: return "verified";
    case Status::violated: return "violated";
    case Status::inconclusive: return "inconclusive";
  }
  return "?";
}

Status combine(Status a, Status b) {
  if (a == Status::violated || b == Status::violated) return Status::violated;
  if (a == Status::inconclusive || b == Status::inconclusive) return Status::inconclusive;
  return Status::verified;
}

Status compare_with_margin(const Rational& lhs, double log_rhs) {
  if (lhs <= 0) return Status::verified;
  const double l = log_of(lhs);
  if (l <= log_rhs + std::log1p(-kMargin)) return Status::verified;
  if (l > log_rhs + std::log1p(kMargin)) return Status::violated;
  return Status::inconclusive;
}

void BGParams::check() const {
  if (!(r0 > 0)) throw std::invalid_argument("scale r0 must be positive");
  if (!(C > 1) || !std::isfinite(C)) throw std::invalid_argument("factor C must be a finite real > 1");
  if (!(K >= 0) || !std::isfinite(K)) throw std::invalid_argument("exponent K must be a finite real >= 0");
}

void SyntheticParams::check() const {
  if (!(N > 0) || !std::isfinite(N)) throw std::invalid_argument("dimension N must be a finite real > 0");
  if (!(K > 0) || !std::isfinite(K))
    throw std::invalid_argument("K must be > 0: the threshold N/K is undefined at K = 0");
}

Length SyntheticParams::threshold() const { return exact_rational(N) / exact_rational(K); }

Rational exact_rational(double v) {
  if (!std::isfinite(v)) throw std::domain_error("non-finite value has no exact rational");
  int exp = 0;
  double mant = std::frexp(v, &exp);
  // mant * 2^53 is an integer for every double.
  auto scaled = static_cast<long long>(std::ldexp(mant, 53));
  exp -= 53;
  Rational out(scaled);
  Integer pow2 = Integer(1) << std::abs(exp);
  return exp >= 0 ? out * Rational(pow2) : out / Rational(pow2);
}

// ---------------------------------------------------------------- scanning

namespace {

void require_window(const Measure& mu, const Point& x, const Length& R, bool closed) {
  auto safe = mu.safe_radius(x);
  if (!safe) return;
  if (closed ? R >= *safe : R > *safe)
    throw WindowError("balls of radius " + to_string(R) + " around " + to_string(x) +
                      " leave the enumerable window (safe radius " + to_string(*safe) + ")");
}

}  // namespace

std::vector<RatioRow> scan_ratios(const Measure& mu, const Point& x, const Length& lo, const Length& hi,
                                  bool closed) {
  if (!(lo > 0)) throw std::invalid_argument("scan radii must be positive");
  if (hi < lo) throw std::invalid_argument("scan range is empty: " + to_string(lo) + " > " + to_string(hi));
  require_window(mu, x, hi * 2, closed);
  const RadialProfile prof = mu.profile(x, hi * 2);

  std::set<Length> crit{lo, hi};
  for (const auto& s : prof.shells())
    for (Length c : {s.distance, Length(s.distance / 2)})
      if (c > lo && c < hi) crit.insert(c);
  const std::vector<Length> pts(crit.begin(), crit.end());

  std::vector<RatioRow> rows;
  rows.reserve(2 * pts.size());
  auto add = [&](const Length& r, const Length& rhs_r, bool cell) {
    Mass inner = prof.mass(r, closed);
    if (inner == 0)
      throw HypothesisError("zero-mass ball at " + to_string(x) + ", radius " + to_string(r) +
                            ": the ratio is undefined");
    Mass outer = prof.mass(r * 2, closed);
    Rational ratio = outer / inner;
    rows.push_back({x, r, rhs_r, cell, std::move(outer), std::move(inner), std::move(ratio)});
  };
  for (std::size_t i = 0; i < pts.size(); ++i) {
    add(pts[i], pts[i], false);
    if (i + 1 < pts.size()) add((pts[i] + pts[i + 1]) / 2, pts[i], true);
  }
  return rows;
}

double log_rhs(const CurvatureParams& p, const Length& r) {
  const double rd = to_double(r);
  if (auto bg = std::get_if<BGParams>(&p)) return std::log(bg->C) + bg->K * rd;
  const auto& s = std::get<SyntheticParams>(p);
  return s.N * std::log(2.0) + s.K * rd;
}

namespace {

// Next radius inside a violated cell (a, b) at which the violation is attained.
std::optional<Length> attained_in_cell(const CurvatureParams& p, const Rational& lhs, const Length& a,
                                       const Length& b) {
  Length step = (b - a) / 2;
  for (int j = 0; j < 64; ++j, step /= 2)
    if (compare_with_margin(lhs, log_rhs(p, a + step)) == Status::violated) return a + step;
  return std::nullopt;
}

void evaluate(Certificate& cert) {
  cert.status = Status::verified;
  cert.worst_ratio = 0;
  const RatioRow* worst_point = nullptr;
  const RatioRow* worst_cell = nullptr;
  const RatioRow* worst_any = nullptr;
  double wp = -INFINITY, wc = -INFINITY, wa = -INFINITY;
  std::set<std::pair<Point, Length>> radii;
  for (const auto& row : cert.rows) {
    if (!row.cell) radii.insert({row.center, row.radius});
    const double lr = log_rhs(cert.params, row.rhs_radius);
    const double gap = log_of(row.ratio) - lr;
    const Status s = compare_with_margin(row.ratio, lr);
    cert.status = combine(cert.status, s);
    if (gap > wa) wa = gap, worst_any = &row;
    if (s == Status::violated) {
      if (!row.cell && gap > wp) wp = gap, worst_point = &row;
      if (row.cell && gap > wc) wc = gap, worst_cell = &row;
    }
  }
  cert.critical_radii_checked = radii.size();
  cert.worst_ratio = std::exp(wa);
  cert.witness.reset();

  auto make_witness = [&](const RatioRow& row, const Length& r) {
    cert.witness = Witness{row.center, r, row.outer, row.inner, row.ratio, std::exp(log_rhs(cert.params, r))};
  };
  if (worst_point) {
    make_witness(*worst_point, worst_point->radius);
  } else if (worst_cell) {
    // The cell's ratio holds on all of (a, b); pick a radius where the float
    // right-hand side is already below it.
    const Length& a = worst_cell->rhs_radius;
    const Length b = worst_cell->radius * 2 - a;
    if (auto r = attained_in_cell(cert.params, worst_cell->ratio, a, b))
      make_witness(*worst_cell, *r);
    else
      make_witness(*worst_cell, worst_cell->radius), cert.status = Status::inconclusive;
  } else if (cert.status == Status::inconclusive && worst_any) {
    make_witness(*worst_any, worst_any->radius);
  }
}

std::vector<RatioRow> scan_centers(const Measure& mu, const std::vector<Point>& centers, const Length& lo,
                                   const Length& hi, bool closed) {
  if (centers.empty()) throw std::invalid_argument("no centers to check");
  std::vector<std::vector<RatioRow>> per(centers.size());
  parallel_for(centers.size(), [&](std::size_t i) { per[i] = scan_ratios(mu, centers[i], lo, hi, closed); });
  std::vector<RatioRow> rows;
  for (auto& v : per) std::move(v.begin(), v.end(), std::back_inserter(rows));
  return rows;
}

}  // namespace

Certificate check_bg_synthetic(const Measure& mu, const Point& x, const SyntheticParams& p, const Length& r_max,
                               bool closed) {
  p.check();
  const Length lo = p.threshold();
  if (r_max < lo) throw std::invalid_argument("r_max " + to_string(r_max) + " is below N/K = " + to_string(lo));
  Certificate cert;
  cert.params = p;
  cert.centers = {x};
  cert.r_min = lo;
  cert.r_max = r_max;
  cert.rows = scan_ratios(mu, x, lo, r_max, closed);
  evaluate(cert);
  return cert;
}

Certificate check_weak_bg(const Measure& mu, const std::vector<Point>& centers, const BGParams& p,
                          const Length& r_max, bool closed, bool all_centers) {
  p.check();
  if (r_max < p.r0) throw std::invalid_argument("r_max " + to_string(r_max) + " is below r0 = " + to_string(p.r0));
  Certificate cert;
  cert.params = p;
  cert.centers = centers;
  cert.all_centers = all_centers;
  cert.r_min = p.r0;
  cert.r_max = r_max;
  cert.rows = scan_centers(mu, centers, p.r0, r_max, closed);
  evaluate(cert);
  return cert;
}

double min_exponent(const Measure& mu, const Point& x, const Length& r0, double C, const Length& r_max,
                    bool closed) {
  BGParams{r0, C, 0}.check();
  if (r_max < r0) throw std::invalid_argument("r_max is below r0");
  double best = 0;
  for (const auto& row : scan_ratios(mu, x, r0, r_max, closed))
    best = std::max(best, (log_of(row.ratio) - std::log(C)) / to_double(row.rhs_radius));
  return best;
}

// ---------------------------------------------------------------- conversions

SyntheticParams weak_to_synthetic(const BGParams& p) {
  p.check();
  if (!(p.K > 0)) throw std::invalid_argument("K = 0 has no synthetic counterpart; perturb K upward");
  const double n = std::max(p.K * to_double(p.r0), std::log(p.C) / std::log(2.0));
  return {n, p.K};
}

BGParams synthetic_to_weak(const SyntheticParams& p) {
  p.check();
  return {p.threshold(), std::exp2(p.N), p.K};
}

double classic_ratio_bound(const Length& r, const Length& R, const CurvatureParams& p) {
  if (!(r < R)) throw std::invalid_argument("the classical bound needs r < R");
  const double q = std::log(to_double(R) / to_double(r));
  const double Rd = to_double(R);
  if (auto bg = std::get_if<BGParams>(&p)) {
    bg->check();
    if (r < bg->r0) throw std::invalid_argument("the classical bound needs r >= r0");
    const double e = std::log(bg->C) / std::log(2.0);
    return bg->C * std::exp(e * q + bg->K * Rd);
  }
  const auto& s = std::get<SyntheticParams>(p);
  s.check();
  if (r < s.threshold()) throw std::invalid_argument("the classical bound needs r >= N/K");
  return std::exp2(s.N) * std::exp(s.N * q + s.K * Rd);
}

ClassicReport check_classic_bound(const Measure& mu, const Point& x, const Certificate& certificate,
                                  const std::vector<std::pair<Length, Length>>& pairs, bool closed) {
  if (certificate.status != Status::verified)
    throw HypothesisError("the classical bound needs a verified certificate, got " + to_string(certificate.status));
  if (std::find(certificate.centers.begin(), certificate.centers.end(), x) == certificate.centers.end())
    throw HypothesisError("the certificate does not cover center " + to_string(x));
  Length top = 0;
  for (const auto& [r, R] : pairs) {
    if (!(r < R)) throw std::invalid_argument("pair (" + to_string(r) + ", " + to_string(R) + ") needs r < R");
    if (r < certificate.r_min) throw std::invalid_argument("r = " + to_string(r) + " is below the certified range");
    top = std::max(top, R);
  }
  if (top > certificate.r_max)
    throw HypothesisError("the certificate stops at " + to_string(certificate.r_max) + " but the pairs reach " +
                          to_string(top));
  require_window(mu, x, top, closed);
  const RadialProfile prof = mu.profile(x, top);
  ClassicReport rep;
  for (const auto& [r, R] : pairs) {
    Mass inner = prof.mass(r, closed);
    if (inner == 0) throw HypothesisError("zero-mass ball at radius " + to_string(r));
    ClassicRow row{r, R, prof.mass(R, closed) / inner, classic_ratio_bound(r, R, certificate.params)};
    row.status = compare_with_margin(row.ratio, std::log(row.bound));
    rep.status = combine(rep.status, row.status);
    rep.worst_slack = std::max(rep.worst_slack, to_double(row.ratio) / row.bound);
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

DoublingResult doubling_constant(const Measure& mu, const Point& x, const Length& r0, bool closed) {
  if (!(r0 > 0)) throw std::invalid_argument("scale r0 must be positive");
  auto rows = scan_ratios(mu, x, r0 / 2, r0 * 5 / 2, closed);
  DoublingResult out{Rational(0), r0, 0};
  for (const auto& row : rows) {
    if (!row.cell) ++out.critical_radii_checked;
    if (row.ratio > out.C0) out.C0 = row.ratio, out.radius = row.radius;
  }
  return out;
}

double doubling_to_bg_bound(const DoublingParams& dp, const Length& r) {
  if (!(dp.C0 > 1)) throw std::invalid_argument("doubling constant must exceed 1");
  if (!(dp.r0 > 0)) throw std::invalid_argument("scale r0 must be positive");
  if (r * 2 < dp.r0) throw std::invalid_argument("the bound needs r >= r0/2");
  const double l = std::log(dp.C0);
  return std::exp(5 * l + 4.5 * to_double(r / dp.r0) * l);
}

BGParams diameter_shift(const BGParams& p, const Length& D) {
  if (D < 0) throw std::invalid_argument("diameter must be nonnegative");
  return {p.r0 + D * 5 / 2, p.C * p.C, 2 * p.K};
}

}  // namespace bgkit
