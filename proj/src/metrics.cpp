#include "metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

namespace hdb {

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

double operating_characteristic(const TestSetSummary& s, Distortion budget) {
  if (s.records.empty())
    throw Error(ErrorKind::internal, "operating_characteristic: empty record set");
  std::size_t count = 0;
  for (const auto& r : s.records)
    if (r.success && r.distortion && r.distortion->value <= budget.value) ++count;
  return static_cast<double>(count) / static_cast<double>(s.m());
}

AccuracyCurve fit_exponential(const std::vector<std::pair<double, double>>& points) {
  // keep eta > 0 (log undefined at 0)
  std::vector<std::pair<double, double>> usable;
  for (const auto& p : points)
    if (p.second > 0.0) usable.push_back(p);

  std::set<double> distinct;
  for (const auto& p : usable) distinct.insert(p.first);
  if (usable.size() < 3 || distinct.size() < 3)
    throw Error(ErrorKind::fit, "fit_exponential: fewer than 3 usable points with distinct D");

  const double n = static_cast<double>(usable.size());
  double sum_d = 0.0, sum_y = 0.0;
  for (const auto& p : usable) {
    sum_d += p.first;
    sum_y += std::log(p.second);
  }
  const double mean_d = sum_d / n;
  const double mean_y = sum_y / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& p : usable) {
    const double dx = p.first - mean_d;
    const double dy = std::log(p.second) - mean_y;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  const double slope = sxy / sxx;
  const double intercept = mean_y - slope * mean_d;

  AccuracyCurve c;
  c.lambda = -slope;
  c.eta0 = std::exp(intercept);
  if (!(c.lambda > 0.0))
    throw Error(ErrorKind::fit, "fit_exponential: accuracy not decaying (lambda <= 0)");

  double sse = 0.0;
  for (const auto& p : usable) {
    const double resid = std::log(p.second) - (intercept + slope * p.first);
    sse += resid * resid;
  }
  c.r2 = syy > 0.0 ? 1.0 - sse / syy : 1.0;
  c.d_half = std::log(2.0) / c.lambda;
  return c;
}

Distortion half_distortion(const AccuracyCurve& curve) {
  if (!(curve.lambda > 0.0))
    throw Error(ErrorKind::fit, "half_distortion: lambda must be > 0");
  return Distortion{std::log(2.0) / curve.lambda};
}

std::vector<double> default_grid(const TestSetSummary& s, int points) {
  double max_d = 0.0;
  for (const auto& r : s.records)
    if (r.success && r.distortion) max_d = std::max(max_d, r.distortion->value);
  std::vector<double> grid(points);
  for (int j = 0; j < points; ++j)
    grid[j] = max_d * static_cast<double>(j) / static_cast<double>(points - 1);
  return grid;
}

AccuracyCurve curve_from_records(const TestSetSummary& s,
                                 const std::vector<double>& grid) {
  const std::vector<double> g = grid.empty() ? default_grid(s) : grid;
  std::vector<std::pair<double, double>> points;
  points.reserve(g.size());
  for (double d : g) {
    const double eta = 1.0 - operating_characteristic(s, Distortion{d});
    if (eta > 0.0) points.emplace_back(d, eta);
  }
  return fit_exponential(points);
}

TestSetSummary records_at_budget(const TestSetSummary& s, long budget) {
  TestSetSummary out;
  out.records.reserve(s.records.size());
  for (const auto& r : s.records) {
    AttackRecord t;
    t.image_id = r.image_id;
    t.cost = std::min(r.cost, budget);
    for (const auto& p : r.trajectory) {
      if (p.cost > budget) break;
      t.success = true;
      t.distortion = Distortion{p.distortion};
      t.trajectory.push_back(p);
    }
    out.records.push_back(std::move(t));
  }
  return out;
}

std::string records_to_csv(const TestSetSummary& s) {
  std::string out = "image_id,success,distortion,cost\n";
  for (const auto& r : s.records) {
    out += std::to_string(r.image_id);
    out += r.success ? ",1," : ",0,";
    if (r.success && r.distortion) out += format_double(r.distortion->value);
    out += ',';
    out += std::to_string(r.cost);
    out += '\n';
  }
  return out;
}

TestSetSummary records_from_csv(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line) || line != "image_id,success,distortion,cost")
    throw Error(ErrorKind::internal, "records csv: bad header");
  TestSetSummary out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string field;
    AttackRecord r;
    if (!std::getline(ls, field, ',')) throw Error(ErrorKind::internal, "records csv: bad row");
    r.image_id = std::stoi(field);
    if (!std::getline(ls, field, ',')) throw Error(ErrorKind::internal, "records csv: bad row");
    r.success = field == "1";
    if (!std::getline(ls, field, ',')) throw Error(ErrorKind::internal, "records csv: bad row");
    if (!field.empty()) r.distortion = Distortion{std::stod(field)};
    if (!std::getline(ls, field)) throw Error(ErrorKind::internal, "records csv: bad row");
    r.cost = std::stol(field);
    if (r.success && !r.distortion)
      throw Error(ErrorKind::internal, "records csv: success row missing distortion");
    out.records.push_back(std::move(r));
  }
  return out;
}

std::string trajectory_to_csv(const AttackRecord& rec) {
  std::string out = "query_index,distortion\n";
  for (const auto& p : rec.trajectory) {
    out += std::to_string(p.cost);
    out += ',';
    out += format_double(p.distortion);
    out += '\n';
  }
  return out;
}

}  // namespace hdb
