#pragma once

#include <optional>
#include <string>
#include <vector>

#include "image.hpp"

namespace hdb {

// Best distortion reached after spending `cost` units (gradient calls or
// queries); appended whenever the best improves.
struct TrajectoryPoint {
  long cost = 0;
  double distortion = 0.0;
};

// Per-image attack outcome.
struct AttackRecord {
  int image_id = -1;
  bool success = false;
  std::optional<Distortion> distortion;  // present iff success
  long cost = 0;
  std::vector<TrajectoryPoint> trajectory;
  std::optional<Image> adversarial;  // kept in memory for re-verification
};

struct TestSetSummary {
  std::vector<AttackRecord> records;
  std::size_t m() const { return records.size(); }
};

// Fitted exponential accuracy prototype eta(D) = eta0 * exp(-lambda D).
struct AccuracyCurve {
  double eta0 = 0.0;
  double lambda = 0.0;
  double r2 = 0.0;
  double d_half = 0.0;  // ln 2 / lambda
};

// P(D): fraction of records that succeeded within distortion budget D.
double operating_characteristic(const TestSetSummary& s, Distortion budget);

// Ordinary least squares on ln(eta) = ln(eta0) - lambda D over points with
// eta > 0. Throws ErrorKind::fit when fewer than 3 usable points with
// distinct D remain or when the fitted lambda is <= 0 (accuracy not
// decaying). r2 is the coefficient of determination in log space.
AccuracyCurve fit_exponential(const std::vector<std::pair<double, double>>& points);

// ln 2 / lambda; throws ErrorKind::fit for lambda <= 0.
Distortion half_distortion(const AccuracyCurve& curve);

// Samples eta(D) = 1 - P(D) on the grid, drops eta = 0 points, fits.
// An empty grid requests the default: 50 evenly spaced points over
// [0, max observed distortion].
AccuracyCurve curve_from_records(const TestSetSummary& s,
                                 const std::vector<double>& grid);

std::vector<double> default_grid(const TestSetSummary& s, int points = 50);

// Truncates every record to the prefix of its trajectory with cost <= budget,
// producing the record set the attack would have reported at that budget.
TestSetSummary records_at_budget(const TestSetSummary& s, long budget);

// CSV with header "image_id,success,distortion,cost"; distortion is empty
// for failures and printed with enough digits to round-trip exactly.
std::string records_to_csv(const TestSetSummary& s);
TestSetSummary records_from_csv(const std::string& csv);

std::string trajectory_to_csv(const AttackRecord& rec);

}  // namespace hdb
