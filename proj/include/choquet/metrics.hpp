#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace choquet {

/// Maps x to (x - min) / (max - min). A constant column maps to 0.5.
std::vector<double> normalize_minmax(std::span<const double> raw);

struct ErrorRates {
  double far = 0.0;  // impostors accepted / impostors
  double frr = 0.0;  // clients rejected / clients
};

/// Error rates at threshold t. A score is accepted iff score >= t.
ErrorRates far_frr(std::span<const double> clients,
                   std::span<const double> impostors, double t);

/// (false accepts + false rejects) / (clients + impostors) at threshold t.
double error_rate_at(std::span<const double> clients,
                     std::span<const double> impostors, double t);

struct EerPoint {
  double eer = 0.0;
  double threshold = 0.0;
};

/// Equal error rate by linear interpolation at the FAR/FRR crossing of the
/// threshold sweep. When the curves meet exactly over an interval the
/// reported threshold is that interval's midpoint.
EerPoint eer(std::span<const double> clients, std::span<const double> impostors);

struct OperatingPoint {
  double error_rate = 0.0;
  double threshold = 0.0;
};

/// Lowest total error rate over every threshold in the sweep; the first
/// (lowest) threshold achieving it is reported.
OperatingPoint min_error_rate(std::span<const double> clients,
                              std::span<const double> impostors);

struct RocPoint {
  double threshold = 0.0;
  double far = 0.0;
  double frr = 0.0;

  double tpr() const { return 1.0 - frr; }
};

/// FAR/FRR curves over the threshold grid (-inf, every distinct score in
/// ascending order, +inf), plus the EER summary.
class EvalReport {
 public:
  static EvalReport evaluate(std::span<const double> clients,
                             std::span<const double> impostors);

  double eer() const { return eer_.eer; }
  double eer_threshold() const { return eer_.threshold; }
  double error_rate_at(double t) const;
  OperatingPoint min_error() const;

  const std::vector<double>& thresholds() const { return thresholds_; }
  const std::vector<double>& far_curve() const { return far_; }
  const std::vector<double>& frr_curve() const { return frr_; }
  std::size_t client_count() const { return clients_.size(); }
  std::size_t impostor_count() const { return impostors_.size(); }

 private:
  std::vector<double> clients_;    // sorted
  std::vector<double> impostors_;  // sorted
  std::vector<double> thresholds_;
  std::vector<double> far_;
  std::vector<double> frr_;
  EerPoint eer_;
};

/// One row per threshold-grid point; FAR is non-increasing down the rows.
std::vector<RocPoint> roc_export(const EvalReport& report);

/// CSV with header `threshold,far,frr`, 6 significant digits.
void write_roc_csv(const EvalReport& report, std::ostream& out);

/// Locale-independent shortest-of-%g rendering with `significant` digits.
std::string format_number(double value, int significant = 6);

}  // namespace choquet
