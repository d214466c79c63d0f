#include "choquet/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>

#include "choquet/errors.hpp"

namespace choquet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_nonempty(std::span<const double> clients,
                      std::span<const double> impostors) {
  if (clients.empty()) throw InvalidArgument("no client scores to evaluate");
  if (impostors.empty()) throw InvalidArgument("no impostor scores to evaluate");
}

std::vector<double> sorted_copy(std::span<const double> values) {
  std::vector<double> out(values.begin(), values.end());
  std::sort(out.begin(), out.end());
  return out;
}

// Count of sorted values strictly below t.
std::size_t count_below(const std::vector<double>& sorted, double t) {
  return static_cast<std::size_t>(
      std::lower_bound(sorted.begin(), sorted.end(), t) - sorted.begin());
}

struct Sweep {
  std::vector<double> thresholds;
  std::vector<double> far;
  std::vector<double> frr;
};

Sweep sweep(const std::vector<double>& clients, const std::vector<double>& impostors) {
  Sweep s;
  s.thresholds.reserve(clients.size() + impostors.size() + 2);
  s.thresholds.push_back(-kInf);
  std::merge(clients.begin(), clients.end(), impostors.begin(), impostors.end(),
             std::back_inserter(s.thresholds));
  s.thresholds.erase(std::unique(s.thresholds.begin() + 1, s.thresholds.end()),
                     s.thresholds.end());
  s.thresholds.push_back(kInf);

  const auto nc = static_cast<double>(clients.size());
  const auto ni = static_cast<double>(impostors.size());
  s.far.reserve(s.thresholds.size());
  s.frr.reserve(s.thresholds.size());
  std::size_t c = 0;
  std::size_t i = 0;
  for (double t : s.thresholds) {
    while (c < clients.size() && clients[c] < t) ++c;
    while (i < impostors.size() && impostors[i] < t) ++i;
    s.far.push_back(static_cast<double>(impostors.size() - i) / ni);
    s.frr.push_back(static_cast<double>(c) / nc);
  }
  return s;
}

EerPoint eer_from_sweep(const Sweep& s) {
  const auto& t = s.thresholds;
  auto gap = [&](std::size_t k) { return s.far[k] - s.frr[k]; };

  // gap is +1 at -inf, -1 at +inf and non-increasing in between.
  std::size_t j = 1;
  while (gap(j) > 0.0) ++j;

  if (gap(j) == 0.0) {
    std::size_t k = j;
    while (gap(k + 1) == 0.0) ++k;
    // Every threshold in (t[j-1], t[k]] gives FAR == FRR.
    const double lo = t[j - 1];
    const double hi = t[k];
    return {s.far[j], std::isinf(lo) ? hi : 0.5 * (lo + hi)};
  }

  const double before = gap(j - 1);
  const double after = gap(j);
  const double alpha = before / (before - after);
  const double rate = s.far[j - 1] + alpha * (s.far[j] - s.far[j - 1]);
  double threshold = 0.0;
  if (std::isinf(t[j - 1])) {
    threshold = t[j];
  } else if (std::isinf(t[j])) {
    threshold = t[j - 1];
  } else {
    threshold = t[j - 1] + alpha * (t[j] - t[j - 1]);
  }
  return {rate, threshold};
}

}  // namespace

std::vector<double> normalize_minmax(std::span<const double> raw) {
  if (raw.empty()) throw InvalidArgument("cannot normalize an empty list");
  const auto [lo, hi] = std::minmax_element(raw.begin(), raw.end());
  const double min = *lo;
  const double range = *hi - *lo;
  std::vector<double> out;
  out.reserve(raw.size());
  for (double x : raw) out.push_back(range > 0.0 ? (x - min) / range : 0.5);
  return out;
}

ErrorRates far_frr(std::span<const double> clients,
                   std::span<const double> impostors, double t) {
  require_nonempty(clients, impostors);
  const auto rejected = std::count_if(clients.begin(), clients.end(),
                                      [t](double s) { return s < t; });
  const auto accepted = std::count_if(impostors.begin(), impostors.end(),
                                      [t](double s) { return s >= t; });
  return {static_cast<double>(accepted) / static_cast<double>(impostors.size()),
          static_cast<double>(rejected) / static_cast<double>(clients.size())};
}

double error_rate_at(std::span<const double> clients,
                     std::span<const double> impostors, double t) {
  require_nonempty(clients, impostors);
  const auto rejected = std::count_if(clients.begin(), clients.end(),
                                      [t](double s) { return s < t; });
  const auto accepted = std::count_if(impostors.begin(), impostors.end(),
                                      [t](double s) { return s >= t; });
  return static_cast<double>(rejected + accepted) /
         static_cast<double>(clients.size() + impostors.size());
}

EerPoint eer(std::span<const double> clients, std::span<const double> impostors) {
  require_nonempty(clients, impostors);
  return eer_from_sweep(sweep(sorted_copy(clients), sorted_copy(impostors)));
}

OperatingPoint min_error_rate(std::span<const double> clients,
                              std::span<const double> impostors) {
  return EvalReport::evaluate(clients, impostors).min_error();
}

EvalReport EvalReport::evaluate(std::span<const double> clients,
                                std::span<const double> impostors) {
  require_nonempty(clients, impostors);
  EvalReport report;
  report.clients_ = sorted_copy(clients);
  report.impostors_ = sorted_copy(impostors);
  auto s = sweep(report.clients_, report.impostors_);
  report.eer_ = eer_from_sweep(s);
  report.thresholds_ = std::move(s.thresholds);
  report.far_ = std::move(s.far);
  report.frr_ = std::move(s.frr);
  return report;
}

double EvalReport::error_rate_at(double t) const {
  const std::size_t rejected = count_below(clients_, t);
  const std::size_t accepted = impostors_.size() - count_below(impostors_, t);
  return static_cast<double>(rejected + accepted) /
         static_cast<double>(clients_.size() + impostors_.size());
}

OperatingPoint EvalReport::min_error() const {
  const auto nc = static_cast<double>(clients_.size());
  const auto ni = static_cast<double>(impostors_.size());
  OperatingPoint best{kInf, 0.0};
  for (std::size_t k = 0; k < thresholds_.size(); ++k) {
    // Recount from the sorted scores so the rate is an exact ratio.
    const auto errors = std::llround(far_[k] * ni) + std::llround(frr_[k] * nc);
    const double rate = static_cast<double>(errors) / (nc + ni);
    if (rate < best.error_rate) best = {rate, thresholds_[k]};
  }
  return best;
}

std::vector<RocPoint> roc_export(const EvalReport& report) {
  std::vector<RocPoint> rows;
  rows.reserve(report.thresholds().size());
  for (std::size_t k = 0; k < report.thresholds().size(); ++k) {
    rows.push_back({report.thresholds()[k], report.far_curve()[k],
                    report.frr_curve()[k]});
  }
  return rows;
}

void write_roc_csv(const EvalReport& report, std::ostream& out) {
  out << "threshold,far,frr\n";
  for (const auto& row : roc_export(report)) {
    out << format_number(row.threshold) << ',' << format_number(row.far) << ','
        << format_number(row.frr) << '\n';
  }
}

std::string format_number(double value, int significant) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value,
                                    std::chars_format::general, significant);
  return std::string(buf, result.ptr);
}

}  // namespace choquet
