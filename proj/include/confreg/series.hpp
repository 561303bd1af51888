#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "confreg/covariance.hpp"
#include "confreg/exact.hpp"
#include "confreg/table.hpp"

namespace confreg {

// Epoch timestamp: an ISO-8601 string, a numeric epoch index, or absent.
using Timestamp = std::variant<std::monostate, double, std::string>;

// Ordered covariance epochs of uniform dimension.
class CovarianceSeries {
public:
  CovarianceSeries(std::vector<CovarianceMatrix> covariances,
                   std::vector<Timestamp> timestamps);

  size_t size() const { return covariances_.size(); }
  int dim() const { return covariances_.front().dim(); }
  const CovarianceMatrix& covariance(size_t k) const { return covariances_[k]; }
  const Timestamp& timestamp(size_t k) const { return timestamps_[k]; }

private:
  std::vector<CovarianceMatrix> covariances_;
  std::vector<Timestamp> timestamps_;
};

// JSON object {"dim": k, "matrix": [[...]]}.
CovarianceMatrix parse_covariance_json(const std::string& text);
CovarianceMatrix load_covariance(const std::string& path);

// JSON array of {"t": <string|number, optional>, "matrix": [[...]]}.
CovarianceSeries parse_series_json(const std::string& text);
CovarianceSeries load_series(const std::string& path);

enum class RadiusMethod { kExact, kChiSq, kDiagonalSum };

// Confidence-region radius of one covariance, in its input units;
// `table` (optional, exact method only) replaces direct integration.
double confidence_radius(const CovarianceMatrix& cov, Probability conf,
                         RadiusMethod method,
                         const FactorTable* table = nullptr);

struct AvailabilityResult {
  double availability;  // epochs meeting the threshold / total epochs
  std::vector<double> per_epoch_radius;
  double threshold;
  Probability confidence;
  Method method;
};

// Fraction of epochs whose confidence radius is within the threshold.
AvailabilityResult evaluate_availability(const CovarianceSeries& series,
                                         double threshold, Probability conf,
                                         RadiusMethod method,
                                         const FactorTable* table = nullptr);

}  // namespace confreg
