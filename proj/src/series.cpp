#include "confreg/series.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "confreg/approx.hpp"

namespace confreg {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::vector<double>> matrix_rows(const json& node) {
  if (!node.is_array() || node.empty()) {
    throw FormatError("\"matrix\" must be a non-empty array of rows");
  }
  std::vector<std::vector<double>> rows;
  for (const auto& row : node) {
    if (!row.is_array()) throw FormatError("matrix rows must be arrays");
    std::vector<double> r;
    for (const auto& cell : row) {
      if (!cell.is_number()) throw FormatError("matrix entries must be numbers");
      r.push_back(cell.get<double>());
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

CovarianceMatrix covariance_from_json(const json& obj,
                                      std::optional<int> declared_dim) {
  const auto rows = matrix_rows(obj.at("matrix"));
  const int dim = declared_dim.value_or(static_cast<int>(rows.size()));
  return CovarianceMatrix(dim, rows);
}

bool timestamp_less(const Timestamp& a, const Timestamp& b) {
  if (std::holds_alternative<double>(a) && std::holds_alternative<double>(b)) {
    return std::get<double>(a) < std::get<double>(b);
  }
  // ISO-8601 strings of a uniform format order lexicographically.
  return std::get<std::string>(a) < std::get<std::string>(b);
}

}  // namespace

CovarianceSeries::CovarianceSeries(std::vector<CovarianceMatrix> covariances,
                                   std::vector<Timestamp> timestamps)
    : covariances_(std::move(covariances)), timestamps_(std::move(timestamps)) {
  if (covariances_.empty()) {
    throw FormatError("covariance series must hold at least one epoch");
  }
  if (timestamps_.size() != covariances_.size()) {
    throw FormatError("timestamp count does not match epoch count");
  }
  const int dim = covariances_.front().dim();
  for (const auto& c : covariances_) {
    if (c.dim() != dim) {
      throw DimensionMismatch("series epochs must share one dimension");
    }
  }
  const bool with_time = !std::holds_alternative<std::monostate>(timestamps_[0]);
  for (size_t k = 0; k < timestamps_.size(); ++k) {
    const bool has = !std::holds_alternative<std::monostate>(timestamps_[k]);
    if (has != with_time) {
      throw FormatError("either every epoch carries a timestamp or none does");
    }
    if (has && k > 0) {
      if (timestamps_[k].index() != timestamps_[k - 1].index()) {
        throw FormatError("timestamps must be uniformly numeric or string");
      }
      if (!timestamp_less(timestamps_[k - 1], timestamps_[k])) {
        throw FormatError("timestamps must be strictly increasing");
      }
    }
  }
}

CovarianceMatrix parse_covariance_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("covariance JSON parse failure: ") + e.what());
  }
  try {
    std::optional<int> dim;
    if (doc.contains("dim")) dim = doc.at("dim").get<int>();
    return covariance_from_json(doc, dim);
  } catch (const json::exception& e) {
    throw FormatError(std::string("covariance JSON layout: ") + e.what());
  }
}

CovarianceMatrix load_covariance(const std::string& path) {
  return parse_covariance_json(read_file(path));
}

CovarianceSeries parse_series_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("series JSON parse failure: ") + e.what());
  }
  if (!doc.is_array()) {
    throw FormatError("series JSON must be an array of epochs");
  }
  std::vector<CovarianceMatrix> covs;
  std::vector<Timestamp> times;
  try {
    for (const auto& epoch : doc) {
      covs.push_back(covariance_from_json(epoch, std::nullopt));
      if (epoch.contains("t")) {
        const auto& t = epoch.at("t");
        if (t.is_number()) {
          times.emplace_back(t.get<double>());
        } else if (t.is_string()) {
          times.emplace_back(t.get<std::string>());
        } else {
          throw FormatError("epoch \"t\" must be a number or string");
        }
      } else {
        times.emplace_back(std::monostate{});
      }
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("series JSON layout: ") + e.what());
  }
  return CovarianceSeries(std::move(covs), std::move(times));
}

CovarianceSeries load_series(const std::string& path) {
  return parse_series_json(read_file(path));
}

double confidence_radius(const CovarianceMatrix& cov, Probability conf,
                         RadiusMethod method, const FactorTable* table) {
  if (method == RadiusMethod::kDiagonalSum) {
    return diagonal_sum_radius(cov, conf);
  }
  const EigenSpectrum spec = decompose(cov);
  if (method == RadiusMethod::kChiSq) {
    const double factor = cov.dim() == 1 ? factor_1d(conf).factor
                                         : chi2_factor(cov.dim(), conf).factor;
    return spec.sigma_x() * factor;
  }
  const ShapeRatios rr = ratios(spec);
  double factor;
  if (table != nullptr) {
    factor = lookup(*table, rr).factor;
  } else if (cov.dim() == 1) {
    factor = factor_1d(conf).factor;
  } else if (cov.dim() == 2) {
    factor = factor_2d(rr, conf).factor;
  } else {
    factor = factor_3d(rr, conf).factor;
  }
  return spec.sigma_x() * factor;
}

AvailabilityResult evaluate_availability(const CovarianceSeries& series,
                                         double threshold, Probability conf,
                                         RadiusMethod method,
                                         const FactorTable* table) {
  if (!(threshold >= 0.0) || !std::isfinite(threshold)) {
    throw DomainError("availability threshold must be finite and >= 0");
  }
  Method tag = Method::kExact1D;
  switch (method) {
    case RadiusMethod::kExact:
      tag = series.dim() == 1   ? Method::kExact1D
            : series.dim() == 2 ? Method::kExact2D
                                : Method::kExact3D;
      break;
    case RadiusMethod::kChiSq:
      tag = Method::kChiSqApprox;
      break;
    case RadiusMethod::kDiagonalSum:
      tag = Method::kDiagonalSumApprox;
      break;
  }

  std::vector<double> radii;
  radii.reserve(series.size());
  size_t met = 0;
  for (size_t k = 0; k < series.size(); ++k) {
    radii.push_back(confidence_radius(series.covariance(k), conf, method, table));
    if (radii.back() <= threshold) ++met;
  }
  const double availability =
      static_cast<double>(met) / static_cast<double>(series.size());
  return {availability, std::move(radii), threshold, conf, tag};
}

}  // namespace confreg
