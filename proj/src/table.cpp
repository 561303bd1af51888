#include "confreg/table.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include "confreg/approx.hpp"

namespace confreg {

namespace {

constexpr char kMagic[4] = {'F', 'T', 'B', 'L'};
constexpr std::uint16_t kVersion = 1;

int intervals_from_step(double step) {
  if (!(step > 0.0) || step > 1.0) {
    throw DomainError("grid step must lie in (0, 1]");
  }
  if (step < 1e-3) throw DomainError("grid step must be >= 1e-3");
  const auto n = static_cast<int>(std::llround(1.0 / step));
  if (std::fabs(n * step - 1.0) > 1e-12) {
    throw DomainError("grid step must divide 1 evenly");
  }
  return n;
}

size_t expected_count(int dim, int intervals) {
  const size_t k = static_cast<size_t>(intervals) + 1;
  return dim == 2 ? k : k * (k + 1) / 2;
}

// --- CRC-32 (IEEE, reflected, poly 0xEDB88320) ---

std::uint32_t crc32(const unsigned char* data, size_t len) {
  static const auto table = [] {
    std::array<std::uint32_t, 256> t{};
    for (std::uint32_t i = 0; i < 256; ++i) {
      std::uint32_t c = i;
      for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
      t[i] = c;
    }
    return t;
  }();
  std::uint32_t crc = 0xFFFFFFFFu;
  for (size_t i = 0; i < len; ++i) {
    crc = table[(crc ^ data[i]) & 0xFFu] ^ (crc >> 8);
  }
  return crc ^ 0xFFFFFFFFu;
}

// --- little-endian scalar IO ---

template <typename T>
void put_le(std::string& out, T value) {
  for (size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<char>((value >> (8 * i)) & 0xFF));
  }
}

void put_f64(std::string& out, double value) {
  std::uint64_t bits;
  std::memcpy(&bits, &value, 8);
  put_le(out, bits);
}

class Reader {
public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  template <typename T>
  T get_le() {
    need(sizeof(T));
    T value = 0;
    for (size_t i = 0; i < sizeof(T); ++i) {
      value |= static_cast<T>(static_cast<unsigned char>(bytes_[pos_ + i]))
               << (8 * i);
    }
    pos_ += sizeof(T);
    return value;
  }

  double get_f64() {
    const std::uint64_t bits = get_le<std::uint64_t>();
    double value;
    std::memcpy(&value, &bits, 8);
    return value;
  }

  size_t pos() const { return pos_; }

private:
  void need(size_t n) const {
    if (pos_ + n > bytes_.size()) {
      throw FormatError("table stream truncated");
    }
  }
  std::string_view bytes_;
  size_t pos_ = 0;
};

// shortest decimal form that parses back to the same double
std::string format_full(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// --- monotone cubic (Fritsch-Carlson) on a uniform grid ---

// Knot slope from the two adjacent secants: Butland's harmonic mean,
// zero at local extrema, one-sided limited estimate at the ends.
double pchip_slope(double d_left, double d_right) {
  if (d_left * d_right <= 0.0) return 0.0;
  return 2.0 * d_left * d_right / (d_left + d_right);
}

double pchip_edge_slope(double d_near, double d_far) {
  double s = 0.5 * (3.0 * d_near - d_far);
  if (s * d_near <= 0.0) return 0.0;
  if (std::fabs(s) > 3.0 * std::fabs(d_near)) return 3.0 * d_near;
  return s;
}

// Hermite evaluation on cell [k, k+1] at fraction u, given the values
// at knots k-1..k+2 (edges clamped by the caller passing repeats).
double pchip_cell(double ym1, double y0, double y1, double y2, double u,
                  bool left_edge, bool right_edge) {
  const double dm1 = y0 - ym1;
  const double d0 = y1 - y0;
  const double d1 = y2 - y1;
  const double s0 = left_edge ? pchip_edge_slope(d0, d1) : pchip_slope(dm1, d0);
  const double s1 = right_edge ? pchip_edge_slope(d0, dm1) : pchip_slope(d0, d1);
  const double u2 = u * u;
  const double u3 = u2 * u;
  return y0 * (2 * u3 - 3 * u2 + 1) + s0 * (u3 - 2 * u2 + u) +
         y1 * (-2 * u3 + 3 * u2) + s1 * (u3 - u2);
}

struct GridPos {
  int cell;      // left knot of the bracketing cell
  double frac;   // position inside the cell, in [0, 1]
  int knot;      // >= 0 when the query sits on a knot
};

GridPos locate(double x, double step, int intervals) {
  const double u = x / step;
  const double r = std::round(u);
  if (std::fabs(u - r) < 1e-9) {
    const int k = std::clamp(static_cast<int>(r), 0, intervals);
    return {std::min(k, intervals - 1), k == intervals ? 1.0 : 0.0, k};
  }
  int cell = static_cast<int>(std::floor(u));
  cell = std::clamp(cell, 0, intervals - 1);
  return {cell, u - cell, -1};
}

}  // namespace

const char* interpolation_name(Interpolation i) {
  return i == Interpolation::kLinear ? "linear" : "monotone-cubic";
}

FactorTable::FactorTable(int dim, Probability confidence, double step,
                         std::vector<double> values, Interpolation interp)
    : dim_(dim),
      confidence_(confidence),
      step_(step),
      interp_(interp),
      intervals_(intervals_from_step(step)),
      values_(std::move(values)) {
  if (dim_ != 2 && dim_ != 3) {
    throw DimensionMismatch("factor tables cover dim 2 or 3");
  }
  if (values_.size() != expected_count(dim_, intervals_)) {
    throw FormatError("table value count does not match dim and step");
  }
  validate();
}

double FactorTable::at(int i) const { return values_[static_cast<size_t>(i)]; }

double FactorTable::at(int i, int j) const {
  if (i < j) std::swap(i, j);
  return values_[static_cast<size_t>(i) * (i + 1) / 2 + j];
}

double FactorTable::min_adjacent_increment() const {
  double margin = std::numeric_limits<double>::infinity();
  if (dim_ == 2) {
    for (int k = 1; k <= intervals_; ++k) margin = std::min(margin, at(k) - at(k - 1));
    return margin;
  }
  for (int i = 0; i <= intervals_; ++i) {
    for (int j = 1; j <= i; ++j) margin = std::min(margin, at(i, j) - at(i, j - 1));
    if (i > 0) {
      for (int j = 0; j <= i - 1; ++j) margin = std::min(margin, at(i, j) - at(i - 1, j));
    }
  }
  return margin;
}

void FactorTable::validate() const {
  for (double v : values_) {
    if (!std::isfinite(v) || v <= 0.0) {
      throw FormatError("table values must be positive and finite");
    }
  }
  if (min_adjacent_increment() < 0.0) {
    throw MonotonicityViolation(
        "factor grid decreases along an axis; the table is corrupt or the "
        "generating quadrature misbehaved");
  }
  // Endpoint anchors: the grid ends must agree with the analytic factors.
  const double f1 = factor_1d(confidence_).factor;
  const double chi = chi_squared_factor(dim_, confidence_);
  const double lo = dim_ == 2 ? at(0) : at(0, 0);
  const double hi = dim_ == 2 ? at(intervals_) : at(intervals_, intervals_);
  if (std::fabs(lo - f1) > 1e-6 || std::fabs(hi - chi) > 1e-6) {
    throw FormatError("table endpoints do not match the analytic anchors");
  }
}

FactorTable build_table(int dim, Probability confidence, double step,
                        Interpolation interp) {
  const int n = intervals_from_step(step);
  if (dim != 2 && dim != 3) {
    throw DimensionMismatch("factor tables cover dim 2 or 3");
  }

  std::vector<double> values(expected_count(dim, n));
  const auto compute = [&](size_t flat) {
    if (dim == 2) {
      const double r = std::min(1.0, static_cast<double>(flat) * step);
      return factor_2d(ShapeRatios::circle(r), confidence).factor;
    }
    // invert flat = i (i + 1) / 2 + j
    const auto i = static_cast<size_t>(
        (std::sqrt(8.0 * static_cast<double>(flat) + 1.0) - 1.0) / 2.0);
    const size_t j = flat - i * (i + 1) / 2;
    const double m = std::min(1.0, static_cast<double>(i) * step);
    const double nn = std::min(1.0, static_cast<double>(j) * step);
    return factor_3d(ShapeRatios::sphere(m, nn), confidence).factor;
  };

  const unsigned workers = std::min<unsigned>(
      std::max(1u, std::thread::hardware_concurrency()),
      static_cast<unsigned>(values.size()));
  if (workers <= 1) {
    for (size_t k = 0; k < values.size(); ++k) values[k] = compute(k);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (size_t k = w; k < values.size(); k += workers) values[k] = compute(k);
      });
    }
    for (auto& t : pool) t.join();
  }

  return FactorTable(dim, confidence, step, std::move(values), interp);
}

namespace {

// dim-3 value with the square-grid view (symmetric extension of the
// stored triangle) and clamped indices.
double grid3(const FactorTable& t, int i, int j) {
  const int n = t.knots_per_axis() - 1;
  return t.at(std::clamp(i, 0, n), std::clamp(j, 0, n));
}

double interp_1d(const FactorTable& t, double r) {
  const int n = t.knots_per_axis() - 1;
  const GridPos p = locate(r, t.step(), n);
  if (p.knot >= 0) return t.at(p.knot);
  const int k = p.cell;
  if (t.interpolation() == Interpolation::kLinear) {
    return t.at(k) + p.frac * (t.at(k + 1) - t.at(k));
  }
  return pchip_cell(t.at(std::max(k - 1, 0)), t.at(k), t.at(k + 1),
                    t.at(std::min(k + 2, n)), p.frac, k == 0, k + 1 == n);
}

double interp_2d(const FactorTable& t, double m, double nn) {
  const int n = t.knots_per_axis() - 1;
  const GridPos pm = locate(m, t.step(), n);
  const GridPos pn = locate(nn, t.step(), n);
  if (pm.knot >= 0 && pn.knot >= 0) return t.at(pm.knot, pn.knot);

  if (t.interpolation() == Interpolation::kLinear) {
    const auto row = [&](int i) {
      if (pn.knot >= 0) return grid3(t, i, pn.knot);
      return grid3(t, i, pn.cell) +
             pn.frac * (grid3(t, i, pn.cell + 1) - grid3(t, i, pn.cell));
    };
    if (pm.knot >= 0) return row(pm.knot);
    return row(pm.cell) + pm.frac * (row(pm.cell + 1) - row(pm.cell));
  }

  // Monotone cubic along n within each m-row of the stencil, then along m.
  const auto row = [&](int i) {
    if (pn.knot >= 0) return grid3(t, i, pn.knot);
    const int k = pn.cell;
    return pchip_cell(grid3(t, i, k - 1), grid3(t, i, k), grid3(t, i, k + 1),
                      grid3(t, i, k + 2), pn.frac, k == 0, k + 1 == n);
  };
  if (pm.knot >= 0) return row(pm.knot);
  const int k = pm.cell;
  return pchip_cell(row(std::max(k - 1, 0)), row(k), row(k + 1),
                    row(std::min(k + 2, n)), pm.frac, k == 0, k + 1 == n);
}

}  // namespace

FactorResult lookup(const FactorTable& table, const ShapeRatios& rr) {
  if (rr.dim() != table.dim()) {
    throw DimensionMismatch("ratio dimension does not match the table");
  }
  const double f = table.dim() == 2 ? interp_1d(table, rr.r())
                                    : interp_2d(table, rr.m(), rr.n());
  const Method method =
      table.dim() == 2 ? Method::kExact2D : Method::kExact3D;
  return {f, method, table.confidence(), rr};
}

std::string serialize_binary(const FactorTable& table) {
  std::string out;
  out.reserve(28 + 8 * table.values().size() + 4);
  out.append(kMagic, 4);
  put_le(out, kVersion);
  out.push_back(static_cast<char>(table.dim()));
  out.push_back(static_cast<char>(table.interpolation()));
  put_f64(out, table.confidence().value());
  put_f64(out, table.step());
  put_le(out, static_cast<std::uint64_t>(table.values().size()));
  for (double v : table.values()) put_f64(out, v);
  put_le(out, crc32(reinterpret_cast<const unsigned char*>(out.data()),
                    out.size()));
  return out;
}

FactorTable deserialize_binary(std::string_view bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw FormatError("table stream does not start with the FTBL magic");
  }
  if (bytes.size() < 4 + 2 + 1 + 1 + 8 + 8 + 8 + 4) {
    throw FormatError("table stream truncated");
  }
  const std::uint32_t stored = [&] {
    Reader tail(bytes.substr(bytes.size() - 4));
    return tail.get_le<std::uint32_t>();
  }();
  const std::uint32_t actual =
      crc32(reinterpret_cast<const unsigned char*>(bytes.data()),
            bytes.size() - 4);
  if (stored != actual) {
    throw FormatError("table checksum mismatch");
  }

  Reader in(bytes.substr(4));
  const auto version = in.get_le<std::uint16_t>();
  if (version != kVersion) {
    throw FormatError("unsupported table version " + std::to_string(version));
  }
  const int dim = in.get_le<std::uint8_t>();
  const auto interp_raw = in.get_le<std::uint8_t>();
  if (interp_raw > 1) throw FormatError("unknown interpolation tag");
  const double confidence = in.get_f64();
  const double step = in.get_f64();
  const auto count = in.get_le<std::uint64_t>();
  const std::uint64_t payload = bytes.size() - 4 - in.pos() - 4;
  if (count > payload / 8 || payload != count * 8) {
    throw FormatError("table stream length does not match its value count");
  }
  std::vector<double> values(count);
  for (auto& v : values) v = in.get_f64();

  try {
    return FactorTable(dim, Probability(confidence), step, std::move(values),
                       static_cast<Interpolation>(interp_raw));
  } catch (const MonotonicityViolation&) {
    throw;
  } catch (const Error& e) {
    throw FormatError(std::string("invalid table contents: ") + e.what());
  }
}

std::string serialize_csv(const FactorTable& table) {
  std::ostringstream out;
  out << "# dim " << table.dim() << "\n";
  out << "# confidence " << format_full(table.confidence().value()) << "\n";
  out << "# step " << format_full(table.step()) << "\n";
  out << "# interpolation " << interpolation_name(table.interpolation())
      << "\n";
  if (table.dim() == 2) {
    out << "r,factor\n";
    const int n = table.knots_per_axis() - 1;
    for (int k = 0; k <= n; ++k) {
      out << format_full(std::min(1.0, k * table.step())) << ","
          << format_full(table.at(k)) << "\n";
    }
  } else {
    out << "m,n,factor\n";
    const int n = table.knots_per_axis() - 1;
    for (int i = 0; i <= n; ++i) {
      for (int j = 0; j <= i; ++j) {
        out << format_full(std::min(1.0, i * table.step())) << ","
            << format_full(std::min(1.0, j * table.step())) << ","
            << format_full(table.at(i, j)) << "\n";
      }
    }
  }
  return out.str();
}

FactorTable deserialize_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int dim = 0;
  double confidence = 0.0, step = 0.0;
  Interpolation interp = Interpolation::kMonotoneCubic;
  std::vector<double> values;
  bool saw_column_header = false;

  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream h(line.substr(1));
      std::string key;
      h >> key;
      if (key == "dim") {
        h >> dim;
      } else if (key == "confidence") {
        h >> confidence;
      } else if (key == "step") {
        h >> step;
      } else if (key == "interpolation") {
        std::string tag;
        h >> tag;
        if (tag == "linear") {
          interp = Interpolation::kLinear;
        } else if (tag == "monotone-cubic") {
          interp = Interpolation::kMonotoneCubic;
        } else {
          throw FormatError("unknown interpolation tag '" + tag + "'");
        }
      }
      if (h.fail()) throw FormatError("malformed header line: " + line);
      continue;
    }
    if (!saw_column_header) {
      saw_column_header = true;  // r,factor or m,n,factor
      continue;
    }
    // last comma-separated field is the factor
    const auto pos = line.find_last_of(',');
    if (pos == std::string::npos) {
      throw FormatError("malformed table row: " + line);
    }
    char* end = nullptr;
    const std::string field = line.substr(pos + 1);
    const double v = std::strtod(field.c_str(), &end);
    if (end == field.c_str()) {
      throw FormatError("malformed factor value: " + field);
    }
    values.push_back(v);
  }
  if (dim == 0 || step == 0.0 || !saw_column_header) {
    throw FormatError("table text is missing required headers");
  }
  try {
    return FactorTable(dim, Probability(confidence), step, std::move(values),
                       interp);
  } catch (const MonotonicityViolation&) {
    throw;
  } catch (const Error& e) {
    throw FormatError(std::string("invalid table contents: ") + e.what());
  }
}

void save_table(const FactorTable& table, const std::string& path,
                bool binary) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open '" + path + "' for writing");
  const std::string data =
      binary ? serialize_binary(table) : serialize_csv(table);
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw FormatError("failed writing table to '" + path + "'");
}

FactorTable load_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open table file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string data = buf.str();
  if (data.size() >= 4 && std::memcmp(data.data(), kMagic, 4) == 0) {
    return deserialize_binary(data);
  }
  return deserialize_csv(data);
}

}  // namespace confreg
