#include "omrl/io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace omrl {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

namespace {

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::out) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, mode);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

void atomic_write(const fs::path& path, const std::string& payload,
                  std::ios::openmode mode = std::ios::out) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out = open_out(tmp, mode);
    out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
  }
  fs::rename(tmp, path);
}

json match_to_json(const MatchReport& report) {
  json pairs = json::array();
  for (const auto& p : report.pairs)
    pairs.push_back({{"exact_index", p.exact_index},
                     {"approx_index", p.approx_index},
                     {"distance", p.distance}});
  return {{"cutoff", report.cutoff},
          {"pairs", pairs},
          {"unmatched_exact", report.unmatched_exact},
          {"unmatched_approx", report.unmatched_approx},
          {"mean_distance", report.mean_distance()},
          {"max_distance", report.max_distance()}};
}

}  // namespace

void write_spectrum_csv(const fs::path& path, const ResonanceSet& rs) {
  std::ostringstream out;
  out << "re,im,modulus,phase,residual\n";
  for (int n = 0; n < rs.size(); ++n) {
    const Complex& z = rs.eigenvalues[n];
    double ph = std::arg(z);
    if (ph < 0) ph += 2.0 * kPi;
    out << format_double(z.real()) << ',' << format_double(z.imag()) << ','
        << format_double(std::abs(z)) << ',' << format_double(ph) << ',';
    if (n < static_cast<int>(rs.residuals.size()))
      out << format_double(rs.residuals[n]);
    out << '\n';
  }
  atomic_write(path, out.str());
}

void write_match_json(const fs::path& path, const MatchReport& report) {
  atomic_write(path, match_to_json(report).dump(2) + "\n");
}

void write_grid_csv(const fs::path& path, const HusimiGrid& grid) {
  std::ostringstream out;
  for (int i = 0; i < grid.n_q; ++i) {
    for (int j = 0; j < grid.n_p; ++j) {
      if (j) out << ',';
      out << format_double(grid.values(i, j));
    }
    out << '\n';
  }
  atomic_write(path, out.str());
}

void write_grid_pgm(const fs::path& path, const HusimiGrid& grid) {
  double vmax = grid.values.maxCoeff();
  if (vmax <= 0.0) vmax = 1.0;
  std::ostringstream out;
  out << "P5\n" << grid.n_q << ' ' << grid.n_p << "\n65535\n";
  // raster rows top-to-bottom = p descending; columns = q ascending
  for (int j = grid.n_p - 1; j >= 0; --j)
    for (int i = 0; i < grid.n_q; ++i) {
      auto v = static_cast<uint16_t>(std::lround(65535.0 * grid.values(i, j) / vmax));
      out.put(static_cast<char>(v >> 8));
      out.put(static_cast<char>(v & 0xff));
    }
  atomic_write(path, out.str(), std::ios::binary);
}

void write_overlay_svg(const fs::path& path, const ResonanceSet& exact,
                       const ResonanceSet& approx, double nu_c) {
  const double S = 420.0, C = S / 2.0, R = S / 2.0 - 10.0;
  auto px = [&](double x) { return C + R * x; };
  auto py = [&](double y) { return C - R * y; };
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << S
      << "\" height=\"" << S << "\" viewBox=\"0 0 " << S << ' ' << S << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<circle cx=\"" << C << "\" cy=\"" << C << "\" r=\"" << R
      << "\" fill=\"none\" stroke=\"black\"/>\n"
      << "<circle cx=\"" << C << "\" cy=\"" << C << "\" r=\"" << R * nu_c
      << "\" fill=\"none\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";
  for (const Complex& z : exact.eigenvalues)
    out << "<circle cx=\"" << px(z.real()) << "\" cy=\"" << py(z.imag())
        << "\" r=\"4\" fill=\"none\" stroke=\"blue\"/>\n";
  for (const Complex& z : approx.eigenvalues) {
    double x = px(z.real()), y = py(z.imag());
    out << "<path d=\"M" << x - 3 << ' ' << y - 3 << " L" << x + 3 << ' '
        << y + 3 << " M" << x - 3 << ' ' << y + 3 << " L" << x + 3 << ' '
        << y - 3 << "\" stroke=\"red\" stroke-width=\"1.4\"/>\n";
  }
  out << "</svg>\n";
  atomic_write(path, out.str());
}

void write_weyl_json(const fs::path& path, const WeylFit& fit) {
  json j = {{"sizes", fit.sizes},
            {"counts", fit.counts},
            {"nu_c", fit.nu_c},
            {"slope", fit.slope},
            {"intercept", fit.intercept},
            {"repeller_dimension", fit.repeller_dimension},
            {"reference_half_dimension", fit.repeller_dimension / 2.0},
            {"counts_monotone", fit.counts_monotone}};
  json residuals = json::array();
  for (size_t i = 0; i < fit.sizes.size(); ++i) {
    double pred = fit.intercept + fit.slope * std::log(double(fit.sizes[i]));
    residuals.push_back(std::log(double(fit.counts[i])) - pred);
  }
  j["log_residuals"] = residuals;
  atomic_write(path, j.dump(2) + "\n");
}

void write_counts_csv(const fs::path& path, const WeylFit& fit) {
  std::ostringstream out;
  out << "N,count\n";
  for (size_t i = 0; i < fit.sizes.size(); ++i)
    out << fit.sizes[i] << ',' << fit.counts[i] << '\n';
  atomic_write(path, out.str());
}

void write_manifest(const fs::path& path, const std::string& config_json,
                    const std::vector<std::pair<std::string, double>>& timings_sec) {
  json timings = json::object();
  for (const auto& [name, sec] : timings_sec) timings[name] = sec;
  json j = {{"tool", "omrl"},
            {"version", "1.0.0"},
            {"config", json::parse(config_json)},
            {"timings_sec", timings}};
  atomic_write(path, j.dump(2) + "\n");
}

std::string cache_hash(const std::string& key) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : key) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
  return buf;
}

MatrixCache::MatrixCache() {
  const char* env = std::getenv("OMRL_CACHE_DIR");
  dir_ = env && *env ? fs::path(env) : fs::path(".omrl-cache");
}

MatrixCache::MatrixCache(fs::path dir) : dir_(std::move(dir)) {}

std::optional<Matrix> MatrixCache::load(const std::string& key) const {
  fs::path file = dir_ / (cache_hash(key) + ".mat");
  std::ifstream in(file, std::ios::binary);
  if (!in) return std::nullopt;
  int64_t rows = 0, cols = 0;
  in.read(reinterpret_cast<char*>(&rows), sizeof(rows));
  in.read(reinterpret_cast<char*>(&cols), sizeof(cols));
  if (!in || rows < 0 || cols < 0 || rows > (1 << 20) || cols > (1 << 20))
    return std::nullopt;
  Matrix m(rows, cols);
  in.read(reinterpret_cast<char*>(m.data()),
          static_cast<std::streamsize>(sizeof(Complex) * rows * cols));
  if (!in) return std::nullopt;
  return m;
}

void MatrixCache::store(const std::string& key, const Matrix& m) const {
  fs::create_directories(dir_);
  fs::path file = dir_ / (cache_hash(key) + ".mat");
  fs::path tmp = file;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw ConfigError("cannot write cache file " + tmp.string());
    int64_t rows = m.rows(), cols = m.cols();
    out.write(reinterpret_cast<const char*>(&rows), sizeof(rows));
    out.write(reinterpret_cast<const char*>(&cols), sizeof(cols));
    out.write(reinterpret_cast<const char*>(m.data()),
              static_cast<std::streamsize>(sizeof(Complex) * rows * cols));
  }
  fs::rename(tmp, file);
}

}  // namespace omrl
