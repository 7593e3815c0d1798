#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "omrl/analysis.hpp"
#include "omrl/spectral.hpp"

namespace omrl {

/// 17-significant-digit decimal rendering; identical inputs give
/// byte-identical artifacts.
std::string format_double(double x);

/// Spectrum CSV, columns re,im,modulus,phase,residual (residual blank when
/// the set carries none, e.g. lifted scar-method spectra).
void write_spectrum_csv(const std::filesystem::path& path, const ResonanceSet& rs);

void write_match_json(const std::filesystem::path& path, const MatchReport& report);

/// Grid as a CSV matrix, rows = q cells, columns = p cells.
void write_grid_csv(const std::filesystem::path& path, const HusimiGrid& grid);

/// 16-bit PGM, max-scaled, origin at the lower-left (q rightward, p upward).
void write_grid_pgm(const std::filesystem::path& path, const HusimiGrid& grid);

/// Overlay scatter of the exact (circles) and scar-method (crosses) spectra
/// in the complex plane, with the unit and nu_c circles.
void write_overlay_svg(const std::filesystem::path& path, const ResonanceSet& exact,
                       const ResonanceSet& approx, double nu_c);

void write_weyl_json(const std::filesystem::path& path, const WeylFit& fit);
void write_counts_csv(const std::filesystem::path& path, const WeylFit& fit);

/// Run manifest: config echo, library versions, wall-clock timings.
void write_manifest(const std::filesystem::path& path, const std::string& config_json,
                    const std::vector<std::pair<std::string, double>>& timings_sec);

/// Disk cache for dense complex matrices keyed by a config string.
/// Location: $OMRL_CACHE_DIR, else ".omrl-cache" under the current
/// directory. Writes are atomic (temp file + rename).
class MatrixCache {
 public:
  MatrixCache();  // resolves the directory from the environment
  explicit MatrixCache(std::filesystem::path dir);

  std::optional<Matrix> load(const std::string& key) const;
  void store(const std::string& key, const Matrix& m) const;

  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
};

/// FNV-1a 64-bit hash of the canonical key string, rendered as hex.
std::string cache_hash(const std::string& key);

}  // namespace omrl
