#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lsmat/shapes.hpp"
#include "lsmat/solver.hpp"
#include "lsmat/types.hpp"

namespace lsmat {

inline constexpr const char* kSphereCsvSchema = "lsmat-spheres v1";

/// Dimension-erased sphere record as stored in the CSV.
struct SphereRecord {
  int pin_index = -1;
  double cx = 0.0, cy = 0.0, cz = 0.0;
  double r = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct SphereFile {
  int dim = 2;
  std::vector<SphereRecord> records;

  std::vector<Vec2> centers2() const;
  std::vector<Vec3> centers3() const;
};

/// CSV layout: schema comment, then header
/// `pin_index,cx,cy[,cz],r,iterations,converged`, one row per atom.
template <int D>
void save_spheres_csv(const MedialResult<D>& result, const std::string& path);

SphereFile load_spheres_csv(const std::string& path);

/// Polygon text format: `x y` per line, `#` comments, blank lines ignored.
/// A `# loop` comment starts a new loop (multi-loop shapes such as rings).
void save_polygon(const std::vector<Loop>& loops, const std::string& path);
std::vector<Loop> load_polygon(const std::string& path);

/// FNV-1a over the raw file bytes.
std::uint64_t file_checksum(const std::string& path);

}  // namespace lsmat
