#include "lsmat/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "lsmat/error.hpp"

namespace lsmat {

std::vector<Vec2> SphereFile::centers2() const {
  std::vector<Vec2> out;
  out.reserve(records.size());
  for (const auto& rec : records) out.push_back(Vec2(rec.cx, rec.cy));
  return out;
}

std::vector<Vec3> SphereFile::centers3() const {
  std::vector<Vec3> out;
  out.reserve(records.size());
  for (const auto& rec : records) out.push_back(Vec3(rec.cx, rec.cy, rec.cz));
  return out;
}

template <int D>
void save_spheres_csv(const MedialResult<D>& result, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << "# " << kSphereCsvSchema << " dim=" << D << "\n";
  out << (D == 2 ? "pin_index,cx,cy,r,iterations,converged\n"
                 : "pin_index,cx,cy,cz,r,iterations,converged\n");
  char buf[64];
  for (const auto& atom : result.atoms) {
    out << atom.pin_index;
    for (int k = 0; k < D; ++k) {
      std::snprintf(buf, sizeof(buf), ",%.17g", atom.sphere.center[k]);
      out << buf;
    }
    std::snprintf(buf, sizeof(buf), ",%.17g", atom.sphere.radius);
    out << buf << ',' << atom.iterations_run << ',' << (atom.converged ? 1 : 0) << "\n";
  }
  if (!out) throw Error("write failed for '" + path + "'");
}

template void save_spheres_csv<2>(const MedialResult<2>&, const std::string&);
template void save_spheres_csv<3>(const MedialResult<3>&, const std::string&);

SphereFile load_spheres_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty sphere file", 1);
  const std::string expected = std::string("# ") + kSphereCsvSchema;
  if (line.rfind(expected, 0) != 0)
    throw ParseError("sphere CSV schema mismatch: got '" + line + "'", 1);
  SphereFile file;
  const auto dim_pos = line.find("dim=");
  if (dim_pos == std::string::npos) throw ParseError("missing dim in schema line", 1);
  file.dim = std::atoi(line.c_str() + dim_pos + 4);
  if (file.dim != 2 && file.dim != 3) throw ParseError("unsupported dim in sphere CSV", 1);
  if (!std::getline(in, line)) throw ParseError("missing column header", 2);

  int line_no = 2;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    SphereRecord rec;
    char comma;
    bool ok = static_cast<bool>(ls >> rec.pin_index >> comma >> rec.cx >> comma >> rec.cy);
    if (ok && file.dim == 3) ok = static_cast<bool>(ls >> comma >> rec.cz);
    int conv = 0;
    if (ok) ok = static_cast<bool>(ls >> comma >> rec.r >> comma >> rec.iterations >> comma >> conv);
    if (!ok) throw ParseError("malformed sphere CSV row", line_no);
    rec.converged = conv != 0;
    file.records.push_back(rec);
  }
  return file;
}

void save_polygon(const std::vector<Loop>& loops, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  char buf[80];
  for (const Loop& loop : loops) {
    out << "# loop\n";
    for (const Vec2& v : loop) {
      std::snprintf(buf, sizeof(buf), "%.17g %.17g\n", v.x(), v.y());
      out << buf;
    }
  }
  if (!out) throw Error("write failed for '" + path + "'");
}

std::vector<Loop> load_polygon(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::vector<Loop> loops;
  Loop current;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      std::string tag = line.substr(first + 1);
      const auto a = tag.find_first_not_of(" \t\r");
      const auto b = tag.find_last_not_of(" \t\r");
      if (a != std::string::npos && tag.substr(a, b - a + 1) == "loop" && !current.empty()) {
        loops.push_back(std::move(current));
        current.clear();
      }
      continue;
    }
    std::istringstream ls(line);
    double x = 0.0, y = 0.0;
    if (!(ls >> x >> y)) throw ParseError("expected two coordinates", line_no);
    std::string extra;
    if (ls >> extra) throw ParseError("trailing fields in polygon line", line_no);
    current.push_back(Vec2(x, y));
  }
  if (!current.empty()) loops.push_back(std::move(current));
  if (loops.empty()) throw ParseError("polygon file has no vertices");
  return loops;
}

std::uint64_t file_checksum(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "' for checksum");
  std::uint64_t h = 1469598103934665603ULL;
  char buf[4096];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    const std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ULL;
    }
    if (got < static_cast<std::streamsize>(sizeof(buf))) break;
  }
  return h;
}

}  // namespace lsmat
