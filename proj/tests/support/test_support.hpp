#ifndef PWAHIER_TEST_SUPPORT_HPP
#define PWAHIER_TEST_SUPPORT_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pwahier/linalg.hpp"
#include "pwahier/model_file.hpp"
#include "pwahier/pipeline.hpp"
#include "pwahier/polytope.hpp"

namespace pwahier::test {

inline std::filesystem::path model_path(const std::string& name) {
  return std::filesystem::path(PWAHIER_MODELS_DIR) / name;
}

inline ModelFile load_case(int which) {
  return load_model(model_path("case" + std::to_string(which) + ".model"));
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("pwahier_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo = -1.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Matrix random_matrix(Rng& rng, std::size_t r, std::size_t c, double scale = 1.0) {
  Matrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = scale * uniform(rng);
  return m;
}

inline Vector random_vector(Rng& rng, std::size_t n, double scale = 1.0) {
  Vector v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = scale * uniform(rng);
  return v;
}

inline Matrix random_symmetric(Rng& rng, std::size_t n) {
  return random_matrix(rng, n, n).symmetric_part();
}

inline Vector random_unit(Rng& rng, std::size_t n) {
  std::normal_distribution<double> normal;
  Vector v(n);
  double nrm = 0.0;
  while (nrm < 1e-8) {
    for (std::size_t i = 0; i < n; ++i) v[i] = normal(rng);
    nrm = v.norm();
  }
  return (1.0 / nrm) * v;
}

/// Orthonormal matrix from Gram-Schmidt on a random square.
inline Matrix random_orthonormal(Rng& rng, std::size_t n) {
  Matrix q(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    Vector v = random_unit(rng, n);
    for (std::size_t k = 0; k < c; ++k) {
      const Vector qk = q.col_vector(k);
      v -= qk.dot(v) * qk;
    }
    v *= 1.0 / v.norm();
    for (std::size_t r = 0; r < n; ++r) q(r, c) = v[r];
  }
  return q;
}

/// Convex polygon as the hull of random points, in E·x ≥ f form.
inline Polyhedron random_polygon(Rng& rng, std::size_t points = 6, double scale = 1.0) {
  std::vector<std::array<double, 2>> pts(points);
  for (auto& p : pts) p = {scale * uniform(rng), scale * uniform(rng)};
  std::sort(pts.begin(), pts.end());
  auto cross = [](const auto& o, const auto& a, const auto& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
  };
  std::vector<std::array<double, 2>> hull(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  Matrix e(hull.size(), 2);
  Vector f(hull.size());
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const auto& a = hull[i];
    const auto& b = hull[(i + 1) % hull.size()];
    // counter-clockwise hull: the interior lies to the left of a→b
    e(i, 0) = -(b[1] - a[1]);
    e(i, 1) = b[0] - a[0];
    f[i] = e(i, 0) * a[0] + e(i, 1) * a[1];
  }
  return Polyhedron(e, f);
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) { return (a - b).max_abs(); }
inline double max_abs_diff(const Vector& a, const Vector& b) { return (a - b).norm_inf(); }

}  // namespace pwahier::test

#endif  // PWAHIER_TEST_SUPPORT_HPP
