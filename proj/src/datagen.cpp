#include "sfm/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "sfm/errors.hpp"
#include "sfm/rng.hpp"

namespace sfm::datagen {

// ------------------------------------------------------------- two moons --

TwoMoonsDataset gen_two_moons(int p, int p0, uint64_t seed) {
  if (p < 0 || p0 < 0 || p0 > p)
    throw InvalidCounts("need 0 <= p0 <= p, got p=" + std::to_string(p) +
                        " p0=" + std::to_string(p0));
  TwoMoonsDataset ds;
  ds.seed = seed;
  ds.points.resize(p, 2);
  ds.moon_id.resize(p);

  Rng rng(seed);
  const double half_pi = std::numbers::pi / 2.0;
  for (int j = 0; j < p; ++j) {
    const bool first = rng.uniform() < 0.5;
    const double cx = first ? -0.5 : 0.5;
    const double cy = first ? 1.0 : -1.0;
    const double gamma = rng.normal(2.0, 0.5);
    const double theta =
        first ? rng.uniform(-half_pi, half_pi) : rng.uniform(half_pi, 3.0 * half_pi);
    ds.points(j, 0) = cx + gamma * std::cos(theta);
    ds.points(j, 1) = cy + gamma * std::sin(theta);
    ds.moon_id[j] = first ? 1 : 2;
  }

  // Partial Fisher-Yates for the labeled subset, then ascending for output.
  std::vector<int> idx(p);
  for (int j = 0; j < p; ++j) idx[j] = j;
  for (int k = 0; k < p0; ++k) {
    int t = rng.uniform_int(k, p - 1);
    std::swap(idx[k], idx[t]);
  }
  std::vector<int> chosen(idx.begin(), idx.begin() + p0);
  std::sort(chosen.begin(), chosen.end());
  for (int j : chosen) ds.labels.emplace_back(j, ds.moon_id[j] == 1 ? 1 : -1);
  return ds;
}

// --------------------------------------------------------------- images --

functions::WeightedGraph grid_graph_8(const GridImage& image) {
  const int h = image.height, w = image.width, ch = image.channels;
  if (h < 1 || w < 1 || (ch != 1 && ch != 3))
    throw PreconditionViolated("image must have positive size and 1 or 3 channels");
  auto id = [w](int r, int c) { return r * w + c; };
  auto weight = [&](int r0, int c0, int r1, int c1) {
    double d2 = 0.0;
    for (int k = 0; k < ch; ++k) {
      double d = image.value(r0, c0, k) - image.value(r1, c1, k);
      d2 += d * d;
    }
    return std::exp(-d2);
  };
  std::vector<functions::WeightedEdge> edges;
  edges.reserve(static_cast<size_t>(h) * (w - 1) + static_cast<size_t>(h - 1) * w +
                2 * static_cast<size_t>(h - 1) * (w - 1));
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      if (c + 1 < w) edges.push_back({id(r, c), id(r, c + 1), weight(r, c, r, c + 1)});
      if (r + 1 < h) edges.push_back({id(r, c), id(r + 1, c), weight(r, c, r + 1, c)});
      if (r + 1 < h && c + 1 < w)
        edges.push_back({id(r, c), id(r + 1, c + 1), weight(r, c, r + 1, c + 1)});
      if (r + 1 < h && c > 0)
        edges.push_back({id(r, c), id(r + 1, c - 1), weight(r, c, r + 1, c - 1)});
    }
  return functions::WeightedGraph(h * w, std::move(edges));
}

Eigen::VectorXd seed_unary(const GridImage& image, const ElementSet& fg_seeds,
                           const ElementSet& bg_seeds, double strength) {
  const int p = image.pixel_count(), ch = image.channels;
  if (fg_seeds.ground_size() != p || bg_seeds.ground_size() != p)
    throw PreconditionViolated("seed sets must live on the pixel ground set");
  if (fg_seeds.empty() || bg_seeds.empty())
    throw EmptySeeds("both seed sets must be nonempty");
  if (fg_seeds.intersects(bg_seeds))
    throw PreconditionViolated("seed sets overlap");

  struct DiagGaussian {
    std::vector<double> mean, var;
  };
  auto fit = [&](const ElementSet& seeds) {
    DiagGaussian g{std::vector<double>(ch, 0.0), std::vector<double>(ch, 0.0)};
    const auto members = seeds.members();
    for (int j : members)
      for (int k = 0; k < ch; ++k) g.mean[k] += image.values[j * ch + k];
    for (int k = 0; k < ch; ++k) g.mean[k] /= members.size();
    for (int j : members)
      for (int k = 0; k < ch; ++k) {
        double d = image.values[j * ch + k] - g.mean[k];
        g.var[k] += d * d;
      }
    // Variance floor keeps constant seed regions from degenerating.
    for (int k = 0; k < ch; ++k)
      g.var[k] = std::max(g.var[k] / members.size(), 1e-4);
    return g;
  };
  const DiagGaussian fg = fit(fg_seeds), bg = fit(bg_seeds);

  auto nll = [&](const DiagGaussian& g, int j) {
    double v = 0.0;
    for (int k = 0; k < ch; ++k) {
      double d = image.values[j * ch + k] - g.mean[k];
      v += 0.5 * (d * d / g.var[k] + std::log(2.0 * std::numbers::pi * g.var[k]));
    }
    return v;
  };

  Eigen::VectorXd u(p);
  for (int j = 0; j < p; ++j) u[j] = strength * (nll(fg, j) - nll(bg, j));
  for (int j : fg_seeds.members()) u[j] = -10.0 * strength;
  for (int j : bg_seeds.members()) u[j] = 10.0 * strength;
  return u;
}

GridImage synthetic_disk_image(int height, int width, double noise, uint64_t seed) {
  if (height < 1 || width < 1)
    throw InvalidCounts("image dimensions must be positive");
  GridImage img;
  img.height = height;
  img.width = width;
  img.channels = 1;
  img.values.resize(static_cast<size_t>(height) * width);
  Rng rng(seed);
  const double cy = (height - 1) / 2.0, cx = (width - 1) / 2.0;
  const double radius = std::min(height, width) / 3.0;
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c) {
      const double d = std::hypot(r - cy, c - cx);
      double v = (d <= radius ? 0.75 : 0.25) + noise * rng.normal();
      img.values[static_cast<size_t>(r) * width + c] = std::clamp(v, 0.0, 1.0);
    }
  return img;
}

// ------------------------------------------------------------------ I/O --

void write_points_csv(const std::string& path, const Eigen::MatrixXd& points) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot open " + path + " for writing");
  out << "x,y\n";
  char buf[80];
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", points(i, 0), points(i, 1));
    out << buf;
  }
}

Eigen::MatrixXd read_points_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("x,y", 0) != 0)
    throw InvalidInput(path + ": expected header 'x,y'");
  std::vector<std::pair<double, double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double x, y;
    if (std::sscanf(line.c_str(), "%lf,%lf", &x, &y) != 2)
      throw InvalidInput(path + ": bad row '" + line + "'");
    rows.emplace_back(x, y);
  }
  Eigen::MatrixXd points(rows.size(), 2);
  for (size_t i = 0; i < rows.size(); ++i) {
    points(i, 0) = rows[i].first;
    points(i, 1) = rows[i].second;
  }
  return points;
}

void write_labels_csv(const std::string& path,
                      const std::vector<std::pair<int, int>>& labels) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot open " + path + " for writing");
  out << "index,label\n";
  for (auto [j, y] : labels) out << j << ',' << y << '\n';
}

std::vector<std::pair<int, int>> read_labels_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("index,label", 0) != 0)
    throw InvalidInput(path + ": expected header 'index,label'");
  std::vector<std::pair<int, int>> labels;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    int j, y;
    if (std::sscanf(line.c_str(), "%d,%d", &j, &y) != 2)
      throw InvalidInput(path + ": bad row '" + line + "'");
    labels.emplace_back(j, y);
  }
  return labels;
}

void write_vector_csv(const std::string& path, const Eigen::VectorXd& values,
                      const std::string& header) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot open " + path + " for writing");
  out << header << '\n';
  char buf[40];
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g\n", values[i]);
    out << buf;
  }
}

Eigen::VectorXd read_vector_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw InvalidInput(path + ": empty file");
  std::vector<double> vals;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double v;
    if (std::sscanf(line.c_str(), "%lf", &v) != 1)
      throw InvalidInput(path + ": bad row '" + line + "'");
    vals.push_back(v);
  }
  return Eigen::Map<Eigen::VectorXd>(vals.data(), vals.size());
}

} // namespace sfm::datagen
