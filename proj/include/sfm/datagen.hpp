#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sfm/element_set.hpp"
#include "sfm/functions.hpp"

namespace sfm::datagen {

// ------------------------------------------------------------- two moons --

struct TwoMoonsDataset {
  Eigen::MatrixXd points;                    // p x 2
  std::vector<int> moon_id;                  // 1 or 2 per point
  std::vector<std::pair<int, int>> labels;   // (index, +1/-1), ascending index
  uint64_t seed = 0;
};

// Two interleaved semicircle clusters: moon centers (-0.5, 1) and (0.5, -1),
// radius drawn from Normal(2, 0.5^2), angle uniform on [-pi/2, pi/2] for
// moon 1 and [pi/2, 3pi/2] for moon 2, moon chosen with equal probability.
// p0 points are labeled (+1 for moon 1, -1 for moon 2), chosen uniformly
// without replacement.  Bit-reproducible for a fixed seed.
TwoMoonsDataset gen_two_moons(int p, int p0, uint64_t seed);

// --------------------------------------------------------------- images --

struct GridImage {
  int height = 0, width = 0, channels = 1; // channels: 1 (gray) or 3 (rgb)
  std::vector<double> values;              // row-major, channel-interleaved, in [0,1]

  int pixel_count() const { return height * width; }
  double value(int r, int c, int ch) const {
    return values[(static_cast<size_t>(r) * width + c) * channels + ch];
  }
};

// Pixels in row-major order, edges to all 8 neighbors (each once, lower
// index first), weight exp(-squared distance of the channel vectors).
// Edge count: H(W-1) + (H-1)W + 2(H-1)(W-1).
functions::WeightedGraph grid_graph_8(const GridImage& image);

// Unary potentials from two seed sets: fit one diagonal Gaussian per set
// over channel values; u_j = strength * (NLL under foreground - NLL under
// background), so foreground-looking pixels get negative values and are
// attracted into the minimizer.  Seed pixels are pinned to -+10 * strength.
Eigen::VectorXd seed_unary(const GridImage& image, const ElementSet& fg_seeds,
                           const ElementSet& bg_seeds, double strength);

// A noisy bright disk on a dark background; deterministic per seed.
GridImage synthetic_disk_image(int height, int width, double noise, uint64_t seed);

// ------------------------------------------------------------------ I/O --

// PGM (P2/P5) and PPM (P3/P6), 8- or 16-bit, values scaled to [0,1].
GridImage load_pnm(const std::string& path);
void save_pgm(const GridImage& image, const std::string& path);

void write_points_csv(const std::string& path, const Eigen::MatrixXd& points);
Eigen::MatrixXd read_points_csv(const std::string& path);
void write_labels_csv(const std::string& path,
                      const std::vector<std::pair<int, int>>& labels);
std::vector<std::pair<int, int>> read_labels_csv(const std::string& path);
void write_vector_csv(const std::string& path, const Eigen::VectorXd& values,
                      const std::string& header);
Eigen::VectorXd read_vector_csv(const std::string& path);

} // namespace sfm::datagen
