#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "strokex/image.hpp"

namespace strokex {

struct BinarizationParams {
  int window = 15;             // odd side of the local window; 0 = pick from image size
  double k = 0.2;              // sensitivity
  double dynamic_range = 128;  // R, in intensity units

  void validate() const {
    if (window < 3 || window % 2 == 0)
      throw std::invalid_argument("binarization window must be odd and >= 3");
    if (!(k > 0.0 && k < 1.0)) throw std::invalid_argument("binarization k must be in (0,1)");
    if (!(dynamic_range > 0.0)) throw std::invalid_argument("dynamic range must be positive");
  }
};

// Window grows with the image so the default stays useful at high resolutions.
inline int auto_sauvola_window(int width, int height) {
  int w = std::max(15, std::min(width, height) / 50);
  if (w % 2 == 0) ++w;
  return w;
}

inline BinarizationParams resolve_window(BinarizationParams params, const GrayImage& gray) {
  if (params.window == 0) params.window = auto_sauvola_window(gray.width(), gray.height());
  return params;
}

// Local adaptive threshold: pixel p is ink iff
//   intensity(p) < m(p) * (1 + k * (s(p)/R - 1))
// with m, s the mean / standard deviation over the window centered at p,
// clipped at the image border.
inline BinaryImage sauvola_binarize(const GrayImage& gray, BinarizationParams params) {
  params = resolve_window(params, gray);
  params.validate();

  const int w = gray.width(), h = gray.height();
  const int r = params.window / 2;

  // (w+1) x (h+1) summed-area tables of intensity and intensity^2.
  std::vector<std::int64_t> sum(static_cast<size_t>(w + 1) * (h + 1), 0);
  std::vector<std::int64_t> sq(static_cast<size_t>(w + 1) * (h + 1), 0);
  for (int y = 0; y < h; ++y) {
    std::int64_t row_sum = 0, row_sq = 0;
    const size_t above = static_cast<size_t>(y) * (w + 1);
    const size_t here = static_cast<size_t>(y + 1) * (w + 1);
    for (int x = 0; x < w; ++x) {
      const std::int64_t v = gray.at(x, y);
      row_sum += v;
      row_sq += v * v;
      sum[here + x + 1] = sum[above + x + 1] + row_sum;
      sq[here + x + 1] = sq[above + x + 1] + row_sq;
    }
  }
  auto box = [&](const std::vector<std::int64_t>& t, int x0, int y0, int x1, int y1) {
    // Inclusive box [x0,x1] x [y0,y1].
    const size_t stride = w + 1;
    return t[(y1 + 1) * stride + x1 + 1] - t[y0 * stride + x1 + 1] -
           t[(y1 + 1) * stride + x0] + t[y0 * stride + x0];
  };

  BinaryImage out(w, h, 0);
  for (int y = 0; y < h; ++y) {
    const int y0 = std::max(0, y - r), y1 = std::min(h - 1, y + r);
    for (int x = 0; x < w; ++x) {
      const int x0 = std::max(0, x - r), x1 = std::min(w - 1, x + r);
      const double n = static_cast<double>(x1 - x0 + 1) * (y1 - y0 + 1);
      const double mean = static_cast<double>(box(sum, x0, y0, x1, y1)) / n;
      const double var =
          std::max(0.0, static_cast<double>(box(sq, x0, y0, x1, y1)) / n - mean * mean);
      const double stddev = std::sqrt(var);
      const double threshold =
          mean * (1.0 + params.k * (stddev / params.dynamic_range - 1.0));
      if (static_cast<double>(gray.at(x, y)) < threshold) out.at(x, y) = 1;
    }
  }
  return out;
}

}  // namespace strokex
