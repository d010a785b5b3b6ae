#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "strokex/geometry.hpp"

namespace strokex {

template <typename T>
class Image {
 public:
  Image() = default;
  Image(int width, int height, T fill = T{})
      : width_(width), height_(height), data_(static_cast<size_t>(width) * height, fill) {
    if (width < 1 || height < 1) throw std::invalid_argument("image dimensions must be positive");
  }

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return data_.empty(); }
  size_t size() const { return data_.size(); }

  bool in_bounds(int x, int y) const {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  T& at(int x, int y) { return data_[static_cast<size_t>(y) * width_ + x]; }
  const T& at(int x, int y) const { return data_[static_cast<size_t>(y) * width_ + x]; }
  T& at(const Point& p) { return at(p.x, p.y); }
  const T& at(const Point& p) const { return at(p.x, p.y); }

  // Out-of-bounds reads yield `fallback`.
  T at_or(int x, int y, T fallback) const {
    return in_bounds(x, y) ? at(x, y) : fallback;
  }

  std::vector<T>& pixels() { return data_; }
  const std::vector<T>& pixels() const { return data_; }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

// Per-pixel luminance in [0,255].
using GrayImage = Image<std::uint8_t>;
// 0 = background, nonzero = ink. Ink is assumed darker than background.
using BinaryImage = Image<std::uint8_t>;
// A BinaryImage whose foreground is (mostly) unit-width.
using SkeletonImage = BinaryImage;
// Estimated stroke width per foreground pixel; 0 on background.
using StrokeWidthMap = Image<std::int32_t>;

// Interleaved 8-bit samples, `channels` per pixel.
struct ColorImage {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<std::uint8_t> samples;

  bool empty() const { return samples.empty(); }
};

// Channel mean (optionally weighted), rounded to nearest. Single-channel
// input passes through unchanged.
inline GrayImage to_grayscale(const ColorImage& image, std::span<const double> weights = {}) {
  if (image.empty() || image.channels < 1)
    throw std::invalid_argument("to_grayscale: empty image");
  if (!weights.empty() && static_cast<int>(weights.size()) != image.channels)
    throw std::invalid_argument("to_grayscale: weight count does not match channel count");

  GrayImage gray(image.width, image.height);
  const int c = image.channels;
  if (c == 1 && weights.empty()) {
    std::copy(image.samples.begin(), image.samples.end(), gray.pixels().begin());
    return gray;
  }

  double wsum = 0.0;
  std::vector<double> w(weights.begin(), weights.end());
  if (w.empty()) w.assign(c, 1.0);
  for (double v : w) wsum += v;
  if (wsum <= 0.0) throw std::invalid_argument("to_grayscale: weights must sum to a positive value");

  const std::uint8_t* src = image.samples.data();
  for (size_t i = 0; i < gray.size(); ++i, src += c) {
    double acc = 0.0;
    for (int ch = 0; ch < c; ++ch) acc += w[ch] * src[ch];
    const long v = std::lround(acc / wsum);
    gray.pixels()[i] = static_cast<std::uint8_t>(std::clamp(v, 0L, 255L));
  }
  return gray;
}

inline GrayImage invert(const GrayImage& gray) {
  GrayImage out = gray;
  for (auto& v : out.pixels()) v = static_cast<std::uint8_t>(255 - v);
  return out;
}

inline size_t count_foreground(const BinaryImage& img) {
  size_t n = 0;
  for (auto v : img.pixels()) n += v != 0;
  return n;
}

}  // namespace strokex
