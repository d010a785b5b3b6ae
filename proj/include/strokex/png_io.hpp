#pragma once

#include <png.h>

#include <cstring>
#include <stdexcept>
#include <string>

#include "strokex/image.hpp"

namespace strokex {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Decodes any PNG to interleaved 8-bit RGB; alpha is composited over white.
inline ColorImage read_png(const std::string& path) {
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;

  if (!png_image_begin_read_from_file(&png, path.c_str()))
    throw IoError("failed to read PNG '" + path + "': " + png.message);

  png.format = PNG_FORMAT_RGB;
  ColorImage out;
  out.width = static_cast<int>(png.width);
  out.height = static_cast<int>(png.height);
  out.channels = 3;
  out.samples.resize(PNG_IMAGE_SIZE(png));

  const png_color white{255, 255, 255};
  if (!png_image_finish_read(&png, &white, out.samples.data(), 0, nullptr)) {
    png_image_free(&png);
    throw IoError("failed to decode PNG '" + path + "': " + png.message);
  }
  return out;
}

inline void write_png(const std::string& path, const GrayImage& image) {
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(image.width());
  png.height = static_cast<png_uint_32>(image.height());
  png.format = PNG_FORMAT_GRAY;

  if (!png_image_write_to_file(&png, path.c_str(), 0, image.pixels().data(), 0, nullptr))
    throw IoError("failed to write PNG '" + path + "': " + png.message);
}

inline void write_png(const std::string& path, const ColorImage& image) {
  if (image.channels != 3) throw std::invalid_argument("write_png: expected 3-channel image");
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(image.width);
  png.height = static_cast<png_uint_32>(image.height);
  png.format = PNG_FORMAT_RGB;

  if (!png_image_write_to_file(&png, path.c_str(), 0, image.samples.data(), 0, nullptr))
    throw IoError("failed to write PNG '" + path + "': " + png.message);
}

}  // namespace strokex
