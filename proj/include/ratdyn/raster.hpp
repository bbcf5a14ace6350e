#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "ratdyn/poly.hpp"

namespace ratdyn {

/// Axis-aligned rectangle of the plane, given by two corners.
struct Window {
  double re_min = -2.0;
  double im_min = -2.0;
  double re_max = 2.0;
  double im_max = 2.0;

  static Window square(Complex centre, double half_width);
  void validate() const;
  double width() const { return re_max - re_min; }
  double height() const { return im_max - im_min; }
  bool contains(Complex z) const;
};

/// Pixel geometry: width × height pixels; row 0 is the top (max imaginary part).
/// Pixel (i, j) has centre re_min + (i + ½)·dx, im_max − (j + ½)·dy.
struct Grid {
  Window window;
  int width = 0;
  int height = 0;

  static Grid square(const Window& w, int resolution);
  void validate() const;
  double dx() const { return window.width() / width; }
  double dy() const { return window.height() / height; }
  Complex centre(int i, int j) const;
  /// Pixel containing z, if inside the window.
  std::optional<std::pair<int, int>> pixel_of(Complex z) const;
  Grid refined(int factor) const { return Grid{window, width * factor, height * factor}; }
};

template <class T>
struct Raster {
  int width = 0;
  int height = 0;
  std::vector<T> data;

  Raster() = default;
  Raster(int w, int h, T fill = T{}) : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}

  T& at(int i, int j) { return data[static_cast<std::size_t>(j) * width + i]; }
  const T& at(int i, int j) const { return data[static_cast<std::size_t>(j) * width + i]; }
  bool inside(int i, int j) const { return i >= 0 && j >= 0 && i < width && j < height; }
};

enum class Connectivity { Four, Eight };

struct ComponentLabels {
  Raster<std::int32_t> labels;  ///< -1 outside the mask
  int count = 0;
  std::vector<std::int64_t> sizes;
  std::vector<Complex> centroids;  ///< in pixel coordinates (i, j)
};

/// Connected components of the non-zero pixels, numbered in row-major order
/// of their first pixel.
ComponentLabels label_components(const Raster<std::uint8_t>& mask, Connectivity conn);

/// Runs fn(row) for every row, spreading rows over `jobs` threads. Callers
/// write into row-indexed storage, so results do not depend on `jobs`.
void parallel_rows(int rows, int jobs, const std::function<void(int)>& fn);

}  // namespace ratdyn
