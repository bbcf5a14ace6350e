#include "ratdyn/raster.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "ratdyn/error.hpp"

namespace ratdyn {

Window Window::square(Complex centre, double half_width) {
  return Window{centre.real() - half_width, centre.imag() - half_width, centre.real() + half_width,
                centre.imag() + half_width};
}

void Window::validate() const {
  if (!std::isfinite(re_min) || !std::isfinite(re_max) || !std::isfinite(im_min) || !std::isfinite(im_max))
    throw Error(ErrorKind::Validation, "window corners must be finite");
  if (!(re_max > re_min) || !(im_max > im_min)) throw Error(ErrorKind::Validation, "window must have positive extent");
}

bool Window::contains(Complex z) const {
  return z.real() >= re_min && z.real() <= re_max && z.imag() >= im_min && z.imag() <= im_max;
}

Grid Grid::square(const Window& w, int resolution) { return Grid{w, resolution, resolution}; }

void Grid::validate() const {
  window.validate();
  if (width < 1 || height < 1) throw Error(ErrorKind::Validation, "grid needs at least one pixel");
}

Complex Grid::centre(int i, int j) const {
  return {window.re_min + (i + 0.5) * dx(), window.im_max - (j + 0.5) * dy()};
}

std::optional<std::pair<int, int>> Grid::pixel_of(Complex z) const {
  if (!window.contains(z)) return std::nullopt;
  const int i = std::min(width - 1, static_cast<int>((z.real() - window.re_min) / dx()));
  const int j = std::min(height - 1, static_cast<int>((window.im_max - z.imag()) / dy()));
  return std::pair{i, j};
}

ComponentLabels label_components(const Raster<std::uint8_t>& mask, Connectivity conn) {
  ComponentLabels out;
  out.labels = Raster<std::int32_t>(mask.width, mask.height, -1);
  static const int four[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  static const int eight[8][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
  const int n_nb = conn == Connectivity::Four ? 4 : 8;
  const auto& nb = conn == Connectivity::Four ? four : eight;

  std::vector<std::pair<int, int>> stack;
  for (int j = 0; j < mask.height; ++j) {
    for (int i = 0; i < mask.width; ++i) {
      if (!mask.at(i, j) || out.labels.at(i, j) >= 0) continue;
      const int id = out.count++;
      std::int64_t size = 0;
      double si = 0.0, sj = 0.0;
      stack.clear();
      stack.emplace_back(i, j);
      out.labels.at(i, j) = id;
      while (!stack.empty()) {
        auto [x, y] = stack.back();
        stack.pop_back();
        ++size;
        si += x;
        sj += y;
        for (int k = 0; k < n_nb; ++k) {
          const int nx = x + nb[k][0], ny = y + nb[k][1];
          if (!mask.inside(nx, ny) || !mask.at(nx, ny) || out.labels.at(nx, ny) >= 0) continue;
          out.labels.at(nx, ny) = id;
          stack.emplace_back(nx, ny);
        }
      }
      out.sizes.push_back(size);
      out.centroids.emplace_back(si / size, sj / size);
    }
  }
  return out;
}

void parallel_rows(int rows, int jobs, const std::function<void(int)>& fn) {
  if (jobs <= 1 || rows <= 1) {
    for (int r = 0; r < rows; ++r) fn(r);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const int r = next.fetch_add(1);
      if (r >= rows) return;
      try {
        fn(r);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(rows);
        return;
      }
    }
  };
  std::vector<std::thread> threads;
  const int n = std::min(jobs, rows);
  threads.reserve(n);
  for (int t = 0; t < n; ++t) threads.emplace_back(worker);
  for (auto& th : threads) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace ratdyn
