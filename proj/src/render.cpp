#include "ratdyn/render.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "ratdyn/error.hpp"

namespace ratdyn {

Palette Palette::dynamical() {
  Palette p;
  p.colors.fill(Rgb{0, 0, 0});
  p.colors[BasinMask::kInfinity] = {160, 160, 160};
  p.colors[BasinMask::kW] = {255, 255, 255};
  p.colors[BasinMask::kUndecided] = {128, 0, 0};
  return p;
}

Palette Palette::nine_color() {
  Palette p;
  p.colors.fill(Rgb{0, 0, 0});
  const Rgb table[10] = {{0xA0, 0xA0, 0xA0}, {0xFF, 0xD7, 0x00}, {0xFF, 0x45, 0x00}, {0x87, 0xCE, 0xEB},
                         {0xFF, 0xFF, 0xFF}, {0x1E, 0x90, 0xFF}, {0x32, 0xCD, 0x32}, {0x93, 0x70, 0xDB},
                         {0x00, 0x00, 0x00}, {0x80, 0x00, 0x00}};
  for (int i = 0; i < 10; ++i) p.colors[i] = table[i];
  return p;
}

Rgb Image::at(int i, int j) const {
  const std::size_t k = 3 * (static_cast<std::size_t>(j) * width + i);
  return {rgb[k], rgb[k + 1], rgb[k + 2]};
}

namespace {

void put(Image& img, int i, int j, Rgb c) {
  const std::size_t k = 3 * (static_cast<std::size_t>(j) * img.width + i);
  img.rgb[k] = c.r;
  img.rgb[k + 1] = c.g;
  img.rgb[k + 2] = c.b;
}

}  // namespace

Image mask_image(const BasinMask& mask, const Palette& palette) {
  Image img{mask.labels.width, mask.labels.height, {}};
  img.rgb.resize(3 * static_cast<std::size_t>(img.width) * img.height);
  for (int j = 0; j < img.height; ++j)
    for (int i = 0; i < img.width; ++i) put(img, i, j, palette.colors[mask.labels.at(i, j)]);
  return img;
}

Image scan_image(const NineColorMap& map, const Palette& palette) {
  const int nk = map.grid.nk, nw = map.grid.nw;
  Image img{nk, nw, {}};
  img.rgb.resize(3 * static_cast<std::size_t>(nk) * nw);
  for (int j = 0; j < nw; ++j) {
    for (int i = 0; i < nk; ++i) {
      const int code = map.at(i, nw - 1 - j).code();
      put(img, i, j, palette.colors[code < 0 ? Palette::kDegenerate : code]);
    }
  }
  return img;
}

std::string encode_ppm(const Image& img) {
  std::string s = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  s.append(reinterpret_cast<const char*>(img.rgb.data()), img.rgb.size());
  return s;
}

std::string encode_pgm(const Raster<std::uint8_t>& raster) {
  std::string s = "P5\n" + std::to_string(raster.width) + " " + std::to_string(raster.height) + "\n255\n";
  s.append(reinterpret_cast<const char*>(raster.data.data()), raster.data.size());
  return s;
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoError, "cannot open " + path + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorKind::IoError, "write to " + path + " failed");
}

void write_ppm(const Image& img, const std::string& path) { write_file(path, encode_ppm(img)); }

BasinMask render_julia(const MapParams& p, std::optional<Complex> w, const Window& window, int resolution,
                       const Palette& palette, const std::string& out_path, const MaskConfig& cfg) {
  window.validate();
  BasinMask mask = basin_mask(p, w, window, resolution, cfg);
  write_ppm(mask_image(mask, palette), out_path);
  return mask;
}

void render_scan(const NineColorMap& map, const Palette& palette, const std::string& out_path) {
  write_ppm(scan_image(map, palette), out_path);
}

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

std::string output_name(const std::string& kind, const std::string& k, const std::string& w, int resolution) {
  return kind + "_k" + k + "_w" + w + "_" + std::to_string(resolution) + ".ppm";
}

std::string output_path(const std::string& name) {
  const char* dir = std::getenv("RATDYN_OUT_DIR");
  if (!dir || !*dir) return name;
  return (std::filesystem::path(dir) / name).string();
}

}  // namespace ratdyn
