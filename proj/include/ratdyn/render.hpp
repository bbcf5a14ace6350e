#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ratdyn/exotic.hpp"
#include "ratdyn/scan.hpp"

namespace ratdyn {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  bool operator==(const Rgb&) const = default;
};

/// Colour per code. Dynamical codes follow BasinMask; scan codes are 0..8 with
/// index 9 for degenerate cells.
struct Palette {
  std::array<Rgb, 256> colors{};

  /// W white, ∞ grey (160,160,160), other cycles black, undecided dark red (128,0,0).
  static Palette dynamical();
  /// Nine colours, indexed by 3·u_fate + v_fate with fates ordered inf, w, other:
  /// 0 #A0A0A0, 1 #FFD700, 2 #FF4500, 3 #87CEEB, 4 #FFFFFF, 5 #1E90FF, 6 #32CD32,
  /// 7 #9370DB, 8 #000000; degenerate (index 9) #800000.
  static Palette nine_color();
  static constexpr int kDegenerate = 9;
};

struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;  ///< row-major, top row first

  Rgb at(int i, int j) const;
};

Image mask_image(const BasinMask& mask, const Palette& palette = Palette::dynamical());
/// k increases to the right, w increases upwards.
Image scan_image(const NineColorMap& map, const Palette& palette = Palette::nine_color());

/// "P6\n<width> <height>\n255\n" followed by the RGB bytes.
std::string encode_ppm(const Image& img);
/// Throws IoError.
void write_file(const std::string& path, const std::string& bytes);
void write_ppm(const Image& img, const std::string& path);
/// 8-bit label raster as binary PGM ("P5").
std::string encode_pgm(const Raster<std::uint8_t>& raster);

/// Computes the basin mask and writes it; returns the mask.
BasinMask render_julia(const MapParams& p, std::optional<Complex> w, const Window& window, int resolution,
                       const Palette& palette, const std::string& out_path, const MaskConfig& cfg = {});
void render_scan(const NineColorMap& map, const Palette& palette, const std::string& out_path);

/// "<kind>_k<k>_w<w>_<res>.ppm" with %g-formatted numbers.
std::string output_name(const std::string& kind, const std::string& k, const std::string& w, int resolution);
std::string format_number(double x);

/// $RATDYN_OUT_DIR joined with name when the variable is set, else name.
std::string output_path(const std::string& name);

}  // namespace ratdyn
