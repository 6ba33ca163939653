#pragma once

// Rasterizes attractors in standard coordinates by plotting f_w(x~) for all
// words w of a fixed length. Floating point is used only here.

#include "ifsgraph/ifs.hpp"

#include <png.h>

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ifsgraph {

enum class Coloring { Mono, FirstIndex, SecondIndex };

inline Coloring coloring_from_string(std::string_view s) {
  if (s == "mono" || s == "Mono") return Coloring::Mono;
  if (s == "first" || s == "FirstIndex") return Coloring::FirstIndex;
  if (s == "second" || s == "SecondIndex") return Coloring::SecondIndex;
  throw std::invalid_argument("unknown coloring \"" + std::string(s) + "\"");
}

struct Window {
  double cx = 0.0;
  double cy = 0.0;
  double half_width = 1.0;
};

struct RenderRequest {
  IfsSpec spec;
  std::optional<Window> window;  // nullopt: bounding ball of A
  int width = 512;
  int height = 512;
  Coloring coloring = Coloring::Mono;
  std::optional<int> depth;      // nullopt: auto
};

struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;  // row-major, top row first

  [[nodiscard]] std::array<std::uint8_t, 3> pixel(int x, int y) const {
    const auto i = 3 * (static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x));
    return {rgb[i], rgb[i + 1], rgb[i + 2]};
  }
};

struct RenderResult {
  Image image;
  Window window;
  int depth = 0;
  bool capped = false;  // requested or auto depth exceeded the point cap
  std::size_t points = 0;
};

inline constexpr double kMaxRenderPoints = 1e7;

/// 2x2 float affine map, row-major linear part.
struct AffineF {
  std::array<double, 4> l{1, 0, 0, 1};
  std::array<double, 2> t{0, 0};

  [[nodiscard]] std::array<double, 2> operator()(const std::array<double, 2>& p) const {
    return {l[0] * p[0] + l[1] * p[1] + t[0], l[2] * p[0] + l[3] * p[1] + t[1]};
  }
  [[nodiscard]] AffineF then_after(const AffineF& o) const {
    AffineF r;
    r.l = {l[0] * o.l[0] + l[1] * o.l[2], l[0] * o.l[1] + l[1] * o.l[3], l[2] * o.l[0] + l[3] * o.l[2],
           l[2] * o.l[1] + l[3] * o.l[3]};
    r.t = {l[0] * o.t[0] + l[1] * o.t[1] + t[0], l[2] * o.t[0] + l[3] * o.t[1] + t[1]};
    return r;
  }
};

struct StandardGeometry {
  std::vector<AffineF> maps;   // f_k in standard coordinates
  std::array<double, 2> centroid{};
  double radius = 0.0;         // delta / (1 - r)
  double ratio = 0.0;          // r
};

inline StandardGeometry standard_geometry(const IfsSpec& spec) {
  const SpecAnalysis an = analyze_spec(spec);
  const auto e = embed_to_standard(spec.field);
  const AffineF embed{e, {0, 0}};
  const double det_e = e[0] * e[3] - e[1] * e[2];
  const AffineF unembed{{e[3] / det_e, -e[1] / det_e, -e[2] / det_e, e[0] / det_e}, {0, 0}};
  StandardGeometry g;
  for (const AffineMap& f : an.maps) {
    AffineF ff;
    for (std::size_t i = 0; i < 4; ++i) ff.l[i] = f.linear.e[i].to_double();
    ff.t = {f.translation.x.to_double(), f.translation.y.to_double()};
    g.maps.push_back(embed.then_after(ff).then_after(unembed));
  }
  g.centroid = embed({an.centroid.x.to_double(), an.centroid.y.to_double()});
  g.ratio = 1.0 / std::sqrt(an.det.to_double());
  g.radius = std::sqrt(an.delta_sq_max.to_double()) / (1.0 - g.ratio);
  return g;
}

/// Calls visit(point, first_letter, second_letter) for every f_w(x~) with |w| = depth.
template <typename Visit>
void for_each_word_point(const StandardGeometry& g, int depth, Visit&& visit) {
  const std::size_t m = g.maps.size();
  if (depth == 0) {
    visit(g.centroid, std::size_t{0}, std::size_t{0});
    return;
  }
  struct Frame {
    AffineF map;
    std::size_t first;
    std::size_t second;
  };
  std::vector<Frame> stack;
  for (std::size_t k = m; k-- > 0;) stack.push_back({g.maps[k], k, k});
  std::vector<int> level_of;
  level_of.assign(m, 1);
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    const int lvl = level_of.back();
    level_of.pop_back();
    if (lvl == depth) {
      visit(f.map(g.centroid), f.first, f.second);
      continue;
    }
    for (std::size_t k = m; k-- > 0;) {
      stack.push_back({f.map.then_after(g.maps[k]), f.first, lvl == 1 ? k : f.second});
      level_of.push_back(lvl + 1);
    }
  }
}

inline std::array<std::uint8_t, 3> palette(std::size_t i) {
  static constexpr std::array<std::array<std::uint8_t, 3>, 12> colors{{{230, 25, 75},
                                                                      {60, 180, 75},
                                                                      {0, 130, 200},
                                                                      {245, 130, 48},
                                                                      {145, 30, 180},
                                                                      {70, 200, 200},
                                                                      {240, 50, 230},
                                                                      {170, 110, 40},
                                                                      {128, 128, 0},
                                                                      {0, 0, 128},
                                                                      {128, 0, 0},
                                                                      {100, 100, 100}}};
  return colors[i % colors.size()];
}

inline RenderResult render(const RenderRequest& req) {
  if (req.width < 16 || req.height < 16) throw std::invalid_argument("image must be at least 16x16 pixels");
  if (req.window && !(req.window->half_width > 0.0)) throw std::invalid_argument("half-width must be positive");
  if (req.depth && *req.depth < 0) throw std::invalid_argument("depth must be non-negative");
  if (req.spec.m() == 0) throw std::invalid_argument("spec has no maps");
  if (req.spec.expansion_det() <= Rational(1)) throw std::invalid_argument("not expanding");

  const StandardGeometry g = standard_geometry(req.spec);
  RenderResult out;
  if (req.window) {
    out.window = *req.window;
  } else {
    out.window = {g.centroid[0], g.centroid[1], g.radius > 0.0 ? 1.05 * g.radius : 1.0};
  }
  const double pixel = 2.0 * out.window.half_width / req.width;
  const double m = static_cast<double>(g.maps.size());
  int cap = 0;
  while (std::pow(m, cap + 1) <= kMaxRenderPoints && cap < 64) ++cap;
  int depth = 0;
  if (req.depth) {
    depth = *req.depth;
  } else {
    while (2.0 * g.radius * std::pow(g.ratio, depth) > pixel && depth < 64) ++depth;
  }
  if (m > 1.0 && depth > cap) {
    depth = cap;
    out.capped = true;
  }
  out.depth = depth;

  Image& img = out.image;
  img.width = req.width;
  img.height = req.height;
  img.rgb.assign(static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height) * 3, 255);
  const double half_height = out.window.half_width * req.height / req.width;
  const double x0 = out.window.cx - out.window.half_width;
  const double y1 = out.window.cy + half_height;
  for_each_word_point(g, depth, [&](const std::array<double, 2>& p, std::size_t first, std::size_t second) {
    ++out.points;
    const double fx = std::floor((p[0] - x0) / pixel);
    const double fy = std::floor((y1 - p[1]) / pixel);
    if (fx < 0 || fy < 0 || fx >= img.width || fy >= img.height) return;
    std::array<std::uint8_t, 3> c{0, 0, 0};
    if (req.coloring == Coloring::FirstIndex) c = palette(first);
    if (req.coloring == Coloring::SecondIndex) c = palette(depth >= 2 ? second : first);
    const auto i = 3 * (static_cast<std::size_t>(fy) * static_cast<std::size_t>(img.width) + static_cast<std::size_t>(fx));
    img.rgb[i] = c[0];
    img.rgb[i + 1] = c[1];
    img.rgb[i + 2] = c[2];
  });
  return out;
}

/// Binary PPM (P6).
inline std::string to_ppm(const Image& img) {
  std::string out = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  out.append(reinterpret_cast<const char*>(img.rgb.data()), img.rgb.size());
  return out;
}

inline std::string to_png(const Image& img) {
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw std::runtime_error("png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw std::runtime_error("png_create_info_struct failed");
  }
  std::string out;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw std::runtime_error("png encoding failed");
  }
  png_set_write_fn(
      png, &out,
      [](png_structp p, png_bytep data, png_size_t len) {
        static_cast<std::string*>(png_get_io_ptr(p))->append(reinterpret_cast<const char*>(data), len);
      },
      nullptr);
  png_set_IHDR(png, info, static_cast<png_uint_32>(img.width), static_cast<png_uint_32>(img.height), 8,
               PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < img.height; ++y) {
    auto* row = const_cast<png_bytep>(img.rgb.data() + 3 * static_cast<std::size_t>(y) * static_cast<std::size_t>(img.width));
    png_write_row(png, row);
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

}  // namespace ifsgraph
