#include "support.hpp"

#include <gtest/gtest.h>

using namespace ifsgraph;
using testing_support::q;

namespace {

std::size_t inked(const Image& img) {
  std::size_t n = 0;
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) n += img.pixel(x, y) != std::array<std::uint8_t, 3>{255, 255, 255};
  return n;
}

}  // namespace

TEST(Render, SingleMapIsOneDot) {
  // One contraction: the attractor is its fixed point.
  IfsSpec spec;
  spec.field = make_field(q(0));
  spec.b = q(0);
  spec.c = q(2);
  spec.maps = {{SymmetryDescriptor::identity(), {q(1), q(1)}}};
  RenderRequest req;
  req.spec = spec;
  req.width = req.height = 32;
  req.window = Window{1.0, 1.0, 0.5};
  const RenderResult r = render(req);
  EXPECT_EQ(inked(r.image), 1u);
}

TEST(Render, FilledSquareCoversWindow) {
  // The four maps (x + t) / 2 tile the unit square.
  RenderRequest req;
  req.spec = testing_support::load_spec("square_2x2.json");
  req.width = req.height = 64;
  req.window = Window{0.5, 0.5, 0.45};
  const RenderResult r = render(req);
  EXPECT_GE(static_cast<double>(inked(r.image)), 0.99 * 64 * 64);
  EXPECT_FALSE(r.capped);
}

TEST(Render, FirstIndexUsesOneColorPerPiece) {
  RenderRequest req;
  req.spec = testing_support::fixture_spec();
  req.width = req.height = 96;
  req.coloring = Coloring::FirstIndex;
  const RenderResult r = render(req);
  std::set<std::array<std::uint8_t, 3>> colors;
  for (int y = 0; y < r.image.height; ++y)
    for (int x = 0; x < r.image.width; ++x) colors.insert(r.image.pixel(x, y));
  colors.erase({255, 255, 255});
  EXPECT_EQ(colors.size(), 4u);
}

TEST(Render, PointsStayInBoundingBall) {
  for (const char* name : {"fixture.json", "sierpinski_triangle.json", "sierpinski_carpet.json"}) {
    const StandardGeometry g = standard_geometry(testing_support::load_spec(name));
    std::size_t count = 0;
    for_each_word_point(g, 5, [&](const std::array<double, 2>& p, std::size_t, std::size_t) {
      ++count;
      EXPECT_LE(std::hypot(p[0] - g.centroid[0], p[1] - g.centroid[1]), g.radius + 1e-6) << name;
    });
    EXPECT_EQ(count, static_cast<std::size_t>(std::pow(g.maps.size(), 5))) << name;
  }
}

TEST(Render, AutoWindowContainsAttractor) {
  RenderRequest req;
  req.spec = testing_support::load_spec("sierpinski_triangle.json");
  req.width = req.height = 64;
  const RenderResult r = render(req);
  EXPECT_GT(r.depth, 0);
  EXPECT_EQ(r.points, static_cast<std::size_t>(std::pow(3, r.depth)));
  EXPECT_GT(inked(r.image), 0u);
  // Nothing touches the border: the window is the ball with a margin.
  for (int i = 0; i < 64; ++i) {
    EXPECT_EQ(r.image.pixel(i, 0)[0], 255);
    EXPECT_EQ(r.image.pixel(0, i)[0], 255);
  }
}

TEST(Render, Encodings) {
  RenderRequest req;
  req.spec = testing_support::fixture_spec();
  req.width = 40;
  req.height = 20;
  const RenderResult r = render(req);
  const std::string ppm = to_ppm(r.image);
  EXPECT_EQ(ppm.rfind("P6\n40 20\n255\n", 0), 0u);
  EXPECT_EQ(ppm.size(), std::string("P6\n40 20\n255\n").size() + 40 * 20 * 3);
  const std::string png = to_png(r.image);
  ASSERT_GE(png.size(), 8u);
  EXPECT_EQ(png.substr(0, 8), std::string("\x89PNG\r\n\x1a\n", 8));
}

TEST(Render, RejectsBadRequests) {
  RenderRequest req;
  req.spec = testing_support::fixture_spec();
  req.width = 8;
  EXPECT_THROW(render(req), std::invalid_argument);
  req.width = 64;
  req.depth = -1;
  EXPECT_THROW(render(req), std::invalid_argument);
  req.depth.reset();
  req.window = Window{0, 0, 0};
  EXPECT_THROW(render(req), std::invalid_argument);
  EXPECT_THROW(coloring_from_string("rainbow"), std::invalid_argument);
}

TEST(Render, DepthIsCapped) {
  RenderRequest req;
  req.spec = testing_support::fixture_spec();
  req.width = req.height = 16;
  req.depth = 40;
  const RenderResult r = render(req);
  EXPECT_TRUE(r.capped);
  EXPECT_LE(static_cast<double>(r.points), kMaxRenderPoints);
}
