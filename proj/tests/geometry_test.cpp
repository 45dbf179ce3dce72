#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "chromplane/geometry.hpp"
#include "chromplane/graph.hpp"

namespace chromplane {
namespace {

PlanePoint random_point(std::mt19937& rng) {
  std::uniform_int_distribution<int> c(-24, 24);
  return embed_quad({c(rng), c(rng), c(rng), c(rng)});
}

TEST(Reflections, Examples) {
  EXPECT_TRUE(reflect_x(embed_quad({0, 0, 0, 0})).is_origin());
  EXPECT_EQ(reflect_x(embed_quad({-5, -3, 3, 3})), embed_quad({-5, -3, -3, -3}));
  EXPECT_TRUE(reflect_y(embed_quad({0, 0, 0, 0})).is_origin());
  EXPECT_EQ(reflect_y(embed_quad({-2, 0, 0, -2})), embed_quad({2, 0, 0, -2}));
}

TEST(Reflections, Involutions) {
  std::mt19937 rng(1);
  for (int i = 0; i < 100; ++i) {
    PlanePoint p = random_point(rng);
    EXPECT_EQ(reflect_x(reflect_x(p)), p);
    EXPECT_EQ(reflect_y(reflect_y(p)), p);
    EXPECT_EQ(reflect_x(reflect_y(p)), rotate60_k(p, 3));
  }
}

TEST(Rotate60, Examples) {
  EXPECT_TRUE(rotate60(embed_quad({0, 0, 0, 0})).is_origin());
  // Closed form [(a-c)/2, (b-3d)/2, (3a+c)/2, (b+d)/2] at a=b=d=0, c=-12.
  EXPECT_EQ(rotate60(embed_quad({0, 0, -12, 0})), embed_quad({6, 0, -6, 0}));
  for (const auto& q : seed_points())
    EXPECT_EQ(rotate60_k(embed_quad(q), 6), embed_quad(q));
}

TEST(Rotate60, MatchesFloatingRotation) {
  std::mt19937 rng(2);
  for (int i = 0; i < 50; ++i) {
    PlanePoint p = random_point(rng);
    auto [x, y] = to_double(p);
    auto [rx, ry] = to_double(rotate60(p));
    const double c = 0.5, s = std::sqrt(3.0) / 2;
    EXPECT_NEAR(rx, c * x - s * y, 1e-12);
    EXPECT_NEAR(ry, s * x + c * y, 1e-12);
  }
}

TEST(RotateSpecial, Examples) {
  PlanePoint a = embed_quad({-2, 0, 0, -6});
  PlanePoint b = embed_quad({8, 0, 0, 4});
  EXPECT_EQ(rotate_special(a, a), a);
  PlanePoint bp = rotate_special(b, a);
  EXPECT_EQ(bp, (PlanePoint{Rat(1, 10), 0, 0, Rat(11, 30)}));
  EXPECT_EQ(sq_distance(b, bp), (Q33{1, 0}));
  EXPECT_EQ(sq_distance(a, bp), (Q33{25, 0}));

  // Floating cross-check with cos = 49/50, sin = 3*sqrt11/50.
  auto [ax, ay] = to_double(a);
  auto [bx, by] = to_double(b);
  const double c = 49.0 / 50, s = 3 * std::sqrt(11.0) / 50;
  const double dx = bx - ax, dy = by - ay;
  auto [px, py] = to_double(bp);
  EXPECT_NEAR(px, ax + c * dx - s * dy, 1e-12);
  EXPECT_NEAR(py, ay + s * dx + c * dy, 1e-12);
}

TEST(RotateSpecial, IsometryAndInverseOnH) {
  TwoDistGraph h = build_H();
  const PlanePoint a = h.vertices[h.label_index("A")];
  for (const auto& p : h.vertices) {
    PlanePoint r = rotate_special(p, a);
    EXPECT_EQ(sq_distance(a, r), sq_distance(a, p));
    EXPECT_EQ(rotate_special(r, a, -1), p);
  }
}

TEST(Isometries, PreserveDistanceOnKSample) {
  TwoDistGraph k = build_K();
  std::mt19937 rng(5);
  std::vector<int> idx(k.num_vertices());
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(50);
  const PlanePoint center = k.vertices[k.label_index("A")];
  std::vector<Isometry> isos = {ReflectX{}, ReflectY{}, Rotate60{1}, Rotate60{4},
                                RotateSpecial{center, 1}, RotateSpecial{center, -1}};
  for (const auto& iso : isos)
    for (int i : idx)
      for (int j : idx)
        ASSERT_EQ(sq_distance(chromplane::apply(iso, k.vertices[i]),
                              chromplane::apply(iso, k.vertices[j])),
                  sq_distance(k.vertices[i], k.vertices[j]));
}

TEST(Orbit, Examples) {
  EXPECT_EQ(orbit(embed_quad({0, 0, 0, 0})).size(), 1u);
  auto o = orbit(embed_quad({0, 0, -12, 0}));
  EXPECT_EQ(o.size(), 6u);
  // Independent check: the six images are the 60-degree rotations of (0, -1).
  std::set<std::pair<long, long>> expected, got;
  for (int k = 0; k < 6; ++k) {
    double t = -M_PI / 2 + k * M_PI / 3;
    expected.insert({std::lround(1e6 * std::cos(t)), std::lround(1e6 * std::sin(t))});
  }
  for (const auto& p : o) {
    auto [x, y] = to_double(p);
    got.insert({std::lround(1e6 * x), std::lround(1e6 * y)});
  }
  EXPECT_EQ(got, expected);
}

TEST(Orbit, SizesDivideTwelve) {
  std::mt19937 rng(9);
  for (int i = 0; i < 100; ++i) {
    auto n = orbit(random_point(rng)).size();
    EXPECT_EQ(12 % n, 0u);
  }
}

TEST(PolarAngle, Examples) {
  PlanePoint east{Rat(1, 3), 0, 0, 0};  // on the positive x-axis
  PlanePoint north{0, 0, 1, 0};
  EXPECT_TRUE(polar_angle_less(east, north));
  EXPECT_FALSE(polar_angle_less(north, east));
  PlanePoint a = embed_quad({-2, 0, 0, -6});
  PlanePoint b = embed_quad({8, 0, 0, 4});
  EXPECT_TRUE(polar_angle_less(b, a));
  EXPECT_FALSE(polar_angle_less(a, a));
  PlanePoint o = embed_quad({0, 0, 0, 0});
  EXPECT_TRUE(polar_angle_less(o, a));
  EXPECT_FALSE(polar_angle_less(a, o));
}

TEST(PolarAngle, ConsistentWithAtan2) {
  TwoDistGraph g = build_G();
  auto angle = [](const PlanePoint& p) {
    auto [x, y] = to_double(p);
    double t = std::atan2(y, x);
    return t < 0 ? t + 2 * M_PI : t;
  };
  for (const auto& p : g.vertices) {
    if (p.is_origin()) continue;
    for (const auto& q : g.vertices) {
      if (q.is_origin()) continue;
      double tp = angle(p), tq = angle(q);
      if (std::fabs(tp - tq) < 1e-9 || std::fabs(std::fabs(tp - tq) - 2 * M_PI) < 1e-9)
        continue;
      ASSERT_EQ(polar_angle_less(p, q), tp < tq);
    }
  }
}

}  // namespace
}  // namespace chromplane
