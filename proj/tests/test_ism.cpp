/*
Copyright 2026 The SRIRForge Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS-IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "srirforge/error.hpp"
#include "srirforge/ism.hpp"
#include "support.hpp"

using namespace srirforge;
using doctest::Approx;

namespace {

const CapsuleSpec kOmni{{0, 0}, 0.0, Pattern::kOmnidirectional};

std::size_t argmax_abs(const std::vector<double>& x) {
  return static_cast<std::size_t>(std::max_element(x.begin(), x.end(), [](double a, double b) {
                                    return std::abs(a) < std::abs(b);
                                  }) -
                                  x.begin());
}

// Closed-form count: sum over a+b+c <= k of f(a)f(b)f(c), f(0)=1, f(n>0)=2.
std::size_t closed_form_count(int k) {
  auto f = [](int n) { return n == 0 ? 1u : 2u; };
  std::size_t total = 0;
  for (int a = 0; a <= k; ++a) {
    for (int b = 0; a + b <= k; ++b) {
      for (int c = 0; a + b + c <= k; ++c) total += f(a) * f(b) * f(c);
    }
  }
  return total;
}

}  // namespace

TEST_SUITE("ism") {

TEST_CASE("image counts") {
  const ShoeboxRoom room{{5, 4, 3}, 0.3, 6};
  const Vec3 src{1.2, 2.5, 0.7};
  CHECK(enumerate_images(room, src, 0).size() == 1);
  CHECK(enumerate_images(room, src, 1).size() == 7);
  CHECK(enumerate_images(room, src, 2).size() == 25);
  for (int k = 0; k <= 6; ++k) CHECK(enumerate_images(room, src, k).size() == closed_form_count(k));
}

TEST_CASE("enumeration matches recursive mirroring") {
  Rng rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const Vec3 dims{rng.uniform(1, 10), rng.uniform(1, 10), rng.uniform(1, 5)};
    const Vec3 src{rng.uniform(0.01, dims.x - 0.01), rng.uniform(0.01, dims.y - 0.01),
                   rng.uniform(0.01, dims.z - 0.01)};
    const int order = static_cast<int>(rng.uniform_int(0, 3));
    const ShoeboxRoom room{dims, 0.5, order};
    auto got = enumerate_images(room, src, order);
    auto want = testing::mirror_oracle(dims, src, order);
    REQUIRE(got.size() == want.size());
    for (const auto& g : got) {
      int sum = 0;
      for (int r : g.reflections) {
        CHECK(r >= 0);
        sum += r;
      }
      CHECK(sum == g.total_order);
      const auto it = std::find_if(want.begin(), want.end(), [&](const ImageSource& w) {
        return distance(w.position, g.position) <= 1e-9 && w.total_order == g.total_order;
      });
      CHECK(it != want.end());
    }
  }
}

TEST_CASE("enumeration preconditions") {
  const ShoeboxRoom room{{5, 4, 3}, 0.3, 2};
  CHECK_THROWS_AS(enumerate_images(room, {5, 2, 1}, 2), InvalidArgument);
  CHECK_THROWS_AS(enumerate_images(room, {-1, 2, 1}, 2), InvalidArgument);
  CHECK_THROWS_AS(enumerate_images(ShoeboxRoom{{5, 4, 3}, 1.5, 2}, {1, 1, 1}, 2), InvalidArgument);
  CHECK_THROWS_AS(enumerate_images(ShoeboxRoom{{5, 0, 3}, 0.5, 2}, {1, 1, 1}, 2), InvalidArgument);
}

TEST_CASE("distance-limited enumeration is the in-range subset") {
  const ShoeboxRoom room{{6, 5, 3}, 0.3, 8};
  const Vec3 src{1.0, 2.0, 1.5}, rcv{4.0, 3.5, 1.1};
  const auto all = enumerate_images(room, src, 8);
  const auto near = enumerate_images_within(room, src, 8, rcv, 20.0);
  std::size_t expected = 0;
  for (const auto& img : all) expected += distance(img.position, rcv) <= 20.0 ? 1 : 0;
  CHECK(near.size() == expected);
  for (const auto& img : near) CHECK(distance(img.position, rcv) <= 20.0);
}

TEST_CASE("image amplitude") {
  ImageSource direct{{1, 0, 0}, {}, 0};
  CHECK(image_amplitude(direct, {0, 0, 0}, 0.5) == Approx(1.0 / (4.0 * std::numbers::pi)));
  CHECK(image_amplitude(direct, {0, 0, 0}, 0.5) == Approx(0.07958).epsilon(1e-4));
  ImageSource first{{2, 0, 0}, {1, 0, 0, 0, 0, 0}, 1};
  CHECK(image_amplitude(first, {0, 0, 0}, 0.75) == Approx(0.5 / (8.0 * std::numbers::pi)));
  CHECK(image_amplitude(first, {0, 0, 0}, 0.75) == Approx(0.01989).epsilon(1e-3));
  CHECK(image_amplitude(first, {0, 0, 0}, 1.0) == 0.0);
  CHECK_THROWS_AS(image_amplitude(first, {2, 0, 0}, 0.5), InvalidArgument);
}

TEST_CASE("directivity patterns") {
  for (double a : {0.0, 45.0, 120.0, 180.0}) CHECK(directivity_gain(Pattern::kOmnidirectional, a) == 1.0);
  CHECK(directivity_gain(Pattern::kHypercardioid, 0.0) == Approx(1.0));
  CHECK(directivity_gain(Pattern::kHypercardioid, rad_to_deg(std::acos(-1.0 / 3.0))) == Approx(0.0).scale(1));
  CHECK(std::abs(directivity_gain(Pattern::kHypercardioid, 109.47)) < 1e-4);
  CHECK(directivity_gain(Pattern::kCardioid, 180.0) == Approx(0.0).scale(1));
  CHECK(directivity_gain(Pattern::kCardioid, 90.0) == Approx(0.5));
}

TEST_CASE("fractional-delay kernel") {
  std::vector<double> out(200, 0.0);
  deposit_arrival(out, 100.0, 0.5);
  CHECK(out[100] == Approx(0.5));
  CHECK(std::abs(out[99]) < 1e-12);
  CHECK(std::abs(out[140]) < 1e-12);
  for (double frac : {0.1, 0.25, 0.5, 0.9}) {
    std::vector<double> x(300, 0.0);
    deposit_arrival(x, 150.0 + frac, 1.0);
    double sum = 0.0;
    for (double v : x) sum += v;
    CHECK(sum == Approx(1.0).epsilon(0.02));
    const auto k = argmax_abs(x);
    CHECK((k == 150 || k == 151));
  }
  // Arrivals past the end are dropped; partial kernels are clipped.
  std::vector<double> short_buf(50, 0.0);
  deposit_arrival(short_buf, 500.0, 1.0);
  for (double v : short_buf) CHECK(v == 0.0);
  deposit_arrival(short_buf, 49.3, 1.0);
  CHECK(std::abs(short_buf[49]) > 0.5);
}

TEST_CASE("anechoic direct path") {
  ShoeboxRoom room{{20, 20, 20}, 1.0, 0};
  room.dc_cutoff_hz = 0.0;
  const Vec3 mic{10, 10, 10};
  const Rir near = render_rir(room, mic + Vec3{1, 0, 0}, mic, kOmni);
  const Rir far = render_rir(room, mic + Vec3{2, 0, 0}, mic, kOmni);
  CHECK(near.length() == 7200);
  CHECK(near.sample_rate == 24000.0);
  // t = 1/343 s * 24000 = 69.97 samples.
  CHECK(argmax_abs(near.samples) == 70);
  CHECK(near.samples[70] == Approx(1.0 / (4.0 * std::numbers::pi)).epsilon(0.01));
  CHECK(near.samples[70] / far.samples[140] == Approx(2.0).epsilon(0.01));

  // With the default DC blocker the arrival is essentially unchanged.
  room.dc_cutoff_hz = kDefaultDcCutoffHz;
  const Rir blocked = render_rir(room, mic + Vec3{1, 0, 0}, mic, kOmni);
  CHECK(argmax_abs(blocked.samples) == 70);
  CHECK(blocked.samples[70] == Approx(near.samples[70]).epsilon(0.01));
}

TEST_CASE("perfect absorption equals the direct path only") {
  const Vec3 src{1.5, 2.0, 1.0}, mic{3.0, 1.0, 2.0};
  const Rir direct = render_rir(ShoeboxRoom{{5, 4, 3}, 1.0, 0}, src, mic, kOmni);
  const Rir full = render_rir(ShoeboxRoom{{5, 4, 3}, 1.0, 6}, src, mic, kOmni);
  CHECK(direct.samples == full.samples);
}

TEST_CASE("rendering is additive over images") {
  const ShoeboxRoom room{{5, 4, 3}, 0.4, 4};
  const Vec3 src{1.5, 2.0, 1.0}, mic{3.0, 1.0, 2.0};
  const CapsuleSpec hyper{{30, 10}, 0.0, Pattern::kHypercardioid};
  const auto images = enumerate_images(room, src, 4);
  std::vector<ImageSource> odd, even;
  for (std::size_t i = 0; i < images.size(); ++i) (i % 3 == 0 ? odd : even).push_back(images[i]);
  const Rir all = render_images(images, room, mic, hyper, 24000, 2000);
  const Rir a = render_images(odd, room, mic, hyper, 24000, 2000);
  const Rir b = render_images(even, room, mic, hyper, 24000, 2000);
  for (std::size_t i = 0; i < all.length(); ++i) CHECK(std::abs(all.samples[i] - a.samples[i] - b.samples[i]) < 1e-9);
}

TEST_CASE("energy is non-increasing in absorption") {
  const Vec3 src{1.5, 2.0, 1.0}, mic{3.0, 1.0, 2.0};
  double prev = 1e300;
  for (int k = 1; k <= 9; ++k) {
    const Rir r = render_rir(ShoeboxRoom{{5, 4, 3}, 0.1 * k, 8}, src, mic, kOmni, 24000, 3000);
    double e = 0.0;
    for (double v : r.samples) e += v * v;
    CHECK(e <= prev);
    prev = e;
  }
}

TEST_CASE("render_srir shape, DoA and preconditions") {
  const ShoeboxRoom room{{6, 5, 3}, 0.5, 2};
  const MicArray array = tetrahedral_array({3, 2.5, 1.5});
  const Vec3 src{5, 4, 2};
  const Srir s = render_srir(room, src, array);
  CHECK(s.channels.size() == 4);
  CHECK(s.length() == 7200);
  CHECK(s.sample_rate() == 24000.0);
  CHECK(norm(s.doa - normalize(src - array.center)) < 1e-12);
  CHECK(s.source_position == src);
  CHECK_THROWS_AS(render_srir(room, src, tetrahedral_array({7, 2, 1})), InvalidArgument);
  CHECK_THROWS_AS(render_srir(room, {7, 1, 1}, array), InvalidArgument);
  CHECK_THROWS_AS(render_rir(room, src, array.center, kOmni, 24000, 0), InvalidArgument);
}

TEST_CASE("on-axis capsule has the strongest direct arrival") {
  const ShoeboxRoom room{{20, 20, 20}, 1.0, 0};
  const MicArray array = tetrahedral_array({10, 10, 10});
  for (std::size_t m = 0; m < 4; ++m) {
    const Srir s = render_srir(room, array.center + 2.0 * array.capsules[m].axis(), array, 24000, 400);
    double own = 0.0;
    for (double v : s.channels[m].samples) own = std::max(own, std::abs(v));
    for (std::size_t o = 0; o < 4; ++o) {
      double other = 0.0;
      for (double v : s.channels[o].samples) other = std::max(other, std::abs(v));
      CHECK(own >= other);
    }
  }
}

TEST_CASE("mirrored scene swaps capsule pairs") {
  // Rotating the scene by 180 degrees about the x axis through the array
  // maps M1 <-> M2 and M4 <-> M3 in a room symmetric about that axis.
  const Vec3 dims{6, 5, 3};
  const Vec3 c{3, 2.5, 1.5};
  const ShoeboxRoom room{dims, 0.4, 3};
  const MicArray array = tetrahedral_array(c);
  const Vec3 src{4.7, 3.4, 2.2};
  const Vec3 mirrored{src.x, 2.0 * c.y - src.y, 2.0 * c.z - src.z};
  const Srir a = render_srir(room, src, array, 24000, 3000);
  const Srir b = render_srir(room, mirrored, array, 24000, 3000);
  const std::size_t swap[4] = {1, 0, 3, 2};
  for (std::size_t ch = 0; ch < 4; ++ch) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.length(); ++i) {
      worst = std::max(worst, std::abs(a.channels[ch].samples[i] - b.channels[swap[ch]].samples[i]));
    }
    CHECK(worst < 1e-6);
  }
}

}  // TEST_SUITE
