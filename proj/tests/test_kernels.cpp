#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "probe/kernels.hpp"
#include "probe/rng.hpp"

using namespace probe;

namespace {

std::vector<double> random_vec(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (double& x : v) x = 2.0 * rng.next_unit() - 1.0;
  return v;
}

}  // namespace

TEST_CASE("active backend is a known name") {
  const std::string_view b = kern::active_backend();
  CHECK((b == "scalar" || b == "avx2" || b == "neon"));
}

TEST_CASE("elementwise ops match the scalar reference bit-exactly") {
  Rng rng(42);
  // Sizes straddling vector widths, including remainders and empty input.
  for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 8u, 33u, 1000u}) {
    const auto x = random_vec(rng, n);
    auto y1 = random_vec(rng, n);
    auto y2 = y1;

    kern::scalar::add(y1.data(), x.data(), n);
    kern::add(y2.data(), x.data(), n);
    CHECK(y1 == y2);

    kern::scalar::axpy(y1.data(), 0.37, x.data(), n);
    kern::axpy(y2.data(), 0.37, x.data(), n);
    CHECK(y1 == y2);
  }
}

TEST_CASE("reductions match the scalar reference to 1e-12 relative") {
  Rng rng(7);
  for (std::size_t n : {1u, 5u, 17u, 256u, 4097u}) {
    const auto a = random_vec(rng, n);
    const auto b = random_vec(rng, n);

    const double d0 = kern::scalar::dot(a.data(), b.data(), n);
    const double d1 = kern::dot(a.data(), b.data(), n);
    CHECK(d1 == doctest::Approx(d0).epsilon(1e-12));

    const double s0 = kern::scalar::sum(a.data(), n);
    const double s1 = kern::sum(a.data(), n);
    CHECK(s1 == doctest::Approx(s0).epsilon(1e-12));

    // max_abs has a unique answer regardless of traversal order.
    CHECK(kern::max_abs(a.data(), n) == kern::scalar::max_abs(a.data(), n));
  }
}

TEST_CASE("reference kernels compute the expected values") {
  const std::vector<double> a = {1.0, -2.0, 3.0};
  const std::vector<double> b = {4.0, 5.0, -6.0};
  CHECK(kern::scalar::dot(a.data(), b.data(), 3) == doctest::Approx(-24.0));
  CHECK(kern::scalar::sum(a.data(), 3) == doctest::Approx(2.0));
  CHECK(kern::scalar::max_abs(a.data(), 3) == doctest::Approx(3.0));

  std::vector<double> y = {1.0, 1.0, 1.0};
  kern::scalar::axpy(y.data(), 2.0, a.data(), 3);
  CHECK(y == std::vector<double>{3.0, -3.0, 7.0});
  kern::scalar::add(y.data(), b.data(), 3);
  CHECK(y == std::vector<double>{7.0, 2.0, 1.0});
}
