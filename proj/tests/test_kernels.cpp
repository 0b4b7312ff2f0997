#include <doctest.h>

#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "tpauc/kernels.hpp"
#include "tpauc/rng.hpp"

using namespace tpauc;

namespace {

std::vector<double> uniform_vec(std::mt19937_64& g, std::size_t n, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = u(g);
  return v;
}

bool close(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::max(std::abs(a), std::abs(b))); }

}  // namespace

TEST_CASE("rng: same coordinates replay, different coordinates diverge") {
  CounterRng a(7, {1, 2}), b(7, {1, 2}), c(7, {2, 1}), d(8, {1, 2});
  std::set<std::uint64_t> firsts;
  for (int k = 0; k < 100; ++k) {
    const auto x = a();
    CHECK(x == b());
    firsts.insert(x);
  }
  CHECK(firsts.size() == 100);
  CounterRng a2(7, {1, 2});
  CHECK(a2() != c());
  CounterRng a3(7, {1, 2});
  CHECK(a3() != d());
}

TEST_CASE("rng: uniform lies in [0,1) with mean near 1/2") {
  CounterRng r(3);
  double sum = 0.0;
  for (int k = 0; k < 100000; ++k) {
    const double u = r.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(sum / 100000.0 == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("kernels: every variant matches a plain loop") {
  std::vector<const kernels::KernelTable*> tables{&kernels::scalar_table()};
  if (kernels::isa_supported(kernels::Isa::Avx2)) tables.push_back(&kernels::avx2_table());
  std::mt19937_64 g(11);
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 9u, 31u, 64u, 257u}) {
    const auto x = uniform_vec(g, n), y = uniform_vec(g, n), w = uniform_vec(g, n, 0.0, 1.0);
    double dot_ref = 0.0, sw = 0.0, swf = 0.0, swf2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      dot_ref += x[i] * y[i];
      sw += w[i];
      swf += w[i] * x[i];
      swf2 += w[i] * x[i] * x[i];
    }
    const auto base = uniform_vec(g, 6);
    std::vector<double> sq_ref(6, 0.0), lin_ref(6, 0.0);
    for (std::size_t k = 0; k < 6; ++k) {
      for (std::size_t m = 0; m < n; ++m) {
        const double t = base[k] + x[m];
        sq_ref[k] += w[m] * t * t;
        lin_ref[k] += w[m] * t;
      }
    }
    for (const auto* t : tables) {
      CAPTURE(kernels::isa_name(t->isa));
      CAPTURE(n);
      CHECK(close(t->dot(x.data(), y.data(), n), dot_ref));
      const auto m = t->weighted_moments(w.data(), x.data(), n);
      CHECK(close(m.sum_w, sw));
      CHECK(close(m.sum_wf, swf));
      CHECK(close(m.sum_wf2, swf2));
      std::vector<double> yy = y;
      t->axpy(0.5, x.data(), yy.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(yy[i] == doctest::Approx(y[i] + 0.5 * x[i]).epsilon(1e-15));
      std::vector<double> sq(6), lin(6);
      t->offset_square_moments(base.data(), 6, x.data(), w.data(), n, sq.data(), lin.data());
      for (std::size_t k = 0; k < 6; ++k) {
        CHECK(close(sq[k], sq_ref[k]));
        CHECK(close(lin[k], lin_ref[k]));
      }
      for (double thr : {-2.0, -0.5, 0.0, 0.25, 2.0}) {
        std::size_t ref = 0;
        for (double v : x) ref += v >= thr ? 1 : 0;
        CHECK(t->count_at_least(thr, x.data(), n) == ref);
      }
      if (n > 0) {
        // Exact ties with the threshold are counted.
        CHECK(t->count_at_least(x[n / 2], x.data(), n) >= 1);
      }
    }
  }
}

TEST_CASE("kernels: each variant is deterministic") {
  std::mt19937_64 g(5);
  const auto x = uniform_vec(g, 1001), y = uniform_vec(g, 1001);
  std::vector<const kernels::KernelTable*> tables{&kernels::scalar_table()};
  if (kernels::isa_supported(kernels::Isa::Avx2)) tables.push_back(&kernels::avx2_table());
  for (const auto* t : tables) {
    const double first = t->dot(x.data(), y.data(), x.size());
    for (int rep = 0; rep < 5; ++rep) CHECK(t->dot(x.data(), y.data(), x.size()) == first);
  }
}

TEST_CASE("kernels: forcing a variant switches the active table") {
  const auto before = kernels::active().isa;
  kernels::force_isa(kernels::Isa::Scalar);
  CHECK(kernels::active().isa == kernels::Isa::Scalar);
  if (kernels::isa_supported(kernels::Isa::Avx2)) {
    kernels::force_isa(kernels::Isa::Avx2);
    CHECK(kernels::active().isa == kernels::Isa::Avx2);
  } else {
    CHECK_THROWS(kernels::force_isa(kernels::Isa::Avx2));
  }
  kernels::force_isa(before);
  CHECK(kernels::isa_name(kernels::Isa::Scalar) == "scalar");
}

TEST_CASE("kernels: span front-ends reject mismatched lengths") {
  std::vector<double> a(3), b(4);
  CHECK_THROWS(kernels::dot(a, b));
  CHECK_THROWS(kernels::weighted_moments(a, b));
}
