// Compiled with -mavx2 -mfma; only reached through avx2_table() after the
// dispatcher has confirmed CPU support.

#include <immintrin.h>

#include <bit>

#include "tpauc/kernels.hpp"

namespace tpauc::kernels {
namespace {

inline double hsum(__m256d v) {
  alignas(32) double lane[4];
  _mm256_store_pd(lane, v);
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

Moments weighted_moments_avx2(const double* w, const double* f, std::size_t n) {
  __m256d s0 = _mm256_setzero_pd();
  __m256d s1 = _mm256_setzero_pd();
  __m256d s2 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vw = _mm256_loadu_pd(w + i);
    const __m256d vf = _mm256_loadu_pd(f + i);
    const __m256d wf = _mm256_mul_pd(vw, vf);
    s0 = _mm256_add_pd(s0, vw);
    s1 = _mm256_add_pd(s1, wf);
    s2 = _mm256_fmadd_pd(wf, vf, s2);
  }
  Moments m{hsum(s0), hsum(s1), hsum(s2)};
  for (; i < n; ++i) {
    const double wf = w[i] * f[i];
    m.sum_w += w[i];
    m.sum_wf += wf;
    m.sum_wf2 += wf * f[i];
  }
  return m;
}

void offset_square_moments_avx2(const double* base, std::size_t nb, const double* vals,
                                const double* w, std::size_t nv, double* sq, double* lin) {
  for (std::size_t k = 0; k < nb; ++k) {
    const __m256d vb = _mm256_set1_pd(base[k]);
    __m256d a1 = _mm256_setzero_pd();
    __m256d a2 = _mm256_setzero_pd();
    std::size_t m = 0;
    for (; m + 4 <= nv; m += 4) {
      const __m256d e = _mm256_add_pd(vb, _mm256_loadu_pd(vals + m));
      const __m256d we = _mm256_mul_pd(_mm256_loadu_pd(w + m), e);
      a1 = _mm256_add_pd(a1, we);
      a2 = _mm256_fmadd_pd(we, e, a2);
    }
    double s1 = hsum(a1);
    double s2 = hsum(a2);
    for (; m < nv; ++m) {
      const double e = base[k] + vals[m];
      const double we = w[m] * e;
      s1 += we;
      s2 += we * e;
    }
    sq[k] = s2;
    lin[k] = s1;
  }
}

std::size_t count_at_least_avx2(double x, const double* vals, std::size_t n) {
  const __m256d vx = _mm256_set1_pd(x);
  std::size_t c = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d ge = _mm256_cmp_pd(_mm256_loadu_pd(vals + i), vx, _CMP_GE_OQ);
    c += static_cast<std::size_t>(std::popcount(static_cast<unsigned>(_mm256_movemask_pd(ge))));
  }
  for (; i < n; ++i) c += vals[i] >= x ? 1 : 0;
  return c;
}

constexpr KernelTable kAvx2{Isa::Avx2,           dot_avx2,
                            axpy_avx2,           weighted_moments_avx2,
                            offset_square_moments_avx2, count_at_least_avx2};

}  // namespace

const KernelTable& avx2_table() noexcept { return kAvx2; }

}  // namespace tpauc::kernels
