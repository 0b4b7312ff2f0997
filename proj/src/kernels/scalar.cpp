#include "tpauc/kernels.hpp"

namespace tpauc::kernels {
namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

Moments weighted_moments_scalar(const double* w, const double* f, std::size_t n) {
  Moments m;
  for (std::size_t i = 0; i < n; ++i) {
    const double wf = w[i] * f[i];
    m.sum_w += w[i];
    m.sum_wf += wf;
    m.sum_wf2 += wf * f[i];
  }
  return m;
}

void offset_square_moments_scalar(const double* base, std::size_t nb, const double* vals,
                                  const double* w, std::size_t nv, double* sq, double* lin) {
  for (std::size_t k = 0; k < nb; ++k) {
    double s2 = 0.0;
    double s1 = 0.0;
    for (std::size_t m = 0; m < nv; ++m) {
      const double e = base[k] + vals[m];
      const double we = w[m] * e;
      s1 += we;
      s2 += we * e;
    }
    sq[k] = s2;
    lin[k] = s1;
  }
}

std::size_t count_at_least_scalar(double x, const double* vals, std::size_t n) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < n; ++i) c += vals[i] >= x ? 1 : 0;
  return c;
}

constexpr KernelTable kScalar{Isa::Scalar,           dot_scalar,
                              axpy_scalar,           weighted_moments_scalar,
                              offset_square_moments_scalar, count_at_least_scalar};

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

}  // namespace tpauc::kernels
