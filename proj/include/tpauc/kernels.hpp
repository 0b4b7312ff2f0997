#pragma once

// Data-parallel inner loops shared by the risk, minimax and scorer modules.
//
// Every kernel has a scalar reference implementation and, on x86-64 builds, an
// AVX2+FMA variant. The variant is chosen once at startup from the CPU's
// feature bits and may be overridden with TPAUC_ISA=scalar|avx2. Within one
// variant the reduction order is fixed, so results are bitwise reproducible;
// across variants they agree to rounding (see tests/test_kernels.cpp).

#include <cstddef>
#include <span>
#include <string_view>

namespace tpauc::kernels {

enum class Isa { Scalar, Avx2 };

struct Moments {
  double sum_w = 0.0;    // sum w
  double sum_wf = 0.0;   // sum w*f
  double sum_wf2 = 0.0;  // sum w*f^2
};

struct KernelTable {
  Isa isa;
  double (*dot)(const double* x, const double* y, std::size_t n);
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  Moments (*weighted_moments)(const double* w, const double* f, std::size_t n);
  // For each k < nb: sq[k] = sum_m w[m]*(base[k]+vals[m])^2, lin[k] = sum_m w[m]*(base[k]+vals[m]).
  void (*offset_square_moments)(const double* base, std::size_t nb, const double* vals,
                                const double* w, std::size_t nv, double* sq, double* lin);
  // Number of m with vals[m] >= x.
  std::size_t (*count_at_least)(double x, const double* vals, std::size_t n);
};

const KernelTable& scalar_table() noexcept;
#if defined(TPAUC_HAVE_AVX2)
const KernelTable& avx2_table() noexcept;
#endif

bool isa_supported(Isa isa) noexcept;
std::string_view isa_name(Isa isa) noexcept;

/// The table used by the library; resolved on first use.
const KernelTable& active() noexcept;

/// Pins the active table (tests, benchmarking). Throws if `isa` is unsupported.
void force_isa(Isa isa);

// Span front-ends over the active table.

double dot(std::span<const double> x, std::span<const double> y);
void axpy(double a, std::span<const double> x, std::span<double> y);
Moments weighted_moments(std::span<const double> w, std::span<const double> f);
void offset_square_moments(std::span<const double> base, std::span<const double> vals,
                           std::span<const double> w, std::span<double> sq, std::span<double> lin);
std::size_t count_at_least(double x, std::span<const double> vals);

}  // namespace tpauc::kernels
