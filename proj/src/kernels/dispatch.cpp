#include <atomic>
#include <cstdlib>
#include <string>

#include "tpauc/errors.hpp"
#include "tpauc/kernels.hpp"

namespace tpauc::kernels {
namespace {

const KernelTable* table_for(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar:
      return &scalar_table();
    case Isa::Avx2:
#if defined(TPAUC_HAVE_AVX2)
      return &avx2_table();
#else
      return nullptr;
#endif
  }
  return nullptr;
}

const KernelTable* resolve() noexcept {
  if (const char* env = std::getenv("TPAUC_ISA")) {
    const std::string want(env);
    if (want == "scalar") return &scalar_table();
    if (want == "avx2" && isa_supported(Isa::Avx2)) return table_for(Isa::Avx2);
  }
  if (isa_supported(Isa::Avx2)) return table_for(Isa::Avx2);
  return &scalar_table();
}

std::atomic<const KernelTable*>& slot() noexcept {
  static std::atomic<const KernelTable*> s{resolve()};
  return s;
}

}  // namespace

bool isa_supported(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(TPAUC_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

std::string_view isa_name(Isa isa) noexcept {
  return isa == Isa::Avx2 ? "avx2" : "scalar";
}

const KernelTable& active() noexcept { return *slot().load(std::memory_order_acquire); }

void force_isa(Isa isa) {
  require(isa_supported(isa), "kernel variant '" + std::string(isa_name(isa)) + "' is not supported on this CPU");
  slot().store(table_for(isa), std::memory_order_release);
}

double dot(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size(), "dot: length mismatch");
  return active().dot(x.data(), y.data(), x.size());
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  require(x.size() == y.size(), "axpy: length mismatch");
  active().axpy(a, x.data(), y.data(), x.size());
}

Moments weighted_moments(std::span<const double> w, std::span<const double> f) {
  require(w.size() == f.size(), "weighted_moments: length mismatch");
  return active().weighted_moments(w.data(), f.data(), w.size());
}

void offset_square_moments(std::span<const double> base, std::span<const double> vals,
                           std::span<const double> w, std::span<double> sq, std::span<double> lin) {
  require(vals.size() == w.size(), "offset_square_moments: value/weight length mismatch");
  require(sq.size() == base.size() && lin.size() == base.size(),
          "offset_square_moments: output length mismatch");
  active().offset_square_moments(base.data(), base.size(), vals.data(), w.data(), vals.size(),
                                 sq.data(), lin.data());
}

std::size_t count_at_least(double x, std::span<const double> vals) {
  return active().count_at_least(x, vals.data(), vals.size());
}

}  // namespace tpauc::kernels
