#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "ksplit/kernels.hpp"
#include "ksplit/spectral.hpp"
#include "ksplit/weights.hpp"
#include "support.hpp"

using namespace ksplit;
using namespace ksplit::testing;

TEST(Kernels, MaxReduceSerialEqualsParallel) {
  std::vector<double> x(10001);
  for (size_t i = 0; i < x.size(); ++i) x[i] = std::sin(0.37 * i) * std::exp(-1e-4 * i);
  auto fn = [&](std::int64_t i) { return x[i]; };
  EXPECT_EQ(kernels::max_reduce_serial(x.size(), fn), kernels::max_reduce_omp(x.size(), fn));
}

TEST(Kernels, ForEachCoversEveryIndex) {
  std::vector<int> hit(5000, 0);
  kernels::for_each_omp(5000, [&](std::int64_t i) { hit[i] += 1; });
  for (int h : hit) EXPECT_EQ(h, 1);
}

TEST(Kernels, WeightConstantsIdenticalAcrossModes) {
  std::mt19937_64 rng(61);
  const Weight1D w = random_weight(1024, rng, 2.0);
  const ArcFamily fam = ArcFamily::shifted_dyadic(1024);
  kernels::set_default_exec(kernels::Exec::kSerial);
  const Weight1D ws(w.grid(), std::vector<double>(w.values().begin(), w.values().end()));
  const double a = ap_constant(ws, 2.0, fam), b = bmo_log_norm(ws, fam);
  kernels::set_default_exec(kernels::Exec::kParallel);
  const Weight1D wp(w.grid(), std::vector<double>(w.values().begin(), w.values().end()));
  EXPECT_EQ(ap_constant(wp, 2.0, fam), a);
  EXPECT_EQ(bmo_log_norm(wp, fam), b);
}

TEST(Kernels, SpectralIdenticalAcrossModes) {
  std::mt19937_64 rng(62);
  const TorusFn2D f = random_fn(64, 64, rng);
  kernels::set_default_exec(kernels::Exec::kSerial);
  const Membership a = membership(f, SpectralCone::p_cone(), 1e-8);
  kernels::set_default_exec(kernels::Exec::kParallel);
  const Membership b = membership(f, SpectralCone::p_cone(), 1e-8);
  EXPECT_EQ(a.leakage, b.leakage);
}
