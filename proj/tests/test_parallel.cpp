#include <atomic>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "lutt/infinite_volume.hpp"
#include "lutt/parallel.hpp"

using namespace lutt;

TEST(ParallelFor, VisitsEveryIndexOnce) {
  for (std::size_t threads : {1u, 2u, 3u, 8u, 64u}) {
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; }, threads);
    for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
  }
  parallel_for(0, [](std::size_t) { FAIL(); }, 4);
}

TEST(ParallelFor, ResultsIndependentOfThreadCount) {
  auto run = [](std::size_t threads) {
    std::vector<double> out(777);
    parallel_for(out.size(), [&](std::size_t i) { out[i] = std::sin(0.01 * double(i)) / (1.0 + double(i)); }, threads);
    return out;
  };
  const auto ref = run(1);
  for (std::size_t th : {2u, 5u, 16u}) EXPECT_EQ(run(th), ref);
}

TEST(ParallelFor, RethrowsWorkerException) {
  EXPECT_THROW(parallel_for(
                   100,
                   [](std::size_t i) {
                     if (i == 57) throw std::runtime_error("boom");
                   },
                   4),
               std::runtime_error);
}

TEST(ThreadCap, ReadsEnvironment) {
  ::setenv("LUTT_QUENCH_THREADS", "3", 1);
  EXPECT_EQ(thread_cap(), 3u);
  ::setenv("LUTT_QUENCH_THREADS", "0", 1);
  EXPECT_GE(thread_cap(), 1u);
  ::setenv("LUTT_QUENCH_THREADS", "junk", 1);
  EXPECT_GE(thread_cap(), 1u);
  ::unsetenv("LUTT_QUENCH_THREADS");
}

TEST(ThreadCap, ProfilesAreIdenticalAcrossThreadCounts) {
  const auto z = linspace(-8.0, 8.0, 997);
  const ModelParams P = ModelParams(1.0, pi).with_fermi_momentum(0.5);
  ::setenv("LUTT_QUENCH_THREADS", "1", 1);
  const auto a = density_profile(P, 0.0, z, 2.5, 0.1);
  ::setenv("LUTT_QUENCH_THREADS", "8", 1);
  const auto b = density_profile(P, 0.0, z, 2.5, 0.1);
  ::unsetenv("LUTT_QUENCH_THREADS");
  ASSERT_EQ(a.total.size(), b.total.size());
  for (std::size_t i = 0; i < a.total.size(); ++i) {
    if (std::isnan(a.total[i])) {
      EXPECT_TRUE(std::isnan(b.total[i]));
    } else {
      EXPECT_EQ(a.total[i], b.total[i]);
    }
  }
  EXPECT_EQ(a.excluded, b.excluded);
}
