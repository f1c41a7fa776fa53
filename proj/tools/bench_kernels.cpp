/// Benchmark comparing the serial reference kernels with their OpenMP
/// versions across grid sizes, plus one full right-hand-side evaluation.
/// Verifies serial/parallel agreement on every kernel before timing it.
///
///   bench_kernels [n1 n2 ...]   (default: 32 64)

#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "calmedns/calming.hpp"
#include "calmedns/exec.hpp"
#include "calmedns/fields.hpp"
#include "calmedns/kernels.hpp"
#include "calmedns/model.hpp"

using namespace calmedns;
namespace kn = calmedns::kernels;

namespace {

double now_ms() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch()).count();
}

template <class F>
double time_ms(int reps, F&& f) {
  f();  // warm up
  const double t0 = now_ms();
  for (int r = 0; r < reps; ++r) f();
  return (now_ms() - t0) / reps;
}

bool bits_equal(std::span<const cxd> a, std::span<const cxd> b) {
  return std::memcmp(a.data(), b.data(), a.size() * sizeof(cxd)) == 0;
}

void report(const char* name, double serial_ms, double parallel_ms, bool match) {
  std::printf("  %-18s %10.3f ms %10.3f ms   x%.2f   %s\n", name, serial_ms, parallel_ms,
              parallel_ms > 0 ? serial_ms / parallel_ms : 0.0, match ? "match" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  exec::init_from_env();
  std::vector<int> sizes;
  for (int i = 1; i < argc; ++i) sizes.push_back(std::atoi(argv[i]));
  if (sizes.empty()) sizes = {32, 64};

  std::printf("threads: %d (OpenMP %s)\n", exec::max_threads(),
              exec::openmp_compiled() ? "on" : "off");

  for (int n : sizes) {
    GridPtr grid = WaveGrid::create(n);
    std::printf("n = %d^3 (%zu stored modes, %zu nodes)\n", n, grid->modes(), grid->nodes());
    SpectralField u = random_divfree(grid, 42, 1.0);
    SpectralField out_s(grid), out_p(grid);
    const int reps = n <= 32 ? 50 : 10;

    {
      const auto& ksq = grid->ksq();
      const double ts = time_ms(reps, [&] {
        for (int c = 0; c < 3; ++c) kn::mode_scale_serial(u.comp(c), ksq, out_s.comp(c));
      });
      const double tp = time_ms(reps, [&] {
        for (int c = 0; c < 3; ++c) kn::mode_scale_parallel(u.comp(c), ksq, out_p.comp(c));
      });
      report("mode_scale", ts, tp, bits_equal(out_s.data(), out_p.data()));
    }
    {
      copy_into(u, out_s);
      copy_into(u, out_p);
      const double ts = time_ms(reps, [&] {
        kn::leray_serial(grid->kx().data(), grid->ky().data(), grid->kz().data(), grid->modes(),
                         out_s.comp(0).data(), out_s.comp(1).data(), out_s.comp(2).data());
      });
      const double tp = time_ms(reps, [&] {
        kn::leray_parallel(grid->kx().data(), grid->ky().data(), grid->kz().data(), grid->modes(),
                           out_p.comp(0).data(), out_p.comp(1).data(), out_p.comp(2).data());
      });
      report("leray", ts, tp, bits_equal(out_s.data(), out_p.data()));
    }
    {
      const double ts = time_ms(reps, [&] {
        kn::curl_serial(grid->kx().data(), grid->ky().data(), grid->kz().data(), grid->modes(),
                        u.comp(0).data(), u.comp(1).data(), u.comp(2).data(), out_s.comp(0).data(),
                        out_s.comp(1).data(), out_s.comp(2).data());
      });
      const double tp = time_ms(reps, [&] {
        kn::curl_parallel(grid->kx().data(), grid->ky().data(), grid->kz().data(), grid->modes(),
                          u.comp(0).data(), u.comp(1).data(), u.comp(2).data(),
                          out_p.comp(0).data(), out_p.comp(1).data(), out_p.comp(2).data());
      });
      report("curl", ts, tp, bits_equal(out_s.data(), out_p.data()));
    }
    {
      Transform tf(grid);
      PhysicalField a(grid), b(grid), cs(grid), cp(grid);
      tf.to_physical(u, a);
      SpectralField w = random_divfree(grid, 43, 1.0);
      tf.to_physical(w, b);
      const std::size_t nn = grid->nodes();
      const double ts = time_ms(reps, [&] {
        kn::cross3_serial(a.comp(0).data(), a.comp(1).data(), a.comp(2).data(), b.comp(0).data(),
                          b.comp(1).data(), b.comp(2).data(), cs.comp(0).data(),
                          cs.comp(1).data(), cs.comp(2).data(), nn);
      });
      const double tp = time_ms(reps, [&] {
        kn::cross3_parallel(a.comp(0).data(), a.comp(1).data(), a.comp(2).data(), b.comp(0).data(),
                            b.comp(1).data(), b.comp(2).data(), cp.comp(0).data(),
                            cp.comp(1).data(), cp.comp(2).data(), nn);
      });
      const bool match = std::memcmp(cs.comp(0).data(), cp.comp(0).data(),
                                     nn * sizeof(double)) == 0;
      report("cross3", ts, tp, match);

      CalmingSpec spec(CalmingVariant::Z1, 1.0);
      const double ts2 = time_ms(reps, [&] { calm_field_serial(spec, a, cs); });
      const double tp2 = time_ms(reps, [&] { calm_field_parallel(spec, a, cp); });
      const bool match2 = std::memcmp(cs.comp(0).data(), cp.comp(0).data(),
                                      nn * sizeof(double)) == 0;
      report("calming", ts2, tp2, match2);
    }
    {
      double rs = 0.0, rp = 0.0;
      const double ts = time_ms(reps, [&] {
        rs = kn::sum_weighted_sq(u.comp(0), grid->weight(), ExecPolicy::Serial);
      });
      const double tp = time_ms(reps, [&] {
        rp = kn::sum_weighted_sq(u.comp(0), grid->weight(), ExecPolicy::Parallel);
      });
      report("reduce_sq", ts, tp, rs == rp);
    }
    {
      ModelParams m(grid, 1.0, CalmingSpec(CalmingVariant::Z1, 2.0), 1.0, taylor_green(grid),
                    ForcingSpec::constant(shear_profile(grid, 0.5)));
      SpectralWorkspace ws(grid);
      SpectralField r(grid);
      const auto run_rhs = [&](ExecPolicy pol) {
        exec::set_policy(pol);
        rhs_v(m, u, 0.0, 0.3, r, ws);
      };
      const double ts = time_ms(reps, [&] { run_rhs(ExecPolicy::Serial); });
      copy_into(r, out_s);
      const double tp = time_ms(reps, [&] { run_rhs(ExecPolicy::Parallel); });
      exec::set_policy(ExecPolicy::Parallel);
      report("full_rhs", ts, tp, bits_equal(out_s.data(), r.data()));
    }
  }
  return 0;
}
