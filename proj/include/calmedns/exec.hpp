#pragma once

/// Execution policy for the data-parallel kernels. Parallel dispatches to the
/// OpenMP implementations when compiled in; Serial runs the reference loops.
/// Reductions use a fixed block decomposition combined in block order, so
/// results are bit-identical for any thread count and either policy.

namespace calmedns {

enum class ExecPolicy { Serial, Parallel };

namespace exec {

ExecPolicy policy();
void set_policy(ExecPolicy p);

int max_threads();
void set_threads(int n);

/// Reads CALMEDNS_THREADS (worker count; 0 or unset keeps the OpenMP default).
void init_from_env();

bool openmp_compiled();

}  // namespace exec
}  // namespace calmedns
