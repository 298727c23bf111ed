#pragma once

namespace sirs {

// Kernels with a parallel variant take this switch. Serial exists as the
// reference: both produce bitwise-identical results because each work item is
// computed independently and merged by index.
enum class Execution { Serial, Parallel };

// Worker count for Parallel kernels; 0 leaves the OpenMP default.
void set_parallel_jobs(int jobs);
int parallel_jobs();

}  // namespace sirs
