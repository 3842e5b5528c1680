#pragma once

namespace parrondo {

// Worker count for internally parallelized operations.  Defaults to the
// PARRONDO_THREADS environment variable, else the hardware concurrency
// (capped at 16).  All parallel code paths produce results bit-identical to
// the single-threaded path, whatever the count.
int thread_count();
void set_thread_count(int);

}  // namespace parrondo
