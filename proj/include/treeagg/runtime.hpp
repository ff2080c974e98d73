#pragma once

// Global thread budget for the OpenMP kernels and the replicate/fold/path
// loops built on top of them.  Defaults to 1 so results are reproducible
// unless the caller opts in; TREEAGG_THREADS in the environment or an
// explicit set_threads() raises it.  All parallel loops split work over
// independent output slots only, so any thread count yields the same bytes.

namespace treeagg::runtime {

int threads();
void set_threads(int n);

}  // namespace treeagg::runtime
