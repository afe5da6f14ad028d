#include <benchmark/benchmark.h>

// The distro benchmark_main archive carries LTO bytecode from another GCC.
BENCHMARK_MAIN();
