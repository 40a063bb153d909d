#pragma once

// Built-in synthetic kernels with their machine configurations.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "arsim/machine.hpp"
#include "arsim/trace.hpp"

namespace arsim {

struct Kernel {
  std::vector<InstructionEvent> trace;
  MachineConfig config;
};

struct KernelSpec {
  std::string name;
  std::uint64_t iters = 0;      // iterations / events; 0 picks the kernel's default
  std::uint64_t footprint = 0;  // bytes, stream only
  std::uint64_t seed = 1;       // random-mix only
};

// Skylake-like port groups, frontend at four instructions per cycle, a
// 224-entry window and a three-level cache hierarchy.
std::string_view skylake_like_config_text();
MachineConfig skylake_like_config();

// Twelve single-uop instructions on ports p0..p6, window of 4, unit gaps
// and latencies, no frontend, caches or branch prediction.
Kernel gen_fig8();

// Seventeen-instruction stencil loop body, p23-bound in steady state.
Kernel gen_jacobi_like(std::uint64_t iters);

// n dependent instructions of latency 4 on an otherwise idle machine.
Kernel gen_latency_chain(std::uint64_t n);

// n loads striding one line over `footprint` bytes (wrapping).
Kernel gen_stream(std::uint64_t n, std::uint64_t footprint);

// Random instruction mix: up to `resources` resources, random gaps,
// latencies, register and memory dependencies, and a small cache hierarchy.
Kernel gen_random_mix(std::uint64_t events, std::uint32_t resources, std::uint64_t seed);

std::vector<std::string> kernel_names();
Kernel generate(const KernelSpec& spec);

}  // namespace arsim
