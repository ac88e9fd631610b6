#pragma once

#include <cstddef>
#include <functional>

namespace finsler {

// Execution policy for the point-parallel loops. Serial is the reference
// implementation; OpenMP distributes points across threads. Results are
// written into preassigned slots, so the two policies produce identical
// output.
struct ExecPolicy {
    enum class Mode { Serial, OpenMP } mode = Mode::OpenMP;
    int threads = 0;  // 0 = runtime default

    static ExecPolicy serial() { return {Mode::Serial, 1}; }
    static ExecPolicy parallel(int threads = 0) { return {Mode::OpenMP, threads}; }
};

void parallelFor(const ExecPolicy& policy, std::size_t count,
                 const std::function<void(std::size_t)>& fn);

}  // namespace finsler
