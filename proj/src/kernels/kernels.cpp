#include <atomic>
#include <cstdlib>
#include <string>

#include "gbmlab/common.hpp"
#include "gbmlab/kernels.hpp"

namespace gbmlab::kernels {

const KernelTable& scalar_table();   // kernels_scalar.cpp
const KernelTable* avx2_table();     // kernels_avx2.cpp; nullptr if not built

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2") != 0;
#else
    return false;
#endif
}

Isa pick_default() {
    if (const char* env = std::getenv("GBMLAB_ISA")) {
        const std::string s(env);
        if (s == "scalar") return Isa::scalar;
        if (s == "avx2") {
            if (avx2_table() && cpu_has_avx2()) return Isa::avx2;
            throw ValidationError("GBMLAB_ISA=avx2 but AVX2 is unavailable on this host");
        }
        if (!s.empty()) throw ValidationError("unknown GBMLAB_ISA value: " + s);
    }
    return (avx2_table() && cpu_has_avx2()) ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& active_slot() {
    static std::atomic<Isa> slot{pick_default()};
    return slot;
}

}  // namespace

bool avx2_supported() { return avx2_table() != nullptr && cpu_has_avx2(); }

const KernelTable& table_for(Isa isa) {
    if (isa == Isa::scalar) return scalar_table();
    if (!avx2_supported()) throw ValidationError("AVX2 kernels unavailable on this host");
    return *avx2_table();
}

Isa active_isa() { return active_slot().load(std::memory_order_relaxed); }

void force_isa(Isa isa) {
    table_for(isa);  // validates availability
    active_slot().store(isa, std::memory_order_relaxed);
}

const KernelTable& table() { return table_for(active_isa()); }

std::string isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

}  // namespace gbmlab::kernels
