#include "qimpc/kernels.hpp"

#include <atomic>
#include <cstdlib>

namespace qimpc::kernels {

#ifdef QIMPC_HAVE_AVX2
const KernelTable& avx2_table();
#endif

namespace {

bool avx2_usable() {
#ifdef QIMPC_HAVE_AVX2
#if defined(__GNUC__) || defined(__clang__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
#else
    return false;
#endif
}

const KernelTable* resolve_default() {
    if (const char* env = std::getenv("QIMPC_KERNEL")) {
        const std::string_view want(env);
        if (want == "scalar") return &scalar_table();
#ifdef QIMPC_HAVE_AVX2
        if (want == "avx2" && avx2_usable()) return &avx2_table();
#endif
        // Unknown or unavailable request falls through to auto-detection.
    }
#ifdef QIMPC_HAVE_AVX2
    if (avx2_usable()) return &avx2_table();
#endif
    return &scalar_table();
}

std::atomic<const KernelTable*>& slot() {
    static std::atomic<const KernelTable*> s{resolve_default()};
    return s;
}

}  // namespace

const KernelTable& active() { return *slot().load(std::memory_order_acquire); }

bool select(std::string_view name) {
    if (name == "scalar") {
        slot().store(&scalar_table(), std::memory_order_release);
        return true;
    }
#ifdef QIMPC_HAVE_AVX2
    if (name == "avx2" && avx2_usable()) {
        slot().store(&avx2_table(), std::memory_order_release);
        return true;
    }
#endif
    return false;
}

std::vector<std::string> available() {
    std::vector<std::string> out{"scalar"};
#ifdef QIMPC_HAVE_AVX2
    if (avx2_usable()) out.emplace_back("avx2");
#endif
    return out;
}

}  // namespace qimpc::kernels
