#include "witnesskit/kernels.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace wk::kernels {

bool avx2_supported() {
#if defined(WITNESSKIT_HAVE_AVX2)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

namespace {

const Ops& resolve_ops() {
    const char* env = std::getenv("WITNESSKIT_SIMD");
    const std::string mode = env ? env : "auto";
    if (mode == "scalar") {
        return scalar_ops();
    }
    if (mode == "avx2") {
#if defined(WITNESSKIT_HAVE_AVX2)
        if (avx2_supported()) {
            return avx2_ops();
        }
#endif
        throw std::runtime_error("WITNESSKIT_SIMD=avx2 requested but AVX2+FMA is unavailable");
    }
    if (mode != "auto") {
        throw std::runtime_error("unknown WITNESSKIT_SIMD value: " + mode);
    }
#if defined(WITNESSKIT_HAVE_AVX2)
    if (avx2_supported()) {
        return avx2_ops();
    }
#endif
    return scalar_ops();
}

}  // namespace

const Ops& ops() {
    // Resolved once; the env override is read at first use.
    static const Ops& selected = resolve_ops();
    return selected;
}

const char* active_backend() {
    return ops().name;
}

}  // namespace wk::kernels
