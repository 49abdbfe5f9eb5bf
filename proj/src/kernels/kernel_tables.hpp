// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "gfnoma/kernels.hpp"

namespace gfnoma::kernels::detail {

const KernelTable& scalar_table();
#if defined(GFNOMA_BUILD_AVX2)
const KernelTable& avx2_table();
#endif
#if defined(GFNOMA_BUILD_NEON)
const KernelTable& neon_table();
#endif

}  // namespace gfnoma::kernels::detail
