#pragma once

#include "cameo/kernels.hpp"

namespace cameo::kernels::detail {

const KernelTable* avx2_table();
const KernelTable* neon_table();

}  // namespace cameo::kernels::detail
