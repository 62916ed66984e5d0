#pragma once

// Internal: the blocked multiply shared by gemm_blocked and every FMM strategy.

#include "fmm/arch.hpp"
#include "fmm/matrix.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace fmm::detail {

struct Operand {
    double coeff;
    ConstMatrixView view;
};

struct Destination {
    double coeff;
    MatrixView view;
};

// Packing buffers reused across calls; one A buffer per worker thread.
struct GemmWorkspace {
    std::vector<double> packB;
    std::vector<std::vector<double>> packA;
    double bytesPacked = 0;
};

/// For every destination d:  d.view += d.coeff * (sum_a a.coeff*a.view) (sum_b b.coeff*b.view).
/// The A and B sums are formed while packing; each mR x nR result tile is
/// scattered into all destinations straight from the kernel accumulator.
/// All operands of a side share one shape.
void fused_gemm(std::span<const Operand> as, std::span<const Operand> bs,
                std::span<const Destination> cs, const ArchParams& arch, std::size_t threads,
                GemmWorkspace& ws);

}  // namespace fmm::detail
