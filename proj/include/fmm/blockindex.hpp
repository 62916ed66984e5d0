#pragma once

#include "fmm/kron.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace fmm {

// Per-level (rowRadix, colRadix) of a nested block partition, level 0 outermost.
struct RadixSchedule {
    std::vector<std::pair<std::size_t, std::size_t>> perLevel;

    std::size_t levels() const { return perLevel.size(); }
    std::size_t row_product() const;
    std::size_t col_product() const;
    std::size_t total_blocks() const { return row_product() * col_product(); }
};

struct BlockCoord {
    std::size_t row = 0;
    std::size_t col = 0;
    bool operator==(const BlockCoord&) const = default;
};

enum class Role { A, B, C };

// Radices of operand `role` under `spec`: (m,k) for A, (k,n) for B, (m,n) for C.
RadixSchedule radix_schedule(const MultiLevelSpec& spec, Role role);

/// Mixed-radix row-major digits, outermost level most significant:
///     p = sum_l (i_l * colRadix_l + j_l) * prod_{l' > l} rowRadix_l' * colRadix_l'
/// This is the row order of the Kronecker-composed coefficient matrices.
/// Throws std::out_of_range for a coordinate outside its radix.
std::size_t linear_index(std::span<const BlockCoord> coords, const RadixSchedule& sched);

std::vector<BlockCoord> block_coords(std::size_t p, const RadixSchedule& sched);

struct BlockView {
    std::size_t rowOffset = 0;
    std::size_t colOffset = 0;
    std::size_t rows = 0;
    std::size_t cols = 0;
    bool operator==(const BlockView&) const = default;
};

struct BlockPartition {
    std::vector<BlockView> views;  // recursive-block linear order
    std::size_t coreRows = 0;
    std::size_t coreCols = 0;
    std::optional<BlockView> fringeRight;   // core rows x (cols - coreCols)
    std::optional<BlockView> fringeBottom;  // (rows - coreRows) x full width
};

/// Splits a rows x cols operand into equal recursive-block views over the
/// largest radix-divisible leading region, peeling the remainder as fringes.
/// Throws std::invalid_argument for a zero-size matrix or dims smaller than the
/// radix products.
BlockPartition partition(std::size_t rows, std::size_t cols, const RadixSchedule& sched);
BlockPartition partition(std::size_t rows, std::size_t cols, const MultiLevelSpec& spec, Role role);

}  // namespace fmm
