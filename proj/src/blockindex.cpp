#include "fmm/blockindex.hpp"

#include <stdexcept>
#include <string>

namespace fmm {

std::size_t RadixSchedule::row_product() const {
    std::size_t p = 1;
    for (auto [r, c] : perLevel) p *= r;
    return p;
}

std::size_t RadixSchedule::col_product() const {
    std::size_t p = 1;
    for (auto [r, c] : perLevel) p *= c;
    return p;
}

RadixSchedule radix_schedule(const MultiLevelSpec& spec, Role role) {
    RadixSchedule s;
    for (const auto& l : spec.levels) {
        switch (role) {
            case Role::A: s.perLevel.emplace_back(l.mt, l.kt); break;
            case Role::B: s.perLevel.emplace_back(l.kt, l.nt); break;
            case Role::C: s.perLevel.emplace_back(l.mt, l.nt); break;
        }
    }
    return s;
}

std::size_t linear_index(std::span<const BlockCoord> coords, const RadixSchedule& sched) {
    if (coords.size() != sched.levels())
        throw std::out_of_range("linear_index: expected " + std::to_string(sched.levels()) +
                                " coordinates, got " + std::to_string(coords.size()));
    std::size_t p = 0;
    for (std::size_t l = 0; l < coords.size(); ++l) {
        const auto [rr, cr] = sched.perLevel[l];
        if (coords[l].row >= rr || coords[l].col >= cr)
            throw std::out_of_range("linear_index: coordinate out of range at level " + std::to_string(l));
        p = p * (rr * cr) + coords[l].row * cr + coords[l].col;
    }
    return p;
}

std::vector<BlockCoord> block_coords(std::size_t p, const RadixSchedule& sched) {
    if (p >= sched.total_blocks())
        throw std::out_of_range("block_coords: index " + std::to_string(p) + " out of range");
    std::vector<BlockCoord> coords(sched.levels());
    for (std::size_t l = sched.levels(); l-- > 0;) {
        const auto [rr, cr] = sched.perLevel[l];
        const std::size_t digit = p % (rr * cr);
        p /= rr * cr;
        coords[l] = {digit / cr, digit % cr};
    }
    return coords;
}

BlockPartition partition(std::size_t rows, std::size_t cols, const RadixSchedule& sched) {
    if (rows == 0 || cols == 0) throw std::invalid_argument("partition: zero-size matrix");
    const std::size_t rp = sched.row_product(), cp = sched.col_product();
    if (rows < rp || cols < cp)
        throw std::invalid_argument("partition: " + std::to_string(rows) + "x" + std::to_string(cols) +
                                    " is smaller than the radix grid " + std::to_string(rp) + "x" +
                                    std::to_string(cp));

    BlockPartition part;
    part.coreRows = rows - rows % rp;
    part.coreCols = cols - cols % cp;
    const std::size_t bh = part.coreRows / rp, bw = part.coreCols / cp;

    // Per-level block extents: level l blocks are coreRows / prod_{l'<=l} rowRadix_l' tall.
    std::vector<std::size_t> h(sched.levels()), w(sched.levels());
    std::size_t hh = part.coreRows, ww = part.coreCols;
    for (std::size_t l = 0; l < sched.levels(); ++l) {
        hh /= sched.perLevel[l].first;
        ww /= sched.perLevel[l].second;
        h[l] = hh;
        w[l] = ww;
    }

    part.views.reserve(sched.total_blocks());
    for (std::size_t p = 0; p < sched.total_blocks(); ++p) {
        const auto coords = block_coords(p, sched);
        BlockView v{0, 0, bh, bw};
        for (std::size_t l = 0; l < coords.size(); ++l) {
            v.rowOffset += coords[l].row * h[l];
            v.colOffset += coords[l].col * w[l];
        }
        part.views.push_back(v);
    }
    if (part.coreCols < cols) part.fringeRight = BlockView{0, part.coreCols, part.coreRows, cols - part.coreCols};
    if (part.coreRows < rows) part.fringeBottom = BlockView{part.coreRows, 0, rows - part.coreRows, cols};
    return part;
}

BlockPartition partition(std::size_t rows, std::size_t cols, const MultiLevelSpec& spec, Role role) {
    return partition(rows, cols, radix_schedule(spec, role));
}

}  // namespace fmm
