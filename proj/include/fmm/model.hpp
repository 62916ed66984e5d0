#pragma once

#include "fmm/arch.hpp"
#include "fmm/coefficients.hpp"
#include "fmm/executor.hpp"

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace fmm {

// Memory-op tallies in doubles moved.
struct CostCounts {
    double packA = 0;        // nnz(bigU)-weighted submatrix reads
    double packB = 0;        // nnz(bigV)-weighted submatrix reads
    double cUpdate = 0;      // nnz(bigW)-weighted C read+write
    double temporaries = 0;  // strategy surcharge: T_A, T_B, M_r traffic
    double total() const { return packA + packB + cUpdate + temporaries; }
};

struct CostEstimate {
    double arithTimeS = 0;  // T_a
    double memTimeS = 0;    // T_m
    double totalTimeS = 0;  // T_a + T_m
    double effectiveGflops = 0;
    CostCounts counts;
};

struct Variant {
    std::vector<std::string> specChain;  // level 0 first
    Strategy strategy = Strategy::ABC;

    std::string id() const;  // "strassen+strassen"
    bool operator==(const Variant&) const = default;
};

/// Analytic cost of a multi-level algorithm. Only per-level radices, ranks and
/// nnz counts enter, so nothing is Kronecker-materialized.
CostEstimate estimate(std::span<const FmmSpec> levels, Strategy strategy, std::size_t m, std::size_t k,
                      std::size_t n, const ArchParams& arch);

// Resolves `variant` by name in `catalog`; throws std::invalid_argument for an unknown name.
CostEstimate estimate(const Variant& variant, std::span<const FmmSpec> catalog, std::size_t m, std::size_t k,
                      std::size_t n, const ArchParams& arch);

// Plain blocked GEMM under the same cost skeleton.
CostEstimate estimate_gemm(std::size_t m, std::size_t k, std::size_t n, const ArchParams& arch);

struct RankedVariant {
    Variant variant;
    CostEstimate cost;
};

/// Ascending predicted time; ties by fewer levels, then spec names, then ABC < AB < Naive.
std::vector<RankedVariant> rank_variants(std::span<const Variant> variants, std::span<const FmmSpec> catalog,
                                         std::size_t m, std::size_t k, std::size_t n, const ArchParams& arch);

// The top two of rank_variants. Throws std::invalid_argument for fewer than two variants.
std::pair<RankedVariant, RankedVariant> best_two(std::span<const Variant> variants,
                                                 std::span<const FmmSpec> catalog, std::size_t m,
                                                 std::size_t k, std::size_t n, const ArchParams& arch);

/// Every ordered spec chain of length 1..maxLevels, crossed with `strategies`.
std::vector<Variant> enumerate_variants(std::span<const FmmSpec> catalog, std::size_t maxLevels,
                                        std::span<const Strategy> strategies);

std::vector<FmmSpec> resolve_chain(const Variant& variant, std::span<const FmmSpec> catalog);

}  // namespace fmm
