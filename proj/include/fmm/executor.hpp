#pragma once

#include "fmm/arch.hpp"
#include "fmm/kron.hpp"
#include "fmm/matrix.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fmm {

/// How much of the linear-combination work is fused into the blocked multiply.
///   Naive: T_A, T_B and M_r are explicit temporaries.
///   AB:    A/B combinations happen while packing; M_r is still a temporary.
///   ABC:   AB plus each computed tile is scattered, scaled, into every C_p.
enum class Strategy { ABC, AB, Naive };

std::string_view to_string(Strategy s);
// Accepts "naive", "ab", "abc" (case-insensitive). Throws std::invalid_argument.
Strategy parse_strategy(std::string_view text);

struct Term {
    std::size_t block;
    Rational coeff;
    bool operator==(const Term&) const = default;
};

enum class StepKind { PackA, PackB, Multiply, Update };

struct Step {
    StepKind kind;
    std::size_t r;
    std::vector<Term> terms;  // empty for Multiply
    bool operator==(const Step&) const = default;
};

/// Straight-line program for one composed algorithm: for r = 0..Rtot-1,
/// PackA(r), PackB(r), Multiply(r), Update(r). M_r is the product of step r.
struct Schedule {
    std::vector<Step> steps;
    Strategy strategy = Strategy::ABC;
    std::string specId;
    std::size_t Mrad = 1, Krad = 1, Nrad = 1, Rtot = 1;

    std::size_t multiply_count() const;
};

struct ExecOptions {
    std::size_t threads = 1;
    // Reads FMM_THREADS; unset or invalid means 1.
    static ExecOptions from_env();
};

struct ExecStats {
    std::size_t submatrixMultiplies = 0;
    std::size_t stepsExecuted = 0;
    double multiplyFlops = 0;  // 2*bm*bk*bn per executed product
    double fringeFlops = 0;
    double bytesPacked = 0;
    double wallTimeS = 0;
    bool fellBack = false;  // dims below the radices: plain blocked GEMM ran instead
};

/// C += A*B by the i, j, k triple loop. Oracle for everything else.
void gemm_reference(ConstMatrixView A, ConstMatrixView B, MatrixView C);

/// C += A*B with Goto-style blocking: nC -> kC -> mC -> nR -> mR loops,
/// B panels and A blocks packed into contiguous buffers.
void gemm_blocked(ConstMatrixView A, ConstMatrixView B, MatrixView C, const ArchParams& arch,
                  const ExecOptions& opts = {});

Schedule build_schedule(const MultiLevelSpec& spec, Strategy strategy);

/// Textual form of the generated implementation; deterministic.
std::string render_schedule(const Schedule& sched, const MultiLevelSpec& spec);

/// C += A*B via `sched` over the recursive block partitions of A, B, C.
/// Leftover strips (dims not divisible by the radices) are peeled and computed
/// by gemm_blocked. Throws std::invalid_argument on dimension mismatch, an
/// unvalidated spec or a schedule that does not belong to `spec`.
ExecStats run_fmm(const Schedule& sched, const MultiLevelSpec& spec, ConstMatrixView A,
                  ConstMatrixView B, MatrixView C, const ArchParams& arch, const ExecOptions& opts = {});

}  // namespace fmm
