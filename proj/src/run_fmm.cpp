#include "fmm/blockindex.hpp"
#include "fmm/executor.hpp"
#include "fused_gemm.hpp"

#include <chrono>
#include <stdexcept>
#include <string>

namespace fmm {
namespace {

// A single product with unit coefficients: nothing to combine or scatter.
bool is_trivial(const MultiLevelSpec& spec) {
    return spec.Rtot == 1 && spec.Mrad == 1 && spec.Krad == 1 && spec.Nrad == 1 && is_one(spec.bigU(0, 0)) &&
           is_one(spec.bigV(0, 0)) && is_one(spec.bigW(0, 0));
}

void check_schedule(const Schedule& sched, const MultiLevelSpec& spec) {
    if (sched.specId != spec.id() || sched.Rtot != spec.Rtot || sched.Mrad != spec.Mrad ||
        sched.Krad != spec.Krad || sched.Nrad != spec.Nrad) {
        throw std::invalid_argument("run_fmm: schedule for '" + sched.specId + "' does not match spec '" +
                                    spec.id() + "'");
    }
}

// dst = sum_t coeff_t * src_t, ascending block order.
void combine(MatrixView dst, const std::vector<ConstMatrixView>& blocks, const std::vector<Term>& terms) {
    for (std::size_t i = 0; i < dst.rows; ++i) {
        double* d = &dst(i, 0);
        for (std::size_t j = 0; j < dst.cols; ++j) d[j] = 0.0;
        for (const auto& t : terms) {
            const double c = to_double(t.coeff);
            const double* s = &blocks[t.block](i, 0);
            for (std::size_t j = 0; j < dst.cols; ++j) d[j] += c * s[j];
        }
    }
}

void scatter(const std::vector<MatrixView>& cBlocks, const std::vector<Term>& terms, ConstMatrixView M) {
    for (const auto& t : terms) {
        const double w = to_double(t.coeff);
        MatrixView dst = cBlocks[t.block];
        for (std::size_t i = 0; i < M.rows; ++i) {
            double* d = &dst(i, 0);
            const double* s = &M(i, 0);
            if (w == 1.0) {
                for (std::size_t j = 0; j < M.cols; ++j) d[j] += s[j];
            } else {
                for (std::size_t j = 0; j < M.cols; ++j) d[j] += w * s[j];
            }
        }
    }
}

template <typename View>
std::vector<View> block_views(View whole, const BlockPartition& part) {
    std::vector<View> out;
    out.reserve(part.views.size());
    for (const auto& v : part.views) out.push_back(whole.sub(v.rowOffset, v.colOffset, v.rows, v.cols));
    return out;
}

const Step* find_step(const Schedule& sched, std::size_t from, StepKind kind, std::size_t r) {
    for (std::size_t i = from; i < sched.steps.size(); ++i)
        if (sched.steps[i].kind == kind && sched.steps[i].r == r) return &sched.steps[i];
    for (std::size_t i = 0; i < from && i < sched.steps.size(); ++i)
        if (sched.steps[i].kind == kind && sched.steps[i].r == r) return &sched.steps[i];
    return nullptr;
}

}  // namespace

ExecStats run_fmm(const Schedule& sched, const MultiLevelSpec& spec, ConstMatrixView A, ConstMatrixView B,
                  MatrixView C, const ArchParams& arch, const ExecOptions& opts) {
    if (A.cols != B.rows || A.rows != C.rows || B.cols != C.cols)
        throw std::invalid_argument("run_fmm: dimension mismatch");
    if (!spec.validated) throw std::invalid_argument("run_fmm: spec '" + spec.id() + "' is not validated");
    check_schedule(sched, spec);
    arch.validate();

    const auto t0 = std::chrono::steady_clock::now();
    ExecStats stats;
    const std::size_t m = A.rows, k = A.cols, n = B.cols;
    auto finish = [&] {
        stats.wallTimeS = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return stats;
    };
    if (m == 0 || n == 0 || k == 0) return finish();

    if (m < spec.Mrad || k < spec.Krad || n < spec.Nrad) {
        gemm_blocked(A, B, C, arch, opts);
        stats.fellBack = true;
        stats.fringeFlops = 2.0 * m * n * k;
        return finish();
    }
    if (is_trivial(spec)) {
        gemm_blocked(A, B, C, arch, opts);
        stats.submatrixMultiplies = 1;
        stats.stepsExecuted = sched.steps.size();
        stats.multiplyFlops = 2.0 * m * n * k;
        return finish();
    }

    const BlockPartition pa = partition(m, k, spec, Role::A);
    const BlockPartition pb = partition(k, n, spec, Role::B);
    const BlockPartition pc = partition(m, n, spec, Role::C);
    const std::size_t m0 = pc.coreRows, n0 = pc.coreCols, k0 = pa.coreCols;
    const std::size_t bm = m0 / spec.Mrad, bk = k0 / spec.Krad, bn = n0 / spec.Nrad;

    const auto aBlocks = block_views(A, pa);
    const auto bBlocks = block_views(B, pb);
    const auto cBlocks = block_views(C, pc);

    // Temporaries are allocated once and reused for every r.
    DenseMatrix TA, TB, M;
    if (sched.strategy == Strategy::Naive) {
        TA = DenseMatrix(bm, bk);
        TB = DenseMatrix(bk, bn);
    }
    if (sched.strategy != Strategy::ABC) M = DenseMatrix(bm, bn);

    detail::GemmWorkspace ws;
    std::vector<detail::Operand> aOps, bOps;
    std::vector<detail::Destination> cDst;
    const std::vector<Term>* packA = nullptr;
    const std::vector<Term>* packB = nullptr;

    auto operands = [](const std::vector<ConstMatrixView>& blocks, const std::vector<Term>& terms,
                       std::vector<detail::Operand>& out) {
        out.clear();
        for (const auto& t : terms) out.push_back({to_double(t.coeff), blocks[t.block]});
    };

    for (std::size_t idx = 0; idx < sched.steps.size(); ++idx) {
        const Step& step = sched.steps[idx];
        switch (step.kind) {
            case StepKind::PackA:
                packA = &step.terms;
                if (sched.strategy == Strategy::Naive) {
                    combine(TA, aBlocks, step.terms);
                    ws.bytesPacked += 8.0 * step.terms.size() * bm * bk;
                }
                break;
            case StepKind::PackB:
                packB = &step.terms;
                if (sched.strategy == Strategy::Naive) {
                    combine(TB, bBlocks, step.terms);
                    ws.bytesPacked += 8.0 * step.terms.size() * bk * bn;
                }
                break;
            case StepKind::Multiply: {
                if (!packA || !packB) throw std::invalid_argument("run_fmm: MULTIPLY before PACK steps");
                if (sched.strategy == Strategy::Naive) {
                    aOps = {{1.0, TA}};
                    bOps = {{1.0, TB}};
                } else {
                    operands(aBlocks, *packA, aOps);
                    operands(bBlocks, *packB, bOps);
                }
                cDst.clear();
                if (sched.strategy == Strategy::ABC) {
                    const Step* upd = find_step(sched, idx + 1, StepKind::Update, step.r);
                    if (!upd) throw std::invalid_argument("run_fmm: no UPDATE for r=" + std::to_string(step.r));
                    for (const auto& t : upd->terms) cDst.push_back({to_double(t.coeff), cBlocks[t.block]});
                } else {
                    M.fill(0.0);
                    cDst.push_back({1.0, M});
                }
                detail::fused_gemm(aOps, bOps, cDst, arch, opts.threads, ws);
                ++stats.submatrixMultiplies;
                stats.multiplyFlops += 2.0 * bm * bk * bn;
                break;
            }
            case StepKind::Update:
                if (sched.strategy != Strategy::ABC) scatter(cBlocks, step.terms, M);
                break;
        }
        ++stats.stepsExecuted;
    }
    stats.bytesPacked = ws.bytesPacked;

    // Peel the strips outside the radix-divisible core.
    if (k0 < k) {
        gemm_blocked(A.sub(0, k0, m0, k - k0), B.sub(k0, 0, k - k0, n0), C.sub(0, 0, m0, n0), arch, opts);
        stats.fringeFlops += 2.0 * m0 * n0 * (k - k0);
    }
    if (pc.fringeRight) {
        const auto& f = *pc.fringeRight;
        gemm_blocked(A.sub(0, 0, f.rows, k), B.sub(0, f.colOffset, k, f.cols),
                     C.sub(f.rowOffset, f.colOffset, f.rows, f.cols), arch, opts);
        stats.fringeFlops += 2.0 * f.rows * f.cols * k;
    }
    if (pc.fringeBottom) {
        const auto& f = *pc.fringeBottom;
        gemm_blocked(A.sub(f.rowOffset, 0, f.rows, k), B, C.sub(f.rowOffset, 0, f.rows, f.cols), arch, opts);
        stats.fringeFlops += 2.0 * f.rows * f.cols * k;
    }
    return finish();
}

}  // namespace fmm
