#include "fused_gemm.hpp"
#include "fmm/executor.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <thread>

namespace fmm {
namespace detail {
namespace {

std::size_t round_up(std::size_t x, std::size_t to) { return (x + to - 1) / to * to; }

// Packs rows [ic, ic+mc) x cols [pc, pc+kc) of sum_t coeff_t*A_t into mR-row
// micro-panels: panel q holds element (q*mR+i, p) at q*kc*mR + p*mR + i.
// Rows past mc are zero.
void pack_a(std::span<const Operand> as, std::size_t ic, std::size_t pc, std::size_t mc,
            std::size_t kc, std::size_t mr, double* buf) {
    for (std::size_t q = 0; q < mc; q += mr) {
        double* panel = buf + q * kc;
        const std::size_t rows = std::min(mr, mc - q);
        for (std::size_t i = 0; i < mr; ++i) {
            if (i >= rows) {
                for (std::size_t p = 0; p < kc; ++p) panel[p * mr + i] = 0.0;
                continue;
            }
            const std::size_t row = ic + q + i;
            if (as.size() == 1 && as[0].coeff == 1.0) {
                const double* src = &as[0].view(row, pc);
                for (std::size_t p = 0; p < kc; ++p) panel[p * mr + i] = src[p];
                continue;
            }
            for (std::size_t p = 0; p < kc; ++p) {
                double s = 0.0;
                for (const auto& t : as) s += t.coeff * t.view(row, pc + p);
                panel[p * mr + i] = s;
            }
        }
    }
}

// Packs rows [pc, pc+kc) x cols [jc, jc+nc) of sum_t coeff_t*B_t into nR-column
// micro-panels: panel q holds element (p, q*nR+j) at q*kc*nR + p*nR + j.
void pack_b(std::span<const Operand> bs, std::size_t pc, std::size_t jc, std::size_t kc,
            std::size_t nc, std::size_t nr, double* buf) {
    for (std::size_t q = 0; q < nc; q += nr) {
        double* panel = buf + q * kc;
        const std::size_t cols = std::min(nr, nc - q);
        for (std::size_t p = 0; p < kc; ++p) {
            double* dst = panel + p * nr;
            for (std::size_t j = 0; j < cols; ++j) {
                double s = 0.0;
                for (const auto& t : bs) s += t.coeff * t.view(pc + p, jc + q + j);
                dst[j] = s;
            }
            for (std::size_t j = cols; j < nr; ++j) dst[j] = 0.0;
        }
    }
}

template <std::size_t MR, std::size_t NR>
void micro_kernel(std::size_t kc, const double* a, const double* b, double* acc) {
    double c[MR][NR] = {};
    for (std::size_t p = 0; p < kc; ++p) {
        for (std::size_t i = 0; i < MR; ++i) {
            const double ai = a[i];
            for (std::size_t j = 0; j < NR; ++j) c[i][j] += ai * b[j];
        }
        a += MR;
        b += NR;
    }
    for (std::size_t i = 0; i < MR; ++i)
        for (std::size_t j = 0; j < NR; ++j) acc[i * NR + j] = c[i][j];
}

void micro_kernel_generic(std::size_t mr, std::size_t nr, std::size_t kc, const double* a,
                          const double* b, double* acc) {
    std::fill_n(acc, mr * nr, 0.0);
    for (std::size_t p = 0; p < kc; ++p) {
        for (std::size_t i = 0; i < mr; ++i)
            for (std::size_t j = 0; j < nr; ++j) acc[i * nr + j] += a[i] * b[j];
        a += mr;
        b += nr;
    }
}

using Kernel = void (*)(std::size_t, const double*, const double*, double*);

Kernel select_kernel(std::size_t mr, std::size_t nr) {
    if (mr == 8 && nr == 4) return micro_kernel<8, 4>;
    if (mr == 4 && nr == 4) return micro_kernel<4, 4>;
    if (mr == 4 && nr == 8) return micro_kernel<4, 8>;
    if (mr == 6 && nr == 8) return micro_kernel<6, 8>;
    if (mr == 8 && nr == 8) return micro_kernel<8, 8>;
    return nullptr;
}

// Multiplies one packed mc x kc A block by the packed kc x nc B panel and
// scatters each tile into every destination at (ic, jc).
void macro_kernel(const double* abuf, const double* bbuf, std::size_t mc, std::size_t nc,
                  std::size_t kc, std::size_t ic, std::size_t jc, std::span<const Destination> cs,
                  const ArchParams& arch, Kernel kernel) {
    const std::size_t mr = arch.mR, nr = arch.nR;
    double acc[kMaxRegisterBlock * kMaxRegisterBlock];
    for (std::size_t jr = 0; jr < nc; jr += nr) {
        const std::size_t cols = std::min(nr, nc - jr);
        const double* bp = bbuf + jr * kc;
        for (std::size_t ir = 0; ir < mc; ir += mr) {
            const std::size_t rows = std::min(mr, mc - ir);
            const double* ap = abuf + ir * kc;
            if (kernel) kernel(kc, ap, bp, acc);
            else micro_kernel_generic(mr, nr, kc, ap, bp, acc);
            for (const auto& d : cs) {
                for (std::size_t i = 0; i < rows; ++i) {
                    double* crow = &d.view(ic + ir + i, jc + jr);
                    const double* arow = acc + i * nr;
                    if (d.coeff == 1.0) {
                        for (std::size_t j = 0; j < cols; ++j) crow[j] += arow[j];
                    } else {
                        for (std::size_t j = 0; j < cols; ++j) crow[j] += d.coeff * arow[j];
                    }
                }
            }
        }
    }
}

}  // namespace

void fused_gemm(std::span<const Operand> as, std::span<const Operand> bs,
                std::span<const Destination> cs, const ArchParams& arch, std::size_t threads,
                GemmWorkspace& ws) {
    if (as.empty() || bs.empty() || cs.empty()) return;
    const std::size_t m = as[0].view.rows, k = as[0].view.cols, n = bs[0].view.cols;
    for (const auto& a : as)
        if (a.view.rows != m || a.view.cols != k) throw std::invalid_argument("fused_gemm: A operand shape");
    for (const auto& b : bs)
        if (b.view.rows != k || b.view.cols != n) throw std::invalid_argument("fused_gemm: B operand shape");
    for (const auto& c : cs)
        if (c.view.rows != m || c.view.cols != n) throw std::invalid_argument("fused_gemm: C operand shape");
    if (m == 0 || n == 0 || k == 0) return;

    const Kernel kernel = select_kernel(arch.mR, arch.nR);
    const std::size_t kcMax = std::min(arch.kC, k);
    const std::size_t ncMax = round_up(std::min(arch.nC, n), arch.nR);
    const std::size_t mcMax = round_up(std::min(arch.mC, m), arch.mR);
    const std::size_t mBlocks = (m + arch.mC - 1) / arch.mC;
    const std::size_t workers = std::max<std::size_t>(1, std::min(threads, mBlocks));

    if (ws.packB.size() < kcMax * ncMax) ws.packB.resize(kcMax * ncMax);
    if (ws.packA.size() < workers) ws.packA.resize(workers);
    for (std::size_t w = 0; w < workers; ++w)
        if (ws.packA[w].size() < mcMax * kcMax) ws.packA[w].resize(mcMax * kcMax);

    for (std::size_t jc = 0; jc < n; jc += arch.nC) {
        const std::size_t nc = std::min(arch.nC, n - jc);
        for (std::size_t pc = 0; pc < k; pc += arch.kC) {
            const std::size_t kc = std::min(arch.kC, k - pc);
            pack_b(bs, pc, jc, kc, nc, arch.nR, ws.packB.data());
            ws.bytesPacked += 8.0 * static_cast<double>(bs.size() * kc * nc);

            // Third loop around the micro-kernel: each worker owns disjoint rows
            // of every destination.
            auto run_blocks = [&](std::size_t worker) {
                double* abuf = ws.packA[worker].data();
                for (std::size_t blk = worker; blk < mBlocks; blk += workers) {
                    const std::size_t ic = blk * arch.mC;
                    const std::size_t mc = std::min(arch.mC, m - ic);
                    pack_a(as, ic, pc, mc, kc, arch.mR, abuf);
                    macro_kernel(abuf, ws.packB.data(), mc, nc, kc, ic, jc, cs, arch, kernel);
                }
            };
            if (workers == 1) {
                run_blocks(0);
            } else {
                std::vector<std::jthread> pool;
                pool.reserve(workers - 1);
                for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run_blocks, w);
                run_blocks(0);
            }
            ws.bytesPacked += 8.0 * static_cast<double>(as.size() * m * kc);
        }
    }
}

}  // namespace detail

namespace {

void check_conforming(ConstMatrixView A, ConstMatrixView B, ConstMatrixView C, const char* who) {
    if (A.cols != B.rows || A.rows != C.rows || B.cols != C.cols) {
        throw std::invalid_argument(std::string(who) + ": dimension mismatch (" + std::to_string(A.rows) +
                                    "x" + std::to_string(A.cols) + ") * (" + std::to_string(B.rows) + "x" +
                                    std::to_string(B.cols) + ") -> (" + std::to_string(C.rows) + "x" +
                                    std::to_string(C.cols) + ")");
    }
}

}  // namespace

void gemm_reference(ConstMatrixView A, ConstMatrixView B, MatrixView C) {
    check_conforming(A, B, C, "gemm_reference");
    for (std::size_t i = 0; i < C.rows; ++i)
        for (std::size_t j = 0; j < C.cols; ++j) {
            double s = C(i, j);
            for (std::size_t p = 0; p < A.cols; ++p) s += A(i, p) * B(p, j);
            C(i, j) = s;
        }
}

void gemm_blocked(ConstMatrixView A, ConstMatrixView B, MatrixView C, const ArchParams& arch,
                  const ExecOptions& opts) {
    check_conforming(A, B, C, "gemm_blocked");
    arch.validate();
    detail::GemmWorkspace ws;
    const detail::Operand a{1.0, A}, b{1.0, B};
    const detail::Destination c{1.0, C};
    detail::fused_gemm({&a, 1}, {&b, 1}, {&c, 1}, arch, opts.threads, ws);
}

}  // namespace fmm
