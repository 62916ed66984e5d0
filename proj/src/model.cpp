#include "fmm/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fmm {

// Cost skeleton: T = T_a + T_m.
//
//   T_a = Rtot * 2 * bm*bk*bn / peak                      bm = ceil(m/Mrad), ...
//   T_m = 8 bytes * (packA + packB + cUpdate + temporaries) / bandwidth
//
//   packA   = nnz(bigU) * bm*bk * ceil(bn/nC)   A~ packed once per mC x kC block per nC panel
//   packB   = nnz(bigV) * bk*bn                 B~ packed once per kC x nC panel
//   cUpdate = nnz(bigW) * bm*bn * 2 * ceil(bk/kC)  C read+write once per rank-kC update
//
// Strategy surcharges, per product r:
//   Naive: write+read of T_A, T_B and M_r
//   AB:    write+read of M_r
//   ABC:   none
//
// The per-strategy coefficients below are reconstructions; recalibrate here.
namespace {

struct Surcharge {
    double ta;  // multiples of bm*bk per product
    double tb;  // multiples of bk*bn per product
    double m;   // multiples of bm*bn per product
};

constexpr Surcharge surcharge_for(Strategy s) {
    switch (s) {
        case Strategy::Naive: return {2.0, 2.0, 2.0};
        case Strategy::AB: return {0.0, 0.0, 2.0};
        case Strategy::ABC: return {0.0, 0.0, 0.0};
    }
    return {0.0, 0.0, 0.0};
}

constexpr double kBytesPerElement = 8.0;

double ceil_div(double a, double b) { return std::ceil(a / b); }

struct Aggregate {
    double Mrad = 1, Krad = 1, Nrad = 1, Rtot = 1;
    double nnzU = 1, nnzV = 1, nnzW = 1;
    bool trivial = true;  // single unit product: runs as plain GEMM
};

Aggregate aggregate(std::span<const FmmSpec> levels) {
    if (levels.empty()) throw std::invalid_argument("estimate: empty level list");
    Aggregate g;
    for (const auto& l : levels) {
        g.Mrad *= static_cast<double>(l.mt);
        g.Krad *= static_cast<double>(l.kt);
        g.Nrad *= static_cast<double>(l.nt);
        g.Rtot *= static_cast<double>(l.rank);
        g.nnzU *= static_cast<double>(nnz(l.U));
        g.nnzV *= static_cast<double>(nnz(l.V));
        g.nnzW *= static_cast<double>(nnz(l.W));
        g.trivial = g.trivial && l.rank == 1 && l.mt == 1 && l.kt == 1 && l.nt == 1 && is_one(l.U(0, 0)) &&
                    is_one(l.V(0, 0)) && is_one(l.W(0, 0));
    }
    return g;
}

CostEstimate evaluate(const Aggregate& g, Strategy strategy, std::size_t m, std::size_t k, std::size_t n,
                      const ArchParams& arch) {
    if (m == 0 || k == 0 || n == 0) throw std::invalid_argument("estimate: dims must be positive");
    const double bm = ceil_div(static_cast<double>(m), g.Mrad);
    const double bk = ceil_div(static_cast<double>(k), g.Krad);
    const double bn = ceil_div(static_cast<double>(n), g.Nrad);

    CostEstimate est;
    est.counts.packA = g.nnzU * bm * bk * ceil_div(bn, static_cast<double>(arch.nC));
    est.counts.packB = g.nnzV * bk * bn;
    est.counts.cUpdate = g.nnzW * bm * bn * 2.0 * ceil_div(bk, static_cast<double>(arch.kC));
    if (!g.trivial) {
        const Surcharge s = surcharge_for(strategy);
        est.counts.temporaries = g.Rtot * (s.ta * bm * bk + s.tb * bk * bn + s.m * bm * bn);
    }

    est.arithTimeS = g.Rtot * 2.0 * bm * bk * bn / (arch.peakGflops * 1e9);
    est.memTimeS = kBytesPerElement * est.counts.total() / (arch.bandwidthGBs * 1e9);
    est.totalTimeS = est.arithTimeS + est.memTimeS;
    est.effectiveGflops = 2.0 * static_cast<double>(m) * static_cast<double>(n) * static_cast<double>(k) /
                          est.totalTimeS / 1e9;
    return est;
}

}  // namespace

std::string Variant::id() const {
    std::string out;
    for (const auto& s : specChain) {
        if (!out.empty()) out += '+';
        out += s;
    }
    return out;
}

std::vector<FmmSpec> resolve_chain(const Variant& variant, std::span<const FmmSpec> catalog) {
    if (variant.specChain.empty()) throw std::invalid_argument("variant has an empty spec chain");
    std::vector<FmmSpec> levels;
    for (const auto& name : variant.specChain) {
        auto it = std::find_if(catalog.begin(), catalog.end(), [&](const FmmSpec& s) { return s.name == name; });
        if (it != catalog.end()) {
            levels.push_back(*it);
        } else if (auto b = builtin_spec(name)) {
            levels.push_back(std::move(*b));
        } else {
            throw std::invalid_argument("unknown spec '" + name + "'");
        }
    }
    return levels;
}

CostEstimate estimate(std::span<const FmmSpec> levels, Strategy strategy, std::size_t m, std::size_t k,
                      std::size_t n, const ArchParams& arch) {
    arch.validate();
    return evaluate(aggregate(levels), strategy, m, k, n, arch);
}

CostEstimate estimate(const Variant& variant, std::span<const FmmSpec> catalog, std::size_t m, std::size_t k,
                      std::size_t n, const ArchParams& arch) {
    const auto levels = resolve_chain(variant, catalog);
    return estimate(levels, variant.strategy, m, k, n, arch);
}

CostEstimate estimate_gemm(std::size_t m, std::size_t k, std::size_t n, const ArchParams& arch) {
    arch.validate();
    return evaluate(Aggregate{}, Strategy::ABC, m, k, n, arch);
}

std::vector<RankedVariant> rank_variants(std::span<const Variant> variants, std::span<const FmmSpec> catalog,
                                         std::size_t m, std::size_t k, std::size_t n, const ArchParams& arch) {
    std::vector<RankedVariant> ranked;
    ranked.reserve(variants.size());
    for (const auto& v : variants) ranked.push_back({v, estimate(v, catalog, m, k, n, arch)});
    std::stable_sort(ranked.begin(), ranked.end(), [](const RankedVariant& x, const RankedVariant& y) {
        if (x.cost.totalTimeS != y.cost.totalTimeS) return x.cost.totalTimeS < y.cost.totalTimeS;
        if (x.variant.specChain.size() != y.variant.specChain.size())
            return x.variant.specChain.size() < y.variant.specChain.size();
        if (x.variant.specChain != y.variant.specChain) return x.variant.specChain < y.variant.specChain;
        return static_cast<int>(x.variant.strategy) < static_cast<int>(y.variant.strategy);
    });
    return ranked;
}

std::pair<RankedVariant, RankedVariant> best_two(std::span<const Variant> variants,
                                                 std::span<const FmmSpec> catalog, std::size_t m,
                                                 std::size_t k, std::size_t n, const ArchParams& arch) {
    if (variants.size() < 2) throw std::invalid_argument("best_two: need at least two variants");
    auto ranked = rank_variants(variants, catalog, m, k, n, arch);
    return {std::move(ranked[0]), std::move(ranked[1])};
}

std::vector<Variant> enumerate_variants(std::span<const FmmSpec> catalog, std::size_t maxLevels,
                                        std::span<const Strategy> strategies) {
    if (maxLevels == 0) throw std::invalid_argument("enumerate_variants: maxLevels must be >= 1");
    std::vector<Variant> out;
    std::vector<std::vector<std::string>> chains{{}};
    for (std::size_t len = 1; len <= maxLevels; ++len) {
        std::vector<std::vector<std::string>> next;
        next.reserve(chains.size() * catalog.size());
        for (const auto& c : chains)
            for (const auto& s : catalog) {
                auto longer = c;
                longer.push_back(s.name);
                next.push_back(std::move(longer));
            }
        chains = std::move(next);
        for (const auto& c : chains)
            for (auto st : strategies) out.push_back({c, st});
    }
    return out;
}

}  // namespace fmm
