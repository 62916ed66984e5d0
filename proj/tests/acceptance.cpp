// Acceptance suite: one PASS/FAIL line per criterion; nonzero exit if any fails.

#include "fmm/blockindex.hpp"
#include "fmm/cli.hpp"
#include "fmm/coefficients.hpp"
#include "fmm/executor.hpp"
#include "fmm/kron.hpp"
#include "fmm/model.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace fmm;

// Tolerances and time limits.
constexpr double kOracleTol = 1e-12;
constexpr double kHybridTol = 1e-9;
constexpr double kFringeTol = 1e-12;
constexpr double kLimitRatioTol = 0.01;

struct Outcome {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

struct Criterion {
    int id;
    std::string name;
    double timeLimitS;  // <= 0: no limit
    std::function<Outcome()> body;
};

const std::filesystem::path kCatalog = FMM_TEST_CATALOG;

DenseMatrix matrix(std::size_t r, std::size_t c, std::mt19937_64& rng, bool ints) {
    DenseMatrix m(r, c);
    if (ints) fill_integers(m, rng);
    else fill_uniform(m, rng);
    return m;
}

std::string fmt(double x, int digits = 3) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

FmmSpec catalog_spec(const std::string& name) {
    for (const auto& e : load_catalog(kCatalog))
        if (e.spec.name == name) return e.spec;
    throw std::runtime_error("catalog has no spec '" + name + "'");
}

Outcome brent_validation() {
    Outcome o;
    const FmmSpec s = strassen_spec();
    const auto rep = validate_brent(s);
    o.require(rep.equations == 64, "expected 64 equations, got " + std::to_string(rep.equations));
    o.require(rep.passed(), std::to_string(rep.violations.size()) + " violations on strassen");
    std::size_t perturbed = 0, caught = 0;
    for (int which = 0; which < 3; ++which) {
        const RationalMatrix& M = which == 0 ? s.U : which == 1 ? s.V : s.W;
        for (std::size_t i = 0; i < M.rows(); ++i)
            for (std::size_t r = 0; r < M.cols(); ++r) {
                FmmSpec p = s;
                RationalMatrix& T = which == 0 ? p.U : which == 1 ? p.V : p.W;
                T(i, r) += Rational(1);
                ++perturbed;
                if (!validate_brent(p).passed()) ++caught;
            }
    }
    o.require(caught == perturbed, std::to_string(perturbed - caught) + " perturbations went undetected");
    if (o.ok) o.detail = "64 equations pass; " + std::to_string(caught) + "/" + std::to_string(perturbed) +
                         " single-entry perturbations fail";
    return o;
}

Outcome seven_multiplies() {
    Outcome o;
    std::mt19937_64 rng(2);
    const DenseMatrix A = matrix(64, 64, rng, true), B = matrix(64, 64, rng, true);
    const double classical = 2.0 * 64 * 64 * 64;
    std::size_t counts[2] = {};
    for (std::size_t L = 1; L <= 2; ++L) {
        const std::vector<FmmSpec> chain(L, strassen_spec());
        const MultiLevelSpec ml = compose(chain);
        DenseMatrix C(64, 64);
        C.fill(0);
        const ExecStats st = run_fmm(build_schedule(ml, Strategy::ABC), ml, A, B, C, ArchParams{});
        counts[L - 1] = st.submatrixMultiplies;
        const Rational expect = L == 1 ? Rational(7, 8) : Rational(49, 64);
        o.require(effective_flop_ratio(ml) == expect, "effective_flop_ratio is " + to_string(effective_flop_ratio(ml)));
        o.require(st.multiplyFlops / classical == to_double(expect),
                  "executed flop ratio " + fmt(st.multiplyFlops / classical));
    }
    o.require(counts[0] == 7, "one level ran " + std::to_string(counts[0]) + " multiplies");
    o.require(counts[1] == 49, "two levels ran " + std::to_string(counts[1]) + " multiplies");
    if (o.ok) o.detail = "7 and 49 multiplies; ratios 7/8 and 49/64";
    return o;
}

Outcome oracle_equivalence() {
    Outcome o;
    std::mt19937_64 rng(3);
    const std::vector<FmmSpec> bases{strassen_spec(), classical_spec(2, 2, 2), classical_spec(2, 3, 2)};
    const Strategy strategies[] = {Strategy::Naive, Strategy::AB, Strategy::ABC};
    std::size_t runs = 0;
    double worst = 0;
    for (const auto& base : bases)
        for (std::size_t L = 1; L <= 2; ++L) {
            const MultiLevelSpec ml = compose(std::vector<FmmSpec>(L, base));
            auto draw = [&](std::size_t rad) {
                return rad * std::uniform_int_distribution<std::size_t>(1, 512 / rad)(rng);
            };
            for (int shape = 0; shape < 20; ++shape) {
                const std::size_t m = draw(ml.Mrad), k = draw(ml.Krad), n = draw(ml.Nrad);
                for (bool ints : {true, false}) {
                    const DenseMatrix A = matrix(m, k, rng, ints), B = matrix(k, n, rng, ints);
                    DenseMatrix ref(m, n);
                    ref.fill(0);
                    gemm_reference(A, B, ref);
                    for (Strategy st : strategies) {
                        DenseMatrix C(m, n);
                        C.fill(0);
                        run_fmm(build_schedule(ml, st), ml, A, B, C, ArchParams{});
                        ++runs;
                        const std::string where = ml.id() + " " + std::string(to_string(st)) + " " +
                                                  std::to_string(m) + "x" + std::to_string(k) + "x" +
                                                  std::to_string(n);
                        if (ints) {
                            o.require(C == ref, "integer mismatch: " + where);
                        } else {
                            const double err = normalized_error(C, ref, A, B);
                            worst = std::max(worst, err);
                            o.require(err <= kOracleTol, "error " + fmt(err) + ": " + where);
                        }
                    }
                }
            }
        }
    if (o.ok) o.detail = std::to_string(runs) + " runs; integer bit-exact; worst double error " + fmt(worst);
    return o;
}

Outcome hybrid_composition() {
    Outcome o;
    const FmmSpec s232 = catalog_spec("strassen232");
    o.require(s232.mt == 2 && s232.kt == 3 && s232.nt == 2, "strassen232 is not a <2,3,2> spec");
    o.require(validate_brent(s232).passed(), "strassen232 fails Brent");
    const MultiLevelSpec ml = compose({strassen_spec(), s232});
    o.require(validate_brent(ml).passed(), "composed coefficients fail Brent");
    o.require(ml.Mrad == 4 && ml.Krad == 6 && ml.Nrad == 4 && ml.Rtot == 7 * s232.rank, "composed radices/rank");
    std::mt19937_64 rng(4);
    const std::size_t N = 720;
    const DenseMatrix A = matrix(N, N, rng, false), B = matrix(N, N, rng, false);
    DenseMatrix ref(N, N);
    ref.fill(0);
    gemm_reference(A, B, ref);
    double worst = 0;
    for (Strategy st : {Strategy::Naive, Strategy::AB, Strategy::ABC}) {
        DenseMatrix C(N, N);
        C.fill(0);
        run_fmm(build_schedule(ml, st), ml, A, B, C, ArchParams{});
        const double err = normalized_error(C, ref, A, B);
        worst = std::max(worst, err);
        o.require(err <= kHybridTol, std::string(to_string(st)) + " error " + fmt(err));
    }
    if (o.ok) o.detail = "composed Brent pass; 720^3 worst error " + fmt(worst) + " over 3 strategies";
    return o;
}

Outcome fringe_correctness() {
    Outcome o;
    std::mt19937_64 rng(5);
    const std::size_t N = 509;
    const MultiLevelSpec ml = compose({strassen_spec()});
    const DenseMatrix A = matrix(N, N, rng, false), B = matrix(N, N, rng, false);
    DenseMatrix ref(N, N);
    ref.fill(0);
    gemm_reference(A, B, ref);
    double worst = 0;
    for (Strategy st : {Strategy::Naive, Strategy::AB, Strategy::ABC}) {
        DenseMatrix C(N, N);
        C.fill(0);
        const ExecStats s = run_fmm(build_schedule(ml, st), ml, A, B, C, ArchParams{});
        const double err = normalized_error(C, ref, A, B);
        worst = std::max(worst, err);
        o.require(err <= kFringeTol, std::string(to_string(st)) + " error " + fmt(err));
        o.require(s.fringeFlops > 0 && !s.fellBack, "fringe path not exercised");
    }
    if (o.ok) o.detail = "509^3 worst error " + fmt(worst);
    return o;
}

Outcome block_index_bijection() {
    Outcome o;
    std::mt19937_64 rng(6);
    std::uniform_int_distribution<std::size_t> rad(1, 6), lev(1, 4);
    std::size_t indices = 0;
    for (int t = 0; t < 1000 && o.ok; ++t) {
        RadixSchedule s;
        for (std::size_t l = lev(rng); l > 0; --l) s.perLevel.push_back({rad(rng), rad(rng)});
        for (std::size_t p = 0; p < s.total_blocks(); ++p, ++indices)
            if (linear_index(block_coords(p, s), s) != p) {
                o.require(false, "round trip failed at p=" + std::to_string(p));
                break;
            }
        std::vector<BlockCoord> c(s.levels());
        for (std::size_t l = 0; l < s.levels(); ++l)
            c[l] = {std::uniform_int_distribution<std::size_t>(0, s.perLevel[l].first - 1)(rng),
                    std::uniform_int_distribution<std::size_t>(0, s.perLevel[l].second - 1)(rng)};
        o.require(block_coords(linear_index(c, s), s) == c, "coords round trip failed");

        const std::size_t rows = s.row_product() + std::uniform_int_distribution<std::size_t>(0, 5)(rng);
        const std::size_t cols = s.col_product() * 2 + std::uniform_int_distribution<std::size_t>(0, 5)(rng);
        const BlockPartition part = partition(rows, cols, s);
        std::vector<unsigned char> hit(rows * cols, 0);
        auto paint = [&](const BlockView& v) {
            for (std::size_t r = 0; r < v.rows; ++r)
                for (std::size_t q = 0; q < v.cols; ++q) ++hit[(v.rowOffset + r) * cols + v.colOffset + q];
        };
        for (const auto& v : part.views) paint(v);
        if (part.fringeRight) paint(*part.fringeRight);
        if (part.fringeBottom) paint(*part.fringeBottom);
        for (unsigned char h : hit)
            if (h != 1) {
                o.require(false, "partition does not tile exactly");
                break;
            }
        o.require(part.views.size() == s.total_blocks(), "view count mismatch");
    }
    if (o.ok) o.detail = "1000 schedules, " + std::to_string(indices) + " indices, tiling exact";
    return o;
}

Outcome kronecker_laws() {
    Outcome o;
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::size_t> dim(1, 3);
    std::uniform_real_distribution<double> dens(0.0, 1.0);
    for (int t = 0; t < 200; ++t) {
        const auto X = oracle::random_rational(dim(rng), dim(rng), rng, dens(rng));
        const auto Y = oracle::random_rational(dim(rng), dim(rng), rng, dens(rng));
        o.require(nnz(kron(X, Y)) == nnz(X) * nnz(Y), "nnz multiplicativity");
        o.require(kron(X, Y) == oracle::kron_bruteforce(X, Y), "entry formula");
        const std::size_t a = dim(rng), b = dim(rng), c = dim(rng), d = dim(rng), e = dim(rng), f = dim(rng);
        const auto P = oracle::random_rational(a, b, rng), Q = oracle::random_rational(b, c, rng);
        const auto R = oracle::random_rational(d, e, rng), S = oracle::random_rational(e, f, rng);
        o.require(kron(P, R) * kron(Q, S) == kron(P * Q, R * S), "mixed-product property");
    }
    const FmmSpec s = strassen_spec();
    const std::size_t n = nnz(kron(s.U, s.U));
    o.require(nnz(s.U) == 12 && n == 144, "nnz(U kron U) = " + std::to_string(n));
    if (o.ok) o.detail = "200 draws; nnz(U kron U) = 144";
    return o;
}

Outcome model_sanity() {
    Outcome o;
    const FmmSpec s[] = {strassen_spec()};
    ArchParams inf;
    inf.bandwidthGBs = std::numeric_limits<double>::infinity();
    const CostEstimate lim = estimate(s, Strategy::ABC, 1000000, 1000000, 1000000, inf);
    const double ratio = lim.effectiveGflops / inf.peakGflops;
    o.require(std::abs(ratio - 8.0 / 7.0) <= kLimitRatioTol * 8.0 / 7.0, "limit ratio " + fmt(ratio));

    const ArchParams ivy;
    o.require(ivy.peakGflops == 28.32 && ivy.bandwidthGBs == 59.7 && ivy.mC == 96 && ivy.kC == 256 &&
                  ivy.nC == 4096 && ivy.mR == 8 && ivy.nR == 4,
              "default arch values");
    const std::vector<Variant> three{{{"strassen"}, Strategy::Naive}, {{"strassen"}, Strategy::AB},
                                     {{"strassen"}, Strategy::ABC}};
    const auto ranked = rank_variants(three, s, 14400, 1024, 14400, ivy);
    o.require(ranked[0].variant.strategy == Strategy::ABC,
              "rank-k winner is " + std::string(to_string(ranked[0].variant.strategy)));

    std::mt19937_64 rng(8);
    const std::vector<FmmSpec> pool{strassen_spec(), classical_spec(2, 3, 2), catalog_spec("strassen333"),
                                    catalog_spec("winograd")};
    std::uniform_int_distribution<std::size_t> dim(1, 30000), pick(0, pool.size() - 1), lev(1, 3);
    std::uniform_real_distribution<double> bw(1.0, 1000.0);
    const Strategy sts[] = {Strategy::Naive, Strategy::AB, Strategy::ABC};
    for (int t = 0; t < 500; ++t) {
        std::vector<FmmSpec> chain;
        for (std::size_t l = lev(rng); l > 0; --l) chain.push_back(pool[pick(rng)]);
        const Strategy st = sts[t % 3];
        ArchParams a;
        a.bandwidthGBs = bw(rng);
        const std::size_t m = dim(rng), k = dim(rng), n = dim(rng);
        const double base = estimate(chain, st, m, k, n, a).totalTimeS;
        ArchParams faster = a;
        faster.bandwidthGBs *= 2;
        o.require(estimate(chain, st, m, k, n, faster).totalTimeS <= base, "bandwidth monotonicity");
        o.require(estimate(chain, st, m + 1 + m / 3, k, n, a).totalTimeS >= base, "m monotonicity");
        o.require(estimate(chain, st, m, k + 1 + k / 3, n, a).totalTimeS >= base, "k monotonicity");
        o.require(estimate(chain, st, m, k, n + 1 + n / 3, a).totalTimeS >= base, "n monotonicity");
    }
    if (o.ok) o.detail = "limit ratio " + fmt(ratio, 7) + " (8/7 = " + fmt(8.0 / 7.0, 7) + "); rank-k winner abc";
    return o;
}

Outcome variant_scale() {
    Outcome o;
    const auto specs = valid_specs(load_catalog(kCatalog));
    o.require(specs.size() >= 6, "catalog has " + std::to_string(specs.size()) + " valid specs");
    const Strategy abc[] = {Strategy::ABC};
    const auto vs = enumerate_variants(specs, 3, abc);
    o.require(vs.size() >= 200, std::to_string(vs.size()) + " variants");
    if (o.ok) o.detail = std::to_string(specs.size()) + " specs, 3 levels: " + std::to_string(vs.size()) + " variants";
    return o;
}

Outcome determinism() {
    Outcome o;
    using namespace fmm::cli;
    auto twice = [&](const std::string& what, const std::function<std::string()>& f) {
        const std::string a = f(), b = f();
        o.require(!a.empty() && a == b, what + " output differs between runs");
    };
    twice("render", [] { return cmd_render({"strassen", "strassen232"}, Strategy::ABC, kCatalog); });
    twice("run", [] {
        RunOptions r;
        r.chain = {"strassen", "winograd"};
        r.m = 96, r.k = 80, r.n = 64;
        r.catalogDir = kCatalog;
        r.check = true;
        r.timing = false;
        r.seed = 42;
        return to_csv(std::vector<RunReport>{cmd_run(r)});
    });
    twice("model", [] {
        ModelOptions m;
        m.catalogDir = kCatalog;
        m.m = 14400, m.k = 1024, m.n = 14400;
        return to_csv(cmd_model(m));
    });
    twice("sweep", [] {
        SweepOptions s;
        s.catalogDir = kCatalog;
        s.regime = Regime::RankK;
        s.fixed = 64;
        s.from = 16, s.to = 48, s.step = 16;
        s.timing = false;
        s.check = true;
        s.seed = 7;
        return to_csv(cmd_sweep(s));
    });
    auto cliOut = [](std::vector<std::string> args) {
        args.insert(args.begin(), "fmm");
        std::vector<char*> argv;
        for (auto& a : args) argv.push_back(a.data());
        std::ostringstream out, err;
        cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
        return out.str();
    };
    twice("cli run", [&] {
        return cliOut({"run", "--spec", "strassen", "--m", "64", "--k", "64", "--n", "64", "--check",
                       "--int-inputs", "--no-timing", "--seed", "1"});
    });
    if (o.ok) o.detail = "render, run, model, sweep byte-identical";
    return o;
}

}  // namespace

// No argument: every criterion. Otherwise only the listed criterion ids.
int main(int argc, char** argv) {
    const std::vector<Criterion> criteria{
        {1, "Brent validation", 1.0, brent_validation},
        {2, "Seven multiplies", 1.0, seven_multiplies},
        {3, "Oracle equivalence", 120.0, oracle_equivalence},
        {4, "Hybrid composition", 30.0, hybrid_composition},
        {5, "Fringe correctness", 10.0, fringe_correctness},
        {6, "Block-index bijection", 5.0, block_index_bijection},
        {7, "Kronecker laws", 5.0, kronecker_laws},
        {8, "Model sanity", 10.0, model_sanity},
        {9, "Variant scale", 1.0, variant_scale},
        {10, "Determinism", 0.0, determinism},
    };
    std::vector<int> only;
    for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
    int failures = 0, ran = 0;
    for (const auto& c : criteria) {
        if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
        ++ran;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.body();
        } catch (const std::exception& e) {
            o.ok = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (o.ok && c.timeLimitS > 0 && secs >= c.timeLimitS) {
            o.ok = false;
            o.detail += "; exceeded " + fmt(c.timeLimitS) + " s";
        }
        if (!o.ok) ++failures;
        std::printf("[%s] AC%-2d %-22s %7.2fs  %s\n", o.ok ? "PASS" : "FAIL", c.id, c.name.c_str(), secs,
                    o.detail.c_str());
        std::fflush(stdout);
    }
    if (ran == 0) {
        std::fprintf(stderr, "no such criterion\n");
        return 2;
    }
    std::printf("%d/%d criteria passed\n", ran - failures, ran);
    return failures == 0 ? 0 : 1;
}
