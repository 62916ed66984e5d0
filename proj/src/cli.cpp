#include "fmm/cli.hpp"

#include "fmm/kron.hpp"
#include "fmm/model.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#ifndef FMM_DEFAULT_CATALOG
#define FMM_DEFAULT_CATALOG "catalog"
#endif

namespace fmm::cli {

// ---------------------------------------------------------------------------
// CSV

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_optional(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::size_t parse_size(const std::string& s) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) throw std::invalid_argument("bad CSV integer '" + s + "'");
    return v;
}

double parse_double(const std::string& s) {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("bad CSV number '" + s + "'");
    return v;
}

std::optional<double> parse_optional(const std::string& s) {
    if (s.empty()) return std::nullopt;
    return parse_double(s);
}

}  // namespace

std::string to_csv(const RunReport& r) {
    std::ostringstream out;
    out << r.variant << ',' << to_string(r.strategy) << ',' << r.m << ',' << r.k << ',' << r.n << ','
        << format_optional(r.wallTimeS) << ',' << format_optional(r.measuredGflops) << ','
        << format_double(r.modelGflops) << ',' << r.submatrixMultiplies << ',' << format_optional(r.maxRelError);
    return out.str();
}

RunReport parse_csv_row(std::string_view line) {
    const auto f = split(line, ',');
    if (f.size() != 10) throw std::invalid_argument("CSV row must have 10 fields, got " + std::to_string(f.size()));
    RunReport r;
    r.variant = f[0];
    r.strategy = parse_strategy(f[1]);
    r.m = parse_size(f[2]);
    r.k = parse_size(f[3]);
    r.n = parse_size(f[4]);
    r.wallTimeS = parse_optional(f[5]);
    r.measuredGflops = parse_optional(f[6]);
    r.modelGflops = parse_double(f[7]);
    r.submatrixMultiplies = parse_size(f[8]);
    r.maxRelError = parse_optional(f[9]);
    return r;
}

std::string to_csv(const std::vector<RunReport>& rows) {
    std::string out(kCsvHeader);
    out += '\n';
    for (const auto& r : rows) {
        out += to_csv(r);
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------
// Spec resolution

std::vector<std::string> split_chain(std::string_view chain) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : chain) {
        if (c == '+' || c == ',') {
            if (!cur.empty()) out.push_back(std::move(cur));
            cur.clear();
        } else if (c != ' ') {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    if (out.empty()) throw std::invalid_argument("empty spec chain");
    return out;
}

std::filesystem::path default_catalog_dir() {
    if (const char* env = std::getenv("FMM_CATALOG")) return env;
    return FMM_DEFAULT_CATALOG;
}

std::vector<FmmSpec> resolve_specs(const std::vector<std::string>& chain, const std::filesystem::path& catalogDir) {
    if (chain.empty()) throw std::invalid_argument("empty spec chain");
    std::vector<FmmSpec> catalog;
    if (std::filesystem::is_directory(catalogDir))
        for (auto& e : load_catalog(catalogDir)) catalog.push_back(std::move(e.spec));
    return resolve_chain(Variant{chain, Strategy::ABC}, catalog);
}

namespace {

std::vector<FmmSpec> load_valid_catalog(const std::filesystem::path& dir) {
    auto specs = valid_specs(load_catalog(dir));
    if (specs.empty()) throw std::invalid_argument("catalog " + dir.string() + " holds no valid specs");
    return specs;
}

bool all_dyadic(const std::vector<FmmSpec>& levels) {
    auto dyadic = [](const RationalMatrix& m) {
        for (std::size_t r = 0; r < m.rows(); ++r)
            for (std::size_t c = 0; c < m.cols(); ++c) {
                const auto d = m(r, c).denominator();
                if ((d & (d - 1)) != 0) return false;
            }
        return true;
    };
    return std::all_of(levels.begin(), levels.end(), [&](const FmmSpec& l) {
        return dyadic(l.U) && dyadic(l.V) && dyadic(l.W);
    });
}

RunReport execute(const std::vector<FmmSpec>& levels, Strategy strategy, std::size_t m, std::size_t k,
                  std::size_t n, const ArchParams& arch, bool check, bool intInputs, bool timing,
                  std::uint64_t seed, const ExecOptions& exec) {
    if (m == 0 || k == 0 || n == 0) throw std::invalid_argument("dims must be positive");
    const MultiLevelSpec spec = compose(levels);
    const Schedule sched = build_schedule(spec, strategy);

    std::mt19937_64 rng(seed);
    DenseMatrix A(m, k), B(k, n), C(m, n);
    if (intInputs) {
        fill_integers(A, rng);
        fill_integers(B, rng);
        fill_integers(C, rng);
    } else {
        fill_uniform(A, rng);
        fill_uniform(B, rng);
        fill_uniform(C, rng);
    }
    const bool doCheck = check && m <= kMaxCheckedDim && k <= kMaxCheckedDim && n <= kMaxCheckedDim;
    DenseMatrix Cref;
    if (doCheck) Cref = C;

    const ExecStats stats = run_fmm(sched, spec, A, B, C, arch, exec);

    RunReport r;
    r.variant = spec.id();
    r.strategy = strategy;
    r.m = m;
    r.k = k;
    r.n = n;
    if (timing) {
        r.wallTimeS = stats.wallTimeS;
        r.measuredGflops = stats.wallTimeS > 0 ? 2.0 * m * n * k / stats.wallTimeS / 1e9 : 0.0;
    }
    r.modelGflops = estimate(levels, strategy, m, k, n, arch).effectiveGflops;
    r.submatrixMultiplies = stats.submatrixMultiplies;
    if (doCheck) {
        gemm_reference(A, B, Cref);
        r.maxRelError = normalized_error(C, Cref, A, B);
    }
    return r;
}

}  // namespace

RunReport cmd_run(const RunOptions& opts) {
    const auto levels = resolve_specs(opts.chain, opts.catalogDir);
    return execute(levels, opts.strategy, opts.m, opts.k, opts.n, opts.arch, opts.check, opts.intInputs,
                   opts.timing, opts.seed, opts.exec);
}

std::vector<RunReport> cmd_model(const ModelOptions& opts) {
    const auto catalog = load_valid_catalog(opts.catalogDir);
    const auto variants = enumerate_variants(catalog, opts.maxLevels, opts.strategies);
    const auto ranked = rank_variants(variants, catalog, opts.m, opts.k, opts.n, opts.arch);
    const std::size_t rows = opts.top == 0 ? ranked.size() : std::min(opts.top, ranked.size());
    std::vector<RunReport> out;
    for (std::size_t i = 0; i < rows; ++i) {
        const auto& rv = ranked[i];
        std::size_t mults = 1;
        for (const auto& l : resolve_chain(rv.variant, catalog)) mults *= l.rank;
        RunReport r;
        r.variant = rv.variant.id();
        r.strategy = rv.variant.strategy;
        r.m = opts.m;
        r.k = opts.k;
        r.n = opts.n;
        r.modelGflops = rv.cost.effectiveGflops;
        r.submatrixMultiplies = mults;
        out.push_back(r);
    }
    return out;
}

std::string cmd_render(const std::vector<std::string>& chain, Strategy strategy,
                       const std::filesystem::path& catalogDir) {
    const MultiLevelSpec spec = compose(resolve_specs(chain, catalogDir));
    return render_schedule(build_schedule(spec, strategy), spec);
}

Regime parse_regime(std::string_view text) {
    if (text == "square") return Regime::Square;
    if (text == "fixk") return Regime::FixK;
    if (text == "rankk") return Regime::RankK;
    throw std::invalid_argument("unknown regime '" + std::string(text) + "' (expected one of: square, fixk, rankk)");
}

std::vector<RunReport> cmd_sweep(const SweepOptions& opts) {
    if (opts.step == 0 || opts.from == 0 || opts.from > opts.to)
        throw std::invalid_argument("invalid sweep range (need 0 < from <= to, step > 0)");
    const auto catalog = load_valid_catalog(opts.catalogDir);
    const auto variants = enumerate_variants(catalog, opts.maxLevels, opts.strategies);

    std::vector<RunReport> rows;
    for (std::size_t s = opts.from; s <= opts.to; s += opts.step) {
        std::size_t m = s, k = s, n = s;
        if (opts.regime == Regime::FixK) k = opts.fixed;
        if (opts.regime == Regime::RankK) m = n = opts.fixed;
        for (const auto& v : variants) {
            const auto levels = resolve_chain(v, catalog);
            if (opts.execute) {
                rows.push_back(execute(levels, v.strategy, m, k, n, opts.arch, opts.check, false, opts.timing,
                                       opts.seed, opts.exec));
                continue;
            }
            RunReport r;
            r.variant = v.id();
            r.strategy = v.strategy;
            r.m = m;
            r.k = k;
            r.n = n;
            r.modelGflops = estimate(levels, v.strategy, m, k, n, opts.arch).effectiveGflops;
            r.submatrixMultiplies = 1;
            for (const auto& l : levels) r.submatrixMultiplies *= l.rank;
            rows.push_back(r);
        }
    }
    return rows;
}

int cmd_validate(const std::vector<std::filesystem::path>& paths, std::ostream& out) {
    int status = kOk;
    for (const auto& p : paths) {
        try {
            const FmmSpec spec = load_spec(p);
            const ValidationReport rep = validate_brent(spec);
            if (rep.passed()) {
                out << p.string() << ": PASS " << spec.name << " <" << spec.mt << ',' << spec.kt << ',' << spec.nt
                    << "> R=" << spec.rank << " (" << rep.equations << " equations)\n";
            } else {
                status = kValidationFailure;
                out << p.string() << ": FAIL " << spec.name << " (" << rep.violations.size() << " of "
                    << rep.equations << " equations violated)\n";
                const std::size_t shown = std::min<std::size_t>(rep.violations.size(), 5);
                for (std::size_t i = 0; i < shown; ++i) {
                    const auto& v = rep.violations[i];
                    out << "  A(" << v.a << ',' << v.b << ") B(" << v.f << ',' << v.d << ") C(" << v.e << ','
                        << v.c << "): residual " << to_string(v.residual()) << '\n';
                }
            }
        } catch (const std::exception& e) {
            status = kValidationFailure;
            out << p.string() << ": FAIL (" << e.what() << ")\n";
        }
    }
    return status;
}

// ---------------------------------------------------------------------------
// Entry point

namespace {

std::vector<Strategy> parse_strategies(const std::string& list) {
    std::vector<Strategy> out;
    for (const auto& s : split(list, ','))
        if (!s.empty()) out.push_back(parse_strategy(s));
    if (out.empty()) throw std::invalid_argument("empty strategy list");
    return out;
}

ArchParams arch_from(const std::string& path) { return path.empty() ? ArchParams{} : load_arch(path); }

void write_output(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << text;
    if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace

int main(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Fast matrix multiplication toolkit: validate, compose, render, run and model FMM algorithms"};
    app.require_subcommand(1);

    std::string catalog = default_catalog_dir().string();
    std::string archPath;

    // validate
    std::vector<std::string> paths;
    auto* validate = app.add_subcommand("validate", "Check coefficient files against the Brent equations");
    validate->add_option("paths", paths, "Coefficient files")->required();

    // run
    std::string chain, strategyText = "abc", outPath;
    std::size_t m = 0, k = 0, n = 0;
    bool check = false, intInputs = false, noTiming = false;
    std::uint64_t seed = 1;
    double tol = 1e-12;
    auto* run = app.add_subcommand("run", "Execute one variant and report a CSV row");
    run->add_option("--spec", chain, "Spec chain, level 0 first (e.g. strassen+strassen232)")->required();
    run->add_option("--m", m)->required();
    run->add_option("--k", k)->required();
    run->add_option("--n", n)->required();
    run->add_option("--strategy", strategyText, "naive, ab or abc");
    run->add_option("--arch", archPath, "Arch config file");
    run->add_option("--catalog", catalog, "Directory of .fmm files");
    run->add_flag("--check", check, "Compare against the reference GEMM");
    run->add_flag("--int-inputs", intInputs, "Integer entries in [-8, 8]");
    run->add_option("--tol", tol, "Failure threshold for --check with floating-point inputs");
    run->add_flag("--no-timing", noTiming, "Leave wall_s and gflops empty");
    run->add_option("--seed", seed);

    // model
    std::size_t top = 0, levels = 2;
    std::string strategiesText = "abc,ab,naive";
    auto* model = app.add_subcommand("model", "Rank catalog variants with the performance model");
    model->add_option("--catalog", catalog);
    model->add_option("--m", m)->required();
    model->add_option("--k", k)->required();
    model->add_option("--n", n)->required();
    model->add_option("--arch", archPath);
    model->add_option("--top", top, "Rows to print (0 = all)");
    model->add_option("--levels", levels, "Maximum levels per variant");
    model->add_option("--strategies", strategiesText);
    model->add_option("--out", outPath);

    // render
    auto* render = app.add_subcommand("render", "Write the generated schedule for a spec chain");
    render->add_option("--spec", chain)->required();
    render->add_option("--strategy", strategyText);
    render->add_option("--catalog", catalog);
    render->add_option("--output,-o", outPath, "Output file (default stdout)");

    // sweep
    std::string regimeText = "square";
    std::size_t from = 0, to = 0, step = 0, fixed = 1024, sweepLevels = 1;
    std::string sweepStrategies = "abc";
    bool modelOnly = false;
    auto* sweep = app.add_subcommand("sweep", "Measured and modeled GFLOPS over a size range");
    sweep->add_option("--catalog", catalog);
    sweep->add_option("--regime", regimeText, "square, fixk or rankk");
    sweep->add_option("--from", from)->required();
    sweep->add_option("--to", to)->required();
    sweep->add_option("--step", step)->required();
    sweep->add_option("--fixed", fixed, "k for fixk, m = n for rankk");
    sweep->add_option("--levels", sweepLevels);
    sweep->add_option("--strategies", sweepStrategies);
    sweep->add_option("--arch", archPath);
    sweep->add_flag("--check", check);
    sweep->add_flag("--no-timing", noTiming);
    sweep->add_flag("--model-only", modelOnly, "Skip execution");
    sweep->add_option("--seed", seed);
    sweep->add_option("--out", outPath);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        const ExecOptions exec = ExecOptions::from_env();
        if (validate->parsed()) {
            return cmd_validate({paths.begin(), paths.end()}, out);
        }
        if (run->parsed()) {
            RunOptions o;
            o.chain = split_chain(chain);
            o.m = m;
            o.k = k;
            o.n = n;
            o.strategy = parse_strategy(strategyText);
            o.arch = arch_from(archPath);
            o.catalogDir = catalog;
            o.check = check;
            o.intInputs = intInputs;
            o.timing = !noTiming;
            o.seed = seed;
            o.exec = exec;
            const RunReport r = cmd_run(o);
            out << to_csv(std::vector<RunReport>{r});
            // Integer inputs with dyadic coefficients are exact in double precision.
            const bool exact = intInputs && all_dyadic(resolve_specs(o.chain, o.catalogDir));
            if (r.maxRelError && *r.maxRelError > (exact ? 0.0 : tol)) {
                err << "check failed: max_rel_err " << *r.maxRelError << '\n';
                return kCheckFailure;
            }
            return kOk;
        }
        if (model->parsed()) {
            ModelOptions o;
            o.catalogDir = catalog;
            o.m = m;
            o.k = k;
            o.n = n;
            o.arch = arch_from(archPath);
            o.top = top;
            o.maxLevels = levels;
            o.strategies = parse_strategies(strategiesText);
            write_output(to_csv(cmd_model(o)), outPath, out);
            return kOk;
        }
        if (render->parsed()) {
            write_output(cmd_render(split_chain(chain), parse_strategy(strategyText), catalog), outPath, out);
            return kOk;
        }
        if (sweep->parsed()) {
            SweepOptions o;
            o.catalogDir = catalog;
            o.regime = parse_regime(regimeText);
            o.from = from;
            o.to = to;
            o.step = step;
            o.fixed = fixed;
            o.maxLevels = sweepLevels;
            o.strategies = parse_strategies(sweepStrategies);
            o.arch = arch_from(archPath);
            o.execute = !modelOnly;
            o.check = check;
            o.timing = !noTiming;
            o.seed = seed;
            o.exec = exec;
            const auto rows = cmd_sweep(o);
            write_output(to_csv(rows), outPath, out);
            for (const auto& r : rows)
                if (r.maxRelError && *r.maxRelError > tol) return kCheckFailure;
            return kOk;
        }
    } catch (const CompositionError& e) {
        err << "error: " << e.what() << '\n';
        return kValidationFailure;
    } catch (const SpecParseError& e) {
        err << "error: " << e.what() << '\n';
        return kValidationFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}

}  // namespace fmm::cli
