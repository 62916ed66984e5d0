#pragma once

#include "fmm/arch.hpp"
#include "fmm/coefficients.hpp"
#include "fmm/executor.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fmm::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kValidationFailure = 2, kCheckFailure = 3 };

inline constexpr std::string_view kCsvHeader =
    "variant,strategy,m,k,n,wall_s,gflops,model_gflops,mults,max_rel_err";

// Reference GEMM is only run for m, k, n <= this.
inline constexpr std::size_t kMaxCheckedDim = 2048;

/// One CSV row. Empty optionals serialize as empty fields.
struct RunReport {
    std::string variant;
    Strategy strategy = Strategy::ABC;
    std::size_t m = 0, k = 0, n = 0;
    std::optional<double> wallTimeS;
    std::optional<double> measuredGflops;
    double modelGflops = 0;
    std::size_t submatrixMultiplies = 0;
    std::optional<double> maxRelError;

    bool operator==(const RunReport&) const = default;
};

std::string to_csv(const RunReport& row);
RunReport parse_csv_row(std::string_view line);
std::string to_csv(const std::vector<RunReport>& rows);  // header + rows

// "strassen+classical232" or "strassen,classical232".
std::vector<std::string> split_chain(std::string_view chain);

// Catalog specs plus every built-in name the chain refers to.
std::vector<FmmSpec> resolve_specs(const std::vector<std::string>& chain,
                                   const std::filesystem::path& catalogDir);

std::filesystem::path default_catalog_dir();

struct RunOptions {
    std::vector<std::string> chain;
    std::size_t m = 0, k = 0, n = 0;
    Strategy strategy = Strategy::ABC;
    ArchParams arch;
    std::filesystem::path catalogDir = default_catalog_dir();
    bool check = false;
    bool intInputs = false;
    bool timing = true;  // false: wall_s and gflops left empty
    std::uint64_t seed = 1;
    ExecOptions exec;
};

RunReport cmd_run(const RunOptions& opts);

struct ModelOptions {
    std::filesystem::path catalogDir = default_catalog_dir();
    std::size_t m = 0, k = 0, n = 0;
    ArchParams arch;
    std::size_t top = 0;  // 0: all rows
    std::size_t maxLevels = 2;
    std::vector<Strategy> strategies{Strategy::ABC, Strategy::AB, Strategy::Naive};
};

std::vector<RunReport> cmd_model(const ModelOptions& opts);

std::string cmd_render(const std::vector<std::string>& chain, Strategy strategy,
                       const std::filesystem::path& catalogDir);

enum class Regime { Square, FixK, RankK };
Regime parse_regime(std::string_view text);

struct SweepOptions {
    std::filesystem::path catalogDir = default_catalog_dir();
    Regime regime = Regime::Square;
    std::size_t from = 0, to = 0, step = 0;
    std::size_t fixed = 1024;  // k for fixk; m = n for rankk
    std::size_t maxLevels = 1;
    std::vector<Strategy> strategies{Strategy::ABC};
    ArchParams arch;
    bool execute = true;
    bool check = false;
    bool timing = true;
    std::uint64_t seed = 1;
    ExecOptions exec;
};

std::vector<RunReport> cmd_sweep(const SweepOptions& opts);

// Writes one PASS/FAIL line per file; returns kValidationFailure if any fails.
int cmd_validate(const std::vector<std::filesystem::path>& paths, std::ostream& out);

/// Full command-line entry point.
int main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace fmm::cli
