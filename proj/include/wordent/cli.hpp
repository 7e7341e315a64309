#pragma once

#include "wordent/analysis.hpp"
#include "wordent/block_entropy.hpp"
#include "wordent/synthgen.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace wordent::cli {

// Exit codes shared by every subcommand.
constexpr int kExitOk = 0;        // success, possibly with per-file warnings
constexpr int kExitUsage = 1;     // usage or configuration error
constexpr int kExitNoInputs = 2;  // no qualifying inputs
constexpr int kExitNumeric = 3;   // internal numeric error

enum class OutputFormat { TSV, JSON };
enum class EstimatorSelection { ML, NSB, SOURCE, ALL };

struct CommonConfig {
    std::vector<std::filesystem::path> inputs;
    EstimatorSelection estimators = EstimatorSelection::ALL;
    OutputFormat format = OutputFormat::TSV;
    bool nfc = false;
    bool allow_overlap = false;
    bool deterministic = false; // suppress the timestamp line/field
    unsigned workers = 0;       // 0 = hardware concurrency
};

struct EntropyConfig : CommonConfig {
    std::uint64_t min_tokens = 100000;
};

struct ConvergeConfig : CommonConfig {
    std::uint64_t step = 10000;
    double threshold = 0.05;
    int window = 5;
};

struct AnalyzeConfig {
    std::filesystem::path input; // entropy report or label/x/y pairs TSV
    std::set<std::string> exclusions;
    OutputFormat format = OutputFormat::TSV;
    bool deterministic = false;
};

struct RatiosConfig {
    std::filesystem::path input; // entropy report or label/value TSV
    std::optional<std::filesystem::path> bleu_table;
    OutputFormat format = OutputFormat::TSV;
    bool deterministic = false;
};

struct SynthConfig {
    SourceSpec spec;
    std::filesystem::path out;
};

// One report row of the `entropy` command.
struct TextReport {
    std::string source_id;
    std::uint64_t n_tokens = 0;
    std::uint64_t n_types = 0;
    std::optional<double> block_ml;
    std::optional<double> block_nsb;
    std::optional<double> source;
    std::optional<double> predicted_source;
};

int run_entropy(const EntropyConfig& cfg, std::ostream& out, std::ostream& err);
int run_converge(const ConvergeConfig& cfg, std::ostream& out, std::ostream& err);
int run_analyze(const AnalyzeConfig& cfg, std::ostream& out, std::ostream& err);
int run_ratios(const RatiosConfig& cfg, std::ostream& out, std::ostream& err);
int run_synth(const SynthConfig& cfg, std::ostream& out, std::ostream& err);

} // namespace wordent::cli
