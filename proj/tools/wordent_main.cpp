#include "wordent/cli.hpp"
#include "wordent/errors.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>

namespace {

using namespace wordent;
using namespace wordent::cli;

const std::map<std::string, EstimatorSelection> kEstimatorNames = {
    {"ml", EstimatorSelection::ML},
    {"nsb", EstimatorSelection::NSB},
    {"source", EstimatorSelection::SOURCE},
    {"all", EstimatorSelection::ALL},
};

const std::map<std::string, OutputFormat> kFormatNames = {
    {"tsv", OutputFormat::TSV},
    {"json", OutputFormat::JSON},
};

const std::map<std::string, SourceKind> kKindNames = {
    {"zipf", SourceKind::ZIPF},
    {"uniform", SourceKind::UNIFORM},
    {"markov1", SourceKind::MARKOV1},
    {"constant", SourceKind::CONSTANT},
};

void add_common_options(CLI::App* cmd, CommonConfig& cfg) {
    cmd->add_option("paths", cfg.inputs, "Input files or corpus directories")
        ->required()
        ->expected(-1);
    cmd->add_option("--estimator", cfg.estimators, "Estimator selection")
        ->transform(CLI::CheckedTransformer(kEstimatorNames, CLI::ignore_case))
        ->default_str("all");
    cmd->add_option("--format", cfg.format, "Output format")
        ->transform(CLI::CheckedTransformer(kFormatNames, CLI::ignore_case))
        ->default_str("tsv");
    cmd->add_flag("--nfc", cfg.nfc, "Apply NFC normalization before tokenizing");
    cmd->add_flag("--overlap", cfg.allow_overlap,
                  "Allow self-overlapping matches in the source estimator");
    cmd->add_flag("--deterministic", cfg.deterministic, "Suppress the timestamp line");
    cmd->add_option("--workers", cfg.workers, "Worker threads (0 = all cores)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"wordent - word entropy estimation for text corpora"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from a key=value file");

    EntropyConfig entropy_cfg;
    auto* entropy_cmd =
        app.add_subcommand("entropy", "Per-text block and source entropy report");
    add_common_options(entropy_cmd, entropy_cfg);
    entropy_cmd->add_option("--min-tokens", entropy_cfg.min_tokens,
                            "Skip texts with fewer tokens")
        ->capture_default_str();

    ConvergeConfig converge_cfg;
    auto* converge_cmd =
        app.add_subcommand("converge", "Entropy trajectories and convergence points");
    add_common_options(converge_cmd, converge_cfg);
    converge_cmd->add_option("--step", converge_cfg.step, "Tokens per trajectory step")
        ->capture_default_str();
    converge_cmd->add_option("--threshold", converge_cfg.threshold, "SD convergence threshold")
        ->capture_default_str();
    converge_cmd->add_option("--window", converge_cfg.window, "Trailing estimates per SD")
        ->capture_default_str();

    AnalyzeConfig analyze_cfg;
    std::string exclude_csv;
    auto* analyze_cmd =
        app.add_subcommand("analyze", "Correlation and regression over paired entropies");
    analyze_cmd->add_option("input", analyze_cfg.input, "Entropy report or label/x/y TSV")
        ->required();
    analyze_cmd->add_option("--exclude", exclude_csv, "Comma-separated labels to drop");
    analyze_cmd->add_option("--format", analyze_cfg.format, "Output format")
        ->transform(CLI::CheckedTransformer(kFormatNames, CLI::ignore_case))
        ->default_str("tsv");
    analyze_cmd->add_flag("--deterministic", analyze_cfg.deterministic,
                          "Suppress the timestamp line");

    RatiosConfig ratios_cfg;
    std::string bleu_path;
    auto* ratios_cmd =
        app.add_subcommand("ratios", "Pairwise source-entropy ratio matrix");
    ratios_cmd->add_option("input", ratios_cfg.input, "Entropy report or label/value TSV")
        ->required();
    ratios_cmd->add_option("--bleu", bleu_path,
                           "BLEU TSV (src_label, tgt_label, bleu) to correlate against");
    ratios_cmd->add_option("--format", ratios_cfg.format, "Output format")
        ->transform(CLI::CheckedTransformer(kFormatNames, CLI::ignore_case))
        ->default_str("tsv");
    ratios_cmd->add_flag("--deterministic", ratios_cfg.deterministic,
                         "Suppress the timestamp line");

    SynthConfig synth_cfg;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic token corpus");
    synth_cmd->add_option("--kind", synth_cfg.spec.kind, "Source kind")
        ->transform(CLI::CheckedTransformer(kKindNames, CLI::ignore_case))
        ->required();
    synth_cmd->add_option("--v", synth_cfg.spec.n_types, "Type count")->required();
    synth_cmd->add_option("--exp", synth_cfg.spec.zipf_exponent, "Zipf exponent")
        ->capture_default_str();
    synth_cmd->add_option("--q", synth_cfg.spec.zipf_offset, "Zipf-Mandelbrot offset")
        ->capture_default_str();
    synth_cmd->add_option("--alpha", synth_cfg.spec.markov_concentration,
                          "Markov row concentration")
        ->capture_default_str();
    synth_cmd->add_option("--n", synth_cfg.spec.n_tokens, "Token count")->required();
    synth_cmd->add_option("--seed", synth_cfg.spec.seed, "Random seed")->capture_default_str();
    synth_cmd->add_option("--out", synth_cfg.out, "Output file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (entropy_cmd->parsed()) return run_entropy(entropy_cfg, std::cout, std::cerr);
        if (converge_cmd->parsed()) return run_converge(converge_cfg, std::cout, std::cerr);
        if (analyze_cmd->parsed()) {
            std::size_t start = 0;
            while (start <= exclude_csv.size() && !exclude_csv.empty()) {
                std::size_t comma = exclude_csv.find(',', start);
                std::string label = exclude_csv.substr(
                    start, comma == std::string::npos ? std::string::npos : comma - start);
                if (!label.empty()) analyze_cfg.exclusions.insert(label);
                if (comma == std::string::npos) break;
                start = comma + 1;
            }
            return run_analyze(analyze_cfg, std::cout, std::cerr);
        }
        if (ratios_cmd->parsed()) {
            if (!bleu_path.empty()) ratios_cfg.bleu_table = bleu_path;
            return run_ratios(ratios_cfg, std::cout, std::cerr);
        }
        if (synth_cmd->parsed()) return run_synth(synth_cfg, std::cout, std::cerr);
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitUsage;
}
