#include "wordent/cli.hpp"

#include "wordent/convergence.hpp"
#include "wordent/corpus.hpp"
#include "wordent/errors.hpp"
#include "wordent/source_entropy.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

namespace wordent::cli {

namespace {

using nlohmann::json;

std::string format_bits(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

std::string opt_bits(const std::optional<double>& v) {
    return v ? format_bits(*v) : "NA";
}

json opt_json(const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
}

std::string timestamp_utc() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct InputFile {
    std::string source_id;
    std::filesystem::path path;
};

std::vector<InputFile> collect_inputs(const std::vector<std::filesystem::path>& paths) {
    std::vector<InputFile> files;
    for (const auto& p : paths) {
        if (std::filesystem::is_directory(p)) {
            std::vector<std::filesystem::path> inner;
            for (const auto& entry : std::filesystem::directory_iterator(p)) {
                if (entry.is_regular_file()) inner.push_back(entry.path());
            }
            std::sort(inner.begin(), inner.end());
            for (const auto& f : inner) files.push_back({f.stem().string(), f});
        } else {
            files.push_back({p.stem().string(), p});
        }
    }
    return files;
}

template <typename Fn>
void parallel_for(std::size_t n, unsigned workers, Fn fn) {
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                fn(i);
            }
        });
    }
    for (auto& t : pool) t.join();
}

struct Skipped {
    std::string source_id;
    std::uint64_t n_tokens = 0;
    std::string reason;
};

struct FileError {
    std::string source_id;
    std::string message;
};

void emit_errors(std::ostream& err, std::vector<FileError>& errors) {
    std::sort(errors.begin(), errors.end(),
              [](const FileError& a, const FileError& b) { return a.source_id < b.source_id; });
    for (const auto& e : errors) err << "error\t" << e.source_id << "\t" << e.message << "\n";
}

bool wants_ml(EstimatorSelection s) {
    return s == EstimatorSelection::ML || s == EstimatorSelection::ALL;
}
bool wants_nsb(EstimatorSelection s) {
    return s == EstimatorSelection::NSB || s == EstimatorSelection::ALL;
}
bool wants_source(EstimatorSelection s) {
    return s == EstimatorSelection::SOURCE || s == EstimatorSelection::ALL;
}

// --- TSV input parsing ------------------------------------------------------

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        std::size_t tab = line.find('\t', start);
        if (tab == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
}

struct TsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::optional<std::size_t> column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) return i;
        }
        return std::nullopt;
    }
};

TsvTable read_tsv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open file: " + path.string());
    TsvTable table;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        if (table.header.empty()) {
            table.header = split_tabs(line);
        } else {
            table.rows.push_back(split_tabs(line));
        }
    }
    if (table.header.empty()) throw ConfigError("empty table: " + path.string());
    return table;
}

double parse_double(const std::string& s, const std::string& context) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("cannot parse number '" + s + "' in " + context);
    }
}

// --- entropy ----------------------------------------------------------------

TextReport compute_report(const TokenizedText& text, const EntropyConfig& cfg) {
    TextReport row;
    row.source_id = text.source_id;
    row.n_tokens = text.size();
    FrequencyTable table = frequency_table(text);
    row.n_types = table.n_types();
    if (wants_ml(cfg.estimators)) row.block_ml = ml_entropy(table).bits;
    if (wants_nsb(cfg.estimators)) {
        row.block_nsb = nsb_entropy(table).bits;
        row.predicted_source = predict_source_from_block(*row.block_nsb);
    }
    if (wants_source(cfg.estimators)) {
        row.source = source_entropy(text, MatchOptions{cfg.allow_overlap}).bits;
    }
    return row;
}

} // namespace

int run_entropy(const EntropyConfig& cfg, std::ostream& out, std::ostream& err) {
    std::vector<InputFile> files = collect_inputs(cfg.inputs);
    std::vector<std::optional<TextReport>> results(files.size());
    std::vector<std::optional<Skipped>> skips(files.size());
    std::vector<std::optional<FileError>> fails(files.size());

    parallel_for(files.size(), cfg.workers, [&](std::size_t i) {
        try {
            RawDocument doc = read_verse_file(files[i].path);
            doc.source_id = files[i].source_id;
            TokenizedText text = tokenize(doc, TokenizeOptions{cfg.nfc});
            if (text.size() < cfg.min_tokens || text.size() == 0) {
                skips[i] = Skipped{files[i].source_id, text.size(),
                                   "below min-tokens " + std::to_string(cfg.min_tokens)};
                return;
            }
            results[i] = compute_report(text, cfg);
        } catch (const Error& e) {
            fails[i] = FileError{files[i].source_id, e.what()};
        }
    });

    std::vector<TextReport> rows;
    std::vector<Skipped> skipped;
    std::vector<FileError> errors;
    for (std::size_t i = 0; i < files.size(); ++i) {
        if (results[i]) rows.push_back(std::move(*results[i]));
        if (skips[i]) skipped.push_back(std::move(*skips[i]));
        if (fails[i]) errors.push_back(std::move(*fails[i]));
    }
    auto by_id = [](const auto& a, const auto& b) { return a.source_id < b.source_id; };
    std::stable_sort(rows.begin(), rows.end(), by_id);
    std::stable_sort(skipped.begin(), skipped.end(), by_id);

    emit_errors(err, errors);
    if (rows.empty()) {
        err << "no qualifying texts\n";
        return kExitNoInputs;
    }

    if (cfg.format == OutputFormat::TSV) {
        if (!cfg.deterministic) out << "# generated\t" << timestamp_utc() << "\n";
        out << "source_id\tn_tokens\tn_types\tblock_ml\tblock_nsb\tsource\tpredicted_source\n";
        for (const auto& r : rows) {
            out << r.source_id << "\t" << r.n_tokens << "\t" << r.n_types << "\t"
                << opt_bits(r.block_ml) << "\t" << opt_bits(r.block_nsb) << "\t"
                << opt_bits(r.source) << "\t" << opt_bits(r.predicted_source) << "\n";
        }
        for (const auto& s : skipped) {
            out << "# skipped\t" << s.source_id << "\t" << s.n_tokens << "\t" << s.reason
                << "\n";
        }
    } else {
        json doc;
        doc["command"] = "entropy";
        if (!cfg.deterministic) doc["generated"] = timestamp_utc();
        doc["texts"] = json::array();
        for (const auto& r : rows) {
            doc["texts"].push_back({{"source_id", r.source_id},
                                    {"n_tokens", r.n_tokens},
                                    {"n_types", r.n_types},
                                    {"block_ml", opt_json(r.block_ml)},
                                    {"block_nsb", opt_json(r.block_nsb)},
                                    {"source", opt_json(r.source)},
                                    {"predicted_source", opt_json(r.predicted_source)}});
        }
        doc["skipped"] = json::array();
        for (const auto& s : skipped) {
            doc["skipped"].push_back({{"source_id", s.source_id},
                                      {"n_tokens", s.n_tokens},
                                      {"reason", s.reason}});
        }
        doc["errors"] = json::array();
        for (const auto& e : errors) {
            doc["errors"].push_back({{"source_id", e.source_id}, {"message", e.message}});
        }
        out << doc.dump(2) << "\n";
    }
    return kExitOk;
}

// --- converge ---------------------------------------------------------------

namespace {

struct ConvergeResult {
    std::string source_id;
    Estimator estimator;
    ConvergenceReport report;
};

} // namespace

int run_converge(const ConvergeConfig& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.window < 2) {
        err << "window must be >= 2\n";
        return kExitUsage;
    }
    std::vector<Estimator> estimators;
    if (cfg.estimators == EstimatorSelection::ML) estimators = {Estimator::ML};
    if (cfg.estimators == EstimatorSelection::NSB) estimators = {Estimator::NSB};
    if (cfg.estimators == EstimatorSelection::SOURCE) estimators = {Estimator::SOURCE};
    if (cfg.estimators == EstimatorSelection::ALL) {
        estimators = {Estimator::NSB, Estimator::SOURCE};
    }

    std::vector<InputFile> files = collect_inputs(cfg.inputs);
    std::vector<std::vector<ConvergeResult>> results(files.size());
    std::vector<std::optional<Skipped>> skips(files.size());
    std::vector<std::optional<FileError>> fails(files.size());
    std::uint64_t need = cfg.step * static_cast<std::uint64_t>(cfg.window);

    parallel_for(files.size(), cfg.workers, [&](std::size_t i) {
        try {
            RawDocument doc = read_verse_file(files[i].path);
            doc.source_id = files[i].source_id;
            TokenizedText text = tokenize(doc, TokenizeOptions{cfg.nfc});
            if (text.size() < need) {
                skips[i] = Skipped{files[i].source_id, text.size(),
                                   "below window*step (need " + std::to_string(need) +
                                       " tokens, have " + std::to_string(text.size()) + ")"};
                return;
            }
            for (Estimator est : estimators) {
                TrajectoryOptions topt;
                topt.step = cfg.step;
                topt.estimator = est;
                topt.match.allow_overlap = cfg.allow_overlap;
                Trajectory traj = trajectory(text, topt);
                results[i].push_back(
                    {files[i].source_id, est,
                     convergence_point(traj, cfg.threshold, cfg.window)});
            }
        } catch (const Error& e) {
            fails[i] = FileError{files[i].source_id, e.what()};
        }
    });

    std::vector<ConvergeResult> rows;
    std::vector<Skipped> skipped;
    std::vector<FileError> errors;
    for (std::size_t i = 0; i < files.size(); ++i) {
        for (auto& r : results[i]) rows.push_back(std::move(r));
        if (skips[i]) skipped.push_back(std::move(*skips[i]));
        if (fails[i]) errors.push_back(std::move(*fails[i]));
    }
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        if (a.source_id != b.source_id) return a.source_id < b.source_id;
        return static_cast<int>(a.estimator) < static_cast<int>(b.estimator);
    });
    std::stable_sort(skipped.begin(), skipped.end(),
                     [](const auto& a, const auto& b) { return a.source_id < b.source_id; });

    emit_errors(err, errors);
    if (rows.empty()) {
        err << "no qualifying texts\n";
        return kExitNoInputs;
    }

    if (cfg.format == OutputFormat::TSV) {
        if (!cfg.deterministic) out << "# generated\t" << timestamp_utc() << "\n";
        out << "source_id\testimator\tprefix_tokens\tentropy_bits\tsd\tis_convergence_point\n";
        for (const auto& r : rows) {
            const auto& rep = r.report;
            std::map<std::uint64_t, double> sd_at;
            for (const auto& s : rep.sd_series) sd_at[s.prefix_tokens] = s.sd;
            for (const auto& p : rep.trajectory.points) {
                out << r.source_id << "\t" << estimator_name(r.estimator) << "\t"
                    << p.prefix_tokens << "\t" << format_bits(p.bits) << "\t";
                auto it = sd_at.find(p.prefix_tokens);
                out << (it == sd_at.end() ? std::string("NA") : format_bits(it->second));
                bool conv = rep.convergence_point && *rep.convergence_point == p.prefix_tokens;
                out << "\t" << (conv ? 1 : 0) << "\n";
            }
        }
        for (const auto& r : rows) {
            out << "# convergence\t" << r.source_id << "\t" << estimator_name(r.estimator)
                << "\t";
            if (r.report.convergence_point) {
                out << *r.report.convergence_point;
            } else {
                out << "NONE";
            }
            out << "\n";
        }
        for (const auto& s : skipped) {
            out << "# skipped\t" << s.source_id << "\t" << s.n_tokens << "\t" << s.reason
                << "\n";
        }
    } else {
        json doc;
        doc["command"] = "converge";
        if (!cfg.deterministic) doc["generated"] = timestamp_utc();
        doc["texts"] = json::array();
        for (const auto& r : rows) {
            json points = json::array();
            std::map<std::uint64_t, double> sd_at;
            for (const auto& s : r.report.sd_series) sd_at[s.prefix_tokens] = s.sd;
            for (const auto& p : r.report.trajectory.points) {
                auto it = sd_at.find(p.prefix_tokens);
                points.push_back({{"prefix_tokens", p.prefix_tokens},
                                  {"bits", p.bits},
                                  {"sd", it == sd_at.end() ? json(nullptr) : json(it->second)}});
            }
            doc["texts"].push_back(
                {{"source_id", r.source_id},
                 {"estimator", estimator_name(r.estimator)},
                 {"step", r.report.trajectory.step},
                 {"threshold", r.report.threshold},
                 {"window", r.report.window},
                 {"points", points},
                 {"convergence_point", r.report.convergence_point
                                           ? json(*r.report.convergence_point)
                                           : json(nullptr)}});
        }
        doc["skipped"] = json::array();
        for (const auto& s : skipped) {
            doc["skipped"].push_back({{"source_id", s.source_id},
                                      {"n_tokens", s.n_tokens},
                                      {"reason", s.reason}});
        }
        doc["errors"] = json::array();
        for (const auto& e : errors) {
            doc["errors"].push_back({{"source_id", e.source_id}, {"message", e.message}});
        }
        out << doc.dump(2) << "\n";
    }
    return kExitOk;
}

// --- analyze ----------------------------------------------------------------

namespace {

PairedSeries load_pairs(const std::filesystem::path& path) {
    TsvTable table = read_tsv(path);
    PairedSeries series;
    auto id_col = table.column("source_id");
    auto nsb_col = table.column("block_nsb");
    auto src_col = table.column("source");
    if (id_col && nsb_col && src_col) {
        for (const auto& row : table.rows) {
            if (row.size() <= std::max(*nsb_col, *src_col)) continue;
            const std::string& x = row[*nsb_col];
            const std::string& y = row[*src_col];
            if (x == "NA" || y == "NA") continue;
            series.pairs.push_back({row[*id_col], parse_double(x, path.string()),
                                    parse_double(y, path.string())});
        }
        return series;
    }
    auto label_col = table.column("label");
    auto x_col = table.column("x");
    auto y_col = table.column("y");
    if (label_col && x_col && y_col) {
        for (const auto& row : table.rows) {
            if (row.size() <= std::max(*x_col, *y_col)) continue;
            series.pairs.push_back({row[*label_col], parse_double(row[*x_col], path.string()),
                                    parse_double(row[*y_col], path.string())});
        }
        return series;
    }
    throw ConfigError("unrecognized table header in " + path.string() +
                      ": expected an entropy report or label/x/y columns");
}

} // namespace

int run_analyze(const AnalyzeConfig& cfg, std::ostream& out, std::ostream& err) {
    PairedSeries series;
    try {
        series = load_pairs(cfg.input);
    } catch (const Error& e) {
        err << e.what() << "\n";
        return kExitUsage;
    }
    series.exclusions = cfg.exclusions;

    double r = 0.0;
    RegressionFit fit;
    std::size_t n = series.effective().size();
    try {
        r = pearson_r(series);
        fit = ols_fit(series);
    } catch (const DegenerateInputError& e) {
        err << e.what() << "\n";
        return kExitNoInputs;
    } catch (const Error& e) {
        err << e.what() << "\n";
        return kExitNumeric;
    }

    if (cfg.format == OutputFormat::TSV) {
        if (!cfg.deterministic) out << "# generated\t" << timestamp_utc() << "\n";
        out << "metric\tvalue\n";
        out << "n_pairs\t" << n << "\n";
        out << "pearson_r\t" << format_bits(r) << "\n";
        out << "slope\t" << format_bits(fit.slope) << "\n";
        out << "intercept\t" << format_bits(fit.intercept) << "\n";
        out << "mean_abs_residual\t" << format_bits(fit.mean_abs_residual) << "\n";
        for (const auto& label : cfg.exclusions) out << "# excluded\t" << label << "\n";
    } else {
        json doc;
        doc["command"] = "analyze";
        if (!cfg.deterministic) doc["generated"] = timestamp_utc();
        doc["n_pairs"] = n;
        doc["pearson_r"] = r;
        doc["slope"] = fit.slope;
        doc["intercept"] = fit.intercept;
        doc["mean_abs_residual"] = fit.mean_abs_residual;
        doc["excluded"] = json::array();
        for (const auto& label : cfg.exclusions) doc["excluded"].push_back(label);
        out << doc.dump(2) << "\n";
    }
    return kExitOk;
}

// --- ratios -----------------------------------------------------------------

namespace {

std::vector<std::pair<std::string, double>> load_entropies(
    const std::filesystem::path& path) {
    TsvTable table = read_tsv(path);
    std::vector<std::pair<std::string, double>> out;
    auto id_col = table.column("source_id");
    auto src_col = table.column("source");
    if (id_col && src_col) {
        for (const auto& row : table.rows) {
            if (row.size() <= std::max(*id_col, *src_col)) continue;
            if (row[*src_col] == "NA") continue;
            out.emplace_back(row[*id_col], parse_double(row[*src_col], path.string()));
        }
        return out;
    }
    auto label_col = table.column("label");
    auto value_col = table.column("value");
    if (label_col && value_col) {
        for (const auto& row : table.rows) {
            if (row.size() <= std::max(*label_col, *value_col)) continue;
            out.emplace_back(row[*label_col], parse_double(row[*value_col], path.string()));
        }
        return out;
    }
    throw ConfigError("unrecognized table header in " + path.string() +
                      ": expected an entropy report or label/value columns");
}

struct BleuRow {
    std::string src;
    std::string tgt;
    double bleu = 0.0;
};

std::vector<BleuRow> load_bleu(const std::filesystem::path& path) {
    TsvTable table = read_tsv(path);
    auto src_col = table.column("src_label");
    auto tgt_col = table.column("tgt_label");
    auto bleu_col = table.column("bleu");
    if (!src_col || !tgt_col || !bleu_col) {
        throw ConfigError("BLEU table " + path.string() +
                          " must have src_label, tgt_label and bleu columns");
    }
    std::vector<BleuRow> out;
    for (const auto& row : table.rows) {
        if (row.size() <= std::max({*src_col, *tgt_col, *bleu_col})) continue;
        out.push_back(
            {row[*src_col], row[*tgt_col], parse_double(row[*bleu_col], path.string())});
    }
    return out;
}

} // namespace

int run_ratios(const RatiosConfig& cfg, std::ostream& out, std::ostream& err) {
    std::vector<std::pair<std::string, double>> entropies;
    std::vector<BleuRow> bleu;
    try {
        entropies = load_entropies(cfg.input);
        if (cfg.bleu_table) bleu = load_bleu(*cfg.bleu_table);
    } catch (const Error& e) {
        err << e.what() << "\n";
        return kExitUsage;
    }
    if (entropies.empty()) {
        err << "no entropies in " << cfg.input.string() << "\n";
        return kExitNoInputs;
    }
    std::stable_sort(entropies.begin(), entropies.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });

    EntropyRatioMatrix matrix;
    try {
        matrix = entropy_ratio_matrix(entropies);
    } catch (const DomainError& e) {
        err << e.what() << "\n";
        return kExitNoInputs;
    }

    std::optional<double> bleu_r;
    std::size_t bleu_pairs = 0;
    if (cfg.bleu_table) {
        std::map<std::string, std::size_t> index;
        for (std::size_t i = 0; i < matrix.labels.size(); ++i) index[matrix.labels[i]] = i;
        std::vector<std::string> missing;
        for (const auto& row : bleu) {
            if (!index.count(row.src)) missing.push_back(row.src);
            if (!index.count(row.tgt)) missing.push_back(row.tgt);
        }
        if (!missing.empty()) {
            std::sort(missing.begin(), missing.end());
            missing.erase(std::unique(missing.begin(), missing.end()), missing.end());
            err << "BLEU table labels missing from the entropy set:";
            for (const auto& m : missing) err << " " << m;
            err << "\n";
            return kExitUsage;
        }
        PairedSeries series;
        for (const auto& row : bleu) {
            if (row.src == row.tgt) continue; // diagonal carries no signal
            series.pairs.push_back(
                {row.src + ">" + row.tgt, matrix.at(index[row.src], index[row.tgt]), row.bleu});
        }
        bleu_pairs = series.pairs.size();
        try {
            bleu_r = pearson_r(series);
        } catch (const DegenerateInputError& e) {
            err << e.what() << "\n";
            return kExitNoInputs;
        }
    }

    if (cfg.format == OutputFormat::TSV) {
        if (!cfg.deterministic) out << "# generated\t" << timestamp_utc() << "\n";
        out << "label";
        for (const auto& l : matrix.labels) out << "\t" << l;
        out << "\n";
        for (std::size_t a = 0; a < matrix.labels.size(); ++a) {
            out << matrix.labels[a];
            for (std::size_t b = 0; b < matrix.labels.size(); ++b) {
                out << "\t" << format_bits(matrix.at(a, b));
            }
            out << "\n";
        }
        if (bleu_r) {
            out << "# bleu_pearson_r\t" << format_bits(*bleu_r) << "\t" << bleu_pairs << "\n";
        }
    } else {
        json doc;
        doc["command"] = "ratios";
        if (!cfg.deterministic) doc["generated"] = timestamp_utc();
        doc["labels"] = matrix.labels;
        json rows = json::array();
        for (std::size_t a = 0; a < matrix.labels.size(); ++a) {
            json row = json::array();
            for (std::size_t b = 0; b < matrix.labels.size(); ++b) row.push_back(matrix.at(a, b));
            rows.push_back(row);
        }
        doc["ratios"] = rows;
        if (bleu_r) {
            doc["bleu_pearson_r"] = *bleu_r;
            doc["bleu_pairs"] = bleu_pairs;
        }
        out << doc.dump(2) << "\n";
    }
    return kExitOk;
}

// --- synth ------------------------------------------------------------------

int run_synth(const SynthConfig& cfg, std::ostream&, std::ostream& err) {
    try {
        TokenizedText text = generate(cfg.spec);
        std::ofstream out_file(cfg.out);
        if (!out_file) throw IoError("cannot open output file: " + cfg.out.string());
        for (std::size_t i = 0; i < text.tokens.size(); ++i) {
            if (i > 0) out_file << ' ';
            out_file << text.tokens[i];
        }
        out_file << '\n';
        if (!out_file) throw IoError("write failed: " + cfg.out.string());
    } catch (const ConfigError& e) {
        err << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        err << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitOk;
}

} // namespace wordent::cli
