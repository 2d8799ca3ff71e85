#include "cli.hpp"

#include "vartopic/corpus.hpp"
#include "vartopic/errors.hpp"
#include "vartopic/eval.hpp"
#include "vartopic/metrics.hpp"
#include "vartopic/model.hpp"
#include "vartopic/serialize.hpp"
#include "vartopic/sim.hpp"
#include "vartopic/text_io.hpp"
#include "vartopic/vocab.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <unordered_map>
#include <unordered_set>

namespace vartopic::cli {

namespace fs = std::filesystem;

namespace {

struct SimulateArgs {
    SimConfig config;
    std::string out_dir;
};

struct FitArgs {
    std::string input;
    std::string format;
    bool log1p = false;
    bool sort = false;
    std::vector<int> n_values;
    std::string out_dir;
    FitOptions options;
    bool no_normalize = false;
    std::string gamma_transform = "softmax";
};

struct TidyArgs {
    std::string model;
    std::string matrix = "beta";
    int n = 0;
    std::optional<double> exponent;
    bool keep_original = false;
    std::string permutation;
    std::string gamma_transform = "softmax";
    std::string vocab_file;
    std::string out;
};

struct VocabArgs {
    std::string input;
    std::string format;
    std::string method = "ndH";
    std::optional<std::size_t> size;
    std::string out;
};

struct MatchArgs {
    std::string p;
    std::string q;
    std::string kind = "beta";
    bool complete = false;
    std::string out_dir;
};

struct EvalArgs {
    std::string truth_dir;
    std::string model;
    int n = 0;
    std::optional<double> target;
    bool complete = false;
    std::string gamma_transform = "softmax";
    std::string out;
};

void require_dir(const std::string& dir) {
    if (!fs::is_directory(dir))
        throw ValidationError("output directory '" + dir + "' does not exist");
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path);
    if (!out)
        throw ValidationError("cannot write '" + path.string() + "'");
    return out;
}

std::ifstream open_in(const fs::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ValidationError("cannot open '" + path.string() + "'");
    return in;
}

// Writes to `path`, or to `fallback` when the path is empty.
template <typename Fn> void emit(const std::string& path, std::ostream& fallback, Fn&& write) {
    if (path.empty()) {
        write(fallback);
        return;
    }
    auto out = open_out(path);
    write(out);
}

TripletCorpus read_corpus(const std::string& path, const std::string& format) {
    const TripletFormat fmt = format.empty() ? format_from_extension(path)
                              : format == "csv" ? TripletFormat::csv
                              : format == "jsonl"
                                  ? TripletFormat::jsonl
                                  : throw ValidationError("format must be csv or jsonl");
    return load_triplets(path, fmt);
}

DistributionKind parse_kind(const std::string& name) {
    if (name == "beta")
        return DistributionKind::beta;
    if (name == "gamma")
        return DistributionKind::gamma;
    throw ValidationError("kind must be beta or gamma");
}

TopicDistributions read_distribution_file(const std::string& path, DistributionKind kind) {
    auto in = open_in(path);
    return read_distributions(in, kind);
}

std::vector<std::string> read_id_list(const std::string& path) {
    auto in = open_in(path);
    std::vector<std::string> ids;
    std::string line;
    std::size_t line_number = 0;
    while (text::read_line(in, line)) {
        ++line_number;
        if (line.empty())
            continue;
        const auto fields = text::split_csv_line(line, line_number);
        if (line_number == 1 && (fields[0] == "term" || fields[0] == "id"))
            continue;
        ids.push_back(fields[0]);
    }
    return ids;
}

// assignment.csv rows (from, to): row i of the permutation is the i-th `from`, column is the fitted label `to`.
Eigen::MatrixXd read_permutation(const std::string& path, int n) {
    auto in = open_in(path);
    std::unordered_map<std::string, Eigen::Index> fitted;
    for (int t = 0; t < n; ++t)
        fitted.emplace(topic_label(static_cast<std::size_t>(t)), t);
    Eigen::MatrixXd perm = Eigen::MatrixXd::Zero(n, n);
    std::string line;
    std::size_t line_number = 0;
    Eigen::Index row = 0;
    if (!text::read_line(in, line))
        throw ValidationError("permutation file is empty");
    ++line_number;
    const auto header = text::split_csv_line(line, line_number);
    if (header.size() < 2 || header[0] != "from" || header[1] != "to")
        throw ParseError("permutation header must start with from,to", line_number);
    while (text::read_line(in, line)) {
        ++line_number;
        if (line.empty())
            continue;
        const auto fields = text::split_csv_line(line, line_number);
        if (fields.size() < 2)
            throw ParseError("expected from,to", line_number);
        const auto it = fitted.find(fields[1]);
        if (it == fitted.end())
            throw ValidationError("line " + std::to_string(line_number) + ": '" + fields[1] +
                                  "' is not a topic of the n = " + std::to_string(n) + " solution");
        if (row >= n)
            throw ValidationError("permutation has more than n rows");
        perm(row++, it->second) = 1.0;
    }
    if (row != n)
        throw ValidationError("permutation must have exactly n rows");
    return perm;
}

void write_matrix_csv(std::ostream& out, const LabeledMatrix& m) {
    out << "topic";
    for (const auto& c : m.col_names)
        out << ',' << text::csv_field(c);
    out << '\n';
    for (Eigen::Index r = 0; r < m.values.rows(); ++r) {
        out << text::csv_field(m.row_names[static_cast<std::size_t>(r)]);
        for (Eigen::Index c = 0; c < m.values.cols(); ++c)
            out << ',' << text::format_double(m.values(r, c));
        out << '\n';
    }
}

void log_warnings(std::ostream& err, const std::vector<std::string>& warnings) {
    for (const auto& w : warnings)
        err << "warning: " << w << '\n';
}

void cmd_simulate(const SimulateArgs& a, std::ostream& err) {
    require_dir(a.out_dir);
    a.config.validate();
    const SimTruth truth = simulate(a.config);
    const fs::path dir(a.out_dir);
    {
        auto out = open_out(dir / "corpus.csv");
        write_triplets(out, truth.corpus);
    }
    {
        auto out = open_out(dir / "theta.csv");
        write_distributions(out, theta_distributions(truth));
    }
    {
        auto out = open_out(dir / "phi.csv");
        write_distributions(out, phi_distributions(truth));
    }
    {
        auto out = open_out(dir / "lengths.csv");
        out << "doc,length\n";
        for (std::size_t d = 0; d < truth.lengths.size(); ++d)
            out << text::csv_field(truth.doc_ids[d]) << ',' << truth.lengths[d] << '\n';
    }
    {
        const auto& c = a.config;
        const nlohmann::json j = {{"k", c.k},           {"Mj", c.Mj},
                                  {"vocab", c.vocab},   {"size", c.size},
                                  {"mu", c.mu},         {"topic_peak", c.topic_peak},
                                  {"topic_scale", c.topic_scale}, {"word_beta", c.word_beta},
                                  {"seed", c.seed}};
        auto out = open_out(dir / "config.json");
        out << j.dump(2) << '\n';
    }
    err << "simulated " << truth.doc_ids.size() << " documents, " << truth.corpus.terms().size() << " of "
        << truth.term_ids.size() << " terms drawn\n";
}

void cmd_fit(FitArgs a, std::ostream& err) {
    require_dir(a.out_dir);
    TripletCorpus corpus = read_corpus(a.input, a.format);
    if (a.sort)
        corpus = corpus.sorted();
    if (a.log1p)
        corpus = log1p_transform(corpus);
    a.options.varimax.normalize = !a.no_normalize;
    GammaOptions gamma_options;
    gamma_options.transform = parse_gamma_transform(a.gamma_transform);
    const FittedModel model = fit(corpus, a.n_values, a.options);

    const fs::path dir(a.out_dir);
    save_model(dir / "model.json", model);
    std::vector<std::string> warnings = model.warnings;
    for (int n : model.n_values) {
        const auto beta = tidy_beta(model, n);
        const auto gamma = tidy_gamma(model, n, gamma_options);
        auto b = open_out(dir / ("beta_" + std::to_string(n) + ".csv"));
        write_distributions(b, beta);
        auto g = open_out(dir / ("gamma_" + std::to_string(n) + ".csv"));
        write_distributions(g, gamma);
        for (const auto& w : beta.warnings)
            warnings.push_back("beta n = " + std::to_string(n) + ": " + w);
        for (const auto& w : gamma.warnings)
            warnings.push_back("gamma n = " + std::to_string(n) + ": " + w);
    }
    {
        auto out = open_out(dir / "scree.csv");
        out << "component,sdev,cumulative_share\n";
        for (const auto& p : screeplot_data(model))
            out << p.component << ',' << text::format_double(p.sdev) << ',' << text::format_double(p.cumulative_share)
                << '\n';
    }
    {
        auto out = open_out(dir / "fit.log");
        for (const auto& w : warnings)
            out << "warning: " << w << '\n';
    }
    log_warnings(err, warnings);
}

void cmd_tidy(const TidyArgs& a, std::ostream& out, std::ostream& err) {
    const FittedModel model = load_model(a.model);
    const DistributionKind kind = parse_kind(a.matrix);
    TopicDistributions td;
    if (kind == DistributionKind::beta) {
        if (a.exponent || a.keep_original || !a.permutation.empty())
            throw ValidationError("--exponent, --keep-original and --permutation apply to gamma only");
        td = tidy_beta(model, a.n);
        if (!a.vocab_file.empty())
            td = complete_terms(td, read_id_list(a.vocab_file));
    } else {
        if (!a.vocab_file.empty())
            throw ValidationError("--complete-vocab applies to beta only");
        GammaOptions options;
        options.transform = parse_gamma_transform(a.gamma_transform);
        options.exponent = a.exponent;
        options.keep_original = a.keep_original;
        if (!a.permutation.empty())
            options.permutation = read_permutation(a.permutation, a.n);
        td = tidy_gamma(model, a.n, options);
    }
    emit(a.out, out, [&](std::ostream& o) { write_distributions(o, td); });
    log_warnings(err, td.warnings);
}

void cmd_vocab(const VocabArgs& a, std::ostream& out) {
    const TripletCorpus corpus = read_corpus(a.input, a.format);
    const VocabMethod method = parse_vocab_method(a.method);
    std::vector<TermScore> scores = score_terms(corpus);
    rank_scores(scores, method);
    const std::size_t size = a.size.value_or(scores.size());
    const auto chosen = select_vocab(scores, method, size);
    emit(a.out, out, [&](std::ostream& o) {
        if (method == VocabMethod::ndH) {
            o << "term,n,H,dH,ndH\n";
            for (std::size_t i = 0; i < size; ++i) {
                const auto& s = scores[i];
                o << text::csv_field(s.term) << ',' << text::format_double(s.n) << ',' << text::format_double(s.H)
                  << ',' << text::format_double(s.dH) << ',' << text::format_double(s.ndH) << '\n';
            }
        } else {
            const std::unordered_set<std::string> in_vocab(chosen.begin(), chosen.end());
            o << "term,n,dR,ndR,in_vocab\n";
            for (const auto& s : scores)
                o << text::csv_field(s.term) << ',' << text::format_double(s.n) << ',' << text::format_double(s.dR)
                  << ',' << text::format_double(s.ndR) << ',' << (in_vocab.count(s.term) ? "true" : "false") << '\n';
        }
    });
}

void cmd_match(const MatchArgs& a, std::ostream& out) {
    const DistributionKind kind = parse_kind(a.kind);
    const auto p = read_distribution_file(a.p, kind);
    const auto q = read_distribution_file(a.q, kind);
    const LabeledMatrix distance = hellinger_cross(p, q, a.complete);
    std::optional<AssignmentSolution> assignment;
    if (distance.values.rows() == distance.values.cols())
        assignment = assign_topics(distance.values);

    auto write_assignment = [&](std::ostream& o) {
        o << "from,to,distance\n";
        for (std::size_t i = 0; i < assignment->assignment.size(); ++i) {
            const auto j = assignment->assignment[i];
            o << text::csv_field(distance.row_names[i]) << ',' << text::csv_field(distance.col_names[j]) << ','
              << text::format_double(distance.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)))
              << '\n';
        }
    };
    if (a.out_dir.empty()) {
        write_matrix_csv(out, distance);
        if (assignment) {
            out << '\n';
            write_assignment(out);
        }
        return;
    }
    require_dir(a.out_dir);
    const fs::path dir(a.out_dir);
    {
        auto o = open_out(dir / "distance.csv");
        write_matrix_csv(o, distance);
    }
    if (assignment) {
        auto o = open_out(dir / "assignment.csv");
        write_assignment(o);
    }
}

void cmd_eval(const EvalArgs& a, std::ostream& out, std::ostream& err) {
    const fs::path dir(a.truth_dir);
    if (!fs::is_directory(dir))
        throw ValidationError("truth directory '" + a.truth_dir + "' does not exist");
    const auto theta = read_distribution_file((dir / "theta.csv").string(), DistributionKind::gamma);
    const auto phi = read_distribution_file((dir / "phi.csv").string(), DistributionKind::beta);
    const FittedModel model = load_model(a.model);

    EvalOptions options;
    options.n = a.n;
    options.complete = a.complete;
    options.gamma_transform = parse_gamma_transform(a.gamma_transform);
    if (a.target) {
        options.target_bits = *a.target;
    } else {
        auto in = open_in(dir / "config.json");
        nlohmann::json config;
        try {
            config = nlohmann::json::parse(in);
            options.target_bits = expected_entropy(peak_alpha(config.at("k").get<int>(), 1,
                                                              config.at("topic_peak").get<double>(),
                                                              config.at("topic_scale").get<double>()));
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError(std::string("config.json: ") + e.what() + "; pass --target instead");
        }
    }
    const EvalReport report = evaluate(theta, phi, model, options);
    emit(a.out, out, [&](std::ostream& o) { write_report(o, report); });
    log_warnings(err, report.warnings);
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Topic models from varimax-rotated sparse PCA", "vartopic"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    SimulateArgs sim;
    auto* simulate_cmd = app.add_subcommand("simulate", "Draw a synthetic corpus with known topics");
    simulate_cmd->add_option("--out", sim.out_dir, "Existing output directory")->required();
    simulate_cmd->add_option("--k", sim.config.k, "Topics (and journals)")->capture_default_str();
    simulate_cmd->add_option("--Mj", sim.config.Mj, "Documents per journal")->capture_default_str();
    simulate_cmd->add_option("--vocab", sim.config.vocab, "Vocabulary size")->capture_default_str();
    simulate_cmd->add_option("--size", sim.config.size, "Negative binomial size")->capture_default_str();
    simulate_cmd->add_option("--mu", sim.config.mu, "Mean document length")->capture_default_str();
    simulate_cmd->add_option("--peak", sim.config.topic_peak, "Expected share of a journal's own topic")
        ->capture_default_str();
    simulate_cmd->add_option("--scale", sim.config.topic_scale, "Sum of the topic Dirichlet parameters")
        ->capture_default_str();
    simulate_cmd->add_option("--word-beta", sim.config.word_beta, "Word-topic Dirichlet concentration")
        ->capture_default_str();
    simulate_cmd->add_option("--seed", sim.config.seed, "Random seed")->capture_default_str();

    FitArgs fit_args;
    auto* fit_cmd = app.add_subcommand("fit", "Fit topic models for one or more topic counts");
    fit_cmd->add_option("--input", fit_args.input, "Corpus file (doc,term,n)")->required();
    fit_cmd->add_option("--format", fit_args.format, "csv or jsonl (default: from extension)");
    fit_cmd->add_flag("--log1p", fit_args.log1p, "Replace counts by log(1 + n)");
    fit_cmd->add_flag("--sort", fit_args.sort, "Order documents and terms lexicographically");
    fit_cmd->add_option("-n,--n", fit_args.n_values, "Topic counts")->required()->delimiter(',');
    fit_cmd->add_option("--out", fit_args.out_dir, "Existing output directory")->required();
    fit_cmd->add_option("--seed", fit_args.options.svd.seed, "SVD start vector seed")->capture_default_str();
    fit_cmd->add_option("--tol", fit_args.options.svd.tol, "SVD residual tolerance")->capture_default_str();
    fit_cmd->add_option("--max-restarts", fit_args.options.svd.max_restarts)->capture_default_str();
    fit_cmd->add_option("--buffer", fit_args.options.svd.buffer, "Extra Lanczos vectors")->capture_default_str();
    fit_cmd->add_flag("--no-normalize", fit_args.no_normalize, "Skip Kaiser normalization in varimax");
    fit_cmd->add_option("--eps", fit_args.options.varimax.eps, "Varimax relative tolerance")->capture_default_str();
    fit_cmd->add_option("--max-iter", fit_args.options.varimax.max_iter, "Varimax sweeps")->capture_default_str();
    fit_cmd->add_option("--gamma-transform", fit_args.gamma_transform, "softmax or trim")->capture_default_str();

    TidyArgs tidy_args;
    auto* tidy_cmd = app.add_subcommand("tidy", "Extract beta or gamma distributions from a model");
    tidy_cmd->add_option("--model", tidy_args.model, "model.json")->required();
    tidy_cmd->add_option("--matrix", tidy_args.matrix, "beta or gamma")->capture_default_str();
    tidy_cmd->add_option("-n,--n", tidy_args.n, "Topic count")->required();
    tidy_cmd->add_option("--exponent", tidy_args.exponent, "Power renormalization exponent (gamma)");
    tidy_cmd->add_flag("--keep-original", tidy_args.keep_original, "Emit values before and after renormalization");
    tidy_cmd->add_option("--permutation", tidy_args.permutation, "assignment.csv from `match` (gamma)");
    tidy_cmd->add_option("--gamma-transform", tidy_args.gamma_transform, "softmax or trim")->capture_default_str();
    tidy_cmd->add_option("--complete-vocab", tidy_args.vocab_file, "Term list; add zero entries for absent terms");
    tidy_cmd->add_option("--out", tidy_args.out, "Output CSV (default: stdout)");

    VocabArgs vocab_args;
    auto* vocab_cmd = app.add_subcommand("vocab", "Score terms by information gain");
    vocab_cmd->add_option("--input", vocab_args.input, "Raw count corpus")->required();
    vocab_cmd->add_option("--format", vocab_args.format, "csv or jsonl (default: from extension)");
    vocab_cmd->add_option("--method", vocab_args.method, "ndH or ndR")->capture_default_str();
    vocab_cmd->add_option("--size", vocab_args.size, "Vocabulary size to select");
    vocab_cmd->add_option("--out", vocab_args.out, "Output CSV (default: stdout)");

    MatchArgs match_args;
    auto* match_cmd = app.add_subcommand("match", "Hellinger distances and optimal matching of two sets");
    match_cmd->add_option("--p", match_args.p, "Reference distributions CSV")->required();
    match_cmd->add_option("--q", match_args.q, "Distributions to match CSV")->required();
    match_cmd->add_option("--kind", match_args.kind, "beta or gamma")->capture_default_str();
    match_cmd->add_flag("--complete", match_args.complete, "Treat absent components as 0");
    match_cmd->add_option("--out", match_args.out_dir, "Output directory (default: stdout)");

    EvalArgs eval_args;
    auto* eval_cmd = app.add_subcommand("eval", "Score a model against simulated truth");
    eval_cmd->add_option("--truth", eval_args.truth_dir, "Directory written by `simulate`")->required();
    eval_cmd->add_option("--model", eval_args.model, "model.json")->required();
    eval_cmd->add_option("-n,--n", eval_args.n, "Topic count to evaluate")->required();
    eval_cmd->add_option("--target", eval_args.target, "Target entropy in bits (default: from config.json)");
    eval_cmd->add_flag("--complete", eval_args.complete, "Treat true terms absent from the model as 0");
    eval_cmd->add_option("--gamma-transform", eval_args.gamma_transform, "softmax or trim")->capture_default_str();
    eval_cmd->add_option("--out", eval_args.out, "Report JSON (default: stdout)");

    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return bad_input;
    }

    try {
        if (*simulate_cmd)
            cmd_simulate(sim, err);
        else if (*fit_cmd)
            cmd_fit(fit_args, err);
        else if (*tidy_cmd)
            cmd_tidy(tidy_args, out, err);
        else if (*vocab_cmd)
            cmd_vocab(vocab_args, out);
        else if (*match_cmd)
            cmd_match(match_args, out);
        else if (*eval_cmd)
            cmd_eval(eval_args, out, err);
    } catch (const ConvergenceError& e) {
        err << "error: " << e.what() << '\n';
        return numerical_failure;
    } catch (const NoSolutionError& e) {
        err << "error: " << e.what() << '\n';
        return numerical_failure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return bad_input;
    }
    return ok;
}

} // namespace vartopic::cli
