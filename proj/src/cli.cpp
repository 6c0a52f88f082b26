#include "seqtag/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "seqtag/augment.hpp"
#include "seqtag/benchmark.hpp"
#include "seqtag/corpus.hpp"
#include "seqtag/crf.hpp"
#include "seqtag/errors.hpp"
#include "seqtag/evaluator.hpp"
#include "seqtag/ingest.hpp"
#include "seqtag/schemes.hpp"

namespace seqtag::cli {

namespace fs = std::filesystem;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ColumnArgs {
  std::string sep = "space";
  std::size_t surface_col = 0;
  std::size_t tag_col = 1;
  int pos_col = -1;

  ColumnSpec spec() const {
    ColumnSpec s;
    s.separator = sep == "tab" ? '\t' : ' ';
    s.surface_col = surface_col;
    s.tag_col = tag_col;
    if (pos_col >= 0) s.attribute_cols.push_back({static_cast<std::size_t>(pos_col), "POS"});
    s.check();
    return s;
  }
};

void add_column_options(CLI::App* sub, ColumnArgs& cols) {
  sub->add_option("--sep", cols.sep, "Column separator")
      ->check(CLI::IsMember({"space", "tab"}))
      ->capture_default_str();
  sub->add_option("--surface-col", cols.surface_col, "Column holding the token")->capture_default_str();
  sub->add_option("--tag-col", cols.tag_col, "Column holding the entity tag")->capture_default_str();
  sub->add_option("--pos-col", cols.pos_col, "Column holding the POS tag (-1: none)")->capture_default_str();
}

const std::vector<std::string> kSchemeNames{"io", "bio", "bioes"};

Scheme scheme_arg(const std::string& name) {
  auto s = parse_scheme(name);
  if (!s) throw UsageError("unknown scheme '" + name + "'");
  return *s;
}

// "auto" infers the scheme from the tags.
Corpus load_corpus(const std::string& path, const ColumnSpec& spec, const std::string& scheme) {
  Corpus corpus = read_conll_file(path, spec);
  Scheme s = scheme == "auto" ? infer_scheme(corpus) : scheme_arg(scheme);
  return with_scheme(std::move(corpus), s);
}

std::vector<std::string> split_list(const std::string& joined) {
  std::vector<std::string> out;
  std::stringstream in(joined);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::vector<Technique> technique_args(const std::string& joined) {
  std::vector<Technique> out;
  for (const auto& n : split_list(joined)) {
    if (n == "lwtr") out.push_back(Technique::lwtr);
    else if (n == "sis") out.push_back(Technique::sis);
    else throw UsageError("unknown augmentation technique '" + n + "'");
  }
  return out;
}

std::string trim(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

// Flat `key = value` lines become `--key=value` arguments placed right after
// the subcommand, so flags given on the command line (parsed later, last
// value wins) override them.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::optional<std::string> config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config requires a file");
      config_path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      break;
    }
    if (args[i].starts_with("--config=")) {
      config_path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (!config_path) return args;

  std::istringstream in(read_text_file(*config_path));
  std::vector<std::string> injected;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError("config line " + std::to_string(line_no) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw UsageError("config line " + std::to_string(line_no) + ": empty key");
    injected.push_back("--" + key + "=" + value);
  }
  std::size_t insert_at = (!args.empty() && !args.front().starts_with("-")) ? 1 : 0;
  args.insert(args.begin() + static_cast<std::ptrdiff_t>(insert_at), injected.begin(), injected.end());
  return args;
}

void print_stats(std::ostream& out, const Stats& stats) {
  out << "tokens\t" << stats.tokens << "\n"
      << "sentences\t" << stats.sentences << "\n"
      << "entities\t" << stats.entities_total << "\n";
  for (const auto& [type, count] : stats.entities_by_type) out << type << "\t" << count << "\n";
}

// Appends one column with predicted tags to the serialized gold rows.
std::string serialize_with_predictions(const Corpus& gold, const Corpus& pred, const ColumnSpec& spec) {
  std::istringstream rows(serialize_conll(gold, spec));
  std::string out, line;
  std::size_t s = 0, t = 0;
  while (std::getline(rows, line)) {
    if (line.empty()) {
      out += "\n";
      ++s, t = 0;
      continue;
    }
    out += line;
    out.push_back(spec.separator);
    out += pred.sentences[s].tokens[t++].tag;
    out += "\n";
  }
  return out;
}

std::size_t last_column(std::string_view text, char sep) {
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || line.starts_with("# ")) continue;
    std::size_t fields = 0;
    bool in_field = false;
    for (char c : line) {
      if (c == sep || (sep == ' ' && c == '\t')) {
        if (sep == '\t') ++fields;
        in_field = false;
      } else if (!in_field) {
        if (sep == ' ') ++fields;
        in_field = true;
      }
    }
    if (sep == '\t') ++fields;
    return fields == 0 ? 0 : fields - 1;
  }
  throw EmptyInput();
}

void write_output(const std::string& path, const std::string& contents, std::ostream& out) {
  if (path.empty() || path == "-") out << contents;
  else write_text_file_atomic(path, contents);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  try {
    args = expand_config(std::move(args));
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DataError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  CLI::App app{"seqtag: corpus conversion, augmentation, CRF tagging and conlleval-style scoring "
               "for named-entity recognition"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");
  app.add_option("--config", "Flat key = value file; explicit flags override it");

  // fetch
  std::string url(kEuropeanaFrenchUrl);
  std::string cache_dir;
  std::string sha256;
  bool refresh = false;
  auto* fetch = app.add_subcommand("fetch", "Download the dataset into the checksummed cache");
  fetch->add_option("--url", url, "Source URL")->capture_default_str();
  fetch->add_option("--cache", cache_dir, "Cache directory (default: $SEQTAG_CACHE or ~/.cache/seqtag)");
  fetch->add_option("--sha256", sha256, "Expected SHA-256 digest");
  fetch->add_flag("--refresh", refresh, "Re-download and accept a changed digest");

  // stats
  std::string stats_input;
  std::string stats_scheme = "auto";
  bool stats_split = false;
  bool stats_strict = false;
  std::size_t max_len = 200;
  ColumnArgs stats_cols;
  auto* stats = app.add_subcommand("stats", "Token, sentence and entity counts");
  stats->add_option("input", stats_input, "CoNLL file")->required();
  stats->add_option("--scheme", stats_scheme, "Tag scheme of the input")
      ->check(CLI::IsMember({"auto", "io", "bio", "bioes"}))
      ->capture_default_str();
  stats->add_flag("--split", stats_split, "Insert sentence boundaries before counting");
  stats->add_option("--max-len", max_len, "Hard sentence length limit when splitting")->capture_default_str();
  stats->add_flag("--strict", stats_strict, "Also report strict scheme violations");
  add_column_options(stats, stats_cols);

  // split
  std::string split_input, split_train, split_test;
  std::size_t budget = 20592;
  bool no_boundaries = false;
  ColumnArgs split_cols;
  auto* split = app.add_subcommand("split", "Insert sentence boundaries and cut a train/test split");
  split->add_option("input", split_input, "CoNLL file")->required();
  split->add_option("--train", split_train, "Output train file")->required();
  split->add_option("--test", split_test, "Output test file")->required();
  split->add_option("--budget", budget, "Test-set token budget")->capture_default_str();
  split->add_flag("--no-boundaries", no_boundaries, "Keep the sentence structure of the input as is");
  split->add_option("--max-len", max_len, "Hard sentence length limit")->capture_default_str();
  add_column_options(split, split_cols);

  // convert
  std::string conv_from = "auto", conv_to, conv_in, conv_out;
  ColumnArgs conv_cols;
  auto* conv = app.add_subcommand("convert", "Convert between IO, BIO and BIOES");
  conv->add_option("--from", conv_from, "Source scheme")
      ->check(CLI::IsMember({"auto", "io", "bio", "bioes"}))
      ->capture_default_str();
  conv->add_option("--to", conv_to, "Target scheme")->required()->check(CLI::IsMember(kSchemeNames));
  conv->add_option("input", conv_in, "Input CoNLL file")->required();
  conv->add_option("output", conv_out, "Output CoNLL file ('-' for stdout)")->required();
  add_column_options(conv, conv_cols);

  // augment
  std::string aug_in, aug_out, aug_from = "auto", aug_to = "bioes";
  std::string techniques = "lwtr,sis";
  double p = 0.5;
  std::size_t copies = 1;
  std::uint64_t seed = 0;
  ColumnArgs aug_cols;
  auto* aug = app.add_subcommand("augment", "Label-wise token replacement and shuffle within segments");
  aug->add_option("input", aug_in, "Input CoNLL file")->required();
  aug->add_option("output", aug_out, "Output CoNLL file ('-' for stdout)")->required();
  aug->add_option("--from", aug_from, "Scheme of the input")
      ->check(CLI::IsMember({"auto", "io", "bio", "bioes"}))
      ->capture_default_str();
  aug->add_option("--to", aug_to, "Scheme to convert to before augmenting")
      ->check(CLI::IsMember(kSchemeNames))
      ->capture_default_str();
  aug->add_option("--techniques", techniques, "Comma-separated subset of lwtr,sis")->capture_default_str();
  aug->add_option("--p", p, "Per-token (LWTR) / per-segment (SIS) probability")->capture_default_str();
  aug->add_option("--copies", copies, "Augmented copies per sentence")->capture_default_str();
  aug->add_option("--seed", seed, "Random seed")->capture_default_str();
  add_column_options(aug, aug_cols);

  // train
  std::string train_in, model_path, train_from = "auto", train_to;
  TrainConfig train_cfg;
  bool use_pos = false;
  ColumnArgs train_cols;
  auto* train_cmd = app.add_subcommand("train", "Train a linear-chain CRF");
  train_cmd->add_option("input", train_in, "Training CoNLL file")->required();
  train_cmd->add_option("--model", model_path, "Output model file")->required();
  train_cmd->add_option("--from", train_from, "Scheme of the input")
      ->check(CLI::IsMember({"auto", "io", "bio", "bioes"}))
      ->capture_default_str();
  train_cmd->add_option("--to", train_to, "Convert to this scheme before training")
      ->check(CLI::IsMember(kSchemeNames));
  train_cmd->add_option("--l2", train_cfg.l2_lambda, "L2 regularization strength")->capture_default_str();
  train_cmd->add_option("--max-iter", train_cfg.max_iter, "Maximum accepted iterations")->capture_default_str();
  train_cmd->add_option("--tol", train_cfg.tol, "Relative objective change for convergence")->capture_default_str();
  train_cmd->add_option("--seed", train_cfg.seed, "Seed (training is deterministic; recorded only)");
  train_cmd->add_option("--threads", train_cfg.threads, "Worker threads (0: all cores)")->capture_default_str();
  train_cmd->add_flag("--pos", use_pos, "Use POS feature templates (needs --pos-col)");
  add_column_options(train_cmd, train_cols);

  // tag
  std::string tag_model, tag_in, tag_out;
  bool append = false;
  ColumnArgs tag_cols;
  auto* tag = app.add_subcommand("tag", "Tag a CoNLL file with a trained model");
  tag->add_option("--model", tag_model, "Model file")->required();
  tag->add_option("input", tag_in, "Input CoNLL file")->required();
  tag->add_option("output", tag_out, "Output CoNLL file ('-' for stdout)")->required();
  tag->add_flag("--append", append, "Keep the input tags and add predictions as a last column");
  add_column_options(tag, tag_cols);

  // eval
  std::string gold_path, pred_path, format = "text", eval_output;
  bool normalize_io = false;
  int pred_col = -1;
  ColumnArgs eval_cols;
  auto* eval = app.add_subcommand("eval", "Entity-level precision, recall and F1 (conlleval semantics)");
  eval->add_option("gold", gold_path, "Gold CoNLL file")->required();
  eval->add_option("pred", pred_path, "Predicted CoNLL file (omit to read predictions from --pred-col)");
  eval->add_option("--pred-col", pred_col, "Prediction column in single-file mode (-1: last)")->capture_default_str();
  eval->add_flag("--normalize-io", normalize_io, "Collapse both sides to IO before matching");
  eval->add_option("--format", format, "Report style")->check(CLI::IsMember({"text", "csv"}))->capture_default_str();
  eval->add_option("--output", eval_output, "Write the report here instead of stdout");
  add_column_options(eval, eval_cols);

  // benchmark
  std::string bench_train, bench_test, bench_out = "benchmark-out";
  std::string bench_schemes = "io,bio,bioes";
  bool bench_fetch = false, bench_pos = false, bench_augment = false;
  TrainConfig bench_cfg;
  ColumnArgs bench_cols;
  auto* bench = app.add_subcommand("benchmark", "Train and score one CRF per scheme / feature / augmentation cell");
  bench->add_option("--train", bench_train, "Training CoNLL file");
  bench->add_option("--test", bench_test, "Test CoNLL file");
  bench->add_flag("--fetch", bench_fetch, "Fetch the dataset and split it instead of reading --train/--test");
  bench->add_option("--url", url, "Source URL for --fetch")->capture_default_str();
  bench->add_option("--cache", cache_dir, "Cache directory for --fetch");
  bench->add_option("--budget", budget, "Test-set token budget for --fetch")->capture_default_str();
  bench->add_option("--max-len", max_len, "Hard sentence length limit for --fetch")->capture_default_str();
  bench->add_option("--schemes", bench_schemes, "Comma-separated subset of io,bio,bioes")->capture_default_str();
  bench->add_flag("--pos", bench_pos, "Add POS-feature cells (needs --pos-col)");
  bench->add_flag("--augment", bench_augment, "Add cells trained on augmented data");
  bench->add_option("--techniques", techniques, "Comma-separated subset of lwtr,sis")->capture_default_str();
  bench->add_option("--p", p, "Augmentation probability")->capture_default_str();
  bench->add_option("--copies", copies, "Augmented copies per sentence")->capture_default_str();
  bench->add_option("--seed", seed, "Augmentation seed")->capture_default_str();
  bench->add_option("--l2", bench_cfg.l2_lambda, "L2 regularization strength")->capture_default_str();
  bench->add_option("--max-iter", bench_cfg.max_iter, "Maximum accepted iterations")->capture_default_str();
  bench->add_option("--tol", bench_cfg.tol, "Relative objective change for convergence")->capture_default_str();
  bench->add_option("--threads", bench_cfg.threads, "Worker threads (0: all cores)")->capture_default_str();
  bench->add_option("--out", bench_out, "Output directory")->capture_default_str();
  add_column_options(bench, bench_cols);

  std::vector<const char*> cargv{argv[0]};
  for (const auto& a : args) cargv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(cargv.size()), cargv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    err << "run with --help for usage\n";
    return kExitUsage;
  }

  try {
    if (*fetch) {
      DatasetDescriptor desc{url, cache_dir.empty() ? default_cache_root() : fs::path(cache_dir),
                             sha256.empty() ? std::nullopt : std::optional<std::string>(sha256)};
      FetchOptions options;
      options.refresh = refresh;
      out << fetch_dataset(desc, options).string() << "\n";
    } else if (*stats) {
      Corpus corpus = load_corpus(stats_input, stats_cols.spec(), stats_scheme);
      if (stats_split) corpus = insert_boundaries(corpus, SplitRules{max_len, SplitRules{}.abbreviations});
      print_stats(out, corpus_stats(corpus));
      if (stats_strict) {
        std::size_t violations = 0;
        for (const auto& s : corpus.sentences) violations += validate(s.tags(), *corpus.scheme).size();
        out << "violations\t" << violations << "\n";
      }
    } else if (*split) {
      ColumnSpec spec = split_cols.spec();
      Corpus corpus = load_corpus(split_input, spec, "auto");
      if (!no_boundaries) corpus = insert_boundaries(corpus, SplitRules{max_len, SplitRules{}.abbreviations});
      auto [train_part, test_part] = split_train_test(corpus, budget);
      write_text_file_atomic(split_train, serialize_conll(train_part, spec));
      write_text_file_atomic(split_test, serialize_conll(test_part, spec));
      out << "train\n";
      print_stats(out, corpus_stats(train_part));
      out << "test\n";
      print_stats(out, corpus_stats(test_part));
    } else if (*conv) {
      ColumnSpec spec = conv_cols.spec();
      Corpus corpus = load_corpus(conv_in, spec, conv_from);
      write_output(conv_out, serialize_conll(convert(corpus, scheme_arg(conv_to)), spec), out);
    } else if (*aug) {
      ColumnSpec spec = aug_cols.spec();
      Corpus corpus = convert(load_corpus(aug_in, spec, aug_from), scheme_arg(aug_to));
      AugmentConfig cfg;
      cfg.techniques = technique_args(techniques);
      cfg.p = p;
      cfg.copies_per_sentence = copies;
      cfg.seed = seed;
      write_output(aug_out, serialize_conll(augment_corpus(corpus, cfg), spec), out);
    } else if (*train_cmd) {
      ColumnSpec spec = train_cols.spec();
      if (use_pos && !spec.has_pos()) throw UsageError("--pos needs --pos-col");
      Corpus corpus = load_corpus(train_in, spec, train_from);
      if (!train_to.empty()) corpus = convert(corpus, scheme_arg(train_to));
      TrainLog log;
      CrfModel model = train(corpus, train_cfg, FeatureTemplateSet::standard(use_pos), &log);
      save_model(model, model_path);
      out << "labels\t" << model.num_labels() << "\n"
          << "features\t" << model.features.size() << "\n"
          << "accepted\t" << log.accepted << "\n"
          << "rejected\t" << log.rejected << "\n"
          << "objective\t" << log.objectives.back() << "\n";
    } else if (*tag) {
      ColumnSpec spec = tag_cols.spec();
      CrfModel model = load_model(tag_model);
      if (model.templates.uses_pos() && !spec.has_pos())
        err << "warning: model uses POS features but no --pos-col was given\n";
      Corpus input = read_conll_file(tag_in, spec);
      Corpus predicted = tag_corpus(model, input);
      write_output(tag_out, append ? serialize_with_predictions(input, predicted, spec)
                                   : serialize_conll(predicted, spec),
                   out);
    } else if (*eval) {
      ColumnSpec spec = eval_cols.spec();
      Corpus gold, pred;
      if (pred_path.empty()) {
        std::string text = read_text_file(gold_path);
        ColumnSpec pred_spec = spec;
        pred_spec.attribute_cols.clear();
        pred_spec.tag_col = pred_col >= 0 ? static_cast<std::size_t>(pred_col) : last_column(text, spec.separator);
        if (pred_spec.tag_col == spec.tag_col || pred_spec.tag_col == spec.surface_col)
          throw UsageError("prediction column must differ from the token and gold columns");
        gold = parse_conll(text, spec);
        pred = parse_conll(text, pred_spec);
      } else {
        gold = read_conll_file(gold_path, spec);
        pred = read_conll_file(pred_path, spec);
      }
      gold = with_scheme(std::move(gold), infer_scheme(gold));
      pred = with_scheme(std::move(pred), infer_scheme(pred));
      auto report = evaluate(gold, pred, normalize_io);
      write_output(eval_output, format_report(report, format == "csv" ? ReportStyle::csv : ReportStyle::text), out);
    } else if (*bench) {
      ColumnSpec spec = bench_cols.spec();
      Corpus train_corpus, test_corpus;
      if (bench_fetch) {
        DatasetDescriptor desc{url, cache_dir.empty() ? default_cache_root() : fs::path(cache_dir), std::nullopt};
        auto path = fetch_dataset(desc);
        Corpus corpus = insert_boundaries(load_corpus(path.string(), spec, "auto"),
                                          SplitRules{max_len, SplitRules{}.abbreviations});
        std::tie(train_corpus, test_corpus) = split_train_test(corpus, budget);
      } else {
        if (bench_train.empty() || bench_test.empty())
          throw UsageError("benchmark needs --train and --test, or --fetch");
        train_corpus = load_corpus(bench_train, spec, "auto");
        test_corpus = load_corpus(bench_test, spec, "auto");
      }
      BenchmarkPlan plan;
      plan.schemes.clear();
      for (const auto& name : split_list(bench_schemes)) plan.schemes.push_back(scheme_arg(name));
      if (plan.schemes.empty()) throw UsageError("at least one scheme is required");
      plan.use_pos = bench_pos;
      plan.train = bench_cfg;
      if (bench_augment) {
        AugmentConfig cfg;
        cfg.techniques = technique_args(techniques);
        cfg.p = p;
        cfg.copies_per_sentence = copies;
        cfg.seed = seed;
        cfg.check();
        plan.augment = cfg;
      }
      auto cells = run_benchmark(plan, train_corpus, test_corpus, &err);
      const std::string table = benchmark_table(cells);
      write_text_file_atomic((fs::path(bench_out) / "results.txt").string(), table);
      write_text_file_atomic((fs::path(bench_out) / "results.csv").string(), benchmark_csv(cells));
      out << table;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DataError& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}

}  // namespace seqtag::cli
