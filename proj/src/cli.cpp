#include "abmil/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "abmil/abclass.hpp"
#include "abmil/absim.hpp"
#include "abmil/encode.hpp"
#include "abmil/eval.hpp"
#include "abmil/ingest.hpp"
#include "abmil/milnaive.hpp"
#include "abmil/motif.hpp"

namespace abmil {

namespace fs = std::filesystem;

namespace {

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct MotifOptions {
  std::string setting = "S1";
  std::optional<double> alpha, beta;
  std::optional<std::size_t> min_len, max_len;

  void add(CLI::App& app) {
    app.add_option("--setting", setting, "Motif threshold preset")
        ->check(CLI::IsMember({"S1", "S2", "S3", "S4", "S5"}));
    app.add_option("--alpha", alpha, "Minimum in-class motif rate (overrides the preset)");
    app.add_option("--beta", beta, "Maximum out-of-class motif rate (overrides the preset)");
    app.add_option("--min-len", min_len, "Minimum motif length");
    app.add_option("--max-len", max_len, "Maximum motif length (default unbounded)");
  }
  MotifParams params() const {
    auto p = setting_params(setting);
    if (alpha) p.alpha = *alpha;
    if (beta) p.beta = *beta;
    if (min_len) p.min_len = *min_len;
    if (max_len) p.max_len = *max_len;
    p.validate();
    return p;
  }
};

struct RunOptions {
  MotifOptions motif;
  std::string approach = "abclass";
  std::string classifier = "knn";
  int k = 1;
  std::size_t min_group_size = 2;
  std::string measure = "local-align";
  double match = 2.0, mismatch = -1.0, gap = -1.0;
  std::string subst;
  std::string aggregator = "sms";
  std::string weights;
  std::string mil = "bag-knn";
  unsigned threads = 0;

  CLI::Option* aggregator_opt = nullptr;
  CLI::Option* weights_opt = nullptr;
  CLI::Option* measure_opt = nullptr;
  CLI::Option* mil_opt = nullptr;

  void add(CLI::App& app) {
    motif.add(app);
    app.add_option("--approach", approach, "abclass | absim | naive")
        ->check(CLI::IsMember({"abclass", "absim", "naive"}));
    app.add_option("--classifier", classifier, "Per-relation classifier")
        ->check(CLI::IsMember({"knn", "naive-bayes", "decision-tree"}));
    app.add_option("--k", k, "Neighbours for knn")->check(CLI::PositiveNumber);
    app.add_option("--min-group-size", min_group_size, "Smallest usable relation group");
    measure_opt = app.add_option("--measure", measure, "common-symbols | local-align")
                      ->check(CLI::IsMember({"common-symbols", "local-align"}));
    app.add_option("--match", match, "Local alignment match score");
    app.add_option("--mismatch", mismatch, "Local alignment mismatch score");
    app.add_option("--gap", gap, "Linear gap penalty (negative)");
    app.add_option("--subst", subst, "Substitution table file");
    aggregator_opt = app.add_option("--aggregator", aggregator, "sms | wams")
                         ->check(CLI::IsMember({"sms", "wams"}));
    weights_opt = app.add_option("--weights", weights, "WAMS weights file (key<TAB>weight)");
    mil_opt = app.add_option("--mil", mil, "Naive-approach MIL classifier: bag-knn | sil-vote")
                  ->check(CLI::IsMember({"bag-knn", "sil-vote"}));
    app.add_option("--threads", threads, "Worker threads (0 = all cores)");
  }

  LooConfig config() const {
    LooConfig c;
    c.approach = parse_approach(approach);
    if (c.approach != Approach::ABSim &&
        (aggregator_opt->count() || weights_opt->count() || measure_opt->count()))
      throw UsageError("--measure/--aggregator/--weights only apply to --approach absim");
    if (c.approach != Approach::Naive && mil_opt->count())
      throw UsageError("--mil only applies to --approach naive");
    if (aggregator != "wams" && weights_opt->count())
      throw UsageError("--weights requires --aggregator wams");

    const ClassifierSpec spec{parse_classifier_kind(classifier), k};
    const auto params = motif.params();
    c.abclass = {params, spec, min_group_size};
    c.naive = {params, {parse_mil_kind(mil), spec}};
    c.absim.measure = parse_measure_kind(measure);
    c.absim.scoring.match = match;
    c.absim.scoring.mismatch = mismatch;
    c.absim.scoring.gap = gap;
    if (!subst.empty()) {
      std::ifstream in(subst);
      if (!in) throw DataError("cannot open substitution table " + subst);
      c.absim.scoring.table = SubstitutionTable::read(in);
      c.absim.scoring_source = fs::path(subst).filename().string();
    }
    c.absim.aggregator = parse_aggregator(aggregator);
    if (!weights.empty()) {
      std::ifstream in(weights);
      if (!in) throw DataError("cannot open weights file " + weights);
      c.absim.weights = WeightVector::read(in);
    }
    c.threads = threads;
    if (c.approach == Approach::ABClass) c.abclass.validate();
    if (c.approach == Approach::ABSim) c.absim.scoring.validate();
    return c;
  }
};

// `key=value` lines become `--key=value` arguments placed right after the
// subcommand, ahead of the user's own flags; with last-wins parsing the
// command line takes precedence.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  static const std::set<std::string> subcommands = {"extract", "predict", "loo", "gen"};
  std::vector<std::string> rest;
  std::optional<std::string> config;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config requires a file");
      config = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (!config) return rest;

  std::ifstream in(*config);
  if (!in) throw UsageError("cannot open config file " + *config);
  std::vector<std::string> injected;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    auto e = line.find_last_not_of(" \t\r");
    line = line.substr(b, e - b + 1);
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError(*config + ":" + std::to_string(lineno) + ": expected key=value");
    std::string key = line.substr(0, eq), value = line.substr(eq + 1);
    while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
    value.erase(0, value.find_first_not_of(" \t"));
    if (value == "true")
      injected.push_back("--" + key);
    else if (value != "false")
      injected.push_back("--" + key + "=" + value);
  }
  auto pos = std::find_if(rest.begin() + (rest.empty() ? 0 : 1), rest.end(),
                          [](const std::string& a) { return subcommands.count(a) != 0; });
  if (pos == rest.end()) return rest;
  rest.insert(pos + 1, injected.begin(), injected.end());
  return rest;
}

Dataset load(const std::string& manifest) { return load_dataset(manifest); }

void print_scores(std::ostream& out, double pos, double neg, Aggregator a) {
  if (a == Aggregator::Sms)
    out << "total_pos=" << pos << " total_neg=" << neg << '\n';
  else
    out << "avg_pos=" << pos << " avg_neg=" << neg << '\n';
}

int cmd_extract(const std::string& manifest, const MotifOptions& mo, const std::string& out_dir,
                unsigned threads, std::ostream& out, std::ostream& err) {
  const auto params = mo.params();
  const auto db = load(manifest);
  const auto labels = label_map(db);
  std::vector<Bag> labeled;
  for (const auto& b : db.bags())
    if (b.label) labeled.push_back(b);
  const auto groups = relation_groups(Dataset(std::move(labeled), db.alphabet()));

  std::vector<std::optional<MotifSet>> sets(groups.size());
  std::vector<std::string> errors(groups.size());
  parallel_for(groups.size(), threads, [&](std::size_t i) {
    try {
      sets[i] = extract_motifs(groups[i], labels, params);
    } catch (const DataError& e) {
      errors[i] = e.what();
    }
  });

  fs::create_directories(out_dir);
  out << "key\tsequences\tmotifs\n";
  for (std::size_t i = 0; i < groups.size(); ++i) {
    out << groups[i].key << '\t' << groups[i].members.size() << '\t';
    if (!sets[i]) {
      out << "-\n";
      err << "warning: " << errors[i] << '\n';
      continue;
    }
    out << sets[i]->size() << '\n';
    std::ofstream f(fs::path(out_dir) / (groups[i].key + ".motifs"));
    if (!f) throw DataError("cannot write motif dump for key '" + groups[i].key + "'");
    write_motifs(f, *sets[i]);
  }
  return kExitOk;
}

int cmd_predict(const std::string& manifest, const std::string& query_path, const RunOptions& ro,
                std::ostream& out) {
  const auto cfg = ro.config();
  const auto db = load(manifest);
  const auto query = load_query_bag(query_path);
  switch (cfg.approach) {
    case Approach::ABClass: {
      const auto r = abclass_predict(db, query, cfg.abclass, cfg.threads);
      write_abclass_report(out, r);
      break;
    }
    case Approach::ABSim: {
      const auto r = absim_predict(db, query, make_measure(cfg.absim.measure, cfg.absim.scoring),
                                   cfg.absim.aggregator, cfg.absim.weights, cfg.threads);
      out << "label=" << to_string(r.label) << '\n';
      print_scores(out, r.total_pos, r.total_neg, cfg.absim.aggregator);
      write_similarity_matrix(out, r.matrix);
      break;
    }
    case Approach::Naive: {
      const auto table = build_union_table(db, cfg.naive.params, cfg.threads);
      const auto label = mil_predict(table, query, cfg.naive.mil);
      out << "label=" << to_string(label) << '\n';
      out << "union_motifs=" << table.matrix.col_count() << " sparsity=" << std::setprecision(10)
          << sparsity(table.matrix) << '\n';
      break;
    }
  }
  return kExitOk;
}

int cmd_loo(const std::string& manifest, const RunOptions& ro, const std::string& report_path,
            const std::string& tsv_path, bool timing, std::ostream& out) {
  const auto cfg = ro.config();
  const auto report = run_loo(load(manifest), cfg);
  if (!report_path.empty()) {
    std::ofstream f(report_path);
    if (!f) throw DataError("cannot write " + report_path);
    write_loo_report(f, report, timing);
  } else {
    write_loo_report(out, report, timing);
  }
  if (!tsv_path.empty()) {
    std::ofstream f(tsv_path);
    if (!f) throw DataError("cannot write " + tsv_path);
    write_loo_tsv(f, report, timing);
  }
  if (!report_path.empty()) out << "summary " << summary_line(report) << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multiple-instance learning over keyed sequence bags", "abmil"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  std::string manifest, out_dir, query, report_path, tsv_path;
  MotifOptions extract_motif;
  unsigned extract_threads = 0;
  auto* extract = app.add_subcommand("extract", "Mine motifs for every relation group");
  extract->add_option("--manifest", manifest, "Dataset manifest")->required();
  extract->add_option("--out", out_dir, "Directory for <key>.motifs dumps")->required();
  extract->add_option("--threads", extract_threads, "Worker threads (0 = all cores)");
  extract_motif.add(*extract);

  RunOptions predict_opts;
  auto* predict = app.add_subcommand("predict", "Classify one query bag");
  predict->add_option("--manifest", manifest, "Dataset manifest")->required();
  predict->add_option("--query", query, "Query bag FASTA file")->required();
  predict_opts.add(*predict);

  RunOptions loo_opts;
  bool no_timing = false;
  auto* loo = app.add_subcommand("loo", "Leave-one-out evaluation");
  loo->add_option("--manifest", manifest, "Dataset manifest")->required();
  loo->add_option("--report", report_path, "key=value report file (default: standard output)");
  loo->add_option("--tsv", tsv_path, "Tab-separated per-fold report file");
  loo->add_flag("--no-timing", no_timing, "Omit wall-clock fields");
  loo_opts.add(*loo);

  SyntheticSpec syn;
  auto* gen = app.add_subcommand("gen", "Write a planted-signal synthetic dataset");
  gen->add_option("--out", out_dir, "Output directory")->required();
  gen->add_option("--bags", syn.bags, "Number of bags");
  gen->add_option("--keys", syn.keys, "Instances per bag");
  gen->add_option("--len", syn.seq_len, "Sequence length");
  gen->add_option("--motif-len", syn.motif_len, "Planted motif length");
  gen->add_option("--noise", syn.noise_rate, "Probability of planting the wrong-class motif");
  gen->add_option("--seed", syn.seed, "Random seed");

  try {
    const auto args = expand_config(raw_args);
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e, out, err);
      return code == 0 ? kExitOk : kExitUsage;
    }

    if (*extract) return cmd_extract(manifest, extract_motif, out_dir, extract_threads, out, err);
    if (*predict) return cmd_predict(manifest, query, predict_opts, out);
    if (*loo) return cmd_loo(manifest, loo_opts, report_path, tsv_path, !no_timing, out);
    if (*gen) {
      const auto path = write_dataset(gen_synthetic(syn), out_dir);
      out << path.string() << '\n';
      return kExitOk;
    }
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDataError;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDataError;
  }
  return kExitUsage;
}

}  // namespace abmil
