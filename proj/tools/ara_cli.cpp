// ara: command-line front end for the readability pipeline.
//
// Every subcommand exits 0 on success and 2 on a usage or data error.
// Results go to files or stdout; diagnostics go to stderr.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ara/corpus.hpp"
#include "ara/error.hpp"
#include "ara/experiments.hpp"
#include "ara/features.hpp"
#include "ara/forest.hpp"
#include "ara/ngram.hpp"
#include "ara/stats.hpp"
#include "ara/textproc.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace ara;

namespace {

// --config: a JSON object whose keys are flag names; nested objects hold the
// flags of a subcommand, e.g. {"grid": {"trees": 200, "setups": ["L", "*L"]}}.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
    return dump(app, default_also).dump(2) + "\n";
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    nlohmann::json j;
    try {
      input >> j;
    } catch (const nlohmann::json::exception& e) {
      throw CLI::FileError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw CLI::FileError("config must be a JSON object");
    std::vector<CLI::ConfigItem> items;
    collect(j, {}, items);
    return items;
  }

 private:
  static std::string scalar(const nlohmann::json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

  static void collect(const nlohmann::json& j, const std::vector<std::string>& parents,
                      std::vector<CLI::ConfigItem>& items) {
    for (const auto& [key, value] : j.items()) {
      if (value.is_object()) {
        auto nested = parents;
        nested.push_back(key);
        collect(value, nested, items);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      if (value.is_array()) {
        for (const auto& v : value) item.inputs.push_back(scalar(v));
      } else if (value.is_boolean()) {
        item.inputs = {value.get<bool>() ? "true" : "false"};
      } else if (!value.is_null()) {
        item.inputs = {scalar(value)};
      }
      items.push_back(std::move(item));
    }
  }

  static nlohmann::ordered_json dump(const CLI::App* app, bool default_also) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const CLI::Option* opt : app->get_options()) {
      if (opt->get_lnames().empty() || !opt->get_configurable()) continue;
      const auto& name = opt->get_lnames().front();
      if (opt->count() > 0) {
        const auto& results = opt->results();
        j[name] = results.size() == 1 ? nlohmann::ordered_json(results.front()) : nlohmann::ordered_json(results);
      } else if (default_also && !opt->get_default_str().empty()) {
        j[name] = opt->get_default_str();
      }
    }
    for (const CLI::App* sub : app->get_subcommands({})) {
      auto nested = dump(sub, default_also);
      if (!nested.empty()) j[sub->get_name()] = std::move(nested);
    }
    return j;
  }
};

void warn(const std::string& message) { std::cerr << "warning: " << message << '\n'; }

LoadOptions load_options() {
  LoadOptions options;
  options.warn = warn;
  return options;
}

Corpus load_nonempty(const std::string& manifest) {
  Corpus corpus = load_corpus(manifest, load_options());
  if (corpus.empty()) throw Error("manifest " + manifest + " has no documents");
  return corpus;
}

// Fails early, before any work, when `path` cannot be created.
void check_writable_file(const fs::path& path) {
  const fs::path parent = path.parent_path().empty() ? fs::path(".") : path.parent_path();
  if (!fs::is_directory(parent)) throw Error("cannot write " + path.string() + ": no such directory");
  const bool existed = fs::exists(path);
  { std::ofstream probe(path, std::ios::app); if (!probe) throw Error("cannot write " + path.string()); }
  if (!existed) fs::remove(path);
}

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw Error("cannot create directory " + dir.string());
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
  out.flush();
  if (!out) throw Error("failed writing " + path.string());
}

std::vector<LanguageCode> parse_languages(const std::vector<std::string>& codes) {
  const auto registry = LanguageRegistry::defaults();
  std::vector<LanguageCode> out;
  for (const auto& c : codes) out.push_back(registry.parse(c));
  return out;
}

// Corpus languages in feature-slot order.
std::vector<LanguageCode> ordered_languages(const Corpus& corpus) {
  std::vector<LanguageCode> out;
  for (const auto& code : feature_languages()) {
    if (corpus.has_language(code)) out.push_back(code);
  }
  return out;
}

struct ForestFlags {
  int trees = 100;
  int max_depth = 0;
  int min_samples_split = 2;
  int min_samples_leaf = 1;
  std::string max_features = "sqrt";
  bool no_bootstrap = false;

  void attach(CLI::App* app) {
    app->add_option("--trees", trees, "Trees per forest")->capture_default_str();
    app->add_option("--max-depth", max_depth, "Maximum tree depth (0 = unlimited)")->capture_default_str();
    app->add_option("--min-samples-split", min_samples_split)->capture_default_str();
    app->add_option("--min-samples-leaf", min_samples_leaf)->capture_default_str();
    app->add_option("--max-features", max_features, "sqrt, all, or a count")->capture_default_str();
    app->add_flag("--no-bootstrap", no_bootstrap, "Grow every tree on the full training set");
  }

  ForestParams params() const {
    ForestParams p;
    p.n_estimators = trees;
    if (max_depth > 0) p.max_depth = max_depth;
    p.min_samples_split = min_samples_split;
    p.min_samples_leaf = min_samples_leaf;
    p.bootstrap = !no_bootstrap;
    if (max_features == "sqrt") {
      p.max_features = MaxFeatures::Sqrt;
    } else if (max_features == "all") {
      p.max_features = MaxFeatures::All;
    } else {
      p.max_features = MaxFeatures::Count;
      try {
        std::size_t used = 0;
        p.max_features_count = std::stoi(max_features, &used);
        if (used != max_features.size()) throw std::invalid_argument("trailing characters");
      } catch (const std::logic_error&) {
        throw Error("--max-features must be sqrt, all or an integer, got '" + max_features + "'");
      }
    }
    p.validate();
    return p;
  }
};

void add_fraction(CLI::App* app, double& fraction) {
  app->add_option("--fraction", fraction, "Share of distinct n-grams kept per profile")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
}

// ---------------------------------------------------------------------------

struct StatsCmd {
  std::string manifest;
  std::string language;
  std::string json_out;

  void run() const {
    const Corpus corpus = load_nonempty(manifest);
    std::vector<LanguageCode> langs;
    if (language.empty()) {
      langs = ordered_languages(corpus);
    } else {
      langs = parse_languages({language});
    }
    std::vector<std::pair<LanguageCode, std::map<Level, LevelStats>>> rows;
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& lang : langs) {
      rows.emplace_back(lang, corpus_stats(corpus, lang));
      j.push_back(stats_to_json(lang, rows.back().second));
    }
    if (!json_out.empty()) write_file(json_out, j.dump(2) + "\n");
    std::cout << render_stats_table(rows);
  }
};

struct OverlapCmd {
  std::string manifest;
  int n = 3;
  double fraction = kDefaultTopFraction;
  std::string json_out;

  void run() const {
    if (!json_out.empty()) check_writable_file(json_out);
    const Corpus corpus = load_nonempty(manifest);
    std::vector<NgramProfile> profiles;
    for (const auto& lang : ordered_languages(corpus)) profiles.push_back(build_profile(corpus, lang, n, fraction));
    const auto matrix = overlap_matrix(profiles);
    if (!json_out.empty()) write_file(json_out, matrix.to_json().dump(2) + "\n");
    std::cout << matrix.render();
  }
};

struct ProfilesCmd {
  std::string manifest;
  std::string out_dir;
  double fraction = kDefaultTopFraction;

  void run() const {
    ensure_directory(out_dir);
    const Corpus corpus = load_nonempty(manifest);
    save_profile_set(build_profile_set(corpus, fraction), out_dir);
  }
};

struct ExtractCmd {
  std::string manifest;
  std::string out;
  std::string profiles_dir;
  double fraction = kDefaultTopFraction;
  bool normalize = false;
  std::size_t jobs = 1;

  void run() const {
    check_writable_file(out);
    const Corpus corpus = load_nonempty(manifest);
    const ProfileSet profiles =
        profiles_dir.empty() ? build_profile_set(corpus, fraction) : load_profile_set(profiles_dir);
    FeatureOptions options;
    options.normalize_syllable_patterns = normalize;
    export_dataset(corpus, profiles, out, options, jobs);
  }
};

struct TrainCmd {
  std::string manifest;
  std::string tree_path;
  std::string target;
  std::string setup = "L";
  std::uint64_t seed = 0;
  std::string out_dir;
  double fraction = kDefaultTopFraction;
  ForestFlags forest;
  std::size_t jobs = 1;

  void run() const {
    ForestParams params = forest.params();
    params.seed = seed;
    const LanguageCode lang = parse_languages({target}).front();
    const Setup s = parse_setup(setup);
    const FamilyTree tree = load_family_tree(tree_path);
    ensure_directory(out_dir);
    const Corpus corpus = load_nonempty(manifest);

    const auto target_docs = corpus.indices_of(lang);
    if (target_docs.empty()) throw Error("no documents for target language " + lang.str());
    const auto train = assemble_training(s, lang, target_docs, corpus, tree);
    const CorpusCache cache(corpus, {}, jobs);
    const ProfileSet profiles = cache.profiles_for(lang, target_docs, fraction);
    Dataset data(kFeatureCount);
    for (std::size_t i : train) {
      const FeatureVector fv = cache.features(i, profiles);
      data.add(fv.values, fv.level);
    }
    const Forest model = fit(data, params, {feature_names().begin(), feature_names().end()}, jobs);
    model.save(fs::path(out_dir) / "model.json");
    save_profile_set(profiles, fs::path(out_dir) / "profiles");
  }
};

struct PredictCmd {
  std::string manifest;
  std::string model_dir;
  std::string out;

  void run() const {
    if (!out.empty()) check_writable_file(out);
    const Forest model = Forest::load(fs::path(model_dir) / "model.json");
    const ProfileSet profiles = load_profile_set(fs::path(model_dir) / "profiles");
    const Corpus corpus = load_nonempty(manifest);
    std::ostringstream csv;
    csv << "doc_id,language,level,predicted\n";
    std::size_t correct = 0;
    for (const auto& doc : corpus.documents()) {
      const FeatureVector fv = extract(doc, profiles);
      const Level predicted = predict(model, fv.values);
      if (predicted == doc.level) ++correct;
      csv << doc.id << ',' << doc.language.str() << ',' << to_string(doc.level) << ',' << to_string(predicted)
          << '\n';
    }
    if (out.empty()) {
      std::cout << csv.str();
    } else {
      write_file(out, csv.str());
    }
    std::cerr << "accuracy " << correct << "/" << corpus.size() << '\n';
  }
};

struct GridCmd {
  std::string manifest;
  std::string tree_path;
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> setups;
  std::vector<std::string> targets;
  std::string out_dir;
  std::string ttest;
  std::string tail = "one";
  std::size_t k_folds = 5;
  double fraction = kDefaultTopFraction;
  bool balance = false;
  std::size_t top = 10;
  ForestFlags forest;
  std::size_t jobs = 1;

  void run() const {
    GridOptions options;
    options.seeds = seeds;
    if (!targets.empty()) options.targets = parse_languages(targets);
    if (!setups.empty()) {
      options.setups.clear();
      for (const auto& s : setups) options.setups.push_back(parse_setup(s));
    }
    options.k_folds = k_folds;
    options.profile_fraction = fraction;
    options.balance = balance;
    options.forest = forest.params();
    options.fit_final_models = true;
    options.jobs = jobs;
    const Tail tail_kind = parse_tail(tail);
    std::optional<std::pair<Setup, Setup>> ttest_pair;
    if (!ttest.empty()) {
      const auto colon = ttest.find(':');
      if (colon == std::string::npos) throw Error("--ttest expects A:B, e.g. L:*L");
      ttest_pair.emplace(parse_setup(ttest.substr(0, colon)), parse_setup(ttest.substr(colon + 1)));
    }
    if (top < 1) throw Error("--top must be at least 1");

    const FamilyTree tree = load_family_tree(tree_path);
    const fs::path dir(out_dir);
    ensure_directory(dir / "models");
    ensure_directory(dir / "importance");
    const Corpus corpus = load_nonempty(manifest);

    const GridReport report = run_grid(corpus, tree, options);
    write_file(dir / "report.json", report.to_json().dump(2) + "\n");
    write_file(dir / "report.txt", report.render());

    for (const auto& cell : report.cells) {
      if (!cell.result) {
        warn(cell.target.str() + " " + std::string(to_string(cell.setup)) + " seed " + std::to_string(cell.seed) +
             ": " + cell.error);
        continue;
      }
      const std::string name =
          cell.target.str() + "_" + std::string(file_tag(cell.setup)) + "_seed" + std::to_string(cell.seed);
      cell.result->final_model->save(dir / "models" / (name + ".json"));
    }

    // Importance tables come from the *L model of the first seed.
    for (const auto& cell : report.cells) {
      if (cell.setup != Setup::All || cell.seed != options.seeds.front() || !cell.result) continue;
      const auto ranked = top_features(*cell.result->final_model, top);
      const std::string label = cell.target.str() + " (*L)";
      write_file(dir / "importance" / (cell.target.str() + ".json"),
                 importance_to_json(label, ranked).dump(2) + "\n");
      write_file(dir / "importance" / (cell.target.str() + ".txt"), render_importance(label, ranked));
    }

    std::cout << report.render();
    if (ttest_pair) {
      const auto a = report.column(ttest_pair->first);
      const auto b = report.column(ttest_pair->second);
      auto j = paired_ttest(a, b, tail_kind).to_json();
      j["a"] = std::string(to_string(ttest_pair->first));
      j["b"] = std::string(to_string(ttest_pair->second));
      write_file(dir / "ttest.json", j.dump(2) + "\n");
      std::cout << j.dump() << '\n';
    }
  }
};

struct ImportanceCmd {
  std::string model;
  std::size_t k = 10;
  std::string label;
  std::string json_out;

  void run() const {
    if (!json_out.empty()) check_writable_file(json_out);
    const Forest forest = Forest::load(model);
    const auto ranked = top_features(forest, k);
    const std::string name = label.empty() ? fs::path(model).stem().string() : label;
    if (!json_out.empty()) write_file(json_out, importance_to_json(name, ranked).dump(2) + "\n");
    std::cout << render_importance(name, ranked);
  }
};

struct TtestCmd {
  std::vector<double> a;
  std::vector<double> b;
  std::string tail = "one";

  void run() const { std::cout << paired_ttest(a, b, parse_tail(tail)).to_json().dump() << '\n'; }
};

struct SyllabifyCmd {
  std::vector<std::string> words;

  void run() const {
    std::vector<std::string> tokens;
    if (words.empty()) {
      std::stringstream buffer;
      buffer << std::cin.rdbuf();
      tokens = text::tokenize_words(buffer.str());
    } else {
      for (const auto& w : words) {
        for (auto& t : text::tokenize_words(w)) tokens.push_back(std::move(t));
      }
    }
    for (const auto& w : tokens) {
      std::string shapes, patterns;
      for (const auto& s : text::syllable_shapes(w)) shapes += (shapes.empty() ? "" : ".") + s;
      for (auto p : text::syllabify(w)) patterns += (patterns.empty() ? "" : ",") + std::string(text::to_string(p));
      std::cout << w << '\t' << text::cv_encode(w) << '\t' << shapes << '\t' << patterns << '\n';
    }
  }
};

struct ImportCmd {
  std::string root;
  std::string out;

  void run() const {
    check_writable_file(out);
    const Corpus corpus = import_directory(root, load_options());
    std::ostringstream os;
    write_manifest(corpus, os);
    write_file(out, os.str());
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Automatic readability assessment for Philippine languages"};
  app.name("ara");
  app.require_subcommand(1);
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON file with flag values");

  const std::string default_tree = (fs::path(ARA_DATA_DIR) / "family_tree.json").string();

  StatsCmd stats;
  auto* s = app.add_subcommand("stats", "Per-level corpus statistics");
  s->add_option("--manifest", stats.manifest, "JSONL corpus manifest")->required();
  s->add_option("--language", stats.language, "Only this language");
  s->add_option("--json", stats.json_out, "Also write JSON here");
  s->callback([&] { stats.run(); });

  OverlapCmd overlap;
  auto* o = app.add_subcommand("overlap", "Pairwise n-gram profile overlap");
  o->add_option("--manifest", overlap.manifest)->required();
  o->add_option("--n", overlap.n, "n-gram length")->check(CLI::IsMember({2, 3}))->capture_default_str();
  add_fraction(o, overlap.fraction);
  o->add_option("--json", overlap.json_out, "Also write JSON here");
  o->callback([&] { overlap.run(); });

  ProfilesCmd profiles;
  auto* p = app.add_subcommand("profiles", "Build and save the 14 n-gram profiles");
  p->add_option("--manifest", profiles.manifest)->required();
  p->add_option("--out-dir", profiles.out_dir)->required();
  add_fraction(p, profiles.fraction);
  p->callback([&] { profiles.run(); });

  ExtractCmd extract_cmd;
  auto* e = app.add_subcommand("extract", "Write the 32-feature CSV");
  e->add_option("--manifest", extract_cmd.manifest)->required();
  e->add_option("--out", extract_cmd.out, "Output CSV")->required();
  e->add_option("--profiles", extract_cmd.profiles_dir, "Profile directory (default: build from the manifest)");
  add_fraction(e, extract_cmd.fraction);
  e->add_flag("--normalize-patterns", extract_cmd.normalize, "Divide pattern counts by word count");
  e->add_option("--jobs", extract_cmd.jobs)->check(CLI::PositiveNumber)->capture_default_str();
  e->callback([&] { extract_cmd.run(); });

  TrainCmd train;
  auto* t = app.add_subcommand("train", "Fit one model for a target and setup");
  t->add_option("--manifest", train.manifest)->required();
  t->add_option("--tree", train.tree_path, "Family tree JSON")->default_val(default_tree);
  t->add_option("--target", train.target)->required();
  t->add_option("--setup", train.setup, "L, L+P, L+N, L+P+N or *L")->capture_default_str();
  t->add_option("--seed", train.seed)->required();
  t->add_option("--out-dir", train.out_dir, "Receives model.json and profiles/")->required();
  add_fraction(t, train.fraction);
  train.forest.attach(t);
  t->add_option("--jobs", train.jobs)->check(CLI::PositiveNumber)->capture_default_str();
  t->callback([&] { train.run(); });

  PredictCmd predict_cmd;
  auto* pr = app.add_subcommand("predict", "Predict levels with a trained model");
  pr->add_option("--manifest", predict_cmd.manifest)->required();
  pr->add_option("--model-dir", predict_cmd.model_dir, "Directory written by train")->required();
  pr->add_option("--out", predict_cmd.out, "Output CSV (default: stdout)");
  pr->callback([&] { predict_cmd.run(); });

  GridCmd grid;
  auto* g = app.add_subcommand("grid", "Cross-validated target x setup x seed grid");
  g->add_option("--manifest", grid.manifest)->required();
  g->add_option("--tree", grid.tree_path, "Family tree JSON")->default_val(default_tree);
  g->add_option("--seed", grid.seeds, "One or more master seeds")->required()->expected(1, -1);
  g->add_option("--setups", grid.setups, "Setups to run (default: all five)")->delimiter(',');
  g->add_option("--targets", grid.targets, "Targets to run (default: hil,msb,krj,bto)")->delimiter(',');
  g->add_option("--out-dir", grid.out_dir)->required();
  g->add_option("--ttest", grid.ttest, "Paired t-test between two setup columns, e.g. L:*L");
  g->add_option("--tail", grid.tail, "one or two")->capture_default_str();
  g->add_option("--k", grid.k_folds, "Folds")->check(CLI::Range(2, 1000))->capture_default_str();
  add_fraction(g, grid.fraction);
  g->add_flag("--balance", grid.balance, "Level-balance auxiliary corpora");
  g->add_option("--top", grid.top, "Rows per importance table")->capture_default_str();
  grid.forest.attach(g);
  g->add_option("--jobs", grid.jobs)->check(CLI::PositiveNumber)->capture_default_str();
  g->callback([&] { grid.run(); });

  ImportanceCmd importance;
  auto* im = app.add_subcommand("importance", "Top features of a saved model");
  im->add_option("--model", importance.model)->required();
  im->add_option("--k", importance.k)->capture_default_str();
  im->add_option("--label", importance.label);
  im->add_option("--json", importance.json_out, "Also write JSON here");
  im->callback([&] { importance.run(); });

  TtestCmd ttest;
  auto* tt = app.add_subcommand("ttest", "Paired t-test (b - a)");
  tt->add_option("--a", ttest.a)->required()->delimiter(',');
  tt->add_option("--b", ttest.b)->required()->delimiter(',');
  tt->add_option("--tail", ttest.tail, "one or two")->capture_default_str();
  tt->callback([&] { ttest.run(); });

  SyllabifyCmd syllabify;
  auto* sy = app.add_subcommand("syllabify", "Print c/v encoding and syllables per word (stdin if no words)");
  sy->add_option("words", syllabify.words);
  sy->callback([&] { syllabify.run(); });

  ImportCmd import_cmd;
  auto* ic = app.add_subcommand("import", "Convert <lang>/<level>/<id>.txt files to a manifest");
  ic->add_option("--root", import_cmd.root)->required();
  ic->add_option("--out", import_cmd.out)->required();
  ic->callback([&] { import_cmd.run(); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& err) {
    return app.exit(err);
  } catch (const CLI::CallForAllHelp& err) {
    return app.exit(err);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 2;
  }
  return 0;
}
