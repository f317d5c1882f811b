#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <string>
#include <vector>

#include "ara/corpus.hpp"
#include "ara/error.hpp"
#include "ara/experiments.hpp"
#include "ara/features.hpp"
#include "ara/forest.hpp"
#include "ara/ngram.hpp"
#include "ara/stats.hpp"
#include "ara/textproc.hpp"

namespace py = pybind11;
using namespace ara;

namespace {

// Plain Python objects for JSON-shaped results.
py::object to_py(const nlohmann::ordered_json& j) {
  switch (j.type()) {
    case nlohmann::ordered_json::value_t::null: return py::none();
    case nlohmann::ordered_json::value_t::boolean: return py::bool_(j.get<bool>());
    case nlohmann::ordered_json::value_t::number_integer: return py::int_(j.get<std::int64_t>());
    case nlohmann::ordered_json::value_t::number_unsigned: return py::int_(j.get<std::uint64_t>());
    case nlohmann::ordered_json::value_t::number_float: return py::float_(j.get<double>());
    case nlohmann::ordered_json::value_t::string: return py::str(j.get<std::string>());
    case nlohmann::ordered_json::value_t::array: {
      py::list out;
      for (const auto& v : j) out.append(to_py(v));
      return out;
    }
    case nlohmann::ordered_json::value_t::object: {
      py::dict out;
      for (const auto& [k, v] : j.items()) out[py::str(k)] = to_py(v);
      return out;
    }
    default: throw Error("unsupported JSON value");
  }
}

py::dict document_to_py(const Document& d) {
  py::dict out;
  out["id"] = d.id;
  out["language"] = d.language.str();
  out["level"] = std::string(to_string(d.level));
  out["text"] = d.text;
  return out;
}

Document document_from_py(const py::dict& d, const LanguageRegistry& registry) {
  auto get = [&](const char* key) {
    if (!d.contains(key)) throw Error(std::string("document is missing '") + key + "'");
    return py::cast<std::string>(d[key]);
  };
  return {get("id"), registry.parse(get("language")), parse_level(get("level")), get("text")};
}

Corpus corpus_from_documents(const std::vector<py::dict>& docs) {
  const auto registry = LanguageRegistry::defaults();
  std::vector<Document> out;
  for (const auto& d : docs) out.push_back(document_from_py(d, registry));
  return Corpus(std::move(out));
}

ForestParams forest_params(int n_estimators, std::optional<int> max_depth, int min_samples_split,
                           int min_samples_leaf, const py::object& max_features, bool bootstrap, std::uint64_t seed) {
  ForestParams p;
  p.n_estimators = n_estimators;
  p.max_depth = max_depth;
  p.min_samples_split = min_samples_split;
  p.min_samples_leaf = min_samples_leaf;
  p.bootstrap = bootstrap;
  p.seed = seed;
  if (py::isinstance<py::int_>(max_features)) {
    p.max_features = MaxFeatures::Count;
    p.max_features_count = py::cast<int>(max_features);
  } else {
    const auto s = py::cast<std::string>(max_features);
    if (s == "sqrt") {
      p.max_features = MaxFeatures::Sqrt;
    } else if (s == "all") {
      p.max_features = MaxFeatures::All;
    } else {
      throw Error("max_features must be 'sqrt', 'all' or an integer");
    }
  }
  p.validate();
  return p;
}

py::dict setup_result_to_py(const SetupResult& r, const Corpus& corpus) {
  py::dict out;
  out["target"] = r.target.str();
  out["setup"] = std::string(to_string(r.setup));
  out["seed"] = r.seed;
  out["fold_accuracies"] = r.fold_accuracies();
  out["mean_accuracy"] = r.mean_accuracy;
  py::list folds;
  for (const auto& f : r.folds) {
    py::dict fd;
    std::vector<std::string> test_ids;
    for (std::size_t i : f.test) test_ids.push_back(corpus[i].id);
    fd["test_ids"] = test_ids;
    fd["train_size"] = f.train.size();
    fd["accuracy"] = f.accuracy;
    folds.append(fd);
  }
  out["folds"] = folds;
  return out;
}

std::vector<Level> levels_from_py(const std::vector<std::string>& labels) {
  std::vector<Level> out;
  for (const auto& l : labels) out.push_back(parse_level(l));
  return out;
}

// The packaged tree ships next to the Python sources.
FamilyTree tree_or_default(const std::optional<std::string>& path) {
  if (path) return load_family_tree(*path);
  return load_family_tree(py::cast<std::string>(py::module_::import("ara").attr("DEFAULT_FAMILY_TREE")));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Readability assessment for Philippine languages";
  py::register_exception<Error>(m, "AraError", PyExc_ValueError);

  // Text processing.
  m.def("tokenize_sentences", [](const std::string& t) { return text::tokenize_sentences(t); });
  m.def("tokenize_words", [](const std::string& t) { return text::tokenize_words(t); });
  m.def("cv_encode", [](const std::string& w) { return text::cv_encode(w); });
  m.def("syllable_shapes", [](const std::string& w) { return text::syllable_shapes(w); });
  m.def("syllabify", [](const std::string& w) {
    std::vector<std::string> out;
    for (auto p : text::syllabify(w)) out.emplace_back(text::to_string(p));
    return out;
  });
  m.def("count_syllables", [](const std::string& w) { return text::count_syllables(w); });
  m.def("consonant_cluster_stats", [](const std::string& w) {
    const auto s = text::consonant_cluster_stats(w);
    py::dict out;
    out["cluster_count"] = s.cluster_count;
    out["total_length"] = s.total_length;
    out["mean_cluster_len"] = s.mean_cluster_len;
    return out;
  });

  // Corpora.
  py::class_<Corpus>(m, "Corpus")
      .def(py::init(&corpus_from_documents), py::arg("documents"))
      .def("__len__", &Corpus::size)
      .def("__getitem__",
           [](const Corpus& c, std::size_t i) {
             if (i >= c.size()) throw py::index_error();
             return document_to_py(c[i]);
           })
      .def("documents",
           [](const Corpus& c) {
             py::list out;
             for (const auto& d : c.documents()) out.append(document_to_py(d));
             return out;
           })
      .def("languages", [](const Corpus& c) {
        std::vector<std::string> out;
        for (const auto& l : c.languages()) out.push_back(l.str());
        return out;
      });
  m.def("load_corpus", [](const std::filesystem::path& p) { return load_corpus(p); }, py::arg("path"));
  m.def("import_directory", [](const std::filesystem::path& p) { return import_directory(p); }, py::arg("root"));
  m.def(
      "corpus_stats",
      [](const Corpus& c, const std::string& lang) {
        const LanguageCode code(lang);
        return to_py(stats_to_json(code, corpus_stats(c, code)));
      },
      py::arg("corpus"), py::arg("language"));
  m.def("family_tree", [](const std::optional<std::string>& path) { return to_py(tree_or_default(path).to_json()); },
        py::arg("path") = py::none());

  // N-gram profiles.
  py::class_<NgramProfile>(m, "NgramProfile")
      .def_property_readonly("language", [](const NgramProfile& p) { return p.language().str(); })
      .def_property_readonly("n", &NgramProfile::n)
      .def_property_readonly("grams", &NgramProfile::grams)
      .def("__len__", &NgramProfile::size)
      .def("__contains__", &NgramProfile::contains);
  m.def(
      "build_profile",
      [](const Corpus& c, const std::string& lang, int n, double fraction) {
        return build_profile(c, LanguageCode(lang), n, fraction);
      },
      py::arg("corpus"), py::arg("language"), py::arg("n"), py::arg("top_fraction") = kDefaultTopFraction);
  m.def("profile_overlap", &profile_overlap, py::arg("a"), py::arg("b"));
  m.def(
      "overlap_matrix",
      [](const Corpus& c, int n, double fraction) {
        std::vector<NgramProfile> profiles;
        for (const auto& code : feature_languages()) {
          if (c.has_language(code)) profiles.push_back(build_profile(c, code, n, fraction));
        }
        return to_py(overlap_matrix(profiles).to_json());
      },
      py::arg("corpus"), py::arg("n"), py::arg("top_fraction") = kDefaultTopFraction);

  py::class_<ProfileSet>(m, "ProfileSet")
      .def("get", [](const ProfileSet& s, const std::string& lang, int n) { return s.get(LanguageCode(lang), n); })
      .def("save", [](const ProfileSet& s, const std::filesystem::path& dir) { save_profile_set(s, dir); });
  m.def(
      "build_profile_set", [](const Corpus& c, double fraction) { return build_profile_set(c, fraction); },
      py::arg("corpus"), py::arg("top_fraction") = kDefaultTopFraction);
  m.def("load_profile_set", [](const std::filesystem::path& dir) { return load_profile_set(dir); });

  // Features.
  m.def("feature_names", [] {
    const auto& n = feature_names();
    return std::vector<std::string>(n.begin(), n.end());
  });
  m.def(
      "extract",
      [](const py::dict& doc, const ProfileSet& profiles, bool normalize) {
        FeatureOptions options;
        options.normalize_syllable_patterns = normalize;
        const auto fv = extract(document_from_py(doc, LanguageRegistry::defaults()), profiles, options);
        return std::vector<double>(fv.values.begin(), fv.values.end());
      },
      py::arg("document"), py::arg("profiles"), py::arg("normalize_patterns") = false);
  m.def(
      "extract_all",
      [](const Corpus& c, const ProfileSet& profiles, std::size_t jobs) {
        std::vector<FeatureVector> rows;
        {
          py::gil_scoped_release release;
          rows = extract_all(c, profiles, {}, jobs);
        }
        py::list out;
        for (const auto& fv : rows) {
          py::dict d;
          d["doc_id"] = fv.doc_id;
          d["language"] = fv.language.str();
          d["level"] = std::string(to_string(fv.level));
          d["values"] = std::vector<double>(fv.values.begin(), fv.values.end());
          out.append(d);
        }
        return out;
      },
      py::arg("corpus"), py::arg("profiles"), py::arg("jobs") = 1);

  // Random forest.
  py::class_<Forest>(m, "Forest")
      .def("predict",
           [](const Forest& f, const std::vector<double>& x) { return std::string(to_string(predict(f, x))); })
      .def("mdi_importance", &mdi_importance)
      .def_property_readonly("feature_names", &Forest::feature_names)
      .def_property_readonly("n_trees", [](const Forest& f) { return f.trees().size(); })
      .def("top_features",
           [](const Forest& f, std::size_t k) {
             std::vector<std::pair<std::string, double>> out;
             for (const auto& r : top_features(f, k)) out.emplace_back(r.name, r.importance);
             return out;
           })
      .def("to_json", [](const Forest& f) { return f.to_json().dump(); })
      .def("save", [](const Forest& f, const std::filesystem::path& p) { f.save(p); })
      .def_static("load", [](const std::filesystem::path& p) { return Forest::load(p); });
  m.def(
      "fit",
      [](const std::vector<std::vector<double>>& x, const std::vector<std::string>& y, int n_estimators,
         std::optional<int> max_depth, int min_samples_split, int min_samples_leaf, const py::object& max_features,
         bool bootstrap, std::uint64_t seed, std::vector<std::string> names, std::size_t jobs) {
        if (x.size() != y.size()) throw Error("x and y have different lengths");
        if (x.empty()) throw Error("cannot fit a forest on an empty dataset");
        const auto params =
            forest_params(n_estimators, max_depth, min_samples_split, min_samples_leaf, max_features, bootstrap, seed);
        Dataset data(x.front().size());
        const auto labels = levels_from_py(y);
        for (std::size_t i = 0; i < x.size(); ++i) data.add(x[i], labels[i]);
        py::gil_scoped_release release;
        return fit(data, params, std::move(names), jobs);
      },
      py::arg("x"), py::arg("y"), py::arg("n_estimators") = 100, py::arg("max_depth") = py::none(),
      py::arg("min_samples_split") = 2, py::arg("min_samples_leaf") = 1, py::arg("max_features") = "sqrt",
      py::arg("bootstrap") = true, py::arg("seed") = 0, py::arg("feature_names") = std::vector<std::string>{},
      py::arg("jobs") = 1);

  // Statistics and experiments.
  m.def(
      "paired_ttest",
      [](const std::vector<double>& a, const std::vector<double>& b, const std::string& tail) {
        return to_py(paired_ttest(a, b, parse_tail(tail)).to_json());
      },
      py::arg("a"), py::arg("b"), py::arg("tail") = "one");
  m.def(
      "stratified_kfold",
      [](const std::vector<std::string>& labels, std::size_t k, std::uint64_t seed) {
        return stratified_kfold(levels_from_py(labels), k, seed);
      },
      py::arg("labels"), py::arg("k"), py::arg("seed"));
  m.def(
      "run_setup",
      [](const Corpus& c, const std::string& target, const std::string& setup, std::uint64_t seed, std::size_t k,
         int n_estimators, double fraction, bool balance, const std::optional<std::string>& tree_path,
         std::size_t jobs) {
        ExperimentConfig config;
        config.target = LanguageCode(target);
        config.setup = parse_setup(setup);
        config.seed = seed;
        config.k_folds = k;
        config.forest.n_estimators = n_estimators;
        config.profile_fraction = fraction;
        config.balance = balance;
        config.jobs = jobs;
        const auto tree = tree_or_default(tree_path);
        SetupResult r;
        {
          py::gil_scoped_release release;
          r = run_setup(config, c, tree);
        }
        return setup_result_to_py(r, c);
      },
      py::arg("corpus"), py::arg("target"), py::arg("setup"), py::arg("seed"), py::arg("k") = 5,
      py::arg("n_estimators") = 100, py::arg("top_fraction") = kDefaultTopFraction, py::arg("balance") = false,
      py::arg("tree_path") = py::none(), py::arg("jobs") = 1);

  py::class_<GridReport>(m, "GridReport")
      .def("to_dict", [](const GridReport& r) { return to_py(r.to_json()); })
      .def("render", &GridReport::render)
      .def("column", [](const GridReport& r, const std::string& setup) { return r.column(parse_setup(setup)); });
  m.def(
      "run_grid",
      [](const Corpus& c, std::vector<std::uint64_t> seeds, std::optional<std::vector<std::string>> targets,
         std::optional<std::vector<std::string>> setups, std::size_t k, int n_estimators, double fraction,
         bool balance, const std::optional<std::string>& tree_path, std::size_t jobs) {
        GridOptions options;
        options.seeds = std::move(seeds);
        if (targets) {
          options.targets.clear();
          for (const auto& t : *targets) options.targets.emplace_back(t);
        }
        if (setups) {
          options.setups.clear();
          for (const auto& s : *setups) options.setups.push_back(parse_setup(s));
        }
        options.k_folds = k;
        options.forest.n_estimators = n_estimators;
        options.profile_fraction = fraction;
        options.balance = balance;
        options.jobs = jobs;
        const auto tree = tree_or_default(tree_path);
        py::gil_scoped_release release;
        return run_grid(c, tree, options);
      },
      py::arg("corpus"), py::arg("seeds"), py::arg("targets") = py::none(), py::arg("setups") = py::none(),
      py::arg("k") = 5, py::arg("n_estimators") = 100, py::arg("top_fraction") = kDefaultTopFraction,
      py::arg("balance") = false, py::arg("tree_path") = py::none(), py::arg("jobs") = 1);
}
