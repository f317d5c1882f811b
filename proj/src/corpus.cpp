#include "ara/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <unordered_set>

#include "ara/error.hpp"
#include "ara/textproc.hpp"

namespace ara {

std::string_view to_string(Level level) {
  switch (level) {
    case Level::L1: return "L1";
    case Level::L2: return "L2";
    case Level::L3: return "L3";
  }
  return "?";
}

Level parse_level(std::string_view label) {
  if (label == "L1") return Level::L1;
  if (label == "L2") return Level::L2;
  if (label == "L3") return Level::L3;
  throw Error("unknown level '" + std::string(label) + "' (expected L1, L2 or L3)");
}

LanguageCode::LanguageCode(std::string_view code) : code_(code) {
  const bool ok = code.size() == 3 && std::all_of(code.begin(), code.end(), [](char c) { return c >= 'a' && c <= 'z'; });
  if (!ok) throw Error("invalid language code '" + std::string(code) + "'");
}

std::vector<LanguageCode> feature_languages() {
  return {kFeatureLanguageCodes.begin(), kFeatureLanguageCodes.end()};
}

std::vector<LanguageCode> target_languages() {
  return {kTargetLanguageCodes.begin(), kTargetLanguageCodes.end()};
}

LanguageRegistry::LanguageRegistry(std::vector<LanguageCode> codes) : codes_(std::move(codes)) {
  std::sort(codes_.begin(), codes_.end());
  codes_.erase(std::unique(codes_.begin(), codes_.end()), codes_.end());
}

LanguageRegistry LanguageRegistry::defaults() { return LanguageRegistry(feature_languages()); }

bool LanguageRegistry::contains(const LanguageCode& code) const {
  return std::binary_search(codes_.begin(), codes_.end(), code);
}

LanguageCode LanguageRegistry::parse(std::string_view code) const {
  LanguageCode parsed(code);
  if (!contains(parsed)) throw Error("unknown language '" + std::string(code) + "'");
  return parsed;
}

// ---------------------------------------------------------------------------

namespace {

bool blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

}  // namespace

Corpus::Corpus(std::vector<Document> documents) : documents_(std::move(documents)) {
  std::set<std::pair<LanguageCode, std::string>> seen;
  for (const auto& doc : documents_) {
    if (doc.id.empty()) throw Error("document with empty id");
    if (blank(doc.text)) throw Error("document '" + doc.id + "' has empty text");
    if (!seen.emplace(doc.language, doc.id).second) {
      throw Error("duplicate id '" + doc.id + "' for language " + doc.language.str());
    }
  }
  std::sort(documents_.begin(), documents_.end(), [](const Document& a, const Document& b) {
    return std::tie(a.language, a.level, a.id) < std::tie(b.language, b.level, b.id);
  });
}

std::vector<LanguageCode> Corpus::languages() const {
  std::vector<LanguageCode> out;
  for (const auto& doc : documents_) {
    if (out.empty() || out.back() != doc.language) out.push_back(doc.language);
  }
  return out;
}

bool Corpus::has_language(const LanguageCode& language) const {
  return std::any_of(documents_.begin(), documents_.end(), [&](const Document& d) { return d.language == language; });
}

std::vector<std::size_t> Corpus::indices_of(const LanguageCode& language) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < documents_.size(); ++i) {
    if (documents_[i].language == language) out.push_back(i);
  }
  return out;
}

// ---------------------------------------------------------------------------

Corpus parse_corpus(std::istream& in, const LoadOptions& options) {
  static const std::set<std::string> kKnownFields = {"id", "language", "level", "text"};
  std::vector<Document> docs;
  std::set<std::string> warned;
  std::set<std::pair<std::string, std::string>> seen;
  std::string line;
  std::size_t line_no = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(where + "malformed JSON (" + e.what() + ")");
    }
    if (!record.is_object()) throw Error(where + "record is not a JSON object");

    auto field = [&](const char* name) -> std::string {
      auto it = record.find(name);
      if (it == record.end()) throw Error(where + "missing field '" + name + "'");
      if (!it->is_string()) throw Error(where + "field '" + name + "' is not a string");
      return it->get<std::string>();
    };

    Document doc{field("id"), LanguageCode("aaa"), Level::L1, field("text")};
    try {
      doc.language = options.registry.parse(field("language"));
      doc.level = parse_level(field("level"));
    } catch (const Error& e) {
      throw Error(where + e.what());
    }
    if (doc.id.empty()) throw Error(where + "empty id");
    if (blank(doc.text)) throw Error(where + "empty text");
    if (!seen.emplace(doc.language.str(), doc.id).second) {
      throw Error(where + "duplicate id '" + doc.id + "' for language " + doc.language.str());
    }
    for (const auto& [key, value] : record.items()) {
      if (!kKnownFields.contains(key) && warned.insert(key).second && options.warn) {
        options.warn(where + "ignoring unknown field '" + key + "'");
      }
    }
    docs.push_back(std::move(doc));
  }
  return Corpus(std::move(docs));
}

Corpus load_corpus(const std::filesystem::path& manifest_path, const LoadOptions& options) {
  std::ifstream in(manifest_path);
  if (!in) throw Error("cannot read manifest " + manifest_path.string());
  return parse_corpus(in, options);
}

void write_manifest(const Corpus& corpus, std::ostream& out) {
  for (const auto& doc : corpus.documents()) {
    nlohmann::ordered_json record;
    record["id"] = doc.id;
    record["language"] = doc.language.str();
    record["level"] = std::string(to_string(doc.level));
    record["text"] = doc.text;
    out << record.dump() << '\n';
  }
}

Corpus import_directory(const std::filesystem::path& root, const LoadOptions& options) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(root)) throw Error("not a directory: " + root.string());
  std::vector<Document> docs;
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& file : files) {
    const fs::path rel = fs::relative(file, root);
    std::vector<std::string> parts;
    for (const auto& p : rel) parts.push_back(p.string());
    if (parts.size() != 3) {
      if (options.warn) options.warn("skipping " + rel.string() + " (expected <lang>/<level>/<id>.txt)");
      continue;
    }
    std::ifstream in(file, std::ios::binary);
    std::ostringstream text;
    text << in.rdbuf();
    try {
      docs.push_back(Document{rel.stem().string(), options.registry.parse(parts[0]), parse_level(parts[1]), text.str()});
    } catch (const Error& e) {
      throw Error(rel.string() + ": " + e.what());
    }
  }
  return Corpus(std::move(docs));
}

// ---------------------------------------------------------------------------

std::map<Level, LevelStats> corpus_stats(const Corpus& corpus, const LanguageCode& language) {
  std::map<Level, LevelStats> stats;
  std::map<Level, std::unordered_set<std::string>> vocab;
  std::map<Level, std::size_t> sentences;
  for (Level level : kLevels) stats[level] = LevelStats{};

  bool any = false;
  for (const auto& doc : corpus.documents()) {
    if (doc.language != language) continue;
    any = true;
    auto& s = stats[doc.level];
    const auto words = text::tokenize_words(doc.text);
    ++s.document_count;
    s.word_tokens += words.size();
    sentences[doc.level] += text::tokenize_sentences(doc.text).size();
    vocab[doc.level].insert(words.begin(), words.end());
  }
  if (!any) throw Error("no documents for language " + language.str());

  for (auto& [level, s] : stats) {
    if (s.document_count == 0) continue;
    const auto n = static_cast<double>(s.document_count);
    s.mean_word_count = static_cast<double>(s.word_tokens) / n;
    s.mean_sentence_count = static_cast<double>(sentences[level]) / n;
    s.vocabulary = vocab[level].size();
  }
  return stats;
}

nlohmann::ordered_json stats_to_json(const LanguageCode& language, const std::map<Level, LevelStats>& stats) {
  nlohmann::ordered_json levels = nlohmann::ordered_json::object();
  std::size_t total = 0;
  for (const auto& [level, s] : stats) {
    total += s.document_count;
    levels[std::string(to_string(level))] = {
        {"document_count", s.document_count},
        {"mean_word_count", s.mean_word_count},
        {"mean_sentence_count", s.mean_sentence_count},
        {"vocabulary", s.vocabulary},
    };
  }
  nlohmann::ordered_json out;
  out["language"] = language.str();
  out["total"] = total;
  out["levels"] = levels;
  return out;
}

std::string render_stats_table(const std::vector<std::pair<LanguageCode, std::map<Level, LevelStats>>>& rows) {
  std::ostringstream os;
  os << std::left << std::setw(10) << "Language" << std::right << std::setw(7) << "Total" << std::setw(7) << "Level"
     << std::setw(10) << "Docs" << std::setw(12) << "MeanWords" << std::setw(12) << "MeanSents" << std::setw(12)
     << "Vocabulary" << '\n';
  os << std::fixed << std::setprecision(1);
  for (const auto& [lang, stats] : rows) {
    std::size_t total = 0;
    for (const auto& [level, s] : stats) total += s.document_count;
    bool first = true;
    for (const auto& [level, s] : stats) {
      os << std::left << std::setw(10) << (first ? lang.str() : "") << std::right << std::setw(7)
         << (first ? std::to_string(total) : "") << std::setw(7) << to_string(level) << std::setw(10)
         << s.document_count << std::setw(12) << s.mean_word_count << std::setw(12) << s.mean_sentence_count
         << std::setw(12) << s.vocabulary << '\n';
      first = false;
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------

FamilyTree::FamilyTree(std::map<LanguageCode, FamilyEntry> entries) : entries_(std::move(entries)) {
  for (const auto& [code, entry] : entries_) {
    if (!entries_.contains(entry.national)) {
      throw Error("family tree: national language " + entry.national.str() + " of " + code.str() + " is not listed");
    }
    if (entry.parent && !entries_.contains(*entry.parent)) {
      throw Error("family tree: parent " + entry.parent->str() + " of " + code.str() + " is not listed");
    }
    if (entry.parent && *entry.parent == code) throw Error("family tree: " + code.str() + " is its own parent");
  }
  for (const auto& [code, entry] : entries_) {
    std::set<LanguageCode> visited{code};
    auto cursor = entry.parent;
    while (cursor) {
      if (!visited.insert(*cursor).second) throw Error("family tree: parent cycle through " + code.str());
      cursor = entries_.at(*cursor).parent;
    }
  }
}

FamilyTree FamilyTree::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error("family tree: expected a JSON object");
  std::map<LanguageCode, FamilyEntry> entries;
  for (const auto& [key, value] : j.items()) {
    try {
      if (!value.is_object()) throw Error("entry is not an object");
      FamilyEntry entry{value.value("name", key), std::nullopt, LanguageCode(value.at("national").get<std::string>())};
      if (value.contains("parent") && !value.at("parent").is_null()) {
        entry.parent = LanguageCode(value.at("parent").get<std::string>());
      }
      entries.emplace(LanguageCode(key), std::move(entry));
    } catch (const nlohmann::json::exception& e) {
      throw Error("family tree entry '" + key + "': " + e.what());
    } catch (const Error& e) {
      throw Error("family tree entry '" + key + "': " + e.what());
    }
  }
  return FamilyTree(std::move(entries));
}

nlohmann::ordered_json FamilyTree::to_json() const {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [code, entry] : entries_) {
    j[code.str()] = {{"name", entry.name},
                     {"parent", entry.parent ? nlohmann::ordered_json(entry.parent->str()) : nlohmann::ordered_json(nullptr)},
                     {"national", entry.national.str()}};
  }
  return j;
}

LanguageRegistry FamilyTree::registry() const {
  std::vector<LanguageCode> codes;
  for (const auto& [code, entry] : entries_) codes.push_back(code);
  return LanguageRegistry(std::move(codes));
}

FamilyTree load_family_tree(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read family tree " + path.string());
  try {
    return FamilyTree::from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error("family tree " + path.string() + ": " + e.what());
  }
}

FamilyRelations family_lookup(const FamilyTree& tree, const LanguageCode& language) {
  auto it = tree.entries().find(language);
  if (it == tree.entries().end()) throw Error("language " + language.str() + " is not in the family tree");
  return FamilyRelations{it->second.parent, it->second.national};
}

}  // namespace ara
