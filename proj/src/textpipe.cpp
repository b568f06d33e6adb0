#include "evoscore/textpipe.hpp"

#include <charconv>
#include <map>
#include <stdexcept>

#include "evoscore/porter.hpp"

namespace evoscore {

namespace {

bool is_alnum_ascii(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9');
}

char to_lower_ascii(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

std::vector<std::string_view> split_lines(std::string_view bytes) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < bytes.size()) {
    std::size_t nl = bytes.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.push_back(bytes.substr(start));
      break;
    }
    lines.push_back(bytes.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return fields;
}

template <typename T>
T parse_uint(std::string_view s, const char* what) {
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::runtime_error(std::string("dictionary: bad ") + what + " '" +
                             std::string(s) + "'");
  }
  return value;
}

std::string_view expect_kv(std::string_view field, std::string_view key) {
  if (field.size() < key.size() + 1 || field.substr(0, key.size()) != key ||
      field[key.size()] != '=') {
    throw std::runtime_error("dictionary: expected '" + std::string(key) +
                             "=' field, got '" + std::string(field) + "'");
  }
  return field.substr(key.size() + 1);
}

bool parse_flag(std::string_view v, std::string_view key) {
  if (v == "1") return true;
  if (v == "0") return false;
  throw std::runtime_error("dictionary: flag " + std::string(key) +
                           " must be 0 or 1");
}

}  // namespace

void FeatureConfig::validate() const {
  if (min_corpus_frequency < 1) {
    throw std::runtime_error("min_corpus_frequency must be >= 1");
  }
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : text) {
    if (is_alnum_ascii(c)) {
      current.push_back(to_lower_ascii(c));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::vector<std::string> extract_terms(std::span<const std::string> tokens,
                                       const FeatureConfig& config) {
  std::vector<std::string> terms(tokens.begin(), tokens.end());
  if (config.use_bigrams) {
    for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
      terms.push_back(tokens[i] + "_" + tokens[i + 1]);
    }
  }
  return terms;
}

std::vector<std::string> pipeline_terms(std::string_view text,
                                        const FeatureConfig& config) {
  std::vector<std::string> tokens = tokenize(text);
  if (config.remove_stopwords) tokens = remove_stopwords(std::move(tokens));
  if (config.use_stemming) {
    for (std::string& t : tokens) t = porter_stem(t);
  }
  return extract_terms(tokens, config);
}

FeatureDictionary FeatureDictionary::build(std::span<const std::string> texts,
                                           const FeatureConfig& config) {
  config.validate();
  if (texts.empty()) throw std::runtime_error("empty corpus");

  FeatureDictionary dict;
  dict.config_ = config;

  // Counts accumulated with multiplicity; first-appearance order retained.
  std::unordered_map<std::string, std::uint64_t> counts;
  std::vector<std::string> order;
  for (const std::string& text : texts) {
    for (std::string& term : pipeline_terms(text, config)) {
      auto [it, inserted] = counts.try_emplace(std::move(term), 0);
      if (inserted) order.push_back(it->first);
      ++it->second;
    }
  }
  for (const std::string& term : order) {
    const std::uint64_t freq = counts.at(term);
    if (freq < config.min_corpus_frequency) continue;
    dict.terms_.push_back(term);
    dict.frequencies_.push_back(freq);
  }
  if (dict.terms_.empty()) {
    throw std::runtime_error("no terms survive the frequency cutoff");
  }
  dict.rebuild_index();
  return dict;
}

void FeatureDictionary::rebuild_index() {
  index_.clear();
  index_.reserve(terms_.size());
  for (std::uint32_t i = 0; i < terms_.size(); ++i) {
    index_.emplace(terms_[i], i);
  }
}

std::int64_t FeatureDictionary::index_of(std::string_view term) const {
  auto it = index_.find(term);
  return it == index_.end() ? -1 : static_cast<std::int64_t>(it->second);
}

std::string FeatureDictionary::save() const {
  std::string out = "evoscore.dict\tv1";
  const auto flag = [](bool b) { return b ? "1" : "0"; };
  out += "\tbigrams=";
  out += flag(config_.use_bigrams);
  out += "\tstemming=";
  out += flag(config_.use_stemming);
  out += "\tstopwords=";
  out += flag(config_.remove_stopwords);
  out += "\tmin_corpus_frequency=" + std::to_string(config_.min_corpus_frequency);
  out += "\tremove_misclassified=";
  out += flag(config_.remove_misclassified);
  out += "\tterms=" + std::to_string(terms_.size());
  out.push_back('\n');
  for (std::uint32_t i = 0; i < terms_.size(); ++i) {
    out += terms_[i];
    out.push_back('\t');
    out += std::to_string(i);
    out.push_back('\t');
    out += std::to_string(frequencies_[i]);
    out.push_back('\n');
  }
  return out;
}

FeatureDictionary FeatureDictionary::load(std::string_view bytes) {
  const auto lines = split_lines(bytes);
  if (lines.empty()) throw std::runtime_error("dictionary: empty input");

  const auto header = split_tabs(lines[0]);
  if (header.size() != 8 || header[0] != "evoscore.dict" || header[1] != "v1") {
    throw std::runtime_error("dictionary: bad header line");
  }
  FeatureDictionary dict;
  dict.config_.use_bigrams = parse_flag(expect_kv(header[2], "bigrams"), "bigrams");
  dict.config_.use_stemming =
      parse_flag(expect_kv(header[3], "stemming"), "stemming");
  dict.config_.remove_stopwords =
      parse_flag(expect_kv(header[4], "stopwords"), "stopwords");
  dict.config_.min_corpus_frequency = parse_uint<std::uint32_t>(
      expect_kv(header[5], "min_corpus_frequency"), "min_corpus_frequency");
  dict.config_.remove_misclassified = parse_flag(
      expect_kv(header[6], "remove_misclassified"), "remove_misclassified");
  const auto n_terms = parse_uint<std::size_t>(expect_kv(header[7], "terms"),
                                               "term count");
  dict.config_.validate();

  for (std::size_t li = 1; li < lines.size(); ++li) {
    if (lines[li].empty() && li + 1 == lines.size()) break;
    const auto fields = split_tabs(lines[li]);
    if (fields.size() != 3) {
      throw std::runtime_error("dictionary: bad term line " + std::to_string(li + 1));
    }
    const auto index = parse_uint<std::uint32_t>(fields[1], "index");
    if (index != dict.terms_.size()) {
      throw std::runtime_error("dictionary: non-contiguous index at line " +
                               std::to_string(li + 1));
    }
    if (fields[0].empty()) {
      throw std::runtime_error("dictionary: empty term at line " +
                               std::to_string(li + 1));
    }
    dict.terms_.emplace_back(fields[0]);
    dict.frequencies_.push_back(parse_uint<std::uint64_t>(fields[2], "frequency"));
    if (dict.frequencies_.back() < dict.config_.min_corpus_frequency) {
      throw std::runtime_error("dictionary: frequency below cutoff at line " +
                               std::to_string(li + 1));
    }
  }
  if (dict.terms_.size() != n_terms) {
    throw std::runtime_error("dictionary: header says " + std::to_string(n_terms) +
                             " terms, found " + std::to_string(dict.terms_.size()));
  }
  if (dict.terms_.empty()) throw std::runtime_error("dictionary: no terms");
  dict.rebuild_index();
  return dict;
}

bool FeatureDictionary::operator==(const FeatureDictionary& other) const {
  return terms_ == other.terms_ && frequencies_ == other.frequencies_ &&
         config_ == other.config_;
}

FeatureVector vectorize(std::string_view text, const FeatureDictionary& dict) {
  std::map<std::uint32_t, std::uint32_t> counts;
  for (const std::string& term : pipeline_terms(text, dict.config())) {
    const std::int64_t index = dict.index_of(term);
    if (index >= 0) ++counts[static_cast<std::uint32_t>(index)];
  }
  FeatureVector v;
  v.dict_size = dict.size();
  v.entries.assign(counts.begin(), counts.end());
  return v;
}

}  // namespace evoscore
