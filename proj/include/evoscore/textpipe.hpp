#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace evoscore {

// Per-concept feature-extraction settings. Unigrams are always extracted;
// bigrams are additive. remove_misclassified is consumed by the training
// pipeline, carried here so one record captures a full concept setup.
struct FeatureConfig {
  bool use_bigrams = false;
  bool use_stemming = true;
  bool remove_stopwords = true;
  std::uint32_t min_corpus_frequency = 2;
  bool remove_misclassified = false;

  bool operator==(const FeatureConfig&) const = default;
  void validate() const;  // throws on min_corpus_frequency < 1
};

// Lowercase maximal runs of ASCII alphanumerics, in reading order. All
// punctuation, whitespace and non-ASCII bytes separate tokens.
std::vector<std::string> tokenize(std::string_view text);

// The shipped list, lowercase and sorted; see stopwords.cpp for the words.
std::span<const std::string_view> stopword_list();
bool is_stopword(std::string_view token);

std::vector<std::string> remove_stopwords(std::vector<std::string> tokens);

// Unigrams plus, when enabled, adjacent-pair bigrams joined with '_'.
// Input tokens must already be stopword-filtered/stemmed per config.
std::vector<std::string> extract_terms(std::span<const std::string> tokens,
                                       const FeatureConfig& config);

// Full pipeline: tokenize -> stopword filter -> stem -> n-grams.
std::vector<std::string> pipeline_terms(std::string_view text,
                                        const FeatureConfig& config);

// Sparse term-frequency vector over a dictionary's index space. Entries are
// sorted by index and hold strictly positive counts.
struct FeatureVector {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> entries;
  std::size_t dict_size = 0;

  bool operator==(const FeatureVector&) const = default;
};

// The term-to-index vocabulary built over a corpus under one FeatureConfig.
// Immutable after construction.
class FeatureDictionary {
 public:
  // An empty placeholder; real dictionaries come from build() or load().
  FeatureDictionary() = default;

  static FeatureDictionary build(std::span<const std::string> texts,
                                 const FeatureConfig& config);

  std::size_t size() const { return terms_.size(); }
  const FeatureConfig& config() const { return config_; }
  const std::string& term_at(std::uint32_t index) const {
    return terms_[index];
  }
  std::uint64_t frequency_at(std::uint32_t index) const {
    return frequencies_[index];
  }
  // Index of a term, or -1 when absent.
  std::int64_t index_of(std::string_view term) const;
  bool contains(std::string_view term) const { return index_of(term) >= 0; }

  // Line-oriented text form: a config header line followed by one
  // term<TAB>index<TAB>frequency line per term. Round-trips bit-exactly.
  std::string save() const;
  static FeatureDictionary load(std::string_view bytes);

  bool operator==(const FeatureDictionary& other) const;

 private:
  struct TransparentHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept {
      return std::hash<std::string_view>{}(s);
    }
  };

  std::vector<std::string> terms_;
  std::vector<std::uint64_t> frequencies_;
  std::unordered_map<std::string, std::uint32_t, TransparentHash,
                     std::equal_to<>>
      index_;
  FeatureConfig config_;

  void rebuild_index();
};

// Term counts of the dictionary terms present in the text; out-of-dictionary
// terms are dropped. Raw counts, no normalization.
FeatureVector vectorize(std::string_view text, const FeatureDictionary& dict);

}  // namespace evoscore
