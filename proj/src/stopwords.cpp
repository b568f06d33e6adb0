#include <algorithm>
#include <array>

#include "evoscore/textpipe.hpp"

namespace evoscore {

namespace {

// The shipped stopword list: 175 common English function words, lowercase,
// alphabetical. Filtering is exact-match and runs before stemming.
constexpr std::array<std::string_view, 175> kStopwords = {
    "a",          "about",      "above",      "across",     "after",
    "again",      "against",    "all",        "almost",     "along",
    "already",    "also",       "although",   "always",     "am",
    "among",      "an",         "and",        "another",    "any",
    "anyone",     "anything",   "anywhere",   "are",        "around",
    "as",         "at",         "away",       "be",         "because",
    "been",       "before",     "being",      "below",      "besides",
    "between",    "beyond",     "both",       "but",        "by",
    "can",        "cannot",     "could",      "despite",    "did",
    "do",         "does",       "doing",      "down",       "during",
    "each",       "either",     "else",       "elsewhere",  "enough",
    "ever",       "every",      "everyone",   "everything", "everywhere",
    "few",        "for",        "from",       "further",    "had",
    "has",        "have",       "having",     "he",         "her",
    "here",       "hers",       "herself",    "him",        "himself",
    "his",        "how",        "however",    "i",          "if",
    "in",         "indeed",     "instead",    "into",       "is",
    "it",         "its",        "itself",     "just",       "least",
    "less",       "many",       "maybe",      "me",         "meanwhile",
    "might",      "more",       "most",       "much",       "must",
    "my",         "myself",     "neither",    "never",      "no",
    "nobody",     "none",       "nor",        "not",        "nothing",
    "now",        "nowhere",    "of",         "off",        "on",
    "once",       "only",       "onto",       "or",         "other",
    "ought",      "our",        "ours",       "ourselves",  "out",
    "over",       "own",        "same",       "shall",      "she",
    "should",     "so",         "some",       "such",       "than",
    "that",       "the",        "their",      "theirs",     "them",
    "themselves", "then",       "there",      "these",      "they",
    "this",       "those",      "through",    "to",         "too",
    "under",      "until",      "up",         "upon",       "very",
    "was",        "we",         "were",       "what",       "when",
    "where",      "which",      "while",      "who",        "whom",
    "whose",      "why",        "will",       "with",       "would",
    "you",        "your",       "yours",      "yourself",   "yourselves",
};

}  // namespace

std::span<const std::string_view> stopword_list() { return kStopwords; }

bool is_stopword(std::string_view token) {
  return std::binary_search(kStopwords.begin(), kStopwords.end(), token);
}

std::vector<std::string> remove_stopwords(std::vector<std::string> tokens) {
  std::erase_if(tokens, [](const std::string& t) { return is_stopword(t); });
  return tokens;
}

}  // namespace evoscore
