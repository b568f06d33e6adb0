#include "support/synthetic.hpp"

#include <random>

namespace evoscore::testsupport {

namespace {

const std::array<std::string, kConceptCount> kMarkers = {
    "mutation",  // variation
    "heritable", // heritability
    "compete",   // competition
    "scarce",    // limited_resources
    "survive",   // differential_survival
    "drift",     // non_adaptive
    "needed",    // needs_goals
    "disuse",    // use_disuse
    "acclimate", // adapt_acclimation
};

const std::vector<std::string> kFillers = {
    "the",      "animal",   "population", "over",     "time",    "offspring",
    "generation", "environment", "trait", "change",   "because", "would",
    "some",     "species",  "individual", "group",    "live",    "grow",
    "different", "food",    "water",      "predator", "plant",   "color",
    "small",    "large",    "many",       "body",     "part",    "helped",
    "stronger", "weaker",   "became",     "evolved",  "organism", "feature",
    "process",  "result",   "cause",      "effect",   "members", "area",
    "climate",  "behavior", "form",       "type",     "kind",    "develop",
};

double unit_double(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

std::string make_text(std::mt19937_64& gen, const ConceptScores& truth) {
  const std::size_t length = 8 + gen() % 9;
  std::vector<std::string> words;
  words.reserve(length + kConceptCount);
  for (std::size_t i = 0; i < length; ++i) {
    words.push_back(kFillers[gen() % kFillers.size()]);
  }
  for (std::size_t c = 0; c < kConceptCount; ++c) {
    if (!truth.present[c]) continue;
    // two or three copies, so the marker outweighs chance filler overlap
    const std::size_t copies = 2 + gen() % 2;
    for (std::size_t rep = 0; rep < copies; ++rep) {
      const std::size_t pos = gen() % (words.size() + 1);
      words.insert(words.begin() + static_cast<std::ptrdiff_t>(pos), kMarkers[c]);
    }
  }
  std::string text;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) text.push_back(' ');
    text += words[i];
  }
  return text;
}

}  // namespace

const std::array<std::string, kConceptCount>& concept_markers() {
  return kMarkers;
}

TrainingCorpus make_synthetic_corpus(const SyntheticSpec& spec) {
  std::mt19937_64 gen(spec.seed);
  TrainingCorpus corpus;
  corpus.responses.reserve(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    ConceptScores truth;
    for (std::size_t c = 0; c < kConceptCount; ++c) {
      truth.present[c] = unit_double(gen) < spec.prevalence[c] ? 1 : 0;
    }
    // The first two rows pin both classes for every concept so tiny corpora
    // never degenerate to zero variance; they are exempt from noise.
    const bool pinned = i < 2;
    if (pinned) {
      for (std::size_t c = 0; c < kConceptCount; ++c) {
        truth.present[c] = i == 0 ? 1 : 0;
      }
    }

    LabeledResponse resp;
    resp.response_id = "resp-" + std::to_string(i + 1);
    resp.item_id = "item-" + std::to_string(1 + i % 4);
    resp.text = make_text(gen, truth);
    resp.labels = truth;
    if (!pinned && spec.noise > 0.0) {
      for (std::size_t c = 0; c < kConceptCount; ++c) {
        if (unit_double(gen) < spec.noise) {
          resp.labels.present[c] = resp.labels.present[c] ? 0 : 1;
        }
      }
    }
    corpus.responses.push_back(std::move(resp));
  }
  return corpus;
}

SyntheticBatch make_synthetic_batch(std::size_t n_students,
                                    const std::vector<std::string>& item_ids,
                                    std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  SyntheticBatch out;
  out.batch.item_ids = item_ids;
  for (std::size_t s = 0; s < n_students; ++s) {
    BatchRow row;
    row.student_id = "student-" + std::to_string(s + 1);
    std::vector<ConceptScores> expected_row;
    bool any = false;
    for (std::size_t i = 0; i < item_ids.size(); ++i) {
      // Roughly one cell in six is left blank, except that every row keeps
      // at least its last answer.
      const bool blank = (gen() % 6 == 0) && !(i + 1 == item_ids.size() && !any);
      ConceptScores truth;
      if (blank) {
        row.answers.emplace_back(std::nullopt);
      } else {
        for (std::size_t c = 0; c < kConceptCount; ++c) {
          truth.present[c] = unit_double(gen) < 0.35 ? 1 : 0;
        }
        row.answers.emplace_back(make_text(gen, truth));
        any = true;
      }
      expected_row.push_back(truth);
    }
    out.batch.rows.push_back(std::move(row));
    out.expected.push_back(std::move(expected_row));
  }
  return out;
}

}  // namespace evoscore::testsupport
