#include <doctest.h>

#include <stdexcept>

#include <filesystem>
#include <fstream>

#include "evoscore/charts.hpp"
#include "evoscore/modelset.hpp"
#include "evoscore/report.hpp"
#include "evoscore/scoring.hpp"
#include "support/synthetic.hpp"

using namespace evoscore;
using namespace evoscore::testsupport;

namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() /
                       ("evoscore-test-" + tag + "-" +
                        std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// Small but trainable corpus shared by the service tests.
const TrainingCorpus& small_corpus() {
  static const TrainingCorpus corpus = [] {
    SyntheticSpec spec;
    spec.n = 90;
    spec.seed = 314;
    return make_synthetic_corpus(spec);
  }();
  return corpus;
}

const ModelSet& small_model_set() {
  static const ModelSet set = [] {
    SmoParams params;
    return build_model_set(small_corpus(), default_concept_configs(), params,
                           3, 2024);
  }();
  return set;
}

}  // namespace

TEST_SUITE("default configs") {
  TEST_CASE("per-concept feature settings") {
    const auto configs = default_concept_configs();
    const auto& get = [&](ConceptId c) -> const FeatureConfig& {
      return configs[concept_index(c)];
    };
    // unigram-only concepts
    CHECK_FALSE(get(ConceptId::variation).use_bigrams);
    CHECK_FALSE(get(ConceptId::competition).use_bigrams);
    CHECK_FALSE(get(ConceptId::limited_resources).use_bigrams);
    CHECK_FALSE(get(ConceptId::non_adaptive).use_bigrams);
    // bigram concepts
    for (ConceptId c : {ConceptId::heritability, ConceptId::differential_survival,
                        ConceptId::needs_goals, ConceptId::use_disuse,
                        ConceptId::adapt_acclimation}) {
      CHECK(get(c).use_bigrams);
    }
    // stemming everywhere
    for (ConceptId c : all_concepts()) CHECK(get(c).use_stemming);
    // needs_goals keeps its stopwords (had_to / so_that carriers)
    CHECK_FALSE(get(ConceptId::needs_goals).remove_stopwords);
    for (ConceptId c : all_concepts()) {
      if (c != ConceptId::needs_goals) CHECK(get(c).remove_stopwords);
    }
    // misclassified-removal set
    for (ConceptId c : {ConceptId::variation, ConceptId::heritability,
                        ConceptId::limited_resources, ConceptId::needs_goals,
                        ConceptId::adapt_acclimation}) {
      CHECK(get(c).remove_misclassified);
    }
    for (ConceptId c : {ConceptId::competition, ConceptId::differential_survival,
                        ConceptId::non_adaptive, ConceptId::use_disuse}) {
      CHECK_FALSE(get(c).remove_misclassified);
    }
  }
}

TEST_SUITE("model set") {
  TEST_CASE("synthetic corpus: all nine concepts pass") {
    const ModelSet& set = small_model_set();
    for (ConceptId c : all_concepts()) {
      CAPTURE(concept_name(c));
      CHECK(set.bundle(c).passed);
      CHECK(set.bundle(c).classifier.weights.size() ==
            set.bundle(c).dictionary.size());
    }
  }

  TEST_CASE("zero-variance concept aborts naming it") {
    TrainingCorpus corpus = small_corpus();
    for (auto& r : corpus.responses) r.labels[ConceptId::non_adaptive] = 0;
    CHECK_THROWS_WITH_AS(
        (void)build_model_set(corpus, default_concept_configs(), SmoParams{}, 3, 1),
        doctest::Contains("non_adaptive"), std::runtime_error);
  }

  TEST_CASE("determinism: same inputs and seed, identical serialized models") {
    SmoParams params;
    const ModelSet a = build_model_set(small_corpus(), default_concept_configs(),
                                       params, 3, 7);
    const ModelSet b = build_model_set(small_corpus(), default_concept_configs(),
                                       params, 3, 7);
    for (ConceptId c : all_concepts()) {
      CHECK(save_classifier(a.bundle(c).classifier) ==
            save_classifier(b.bundle(c).classifier));
      CHECK(a.bundle(c).dictionary.save() == b.bundle(c).dictionary.save());
    }
    CHECK(a.corpus_fingerprint == b.corpus_fingerprint);
  }
}

TEST_SUITE("registry") {
  TEST_CASE("publish, retention and round-trip predictions") {
    const fs::path dir = fresh_dir("registry");
    ModelRegistry registry(dir);
    CHECK_FALSE(registry.active_version().has_value());

    const int v1 = registry.publish(small_model_set());
    CHECK(v1 == 1);
    CHECK(registry.active_version() == 1);

    const int v2 = registry.publish(small_model_set());
    CHECK(v2 == 2);
    CHECK(registry.active_version() == 2);
    CHECK(registry.versions() == std::vector<int>{1, 2});

    // version 1 still loadable
    const ModelSet set1 = registry.load(1);
    CHECK(set1.version == 1);

    // probe batch: reloaded set reproduces predictions exactly
    const auto probe = make_synthetic_batch(20, {"itemA", "itemB"}, 555);
    const auto before = score_batch(probe.batch, small_model_set());
    const auto after = score_batch(probe.batch, registry.load_active());
    CHECK(before == after);

    CHECK_THROWS_AS((void)registry.load(99), std::runtime_error);
    fs::remove_all(dir);
  }
}

TEST_SUITE("score_batch") {
  TEST_CASE("empty-vector responses fall back to the bias sign") {
    const ModelSet& set = small_model_set();
    const auto batch =
        parse_response_batch("student_id,itemA\ns1,qqqq wwww zzzz\n");
    const auto rows = score_batch(batch, set);
    REQUIRE(rows.size() == 1);
    for (ConceptId c : all_concepts()) {
      const bool expected = set.bundle(c).classifier.bias > 0.0;
      CHECK((rows[0].scores[c] == 1) == expected);
    }
  }

  TEST_CASE("full matrix row count and ordering") {
    std::string file = "student_id,i1,i2\n";
    file += "s1,the mutation helped them survive,plain filler words\n";
    file += "s2,animals compete over scarce food,they needed to acclimate\n";
    file += "s3,genetic drift changed the group,a heritable trait was passed\n";
    const auto rows = score_batch(parse_response_batch(file), small_model_set());
    REQUIRE(rows.size() == 6);
    CHECK(rows[0].student_id == "s1");
    CHECK(rows[0].item_id == "i1");
    CHECK(rows[1].student_id == "s1");
    CHECK(rows[1].item_id == "i2");
    CHECK(rows[4].student_id == "s3");
    CHECK(rows[4].item_id == "i1");
  }

  TEST_CASE("marker-implanted batch matches the marker oracle exactly") {
    const auto probe = make_synthetic_batch(40, {"x", "y", "z"}, 777);
    const auto rows = score_batch(probe.batch, small_model_set());
    std::size_t cells = 0;
    std::size_t row_cursor = 0;
    for (std::size_t r = 0; r < probe.batch.rows.size(); ++r) {
      for (std::size_t i = 0; i < probe.batch.item_ids.size(); ++i) {
        if (!probe.batch.rows[r].answers[i]) continue;
        ++cells;
        const ResultRow& row = rows[row_cursor++];
        CHECK(row.student_id == probe.batch.rows[r].student_id);
        CHECK(row.item_id == probe.batch.item_ids[i]);
        CHECK(row.scores == probe.expected[r][i]);
      }
    }
    CHECK(rows.size() == cells);
  }

  TEST_CASE("redundant columns always agree") {
    const auto probe = make_synthetic_batch(25, {"only"}, 31);
    for (const auto& row : score_batch(probe.batch, small_model_set())) {
      CHECK(row.key_total == key_concept_total(row.scores));
      CHECK(row.naive_total == naive_total(row.scores));
      CHECK(row.model == classify_model(row.scores));
    }
  }
}

TEST_SUITE("result csv") {
  TEST_CASE("all-zero row ends with 0,0,no_model") {
    ResultRow row = make_result_row("s1", "i1", ConceptScores{});
    const std::string csv = write_result_csv(std::vector<ResultRow>{row});
    const auto lines = [&] {
      std::vector<std::string> out;
      std::size_t start = 0;
      while (start < csv.size()) {
        const auto nl = csv.find('\n', start);
        out.push_back(csv.substr(start, nl - start));
        start = nl + 1;
      }
      return out;
    }();
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] ==
          "student_id,item_id,variation,heritability,competition,"
          "limited_resources,differential_survival,non_adaptive,needs_goals,"
          "use_disuse,adapt_acclimation,key_total,naive_total,model_type");
    CHECK(lines[1] == "s1,i1,0,0,0,0,0,0,0,0,0,0,0,no_model");
  }

  TEST_CASE("round-trip reproduces rows exactly") {
    const auto probe = make_synthetic_batch(15, {"a", "b"}, 99);
    const auto rows = score_batch(probe.batch, small_model_set());
    CHECK(parse_result_csv(write_result_csv(rows)) == rows);
  }

  TEST_CASE("tampered totals are rejected") {
    std::string csv =
        "student_id,item_id,variation,heritability,competition,"
        "limited_resources,differential_survival,non_adaptive,needs_goals,"
        "use_disuse,adapt_acclimation,key_total,naive_total,model_type\n"
        "s1,i1,1,0,0,0,0,0,0,0,0,2,0,scientific\n";
    CHECK_THROWS_WITH_AS((void)parse_result_csv(csv),
                         doctest::Contains("disagree"), std::runtime_error);
  }
}

TEST_SUITE("report") {
  TEST_CASE("homogeneous batch") {
    std::vector<ResultRow> rows;
    for (int i = 0; i < 4; ++i) {
      ConceptScores s;
      s[ConceptId::variation] = 1;
      rows.push_back(make_result_row("s" + std::to_string(i), "i1", s));
    }
    const Report report = generate_report(rows);
    CHECK(report.overall.n_responses == 4);
    CHECK(report.overall.model_counts[static_cast<std::size_t>(
              ReasoningModel::scientific)] == 4);
    for (const auto& cell : report.overall.bubble) CHECK(cell.naive_total == 0);
  }

  TEST_CASE("fifty percent presence") {
    std::vector<ResultRow> rows;
    for (int i = 0; i < 4; ++i) {
      ConceptScores s;
      s[ConceptId::variation] = i < 2 ? 1 : 0;
      rows.push_back(make_result_row("s" + std::to_string(i), "i1", s));
    }
    const Report report = generate_report(rows);
    CHECK(report.overall.concept_presence_pct[concept_index(
              ConceptId::variation)] == doctest::Approx(50.0));
  }

  TEST_CASE("published example rows give two scientific and one mixed") {
    ConceptScores row1, row2, row3;
    for (ConceptId c : {ConceptId::variation, ConceptId::heritability,
                        ConceptId::competition, ConceptId::limited_resources,
                        ConceptId::differential_survival}) {
      row1[c] = 1;
    }
    for (ConceptId c : {ConceptId::variation, ConceptId::heritability,
                        ConceptId::limited_resources,
                        ConceptId::differential_survival}) {
      row2[c] = 1;
    }
    for (ConceptId c : {ConceptId::heritability, ConceptId::limited_resources,
                        ConceptId::differential_survival}) {
      row3[c] = 1;
    }
    row3[ConceptId::needs_goals] = 1;
    row3[ConceptId::adapt_acclimation] = 1;
    const std::vector<ResultRow> rows = {make_result_row("s1", "i", row1),
                                         make_result_row("s2", "i", row2),
                                         make_result_row("s3", "i", row3)};
    const Report report = generate_report(rows);
    CHECK(report.overall.model_counts[static_cast<std::size_t>(
              ReasoningModel::scientific)] == 2);
    CHECK(report.overall.model_counts[static_cast<std::size_t>(
              ReasoningModel::mixed)] == 1);
    CHECK(report.overall.model_counts[static_cast<std::size_t>(
              ReasoningModel::naive)] == 0);
  }

  TEST_CASE("conservation: model counts and bubble counts sum to n") {
    const auto probe = make_synthetic_batch(30, {"p", "q"}, 4040);
    const auto rows = score_batch(probe.batch, small_model_set());
    const Report report = generate_report(rows);
    std::size_t models = 0, bubbles = 0, per_item = 0;
    for (auto c : report.overall.model_counts) models += c;
    for (const auto& cell : report.overall.bubble) bubbles += cell.count;
    for (const auto& [item, section] : report.per_item) per_item += section.n_responses;
    CHECK(models == rows.size());
    CHECK(bubbles == rows.size());
    CHECK(per_item == rows.size());
  }

  TEST_CASE("empty input is an error") {
    CHECK_THROWS_AS((void)generate_report(std::vector<ResultRow>{}),
                    std::runtime_error);
  }
}

TEST_SUITE("charts") {
  TEST_CASE("bubble chart draws one circle per populated cell") {
    ReportSection section;
    section.n_responses = 1;
    section.bubble = {{5, 0, 1}};
    const std::string svg = render_bubble_chart(section);
    std::size_t circles = 0, pos = 0;
    while ((pos = svg.find("<circle", pos)) != std::string::npos) {
      ++circles;
      pos += 7;
    }
    CHECK(circles == 1);
  }

  TEST_CASE("charts are well-formed enough to embed") {
    const auto probe = make_synthetic_batch(12, {"m"}, 2);
    const auto rows = score_batch(probe.batch, small_model_set());
    const Report report = generate_report(rows);
    for (const std::string& svg :
         {render_bar_chart(report.overall), render_pie_chart(report.overall),
          render_bubble_chart(report.overall)}) {
      CHECK(svg.starts_with("<svg"));
      CHECK(svg.find("</svg>") != std::string::npos);
    }
  }

  TEST_CASE("single-model distribution renders a full circle") {
    ReportSection section;
    section.n_responses = 3;
    section.model_counts[0] = 3;
    const std::string svg = render_pie_chart(section);
    CHECK(svg.find("<circle") != std::string::npos);
  }
}
