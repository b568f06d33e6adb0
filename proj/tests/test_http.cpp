#include <doctest.h>

#include <httplib.h>

#include <filesystem>

#include "evoscore/server.hpp"
#include "support/synthetic.hpp"

using namespace evoscore;
using namespace evoscore::testsupport;

namespace fs = std::filesystem;

namespace {

struct ServerFixture {
  fs::path root;
  std::unique_ptr<ScoringServer> server;
  int port = 0;

  ServerFixture() {
    root = fs::temp_directory_path() /
           ("evoscore-http-" + std::to_string(::getpid()));
    fs::remove_all(root);
    fs::create_directories(root);

    // seed the registry with one trained model set
    SyntheticSpec spec;
    spec.n = 90;
    spec.seed = 314;
    ModelRegistry registry(root / "registry");
    registry.publish(build_model_set(make_synthetic_corpus(spec),
                                     default_concept_configs(), SmoParams{}, 3,
                                     2024));

    ServerConfig config;
    config.registry_dir = root / "registry";
    config.data_dir = root / "data";
    config.admin_token = "sesame";
    config.workers = 2;
    config.build_defaults.folds = 3;
    server = std::make_unique<ScoringServer>(std::move(config));
    port = server->start("127.0.0.1");
  }

  ~ServerFixture() {
    server->stop();
    fs::remove_all(root);
  }

  httplib::Client client() const {
    httplib::Client c("127.0.0.1", port);
    c.set_read_timeout(60, 0);
    return c;
  }
};

std::string batch_csv() {
  return "student_id,itemA,itemB\n"
         "s1,the mutation helped them survive,animals compete here\n"
         "s2,,they needed food badly\n";
}

std::string wait_done(ServerFixture& fx, const std::string& run_id) {
  auto client = fx.client();
  for (int i = 0; i < 600; ++i) {
    const auto res = client.Get(("/api/runs/" + run_id).c_str());
    REQUIRE(res);
    const auto body = nlohmann::json::parse(res->body);
    const std::string status = body.at("status").get<std::string>();
    if (status == "done" || status == "failed") return status;
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  return "timeout";
}

}  // namespace

TEST_SUITE("http api") {
  TEST_CASE("happy path: upload, poll, fetch results, report and charts") {
    ServerFixture fx;
    auto client = fx.client();

    httplib::MultipartFormDataItems items = {
        {"file", batch_csv(), "batch.csv", "text/csv"}};
    const auto post = client.Post("/api/runs", items);
    REQUIRE(post);
    CHECK(post->status == 202);
    const std::string run_id =
        nlohmann::json::parse(post->body).at("run_id").get<std::string>();

    CHECK(wait_done(fx, run_id) == "done");

    const auto results = client.Get(("/api/runs/" + run_id + "/results.csv").c_str());
    REQUIRE(results);
    CHECK(results->status == 200);
    CHECK(results->body.starts_with("student_id,item_id,variation"));
    // three non-empty cells -> three result rows
    CHECK(std::count(results->body.begin(), results->body.end(), '\n') == 4);

    const auto report = client.Get(("/api/runs/" + run_id + "/report.json").c_str());
    REQUIRE(report);
    CHECK(report->status == 200);
    CHECK(nlohmann::json::parse(report->body).at("n_responses") == 3);

    for (const char* chart : {"bar", "pie", "bubble"}) {
      const auto svg = client.Get(
          ("/api/runs/" + run_id + "/charts/" + chart + ".svg").c_str());
      REQUIRE(svg);
      CHECK(svg->status == 200);
      CHECK(svg->get_header_value("Content-Type") == "image/svg+xml");
    }
  }

  TEST_CASE("artifacts 404 while the run is still pending or unknown") {
    ServerFixture fx;
    auto client = fx.client();
    const auto missing = client.Get("/api/runs/nope");
    REQUIRE(missing);
    CHECK(missing->status == 404);
    const auto missing_csv = client.Get("/api/runs/nope/results.csv");
    REQUIRE(missing_csv);
    CHECK(missing_csv->status == 404);
  }

  TEST_CASE("nine-item batch is rejected with the parser message") {
    ServerFixture fx;
    auto client = fx.client();
    std::string header = "student_id";
    for (int i = 0; i < 9; ++i) header += ",item" + std::to_string(i);
    httplib::MultipartFormDataItems items = {
        {"file", header + "\ns1,a,a,a,a,a,a,a,a,a\n", "batch.csv", "text/csv"}};
    const auto post = client.Post("/api/runs", items);
    REQUIRE(post);
    CHECK(post->status == 400);
    CHECK(nlohmann::json::parse(post->body).at("error").get<std::string>().find(
              "item count exceeds 8") != std::string::npos);
  }

  TEST_CASE("model listing shows versions and pass flags") {
    ServerFixture fx;
    auto client = fx.client();
    const auto res = client.Get("/api/models");
    REQUIRE(res);
    const auto body = nlohmann::json::parse(res->body);
    CHECK(body.at("active") == 1);
    REQUIRE(body.at("versions").size() == 1);
    const auto& concepts = body.at("versions")[0].at("concepts");
    for (ConceptId c : all_concepts()) {
      CHECK(concepts.at(std::string(concept_name(c))).contains("passed"));
    }
  }

  TEST_CASE("admin track: auth gate and background build") {
    ServerFixture fx;
    auto client = fx.client();

    SyntheticSpec spec;
    spec.n = 60;
    spec.seed = 9;
    const std::string training =
        write_training_corpus_csv(make_synthetic_corpus(spec));
    httplib::MultipartFormDataItems items = {
        {"file", training, "corpus.csv", "text/csv"},
        {"folds", "3", "", ""},
        {"seed", "5", "", ""}};

    // no token
    const auto denied = client.Post("/api/admin/training-sets", items);
    REQUIRE(denied);
    CHECK(denied->status == 401);

    // wrong token
    httplib::Headers bad{{"Authorization", "Bearer wrong"}};
    const auto still_denied = client.Post("/api/admin/training-sets", bad, items);
    REQUIRE(still_denied);
    CHECK(still_denied->status == 401);

    // right token
    httplib::Headers good{{"Authorization", "Bearer sesame"}};
    const auto accepted = client.Post("/api/admin/training-sets", good, items);
    REQUIRE(accepted);
    CHECK(accepted->status == 202);
    const std::string build_id =
        nlohmann::json::parse(accepted->body).at("build_id").get<std::string>();

    std::string status;
    for (int i = 0; i < 3000; ++i) {
      const auto res =
          client.Get(("/api/admin/builds/" + build_id).c_str(), good);
      REQUIRE(res);
      status = nlohmann::json::parse(res->body).at("status").get<std::string>();
      if (status == "done" || status == "failed") break;
      std::this_thread::sleep_for(std::chrono::milliseconds(20));
    }
    CHECK(status == "done");

    // the new version is visible and active
    const auto models = client.Get("/api/models");
    const auto body = nlohmann::json::parse(models->body);
    CHECK(body.at("active") == 2);
    CHECK(body.at("versions").size() == 2);

    // build endpoint also requires auth
    const auto check_denied = client.Get(("/api/admin/builds/" + build_id).c_str());
    REQUIRE(check_denied);
    CHECK(check_denied->status == 401);
  }

  TEST_CASE("failed run reports its error") {
    ServerFixture fx;
    auto client = fx.client();
    // unknown model_version is rejected synchronously
    httplib::MultipartFormDataItems items = {
        {"file", batch_csv(), "batch.csv", "text/csv"},
        {"model_version", "42", "", ""}};
    const auto post = client.Post("/api/runs", items);
    REQUIRE(post);
    CHECK(post->status == 400);
  }
}

TEST_SUITE("run manager") {
  TEST_CASE("status transitions end in done and artifacts appear") {
    const fs::path root = fs::temp_directory_path() /
                          ("evoscore-runmanager-" + std::to_string(::getpid()));
    fs::remove_all(root);
    {
      SyntheticSpec spec;
      spec.n = 90;
      spec.seed = 314;
      ModelRegistry registry(root / "registry");
      registry.publish(build_model_set(make_synthetic_corpus(spec),
                                       default_concept_configs(), SmoParams{},
                                       3, 2024));
      RunManager manager(root / "data", registry, 2);
      const std::string id = manager.submit(batch_csv(), std::nullopt);
      manager.wait_all();
      const auto record = manager.info(id);
      REQUIRE(record);
      CHECK(record->status == RunStatus::done);
      CHECK(manager.artifact(id, "results.csv").has_value());
      CHECK(manager.artifact(id, "report.json").has_value());
      CHECK(manager.artifact(id, "charts/bubble.svg").has_value());
      CHECK_FALSE(manager.artifact(id, "../../etc/passwd").has_value());
      CHECK_FALSE(manager.artifact("ghost", "results.csv").has_value());
    }
    fs::remove_all(root);
  }

  TEST_CASE("submit fails when no model set is active") {
    const fs::path root = fs::temp_directory_path() /
                          ("evoscore-emptyreg-" + std::to_string(::getpid()));
    fs::remove_all(root);
    {
      ModelRegistry registry(root / "registry");
      RunManager manager(root / "data", registry, 1);
      CHECK_THROWS_WITH_AS((void)manager.submit(batch_csv(), std::nullopt),
                           doctest::Contains("no active model set"),
                           std::runtime_error);
    }
    fs::remove_all(root);
  }
}
