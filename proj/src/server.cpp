#include "evoscore/server.hpp"

#include <charconv>

#include <httplib.h>
#include <json.hpp>

namespace evoscore {

namespace {

void reply_json(httplib::Response& res, int status, const nlohmann::json& body) {
  res.status = status;
  res.set_content(body.dump(2) + "\n", "application/json");
}

void reply_error(httplib::Response& res, int status, const std::string& message) {
  reply_json(res, status, nlohmann::json{{"error", message}});
}

std::optional<int> parse_int_field(const std::string& text) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

}  // namespace

struct ScoringServer::Impl {
  httplib::Server server;
};

ScoringServer::ScoringServer(ServerConfig config)
    : impl_(std::make_unique<Impl>()), config_(std::move(config)) {
  registry_ = std::make_unique<ModelRegistry>(config_.registry_dir);
  runs_ = std::make_unique<RunManager>(config_.data_dir, *registry_,
                                       config_.workers);
  builds_ = std::make_unique<BuildManager>(*registry_);

  auto& srv = impl_->server;

  const auto admin_ok = [this](const httplib::Request& req,
                               httplib::Response& res) {
    if (config_.admin_token.empty()) {
      reply_error(res, 503, "admin track disabled: no ADMIN_TOKEN configured");
      return false;
    }
    const std::string auth = req.get_header_value("Authorization");
    if (auth != "Bearer " + config_.admin_token) {
      reply_error(res, 401, "missing or invalid bearer token");
      return false;
    }
    return true;
  };

  srv.Post("/api/runs", [this](const httplib::Request& req,
                               httplib::Response& res) {
    if (!req.has_file("file")) {
      reply_error(res, 400, "multipart field 'file' with the batch CSV is required");
      return;
    }
    std::optional<int> version;
    if (req.has_file("model_version")) {
      version = parse_int_field(req.get_file_value("model_version").content);
      if (!version) {
        reply_error(res, 400, "model_version must be an integer");
        return;
      }
    }
    try {
      const std::string run_id =
          runs_->submit(req.get_file_value("file").content, version);
      reply_json(res, 202, nlohmann::json{{"run_id", run_id}});
    } catch (const std::exception& e) {
      reply_error(res, 400, e.what());
    }
  });

  srv.Get("/api/runs/:id", [this](const httplib::Request& req,
                                  httplib::Response& res) {
    const auto record = runs_->info(req.path_params.at("id"));
    if (!record) {
      reply_error(res, 404, "unknown run");
      return;
    }
    nlohmann::json body{{"run_id", record->run_id},
                        {"status", std::string(run_status_name(record->status))},
                        {"model_version", record->model_version}};
    if (!record->error.empty()) body["error"] = record->error;
    reply_json(res, 200, body);
  });

  const auto serve_artifact = [this](const std::string& run_id,
                                     const std::string& name,
                                     const char* content_type,
                                     httplib::Response& res) {
    if (!runs_->info(run_id)) {
      reply_error(res, 404, "unknown run");
      return;
    }
    const auto bytes = runs_->artifact(run_id, name);
    if (!bytes) {
      reply_error(res, 404, "not available until the run is done");
      return;
    }
    res.status = 200;
    res.set_content(*bytes, content_type);
  };

  srv.Get("/api/runs/:id/results.csv",
          [=](const httplib::Request& req, httplib::Response& res) {
            serve_artifact(req.path_params.at("id"), "results.csv",
                           "text/csv", res);
          });
  srv.Get("/api/runs/:id/report.json",
          [=](const httplib::Request& req, httplib::Response& res) {
            serve_artifact(req.path_params.at("id"), "report.json",
                           "application/json", res);
          });
  srv.Get("/api/runs/:id/charts/:chart",
          [=, this](const httplib::Request& req, httplib::Response& res) {
            const std::string chart = req.path_params.at("chart");
            if (chart != "bar.svg" && chart != "pie.svg" && chart != "bubble.svg") {
              reply_error(res, 404, "unknown chart");
              return;
            }
            serve_artifact(req.path_params.at("id"), "charts/" + chart,
                           "image/svg+xml", res);
          });

  srv.Get("/api/models", [this](const httplib::Request&, httplib::Response& res) {
    nlohmann::json versions = nlohmann::json::array();
    for (int v : registry_->versions()) {
      const ModelSet set = registry_->load(v);
      nlohmann::json concepts = nlohmann::json::object();
      for (ConceptId c : all_concepts()) {
        concepts[std::string(concept_name(c))] = nlohmann::json{
            {"passed", set.bundle(c).passed},
            {"pooled_kappa", set.bundle(c).cv_after_removal
                                 ? set.bundle(c).cv_after_removal->pooled.kappa
                                 : set.bundle(c).cv.pooled.kappa}};
      }
      versions.push_back(nlohmann::json{{"version", v},
                                        {"created_at", set.created_at},
                                        {"concepts", std::move(concepts)}});
    }
    const auto active = registry_->active_version();
    reply_json(res, 200,
               nlohmann::json{
                   {"active", active ? nlohmann::json(*active) : nlohmann::json(nullptr)},
                   {"versions", std::move(versions)}});
  });

  srv.Post("/api/admin/training-sets",
           [this, admin_ok](const httplib::Request& req, httplib::Response& res) {
             if (!admin_ok(req, res)) return;
             if (!req.has_file("file")) {
               reply_error(res, 400,
                           "multipart field 'file' with the training CSV is required");
               return;
             }
             BuildOptions options = config_.build_defaults;
             try {
               if (req.has_file("folds")) {
                 const auto folds =
                     parse_int_field(req.get_file_value("folds").content);
                 if (!folds) throw std::runtime_error("folds must be an integer");
                 options.folds = *folds;
               }
               if (req.has_file("seed")) {
                 options.seed = std::stoull(req.get_file_value("seed").content);
               }
               if (req.has_file("c")) {
                 options.params.c = std::stod(req.get_file_value("c").content);
               }
               if (req.has_file("tolerance")) {
                 options.params.kkt_tolerance =
                     std::stod(req.get_file_value("tolerance").content);
               }
               if (req.has_file("config")) {
                 const auto overrides =
                     nlohmann::json::parse(req.get_file_value("config").content);
                 for (const auto& [name, body] : overrides.items()) {
                   const auto concept_id = concept_from_name(name);
                   if (!concept_id) {
                     throw std::runtime_error("config: unknown concept '" + name + "'");
                   }
                   options.configs[concept_index(*concept_id)] = config_from_json(body);
                 }
               }
               TrainingCorpus corpus =
                   parse_training_corpus(req.get_file_value("file").content);
               const std::string build_id =
                   builds_->submit(std::move(corpus), options);
               reply_json(res, 202, nlohmann::json{{"build_id", build_id}});
             } catch (const std::exception& e) {
               reply_error(res, 400, e.what());
             }
           });

  srv.Get("/api/admin/builds/:id",
          [this, admin_ok](const httplib::Request& req, httplib::Response& res) {
            if (!admin_ok(req, res)) return;
            const auto record = builds_->info(req.path_params.at("id"));
            if (!record) {
              reply_error(res, 404, "unknown build");
              return;
            }
            nlohmann::json body{
                {"build_id", record->build_id},
                {"status", std::string(build_status_name(record->status))}};
            if (record->version) body["version"] = *record->version;
            if (!record->error.empty()) body["error"] = record->error;
            if (record->status == BuildStatus::done) {
              body["validation"] = record->validation;
            }
            reply_json(res, 200, body);
          });
}

ScoringServer::~ScoringServer() { stop(); }

int ScoringServer::start(const std::string& host) {
  const int port = impl_->server.bind_to_any_port(host);
  if (port <= 0) throw std::runtime_error("failed to bind " + host);
  serve_thread_ = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return port;
}

bool ScoringServer::listen(const std::string& host, int port) {
  return impl_->server.listen(host, port);
}

void ScoringServer::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
  if (serve_thread_.joinable()) serve_thread_.join();
}

}  // namespace evoscore
