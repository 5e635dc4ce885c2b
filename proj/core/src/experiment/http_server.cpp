#include "scenestat/experiment/http_server.h"

#include "httplib.h"
#include "json.hpp"

namespace scenestat::experiment {

using nlohmann::json;

namespace {

void send_error(httplib::Response& res, int status, std::string_view code,
                const std::string& message) {
  res.status = status;
  res.set_content(json{{"code", code}, {"message", message}}.dump(), "application/json");
}

// Maps store exceptions onto HTTP statuses.
template <typename Fn>
void guarded(httplib::Response& res, Fn&& fn) {
  try {
    fn();
  } catch (const NotFoundError& e) {
    send_error(res, 404, "not_found", e.what());
  } catch (const ConflictError& e) {
    send_error(res, 409, "conflict", e.what());
  } catch (const ValidationError& e) {
    send_error(res, 400, "invalid", e.what());
  } catch (const json::exception& e) {
    send_error(res, 400, "bad_request", std::string("malformed JSON body: ") + e.what());
  } catch (const std::exception& e) {
    send_error(res, 500, "internal", e.what());
  }
}

json trials_json(const Session& s, const StimulusSet& set) {
  json trials = json::array();
  for (std::size_t i = 0; i < s.order.size(); ++i) {
    trials.push_back({{"index", i}, {"pattern_hex", grid::to_hex(set.patterns[s.order[i]], set.side)}});
  }
  return trials;
}

}  // namespace

struct ExperimentServer::Impl {
  ExperimentStore& store;
  ServerOptions options;
  httplib::Server server;
  int port = -1;

  Impl(ExperimentStore& s, ServerOptions o) : store(s), options(std::move(o)) { routes(); }

  void routes() {
    server.Get("/api/healthz", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(R"({"ok":true})", "application/json");
    });

    server.Post("/api/sessions", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        const auto body = json::parse(req.body);
        if (!body.is_object() || !body.contains("set_id") || !body["set_id"].is_string()) {
          throw ValidationError("set_id (string) is required");
        }
        ParticipantMeta meta;
        if (body.contains("age") && !body["age"].is_null()) {
          if (!body["age"].is_number_integer()) throw ValidationError("age must be an integer");
          meta.age = body["age"].get<int>();
        }
        if (body.contains("gender") && !body["gender"].is_null()) {
          if (!body["gender"].is_string()) throw ValidationError("gender must be a string");
          meta.gender = body["gender"].get<std::string>();
        }
        const auto session = store.create_session(body["set_id"].get<std::string>(), meta);
        const auto set = store.find_set(session.set_id);
        res.status = 201;
        res.set_content(json{{"session_id", session.id},
                             {"k", set->side},
                             {"trials", trials_json(session, *set)}}
                            .dump(),
                        "application/json");
      });
    });

    server.Get(R"(/api/sessions/([0-9A-Za-z_-]+))",
               [this](const httplib::Request& req, httplib::Response& res) {
                 guarded(res, [&] {
                   const auto session = store.find_session(req.matches[1]);
                   if (!session) throw NotFoundError("unknown session");
                   const auto set = store.find_set(session->set_id);
                   json answered = json::array();
                   for (const auto& [index, r] : session->responses) answered.push_back(index);
                   res.set_content(json{{"session_id", session->id},
                                        {"set_id", session->set_id},
                                        {"k", set->side},
                                        {"trials", trials_json(*session, *set)},
                                        {"answered", answered},
                                        {"completed", session->completed()}}
                                       .dump(),
                                   "application/json");
                 });
               });

    server.Post(R"(/api/sessions/([0-9A-Za-z_-]+)/responses)",
                [this](const httplib::Request& req, httplib::Response& res) {
                  guarded(res, [&] {
                    const auto body = json::parse(req.body);
                    if (!body.is_object()) throw ValidationError("body must be a JSON object");
                    if (!body.contains("index") || !body["index"].is_number_integer() ||
                        body["index"].get<std::int64_t>() < 0) {
                      throw ValidationError("index must be a non-negative integer");
                    }
                    if (!body.contains("choice") || !body["choice"].is_string()) {
                      throw ValidationError("choice must be \"random\" or \"not_random\"");
                    }
                    if (!body.contains("rt_ms") || !body["rt_ms"].is_number()) {
                      throw ValidationError("rt_ms must be a number");
                    }
                    store.record_response(req.matches[1], body["index"].get<std::size_t>(),
                                          parse_choice(body["choice"].get<std::string>()),
                                          static_cast<std::int64_t>(body["rt_ms"].get<double>()));
                    res.set_content(R"({"ok":true})", "application/json");
                  });
                });

    server.Get(R"(/api/sets/([0-9A-Za-z_.-]+)/export)",
               [this](const httplib::Request& req, httplib::Response& res) {
                 guarded(res, [&] {
                   res.set_content(aggregates_to_csv(store.export_aggregates(req.matches[1])),
                                   "text/csv");
                 });
               });

    if (options.static_dir) server.set_mount_point("/", options.static_dir->string());
  }
};

ExperimentServer::ExperimentServer(ExperimentStore& store, ServerOptions options)
    : impl_(std::make_unique<Impl>(store, std::move(options))) {
  if (impl_->options.static_dir && !std::filesystem::is_directory(*impl_->options.static_dir)) {
    throw InputError("static directory " + impl_->options.static_dir->string() +
                     " does not exist");
  }
}

ExperimentServer::~ExperimentServer() { stop(); }

int ExperimentServer::bind() {
  const auto& o = impl_->options;
  if (o.port == 0) {
    impl_->port = impl_->server.bind_to_any_port(o.host);
  } else if (impl_->server.bind_to_port(o.host, o.port)) {
    impl_->port = o.port;
  }
  if (impl_->port < 0) {
    throw InputError("cannot listen on " + o.host + ":" + std::to_string(o.port));
  }
  return impl_->port;
}

void ExperimentServer::serve() {
  if (impl_->port < 0) throw InputError("serve() called before bind()");
  impl_->server.listen_after_bind();
}

void ExperimentServer::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

bool ExperimentServer::running() const { return impl_->server.is_running(); }

}  // namespace scenestat::experiment
