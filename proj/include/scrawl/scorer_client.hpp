#pragma once

#include <memory>
#include <string>

#include <json.hpp>

#include "scrawl/error.hpp"
#include "scrawl/process.hpp"

namespace scrawl {

// Client for a line-based scoring subprocess. One request in flight at a
// time: write {"id":N,"text":...}\n, read one {"id":N,"p":0.42}\n back.
class ScorerClient {
  public:
    ScorerClient(const std::string& command, int timeout_ms = 5000)
        : child_(std::make_unique<ChildProcess>(command)), timeout_ms_(timeout_ms) {}

    // Probability in [0,1] that the text is worth keeping. Throws Timeout on
    // a late reply, ProtocolError on garbage or mismatched id, ScorerFailure
    // when the child hung up.
    double score(const std::string& text) {
        const int64_t id = next_id_++;
        nlohmann::ordered_json req;
        req["id"] = id;
        req["text"] = text;
        try {
            child_->write_line(req.dump());
        } catch (const Error&) {
            throw Error(ErrorCode::ScorerFailure, "scorer stopped reading requests");
        }
        const auto line = child_->read_line(timeout_ms_);
        if (!line) {
            throw Error(ErrorCode::ScorerFailure,
                        child_->alive() ? std::string("scorer closed its output")
                                        : "scorer exited: " + child_->exit_description());
        }
        nlohmann::json resp;
        try {
            resp = nlohmann::json::parse(*line);
        } catch (const nlohmann::json::exception&) {
            throw Error(ErrorCode::ProtocolError, "scorer sent malformed json: " + *line);
        }
        if (!resp.is_object() || !resp.contains("id") || !resp.contains("p") ||
            !resp["id"].is_number_integer() || !resp["p"].is_number()) {
            throw Error(ErrorCode::ProtocolError, "scorer reply missing id/p: " + *line);
        }
        if (resp["id"].get<int64_t>() != id) {
            throw Error(ErrorCode::ProtocolError, "scorer answered wrong request id");
        }
        const double p = resp["p"].get<double>();
        if (!(p >= 0.0 && p <= 1.0)) {
            throw Error(ErrorCode::ProtocolError, "scorer probability out of [0,1]");
        }
        return p;
    }

    bool alive() { return child_->alive(); }

    // Closes stdin so a well-behaved scorer drains and exits.
    void shutdown() {
        child_->close_stdin();
        child_->wait_exit();
    }

  private:
    std::unique_ptr<ChildProcess> child_;
    int timeout_ms_;
    int64_t next_id_ = 1;
};

} // namespace scrawl
