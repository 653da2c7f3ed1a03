#include "causescope/adapter.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstring>

#include "causescope/errors.hpp"
#include "httplib.h"
#include "json.hpp"

namespace causescope {

std::string encode_adapter_request(const std::string& problem_id,
                                   const std::map<FeatureId, std::string>& interventions,
                                   std::uint64_t run_seed) {
    nlohmann::json j;
    j["problem_id"] = problem_id;
    j["interventions"] = interventions;
    j["run_seed"] = run_seed;
    return j.dump();
}

AdapterResponse decode_adapter_response(const std::string& line) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw MalformedResponse(std::string("response is not JSON: ") + e.what());
    }
    AdapterResponse r;
    try {
        std::string outcome = j.at("outcome").get<std::string>();
        if (outcome == "pass") {
            r.outcome = Outcome::pass();
        } else if (outcome == "fail") {
            r.outcome = Outcome::fail();
        } else if (outcome == "error") {
            r.outcome = Outcome::exec_error(j.value("error_detail", std::string{"unspecified"}));
        } else {
            throw MalformedResponse("unknown outcome value: " + outcome);
        }
        r.observed = j.at("observed").get<std::map<FeatureId, std::string>>();
        r.tokens = j.at("tokens").get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
        throw MalformedResponse(std::string("response shape: ") + e.what());
    }
    return r;
}

SubprocessAdapter::SubprocessAdapter(std::vector<std::string> command, int timeout_ms,
                                     bool declared_deterministic, unsigned repeats)
    : command_(std::move(command)),
      timeout_ms_(timeout_ms),
      deterministic_(declared_deterministic),
      repeats_(repeats == 0 ? 1 : repeats) {
    if (command_.empty()) throw InvariantViolation("adapter command must be non-empty");
    spawn();
}

SubprocessAdapter::~SubprocessAdapter() { shutdown(); }

void SubprocessAdapter::spawn() {
    int to_pipe[2], from_pipe[2];
    if (pipe(to_pipe) != 0 || pipe(from_pipe) != 0)
        throw IoError("pipe failed: " + std::string(std::strerror(errno)));
    pid_t pid = fork();
    if (pid < 0) throw IoError("fork failed: " + std::string(std::strerror(errno)));
    if (pid == 0) {
        dup2(to_pipe[0], STDIN_FILENO);
        dup2(from_pipe[1], STDOUT_FILENO);
        close(to_pipe[0]);
        close(to_pipe[1]);
        close(from_pipe[0]);
        close(from_pipe[1]);
        std::vector<char*> argv;
        for (auto& a : command_) argv.push_back(a.data());
        argv.push_back(nullptr);
        execvp(argv[0], argv.data());
        _exit(127);
    }
    close(to_pipe[0]);
    close(from_pipe[1]);
    child_pid_ = pid;
    to_child_ = to_pipe[1];
    from_child_ = from_pipe[0];
}

void SubprocessAdapter::shutdown() {
    if (to_child_ >= 0) close(to_child_);
    if (from_child_ >= 0) close(from_child_);
    to_child_ = from_child_ = -1;
    if (child_pid_ > 0) {
        kill(child_pid_, SIGTERM);
        int status = 0;
        waitpid(child_pid_, &status, 0);
        child_pid_ = -1;
    }
}

std::string SubprocessAdapter::round_trip(const std::string& request_line) {
    std::string payload = request_line + "\n";
    const char* data = payload.data();
    std::size_t left = payload.size();
    while (left > 0) {
        ssize_t n = write(to_child_, data, left);
        if (n <= 0) throw IoError("adapter stdin write failed");
        data += n;
        left -= static_cast<std::size_t>(n);
    }
    for (;;) {
        auto eol = read_buffer_.find('\n');
        if (eol != std::string::npos) {
            std::string line = read_buffer_.substr(0, eol);
            read_buffer_.erase(0, eol + 1);
            return line;
        }
        struct pollfd pfd{from_child_, POLLIN, 0};
        int ready = poll(&pfd, 1, timeout_ms_);
        if (ready == 0) throw AdapterTimeout("adapter did not answer within " +
                                             std::to_string(timeout_ms_) + "ms");
        if (ready < 0) throw IoError("poll failed: " + std::string(std::strerror(errno)));
        char buf[4096];
        ssize_t n = read(from_child_, buf, sizeof buf);
        if (n <= 0) throw MalformedResponse("adapter closed its stdout");
        read_buffer_.append(buf, static_cast<std::size_t>(n));
    }
}

ExecutionRecord SubprocessAdapter::execute(const Problem& problem,
                                           const std::map<FeatureId, std::string>& intervention,
                                           std::uint64_t run_seed) {
    std::lock_guard<std::mutex> lock(mutex_);
    ExecutionRecord rec;
    rec.problem_id = problem.id;
    rec.intervention = intervention;

    unsigned pass_votes = 0, fail_votes = 0;
    for (unsigned rep = 0; rep < repeats_; ++rep) {
        try {
            std::string line =
                round_trip(encode_adapter_request(problem.id, intervention, run_seed + rep));
            AdapterResponse resp = decode_adapter_response(line);
            if (resp.outcome.is_error()) {
                rec.outcome = resp.outcome;
                return rec;
            }
            rec.observed = resp.observed;
            rec.tokens += resp.tokens;
            (resp.outcome.is_pass() ? pass_votes : fail_votes)++;
        } catch (const AdapterTimeout& e) {
            rec.outcome = Outcome::exec_error(e.what());
            return rec;
        } catch (const MalformedResponse& e) {
            rec.outcome = Outcome::exec_error(e.what());
            return rec;
        } catch (const IoError& e) {
            rec.outcome = Outcome::exec_error(e.what());
            return rec;
        }
    }
    rec.outcome = pass_votes >= fail_votes ? Outcome::pass() : Outcome::fail();
    return rec;
}

HttpAdapter::HttpAdapter(std::string host, int port, std::string path, int timeout_ms,
                         bool declared_deterministic, unsigned repeats)
    : host_(std::move(host)),
      port_(port),
      path_(std::move(path)),
      timeout_ms_(timeout_ms),
      deterministic_(declared_deterministic),
      repeats_(repeats == 0 ? 1 : repeats) {}

ExecutionRecord HttpAdapter::execute(const Problem& problem,
                                     const std::map<FeatureId, std::string>& intervention,
                                     std::uint64_t run_seed) {
    ExecutionRecord rec;
    rec.problem_id = problem.id;
    rec.intervention = intervention;

    httplib::Client client(host_, port_);
    client.set_connection_timeout(0, timeout_ms_ * 1000);
    client.set_read_timeout(timeout_ms_ / 1000, (timeout_ms_ % 1000) * 1000);

    unsigned pass_votes = 0, fail_votes = 0;
    for (unsigned rep = 0; rep < repeats_; ++rep) {
        auto res = client.Post(path_, encode_adapter_request(problem.id, intervention,
                                                             run_seed + rep),
                               "application/json");
        if (!res) {
            rec.outcome = Outcome::exec_error("adapter endpoint unreachable");
            return rec;
        }
        try {
            AdapterResponse resp = decode_adapter_response(res->body);
            if (resp.outcome.is_error()) {
                rec.outcome = resp.outcome;
                return rec;
            }
            rec.observed = resp.observed;
            rec.tokens += resp.tokens;
            (resp.outcome.is_pass() ? pass_votes : fail_votes)++;
        } catch (const MalformedResponse& e) {
            rec.outcome = Outcome::exec_error(e.what());
            return rec;
        }
    }
    rec.outcome = pass_votes >= fail_votes ? Outcome::pass() : Outcome::fail();
    return rec;
}

SimilarityFn remote_embedding_similarity(const std::string& host, int port,
                                         const std::string& path, int timeout_ms) {
    return [host, port, path, timeout_ms](const std::string& a, const std::string& b) -> double {
        httplib::Client client(host, port);
        client.set_read_timeout(timeout_ms / 1000, (timeout_ms % 1000) * 1000);
        nlohmann::json req{{"a", a}, {"b", b}};
        auto res = client.Post(path, req.dump(), "application/json");
        if (!res) throw RemoteUnavailable("similarity endpoint unreachable");
        try {
            return nlohmann::json::parse(res->body).at("score").get<double>();
        } catch (const nlohmann::json::exception& e) {
            throw MalformedResponse(std::string("similarity response: ") + e.what());
        }
    };
}

namespace {

class HttpRemoteEngine : public InterventionEngine {
public:
    HttpRemoteEngine(std::string host, int port, std::string path, int timeout_ms)
        : host_(std::move(host)), port_(port), path_(std::move(path)), timeout_ms_(timeout_ms) {}

    std::string candidate(const Problem& problem, const FeatureId& feature,
                          const std::string& original, std::uint64_t seed,
                          unsigned attempt) override {
        httplib::Client client(host_, port_);
        client.set_read_timeout(timeout_ms_ / 1000, (timeout_ms_ % 1000) * 1000);
        nlohmann::json req{{"feature", feature},
                           {"original", original},
                           {"problem", problem.id},
                           {"seed", seed + attempt}};
        auto res = client.Post(path_, req.dump(), "application/json");
        if (!res) throw RemoteUnavailable("intervention endpoint unreachable");
        try {
            return nlohmann::json::parse(res->body).at("replacement").get<std::string>();
        } catch (const nlohmann::json::exception& e) {
            throw MalformedResponse(std::string("intervention response: ") + e.what());
        }
    }

private:
    std::string host_;
    int port_;
    std::string path_;
    int timeout_ms_;
};

}  // namespace

std::unique_ptr<InterventionEngine> make_remote_engine(const std::string& host, int port,
                                                       const std::string& path, int timeout_ms) {
    return std::make_unique<HttpRemoteEngine>(host, port, path, timeout_ms);
}

}  // namespace causescope
