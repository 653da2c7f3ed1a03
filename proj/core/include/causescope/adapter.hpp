#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "causescope/execution.hpp"
#include "causescope/influence.hpp"
#include "causescope/intervene.hpp"

namespace causescope {

/// Wire protocol: one JSON object per line. Field names are fixed.
std::string encode_adapter_request(const std::string& problem_id,
                                   const std::map<FeatureId, std::string>& interventions,
                                   std::uint64_t run_seed);

struct AdapterResponse {
    Outcome outcome;
    std::map<FeatureId, std::string> observed;
    std::uint64_t tokens = 0;
};

/// Throws MalformedResponse on any shape violation.
AdapterResponse decode_adapter_response(const std::string& line);

/// Drives a child process speaking the line protocol on stdin/stdout. Calls
/// are serialized per child. Timeouts and malformed replies come back as
/// ExecError records rather than exceptions: the run was charged either way.
class SubprocessAdapter : public Sut {
public:
    SubprocessAdapter(std::vector<std::string> command, int timeout_ms = 10000,
                      bool declared_deterministic = true, unsigned repeats = 1);
    ~SubprocessAdapter() override;

    SubprocessAdapter(const SubprocessAdapter&) = delete;
    SubprocessAdapter& operator=(const SubprocessAdapter&) = delete;

    ExecutionRecord execute(const Problem& problem,
                            const std::map<FeatureId, std::string>& intervention,
                            std::uint64_t run_seed) override;
    bool deterministic() const override { return deterministic_; }
    unsigned repeat_count() const override { return repeats_; }

private:
    void spawn();
    void shutdown();
    std::string round_trip(const std::string& request_line);

    std::vector<std::string> command_;
    int timeout_ms_;
    bool deterministic_;
    unsigned repeats_;
    std::mutex mutex_;
    int child_pid_ = -1;
    int to_child_ = -1;
    int from_child_ = -1;
    std::string read_buffer_;
};

/// POSTs each request to an HTTP endpoint; same body shape as the line
/// protocol.
class HttpAdapter : public Sut {
public:
    HttpAdapter(std::string host, int port, std::string path, int timeout_ms = 10000,
                bool declared_deterministic = true, unsigned repeats = 1);

    ExecutionRecord execute(const Problem& problem,
                            const std::map<FeatureId, std::string>& intervention,
                            std::uint64_t run_seed) override;
    bool deterministic() const override { return deterministic_; }
    unsigned repeat_count() const override { return repeats_; }

private:
    std::string host_;
    int port_;
    std::string path_;
    int timeout_ms_;
    bool deterministic_;
    unsigned repeats_;
};

/// "remote-embedding" metric: POST {"a","b"} -> {"score"}.
SimilarityFn remote_embedding_similarity(const std::string& host, int port,
                                         const std::string& path, int timeout_ms = 10000);

/// Remote intervention engine: POST {"feature","original","problem","seed"}
/// -> {"replacement"}.
std::unique_ptr<InterventionEngine> make_remote_engine(const std::string& host, int port,
                                                       const std::string& path,
                                                       int timeout_ms = 10000);

}  // namespace causescope
