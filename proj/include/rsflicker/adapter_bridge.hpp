#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <sys/types.h>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "rsflicker/detector.hpp"

namespace rsf {

/// Failure talking to an external model process. A failure is never turned
/// into a verdict.
class AdapterError : public std::runtime_error {
 public:
  enum class Kind {
    Unavailable,  // could not start, exited, or closed its output
    Protocol,     // unparseable or invalid response, id mismatch
    Timeout,      // no response within the deadline
    Remote,       // the adapter answered with {"error": ...}
  };
  AdapterError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

const char* to_string(AdapterError::Kind kind);

struct AdapterOptions {
  std::vector<std::string> argv;
  std::filesystem::path scratch_dir;
  std::chrono::milliseconds timeout{30000};

  /// Fills scratch_dir and timeout from RSFLICKER_SCRATCH_DIR and
  /// RSFLICKER_ADAPTER_TIMEOUT (seconds), falling back to a temp dir and 30 s.
  static AdapterOptions from_env(std::vector<std::string> argv);
};

/// One adapter child process speaking newline-delimited JSON over its
/// stdin/stdout. Requests are strictly serial; the object may move between
/// threads but must not be used from two at once. Answers are cached by
/// (op, image content hash).
class AdapterProcess {
 public:
  explicit AdapterProcess(AdapterOptions opts);
  ~AdapterProcess();
  AdapterProcess(const AdapterProcess&) = delete;
  AdapterProcess& operator=(const AdapterProcess&) = delete;

  DetectorVerdict detect(const Image& image);
  /// expected_dim == 0 accepts any non-empty length.
  Embedding embed(const Image& image, std::size_t expected_dim);

  bool alive() const { return pid_ > 0; }
  std::size_t requests_sent() const { return next_id_ - 1; }
  std::size_t cache_hits() const { return cache_hits_; }

 private:
  nlohmann::json round_trip(const std::string& op, const Image& image);
  std::string read_line();
  void write_all(const std::string& data);
  void terminate();

  AdapterOptions opts_;
  pid_t pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string pending_;
  long next_id_ = 1;
  std::size_t cache_hits_ = 0;
  std::map<std::pair<std::string, std::string>, nlohmann::json> cache_;
};

DetectorVerdict external_detect(AdapterProcess& adapter, const Image& image);
Embedding external_embed(AdapterProcess& adapter, const Image& image, std::size_t expected_dim = 0);

class ExternalDetector final : public Detector {
 public:
  explicit ExternalDetector(AdapterOptions opts) : proc_(std::move(opts)) {}
  DetectorVerdict detect(const Image& image) override { return proc_.detect(image); }
  std::string name() const override { return "external"; }

 private:
  AdapterProcess proc_;
};

class ExternalEmbedder final : public Embedder {
 public:
  ExternalEmbedder(AdapterOptions opts, std::size_t expected_dim)
      : proc_(std::move(opts)), dim_(expected_dim) {}
  Embedding embed(const Image& image) override { return proc_.embed(image, dim_); }
  std::string name() const override { return "external"; }

 private:
  AdapterProcess proc_;
  std::size_t dim_;
};

}  // namespace rsf
