#include "rsflicker/adapter_bridge.hpp"

#include <cerrno>
#include <csignal>
#include <cstdlib>
#include <cstring>
#include <poll.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include "rsflicker/codec.hpp"

extern char** environ;

namespace rsf {

const char* to_string(AdapterError::Kind kind) {
  switch (kind) {
    case AdapterError::Kind::Unavailable: return "unavailable";
    case AdapterError::Kind::Protocol: return "protocol";
    case AdapterError::Kind::Timeout: return "timeout";
    case AdapterError::Kind::Remote: return "remote";
  }
  return "unknown";
}

AdapterOptions AdapterOptions::from_env(std::vector<std::string> argv) {
  AdapterOptions o;
  o.argv = std::move(argv);
  if (const char* dir = std::getenv("RSFLICKER_SCRATCH_DIR"); dir && *dir) {
    o.scratch_dir = dir;
  } else {
    o.scratch_dir = std::filesystem::temp_directory_path() / "rsflicker-scratch";
  }
  if (const char* t = std::getenv("RSFLICKER_ADAPTER_TIMEOUT"); t && *t) {
    char* end = nullptr;
    const double secs = std::strtod(t, &end);
    if (end == t || *end != '\0' || !(secs > 0.0))
      throw std::invalid_argument(std::string("RSFLICKER_ADAPTER_TIMEOUT must be positive seconds, got ") + t);
    o.timeout = std::chrono::milliseconds(static_cast<long long>(secs * 1000.0));
  }
  return o;
}

AdapterProcess::AdapterProcess(AdapterOptions opts) : opts_(std::move(opts)) {
  if (opts_.argv.empty()) throw AdapterError(AdapterError::Kind::Unavailable, "empty adapter command");
  if (opts_.scratch_dir.empty()) opts_.scratch_dir = std::filesystem::temp_directory_path() / "rsflicker-scratch";
  std::error_code ec;
  std::filesystem::create_directories(opts_.scratch_dir, ec);
  if (ec) throw AdapterError(AdapterError::Kind::Unavailable, "cannot create scratch dir: " + ec.message());

  // A dead adapter must surface as EPIPE, not kill the caller.
  std::signal(SIGPIPE, SIG_IGN);

  int in_pipe[2];
  int out_pipe[2];
  if (pipe(in_pipe) != 0) throw AdapterError(AdapterError::Kind::Unavailable, "pipe failed");
  if (pipe(out_pipe) != 0) {
    close(in_pipe[0]);
    close(in_pipe[1]);
    throw AdapterError(AdapterError::Kind::Unavailable, "pipe failed");
  }

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, in_pipe[0], STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&actions, out_pipe[1], STDOUT_FILENO);
  posix_spawn_file_actions_addclose(&actions, in_pipe[1]);
  posix_spawn_file_actions_addclose(&actions, out_pipe[0]);

  std::vector<char*> argv;
  for (auto& a : opts_.argv) argv.push_back(a.data());
  argv.push_back(nullptr);
  const int rc = posix_spawnp(&pid_, argv[0], &actions, nullptr, argv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  close(in_pipe[0]);
  close(out_pipe[1]);
  if (rc != 0) {
    close(in_pipe[1]);
    close(out_pipe[0]);
    pid_ = -1;
    throw AdapterError(AdapterError::Kind::Unavailable,
                       "cannot start adapter '" + opts_.argv[0] + "': " + std::strerror(rc));
  }
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
}

AdapterProcess::~AdapterProcess() { terminate(); }

void AdapterProcess::terminate() {
  if (to_child_ >= 0) close(to_child_);
  if (from_child_ >= 0) close(from_child_);
  to_child_ = from_child_ = -1;
  if (pid_ > 0) {
    // Closing stdin asks a well-behaved adapter to exit; give it a moment.
    int status = 0;
    for (int k = 0; k < 20; ++k) {
      if (waitpid(pid_, &status, WNOHANG) == pid_) {
        pid_ = -1;
        return;
      }
      usleep(5000);
    }
    kill(pid_, SIGKILL);
    waitpid(pid_, &status, 0);
    pid_ = -1;
  }
}

void AdapterProcess::write_all(const std::string& data) {
  std::size_t off = 0;
  while (off < data.size()) {
    const ssize_t n = write(to_child_, data.data() + off, data.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      terminate();
      throw AdapterError(AdapterError::Kind::Unavailable, "adapter closed its input");
    }
    off += static_cast<std::size_t>(n);
  }
}

std::string AdapterProcess::read_line() {
  const auto deadline = std::chrono::steady_clock::now() + opts_.timeout;
  for (;;) {
    if (const auto nl = pending_.find('\n'); nl != std::string::npos) {
      std::string line = pending_.substr(0, nl);
      pending_.erase(0, nl + 1);
      return line;
    }
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) {
      terminate();
      throw AdapterError(AdapterError::Kind::Timeout,
                         "adapter did not answer within " + std::to_string(opts_.timeout.count()) + " ms");
    }
    pollfd pfd{from_child_, POLLIN, 0};
    const int rc = poll(&pfd, 1, static_cast<int>(left.count()));
    if (rc < 0 && errno == EINTR) continue;
    if (rc == 0) continue;
    char buf[4096];
    const ssize_t n = read(from_child_, buf, sizeof(buf));
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) {
      terminate();
      throw AdapterError(AdapterError::Kind::Unavailable, "adapter exited or closed its output");
    }
    pending_.append(buf, static_cast<std::size_t>(n));
  }
}

nlohmann::json AdapterProcess::round_trip(const std::string& op, const Image& image) {
  const std::string hash = content_hash(image);
  if (auto it = cache_.find({op, hash}); it != cache_.end()) {
    ++cache_hits_;
    return it->second;
  }
  if (!alive()) throw AdapterError(AdapterError::Kind::Unavailable, "adapter is not running");

  const auto path = opts_.scratch_dir / (hash + (image.channels() == 3 ? ".ppm" : ".pgm"));
  if (!std::filesystem::exists(path)) save_image(image, path, Encoding::Pgm);

  const long id = next_id_++;
  const nlohmann::json req = {{"id", id}, {"op", op}, {"image_path", path.string()}};
  write_all(req.dump() + "\n");

  const std::string line = read_line();
  nlohmann::json resp;
  try {
    resp = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception&) {
    throw AdapterError(AdapterError::Kind::Protocol, "unparseable adapter response: " + line);
  }
  if (!resp.is_object() || !resp.contains("id") || !resp["id"].is_number_integer())
    throw AdapterError(AdapterError::Kind::Protocol, "adapter response without integer id: " + line);
  if (resp["id"].get<long>() != id)
    throw AdapterError(AdapterError::Kind::Protocol, "adapter response id " + resp["id"].dump() +
                                                         " does not match request id " + std::to_string(id));
  if (resp.contains("error"))
    throw AdapterError(AdapterError::Kind::Remote, "adapter error: " + resp["error"].dump());
  cache_[{op, hash}] = resp;
  return resp;
}

DetectorVerdict AdapterProcess::detect(const Image& image) {
  const auto resp = round_trip("detect", image);
  if (!resp.contains("label") || !resp["label"].is_number_integer())
    throw AdapterError(AdapterError::Kind::Protocol, "detect response without integer label");
  const int label = resp["label"].get<int>();
  if (label != 0 && label != 1)
    throw AdapterError(AdapterError::Kind::Protocol, "detect label must be 0 or 1, got " + std::to_string(label));
  return {label};
}

Embedding AdapterProcess::embed(const Image& image, std::size_t expected_dim) {
  const auto resp = round_trip("embed", image);
  if (!resp.contains("vector") || !resp["vector"].is_array())
    throw AdapterError(AdapterError::Kind::Protocol, "embed response without vector");
  Embedding e;
  for (const auto& v : resp["vector"]) {
    if (!v.is_number()) throw AdapterError(AdapterError::Kind::Protocol, "embedding entry is not a number");
    e.vector.push_back(v.get<double>());
  }
  if (expected_dim != 0 && e.dim() != expected_dim)
    throw AdapterError(AdapterError::Kind::Protocol, "embedding has length " + std::to_string(e.dim()) +
                                                         ", expected " + std::to_string(expected_dim));
  try {
    e.validate();
  } catch (const std::invalid_argument& ex) {
    throw AdapterError(AdapterError::Kind::Protocol, ex.what());
  }
  return e;
}

DetectorVerdict external_detect(AdapterProcess& adapter, const Image& image) { return adapter.detect(image); }

Embedding external_embed(AdapterProcess& adapter, const Image& image, std::size_t expected_dim) {
  return adapter.embed(image, expected_dim);
}

}  // namespace rsf
