#include "batesqc/ocr.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <atomic>
#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "batesqc/error.hpp"
#include "batesqc/image_io.hpp"

extern char** environ;

namespace batesqc {

void OcrBackendConfig::validate() const {
  if (timeout_ms < 1) throw Error(ErrorCode::InvalidArgument, "OCR timeout must be >= 1 ms");
  if (kind == BackendKind::ExternalCommand) {
    if (command_template.find("{input}") == std::string::npos) {
      throw Error(ErrorCode::InvalidArgument, "OCR command template lacks {input}");
    }
    if (split_command(command_template).empty()) {
      throw Error(ErrorCode::InvalidArgument, "OCR command template is empty");
    }
  } else if (!script) {
    throw Error(ErrorCode::InvalidArgument, "scripted OCR backend needs a script");
  }
}

std::string region_fingerprint(std::string_view source_path, std::size_t page_index, Band band,
                               Corner corner) {
  std::string key = std::filesystem::path(source_path).stem().string();
  if (page_index > 0) key += "#" + std::to_string(page_index);
  if (band == Band::Top) key += "@top";
  key += "-";
  key += to_string(corner);
  return key;
}

std::string region_fingerprint(const PageImage& region) {
  if (!region.origin || !region.origin->corner) {
    throw Error(ErrorCode::InvalidArgument, "region has no corner provenance");
  }
  return region_fingerprint(region.source_path, region.page_index, region.origin->band,
                            *region.origin->corner);
}

std::vector<std::string> split_command(std::string_view command) {
  std::vector<std::string> argv;
  std::string current;
  bool in_token = false;
  char quote = 0;
  for (char c : command) {
    if (quote) {
      if (c == quote) {
        quote = 0;
      } else {
        current += c;
      }
    } else if (c == '\'' || c == '"') {
      quote = c;
      in_token = true;
    } else if (c == ' ' || c == '\t' || c == '\n') {
      if (in_token) argv.push_back(std::move(current));
      current.clear();
      in_token = false;
    } else {
      current += c;
      in_token = true;
    }
  }
  if (quote) throw Error(ErrorCode::InvalidArgument, "unbalanced quote in OCR command");
  if (in_token) argv.push_back(std::move(current));
  return argv;
}

namespace {

std::atomic<std::uint64_t> g_instance_counter{0};

class ScriptedEngine final : public OcrEngine {
 public:
  explicit ScriptedEngine(std::shared_ptr<const OcrScript> script)
      : script_(std::move(script)), id_("scripted") {}

  OcrResult recognize(const PageImage& region) override {
    OcrResult out;
    out.engine_id = id_;
    auto it = script_->find(region_fingerprint(region));
    if (it != script_->end()) out.raw_text = it->second;
    return out;
  }

  const std::string& id() const override { return id_; }

 private:
  std::shared_ptr<const OcrScript> script_;
  std::string id_;
};

bool is_executable(const std::filesystem::path& p) {
  std::error_code ec;
  return std::filesystem::is_regular_file(p, ec) && ::access(p.c_str(), X_OK) == 0;
}

std::filesystem::path resolve_binary(const std::string& name) {
  if (name.find('/') != std::string::npos) {
    if (is_executable(name)) return name;
    throw Error(ErrorCode::BackendUnavailable, "OCR engine not executable: " + name);
  }
  const char* path_env = std::getenv("PATH");
  std::string_view dirs = path_env ? path_env : "/usr/local/bin:/usr/bin:/bin";
  while (!dirs.empty()) {
    const auto colon = dirs.find(':');
    const std::string_view dir = dirs.substr(0, colon);
    if (!dir.empty()) {
      std::filesystem::path candidate = std::filesystem::path(dir) / name;
      if (is_executable(candidate)) return candidate;
    }
    if (colon == std::string_view::npos) break;
    dirs.remove_prefix(colon + 1);
  }
  throw Error(ErrorCode::BackendUnavailable, "OCR engine not found on PATH: " + name);
}

struct Pipe {
  int fds[2] = {-1, -1};
  Pipe() {
    if (::pipe2(fds, O_CLOEXEC) != 0) {
      throw Error(ErrorCode::EngineFailure, std::string("pipe: ") + std::strerror(errno));
    }
  }
  ~Pipe() {
    close_read();
    close_write();
  }
  Pipe(const Pipe&) = delete;
  Pipe& operator=(const Pipe&) = delete;
  void close_read() {
    if (fds[0] >= 0) ::close(fds[0]);
    fds[0] = -1;
  }
  void close_write() {
    if (fds[1] >= 0) ::close(fds[1]);
    fds[1] = -1;
  }
};

class TempFile {
 public:
  explicit TempFile(std::filesystem::path p) : path_(std::move(p)) {}
  ~TempFile() {
    std::error_code ec;
    std::filesystem::remove(path_, ec);
  }
  TempFile(const TempFile&) = delete;
  TempFile& operator=(const TempFile&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

struct ProcessOutput {
  std::string out;
  std::string err;
  int status = 0;
};

class ExternalEngine final : public OcrEngine {
 public:
  explicit ExternalEngine(const OcrBackendConfig& cfg)
      : argv_template_(split_command(cfg.command_template)),
        timeout_ms_(cfg.timeout_ms),
        instance_(g_instance_counter.fetch_add(1)) {
    binary_ = resolve_binary(argv_template_.front());
    temp_dir_ = cfg.temp_dir.empty() ? std::filesystem::temp_directory_path() : cfg.temp_dir;
    id_ = "external:" + argv_template_.front() + "#" + std::to_string(instance_);
    build_environment(cfg.env_passthrough);
  }

  OcrResult recognize(const PageImage& region) override {
    const auto start = std::chrono::steady_clock::now();
    TempFile input(temp_dir_ / ("batesqc-" + std::to_string(::getpid()) + "-" +
                                std::to_string(instance_) + "-" + std::to_string(seq_++) + ".png"));
    write_png(input.path(), region);

    std::vector<std::string> argv = argv_template_;
    for (std::string& arg : argv) {
      for (auto pos = arg.find("{input}"); pos != std::string::npos; pos = arg.find("{input}")) {
        arg.replace(pos, 7, input.path().string());
      }
    }
    ProcessOutput result = run(argv);
    if (!WIFEXITED(result.status) || WEXITSTATUS(result.status) != 0) {
      std::string why = WIFEXITED(result.status)
                            ? "exit status " + std::to_string(WEXITSTATUS(result.status))
                            : "terminated by signal " + std::to_string(WTERMSIG(result.status));
      // Findings must not depend on which worker ran the page.
      const std::string temp_name = input.path().string();
      for (auto pos = result.err.find(temp_name); pos != std::string::npos;
           pos = result.err.find(temp_name, pos)) {
        result.err.replace(pos, temp_name.size(), "{input}");
      }
      if (result.err.size() > 2048) result.err.resize(2048);
      throw Error(ErrorCode::EngineFailure, argv_template_.front() + " " + why + ": " + result.err);
    }
    OcrResult out;
    out.raw_text = std::move(result.out);
    out.engine_id = id_;
    out.duration_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - start)
                          .count();
    return out;
  }

  const std::string& id() const override { return id_; }

 private:
  void build_environment(const std::vector<std::string>& names) {
    inherit_env_ = names.empty();
    for (const std::string& name : names) {
      if (const char* value = std::getenv(name.c_str())) env_.push_back(name + "=" + value);
    }
  }

  ProcessOutput run(std::vector<std::string>& argv) {
    Pipe out_pipe;
    Pipe err_pipe;
    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_addopen(&actions, 0, "/dev/null", O_RDONLY, 0);
    posix_spawn_file_actions_adddup2(&actions, out_pipe.fds[1], 1);
    posix_spawn_file_actions_adddup2(&actions, err_pipe.fds[1], 2);

    std::vector<char*> cargv;
    for (std::string& a : argv) cargv.push_back(a.data());
    cargv.push_back(nullptr);
    std::vector<char*> cenv;
    if (!inherit_env_) {
      for (std::string& e : env_) cenv.push_back(e.data());
      cenv.push_back(nullptr);
    }

    pid_t pid = 0;
    const int rc = posix_spawn(&pid, binary_.c_str(), &actions, nullptr, cargv.data(),
                               inherit_env_ ? environ : cenv.data());
    posix_spawn_file_actions_destroy(&actions);
    if (rc != 0) {
      throw Error(ErrorCode::EngineFailure, argv_template_.front() + " spawn failed: " + std::strerror(rc));
    }
    out_pipe.close_write();
    err_pipe.close_write();

    ProcessOutput result;
    const auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms_);
    std::array<pollfd, 2> fds{pollfd{out_pipe.fds[0], POLLIN, 0}, pollfd{err_pipe.fds[0], POLLIN, 0}};
    std::array<std::string*, 2> sinks{&result.out, &result.err};
    int open_streams = 2;
    std::array<char, 4096> buf{};
    while (open_streams > 0) {
      const auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
                                 deadline - std::chrono::steady_clock::now())
                                 .count();
      if (remaining <= 0) {
        ::kill(pid, SIGKILL);
        ::waitpid(pid, nullptr, 0);
        throw Error(ErrorCode::Timeout,
                    argv_template_.front() + " exceeded " + std::to_string(timeout_ms_) + " ms");
      }
      const int ready = ::poll(fds.data(), fds.size(), static_cast<int>(remaining));
      if (ready < 0) {
        if (errno == EINTR) continue;
        ::kill(pid, SIGKILL);
        ::waitpid(pid, nullptr, 0);
        throw Error(ErrorCode::EngineFailure, argv_template_.front() + " poll failed");
      }
      for (std::size_t i = 0; i < fds.size(); ++i) {
        if (fds[i].fd < 0 || !(fds[i].revents & (POLLIN | POLLHUP | POLLERR))) continue;
        const ssize_t n = ::read(fds[i].fd, buf.data(), buf.size());
        if (n > 0) {
          sinks[i]->append(buf.data(), static_cast<std::size_t>(n));
        } else if (n == 0 || errno != EINTR) {
          fds[i].fd = -1;
          --open_streams;
        }
      }
    }
    int status = 0;
    while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
    }
    result.status = status;
    return result;
  }

  std::vector<std::string> argv_template_;
  std::filesystem::path binary_;
  std::filesystem::path temp_dir_;
  int timeout_ms_;
  std::uint64_t instance_;
  std::uint64_t seq_ = 0;
  std::string id_;
  bool inherit_env_ = false;
  std::vector<std::string> env_;
};

}  // namespace

std::unique_ptr<OcrEngine> make_engine(const OcrBackendConfig& cfg) {
  cfg.validate();
  if (cfg.kind == BackendKind::Scripted) return std::make_unique<ScriptedEngine>(cfg.script);
  return std::make_unique<ExternalEngine>(cfg);
}

OcrScript load_ocr_script(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open OCR script " + path.string());
  try {
    nlohmann::json j = nlohmann::json::parse(in);
    return j.get<OcrScript>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
}

void save_ocr_script(const std::filesystem::path& path, const OcrScript& script) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write OCR script " + path.string());
  out << nlohmann::json(script).dump(1) << '\n';
  if (!out) throw Error(ErrorCode::IoError, "cannot write OCR script " + path.string());
}

}  // namespace batesqc
