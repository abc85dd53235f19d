#include "ira/external_model.hpp"

#include <fcntl.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <csignal>
#include <cstring>
#include <json.hpp>

#include "ira/error.hpp"

extern char** environ;

namespace ira {

struct ExternalModel::Process {
  pid_t pid = -1;
  int to_child = -1;
  int from_child = -1;
  std::string buffer;
  bool exited = false;
  int status = 0;

  ~Process() {
    if (to_child >= 0) ::close(to_child);
    if (from_child >= 0) ::close(from_child);
    if (pid > 0 && !exited) {
      int st = 0;
      if (::waitpid(pid, &st, WNOHANG) == 0) {
        ::kill(pid, SIGTERM);
        ::waitpid(pid, &st, 0);
      }
    }
  }
};

namespace {

std::string truncate(const std::string& s, std::size_t limit = 200) {
  return s.size() <= limit ? s : s.substr(0, limit) + "...";
}

void ignore_sigpipe() {
  static std::once_flag once;
  std::call_once(once, [] { std::signal(SIGPIPE, SIG_IGN); });
}

}  // namespace

ExternalModel::ExternalModel(std::string command, std::size_t expected_features)
    : command_(std::move(command)), n_features_(expected_features) {
  ignore_sigpipe();
  int in_pipe[2];
  int out_pipe[2];
  if (::pipe2(in_pipe, O_CLOEXEC) != 0) throw ProtocolError("pipe: " + std::string(std::strerror(errno)));
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    throw ProtocolError("pipe: " + std::string(std::strerror(errno)));
  }
  process_ = std::make_unique<Process>();
  process_->to_child = in_pipe[1];
  process_->from_child = out_pipe[0];

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, in_pipe[0], STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&actions, out_pipe[1], STDOUT_FILENO);
  const char* argv[] = {"/bin/sh", "-c", command_.c_str(), nullptr};
  const int rc = ::posix_spawn(&process_->pid, "/bin/sh", &actions, nullptr,
                               const_cast<char* const*>(argv), environ);
  posix_spawn_file_actions_destroy(&actions);
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  if (rc != 0) {
    process_->pid = -1;
    throw ProtocolError("cannot spawn '" + command_ + "': " + std::strerror(rc));
  }

  std::string line;
  try {
    line = read_line();
  } catch (const ProtocolError&) {
    throw ProtocolError("predict server '" + command_ + "' exited before the handshake");
  }
  nlohmann::json hello;
  try {
    hello = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception&) {
    throw ProtocolError("malformed handshake from '" + command_ + "': " + truncate(line));
  }
  if (!hello.is_object() || hello.value("type", "") != "hello" ||
      !hello.contains("n_features") || !hello["n_features"].is_number_integer()) {
    throw ProtocolError("expected hello line from '" + command_ + "', got: " + truncate(line));
  }
  const auto reported = hello["n_features"].get<std::int64_t>();
  if (reported < 0 || static_cast<std::size_t>(reported) != expected_features) {
    throw ProtocolError("handshake mismatch: server reports " + std::to_string(reported) +
                        " features, expected " + std::to_string(expected_features));
  }
}

ExternalModel::~ExternalModel() {
  try {
    shutdown();
  } catch (...) {
  }
}

int ExternalModel::shutdown() {
  std::lock_guard lock(mutex_);
  if (!process_ || process_->exited) return process_ ? process_->status : 0;
  try {
    write_line(R"({"type":"shutdown"})");
  } catch (const ProtocolError&) {
  }
  ::close(process_->to_child);
  process_->to_child = -1;
  int st = 0;
  ::waitpid(process_->pid, &st, 0);
  process_->exited = true;
  process_->status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return process_->status;
}

std::string ExternalModel::read_line() const {
  auto& proc = *process_;
  while (true) {
    const auto nl = proc.buffer.find('\n');
    if (nl != std::string::npos) {
      std::string line = proc.buffer.substr(0, nl);
      proc.buffer.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return line;
    }
    char chunk[65536];
    const ssize_t got = ::read(proc.from_child, chunk, sizeof(chunk));
    if (got < 0 && errno == EINTR) continue;
    if (got <= 0) throw ProtocolError("predict server '" + command_ + "' exited mid-session");
    proc.buffer.append(chunk, static_cast<std::size_t>(got));
  }
}

void ExternalModel::write_line(const std::string& line) const {
  std::string data = line + '\n';
  const char* ptr = data.data();
  std::size_t left = data.size();
  while (left > 0) {
    const ssize_t put = ::write(process_->to_child, ptr, left);
    if (put < 0 && errno == EINTR) continue;
    if (put <= 0) throw ProtocolError("predict server '" + command_ + "' exited mid-session");
    ptr += put;
    left -= static_cast<std::size_t>(put);
  }
}

std::vector<double> ExternalModel::do_predict(const Matrix& batch) const {
  std::lock_guard lock(mutex_);
  if (process_->exited) throw ProtocolError("predict server has been shut down");
  const std::int64_t id = next_id_++;
  nlohmann::json request = {{"type", "predict"}, {"id", id}, {"rows", nlohmann::json::array()}};
  auto& rows = request["rows"];
  for (std::size_t r = 0; r < batch.rows(); ++r) {
    const auto row = batch.row(r);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  write_line(request.dump());

  const std::string line = read_line();
  nlohmann::json reply;
  try {
    reply = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception&) {
    throw ProtocolError("malformed response: " + truncate(line));
  }
  if (!reply.is_object() || !reply.contains("type") || !reply["type"].is_string()) {
    throw ProtocolError("malformed response: " + truncate(line));
  }
  const auto type = reply["type"].get<std::string>();
  if (type == "error") {
    throw ProtocolError("predict server error: " + reply.value("message", truncate(line)));
  }
  if (type != "prediction" || !reply.contains("id") || !reply["id"].is_number_integer() ||
      !reply.contains("values") || !reply["values"].is_array()) {
    throw ProtocolError("malformed response: " + truncate(line));
  }
  if (reply["id"].get<std::int64_t>() != id) {
    throw ProtocolError("response id " + reply["id"].dump() + " does not match request id " +
                        std::to_string(id));
  }
  const auto& values = reply["values"];
  if (values.size() != batch.rows()) {
    throw ProtocolError("response carries " + std::to_string(values.size()) + " values for " +
                        std::to_string(batch.rows()) + " rows");
  }
  std::vector<double> out;
  out.reserve(values.size());
  for (const auto& v : values) {
    if (!v.is_number()) throw ProtocolError("malformed response: " + truncate(line));
    out.push_back(v.get<double>());
  }
  return out;
}

std::unique_ptr<RegressionModel> connect_external(const std::string& command,
                                                  std::size_t expected_features) {
  return std::make_unique<ExternalModel>(command, expected_features);
}

}  // namespace ira
