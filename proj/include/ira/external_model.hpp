#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <string>

#include "ira/models.hpp"

namespace ira {

/// Proxy for a model served by a child process over newline-delimited JSON on
/// its standard streams:
///
///   server -> {"type":"hello","n_features":P}
///   client -> {"type":"predict","id":N,"rows":[[...],...]}
///   server -> {"type":"prediction","id":N,"values":[...]}
///   client -> {"type":"shutdown"}
///
/// One request is in flight at a time; concurrent callers are serialized.
class ExternalModel final : public RegressionModel {
 public:
  /// Spawns `command` through /bin/sh and verifies the hello handshake reports
  /// `expected_features`. Throws ProtocolError on any failure.
  ExternalModel(std::string command, std::size_t expected_features);
  ~ExternalModel() override;

  ExternalModel(const ExternalModel&) = delete;
  ExternalModel& operator=(const ExternalModel&) = delete;

  std::size_t n_features() const override { return n_features_; }
  bool concurrent() const override { return false; }
  std::string spec() const override { return "external(" + command_ + ")"; }

  /// Sends shutdown and waits for the child; returns its exit status.
  int shutdown();

 protected:
  std::vector<double> do_predict(const Matrix& batch) const override;

 private:
  struct Process;

  std::string read_line() const;
  void write_line(const std::string& line) const;

  std::string command_;
  std::size_t n_features_;
  std::unique_ptr<Process> process_;
  mutable std::mutex mutex_;
  mutable std::int64_t next_id_ = 1;
};

/// Factory matching the other model constructors.
std::unique_ptr<RegressionModel> connect_external(const std::string& command,
                                                  std::size_t expected_features);

}  // namespace ira
