#pragma once

#include <chrono>
#include <string>
#include <sys/types.h>

namespace dubalign {

/**
 * A child process spoken to over a line protocol: requests are written to
 * its stdin, replies read from its stdout one line at a time. Not thread
 * safe; callers serialize access.
 */
class LineProcess {
 public:
  explicit LineProcess(std::string command,
                       std::chrono::milliseconds timeout = std::chrono::seconds(30));
  ~LineProcess();

  LineProcess(const LineProcess&) = delete;
  LineProcess& operator=(const LineProcess&) = delete;

  void write_line(const std::string& line);
  /// Next reply line without its terminator. Throws PluginProtocolError on
  /// timeout or when the child closes its output.
  std::string read_line();

  const std::string& command() const { return command_; }

 private:
  void start();

  std::string command_;
  std::chrono::milliseconds timeout_;
  pid_t pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
};

}  // namespace dubalign
