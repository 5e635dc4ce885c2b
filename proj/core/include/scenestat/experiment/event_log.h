#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace scenestat::experiment {

/// Line-framed append-only log. Each record is one line; append() returns
/// only after the line is fsync'd.
class EventLog {
 public:
  /// Opens (creating if needed) the log and reads back every complete record.
  /// A trailing fragment without its newline, left by a crash mid-append, is
  /// dropped and truncated away.
  explicit EventLog(std::filesystem::path path);
  ~EventLog();

  EventLog(const EventLog&) = delete;
  EventLog& operator=(const EventLog&) = delete;

  const std::vector<std::string>& recovered() const { return recovered_; }
  std::size_t discarded_bytes() const { return discarded_bytes_; }

  /// `record` must not contain a newline.
  void append(std::string_view record);

  /// Drops every record (after a snapshot has captured them).
  void truncate();

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  int fd_ = -1;
  std::vector<std::string> recovered_;
  std::size_t discarded_bytes_ = 0;
};

/// Writes via a temporary file, fsync and rename, so readers see either the
/// old or the new content.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace scenestat::experiment
