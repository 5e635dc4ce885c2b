#include "scenestat/experiment/event_log.h"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "scenestat/error.h"

namespace scenestat::experiment {

namespace {

[[noreturn]] void fail(const std::string& what, const std::filesystem::path& path) {
  throw InputError(what + " " + path.string() + ": " + std::strerror(errno));
}

void write_all(int fd, std::string_view data, const std::filesystem::path& path) {
  while (!data.empty()) {
    const ssize_t n = ::write(fd, data.data(), data.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      fail("write failed on", path);
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
}

void fsync_dir(const std::filesystem::path& dir) {
  const int fd = ::open(dir.c_str(), O_RDONLY | O_DIRECTORY);
  if (fd < 0) return;
  ::fsync(fd);
  ::close(fd);
}

}  // namespace

EventLog::EventLog(std::filesystem::path path) : path_(std::move(path)) {
  fd_ = ::open(path_.c_str(), O_RDWR | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd_ < 0) fail("cannot open event log", path_);

  std::string content;
  char buf[1 << 16];
  ::lseek(fd_, 0, SEEK_SET);
  for (;;) {
    const ssize_t n = ::read(fd_, buf, sizeof buf);
    if (n < 0) {
      if (errno == EINTR) continue;
      fail("cannot read event log", path_);
    }
    if (n == 0) break;
    content.append(buf, static_cast<std::size_t>(n));
  }

  std::size_t start = 0;
  for (std::size_t nl; (nl = content.find('\n', start)) != std::string::npos; start = nl + 1) {
    if (nl > start) recovered_.emplace_back(content, start, nl - start);
  }
  if (start < content.size()) {
    discarded_bytes_ = content.size() - start;
    if (::ftruncate(fd_, static_cast<off_t>(start)) != 0) fail("cannot truncate", path_);
    ::fsync(fd_);
  }
}

EventLog::~EventLog() {
  if (fd_ >= 0) ::close(fd_);
}

void EventLog::append(std::string_view record) {
  if (record.find('\n') != std::string_view::npos) {
    throw InputError("event records must be single lines");
  }
  std::string line(record);
  line.push_back('\n');
  write_all(fd_, line, path_);
  if (::fdatasync(fd_) != 0) fail("fsync failed on", path_);
}

void EventLog::truncate() {
  if (::ftruncate(fd_, 0) != 0) fail("cannot truncate", path_);
  ::fsync(fd_);
  recovered_.clear();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) fail("cannot create", tmp);
  write_all(fd, content, tmp);
  if (::fsync(fd) != 0) {
    ::close(fd);
    fail("fsync failed on", tmp);
  }
  ::close(fd);
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw InputError("cannot rename " + tmp.string() + ": " + ec.message());
  fsync_dir(path.parent_path().empty() ? "." : path.parent_path());
}

}  // namespace scenestat::experiment
