// Copyright 2026 The Botshaper Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "botshaper/store.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <fstream>
#include <sstream>
#include <system_error>

#include "botshaper/codec.hpp"
#include "botshaper/error.hpp"

namespace botshaper {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kUnnamed = "(unnamed)";

// Exclusive flock held for the lifetime of the object.
class FileLock {
 public:
  explicit FileLock(const fs::path& path) : fd_(::open(path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644)) {
    if (fd_ < 0) throw Error(ErrorCode::StoreUnavailable, "cannot open lock " + path.string());
    if (::flock(fd_, LOCK_EX) != 0) {
      ::close(fd_);
      throw Error(ErrorCode::StoreUnavailable, "cannot lock " + path.string());
    }
  }
  ~FileLock() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
  FileLock(const FileLock&) = delete;
  FileLock& operator=(const FileLock&) = delete;

 private:
  int fd_;
};

std::string temp_suffix() {
  static std::atomic<std::uint64_t> counter{0};
  return ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
}

}  // namespace

SessionStore::SessionStore(fs::path directory) : directory_(std::move(directory)) {}

bool SessionStore::is_valid_id(std::string_view id) noexcept {
  return !id.empty() && id.size() <= 128 && std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
           c == '-';
  });
}

fs::path SessionStore::path_for(std::string_view id) const {
  return directory_ / (std::string(id) + ".json");
}

std::string SessionStore::save(const Session& session) const {
  if (!is_valid_id(session.session_id)) {
    throw Error(ErrorCode::InvalidArgument, "unusable session id '" + session.session_id + "'");
  }
  std::error_code ec;
  fs::create_directories(directory_, ec);
  if (ec || !fs::is_directory(directory_)) {
    throw Error(ErrorCode::StoreUnavailable, "cannot create store directory " + directory_.string());
  }

  const auto target = path_for(session.session_id);
  const auto body = session_to_string(session);
  FileLock lock(directory_ / (session.session_id + ".lock"));

  const fs::path temp = target.string() + temp_suffix();
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::StoreUnavailable, "cannot write " + temp.string());
    out << body;
    out.flush();
    if (!out) {
      fs::remove(temp, ec);
      throw Error(ErrorCode::StoreUnavailable, "short write to " + temp.string());
    }
  }
  fs::rename(temp, target, ec);
  if (ec) {
    fs::remove(temp, ec);
    throw Error(ErrorCode::StoreUnavailable, "cannot move document into place: " + target.string());
  }
  return session.session_id;
}

bool SessionStore::exists(std::string_view session_id) const {
  std::error_code ec;
  return is_valid_id(session_id) && fs::is_regular_file(path_for(session_id), ec);
}

Session SessionStore::load(std::string_view session_id) const {
  if (!exists(session_id)) {
    throw Error(ErrorCode::NotFound, "no session '" + std::string(session_id) + "'");
  }
  std::ifstream in(path_for(session_id), std::ios::binary);
  if (!in) throw Error(ErrorCode::NotFound, "no session '" + std::string(session_id) + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  auto session = session_from_string(buf.str());
  if (session.session_id != session_id) {
    throw Error(ErrorCode::CorruptDocument, "document id does not match its file name");
  }
  return session;
}

std::vector<SessionSummary> SessionStore::list() const {
  std::error_code ec;
  if (!fs::exists(directory_, ec)) return {};
  fs::directory_iterator it(directory_, ec);
  if (ec) throw Error(ErrorCode::StoreUnavailable, "cannot list " + directory_.string());

  std::vector<SessionSummary> out;
  for (const auto& entry : it) {
    if (!entry.is_regular_file() || entry.path().extension() != ".json") continue;
    const auto id = entry.path().stem().string();
    if (!is_valid_id(id)) continue;
    try {
      out.push_back(summarize(load(id)));
    } catch (const Error&) {
      // half-written or foreign files are not sessions
    }
  }
  std::sort(out.begin(), out.end(), [](const SessionSummary& a, const SessionSummary& b) {
    if (a.created_at != b.created_at) return a.created_at > b.created_at;
    return a.session_id < b.session_id;
  });
  return out;
}

SessionSummary summarize(const Session& session) {
  const auto* name = session.character.find("name");
  return {session.session_id, name ? name->value : std::string(kUnnamed), session.created_at,
          session.transcript.size()};
}

}  // namespace botshaper
