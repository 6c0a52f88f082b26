#include "seqtag/ingest.hpp"

#include <curl/curl.h>
#include <fcntl.h>
#include <openssl/evp.h>
#include <sys/file.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <memory>
#include <fstream>
#include <sstream>

#include "seqtag/errors.hpp"

namespace seqtag {

namespace fs = std::filesystem;

namespace {

std::size_t write_body(char* data, std::size_t size, std::size_t nmemb, void* userdata) {
  static_cast<std::string*>(userdata)->append(data, size * nmemb);
  return size * nmemb;
}

// Holds an exclusive flock on <root>/.lock for its lifetime.
class CacheLock {
 public:
  explicit CacheLock(const fs::path& root) {
    fs::create_directories(root);
    fd_ = ::open((root / ".lock").c_str(), O_CREAT | O_RDWR | O_CLOEXEC, 0644);
    if (fd_ < 0) throw IoError("cannot open cache lock in '" + root.string() + "'");
    if (::flock(fd_, LOCK_EX) != 0) {
      ::close(fd_);
      throw IoError("cannot lock cache '" + root.string() + "'");
    }
  }
  ~CacheLock() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
  CacheLock(const CacheLock&) = delete;
  CacheLock& operator=(const CacheLock&) = delete;

 private:
  int fd_ = -1;
};

std::optional<std::string> read_if_exists(const fs::path& path) {
  if (!fs::exists(path)) return std::nullopt;
  return read_text_file(path.string());
}

}  // namespace

Downloader curl_downloader() {
  return [](const std::string& url) {
    static const bool initialized = curl_global_init(CURL_GLOBAL_DEFAULT) == CURLE_OK;
    if (!initialized) throw NetworkError("libcurl initialization failed");
    std::unique_ptr<CURL, decltype(&curl_easy_cleanup)> handle(curl_easy_init(), curl_easy_cleanup);
    if (!handle) throw NetworkError("libcurl handle allocation failed");
    std::string body;
    char errbuf[CURL_ERROR_SIZE] = {0};
    curl_easy_setopt(handle.get(), CURLOPT_URL, url.c_str());
    curl_easy_setopt(handle.get(), CURLOPT_FOLLOWLOCATION, 1L);
    curl_easy_setopt(handle.get(), CURLOPT_FAILONERROR, 1L);
    curl_easy_setopt(handle.get(), CURLOPT_WRITEFUNCTION, write_body);
    curl_easy_setopt(handle.get(), CURLOPT_WRITEDATA, &body);
    curl_easy_setopt(handle.get(), CURLOPT_ERRORBUFFER, errbuf);
    curl_easy_setopt(handle.get(), CURLOPT_CONNECTTIMEOUT, 30L);
    CURLcode rc = curl_easy_perform(handle.get());
    if (rc != CURLE_OK)
      throw NetworkError("download of '" + url + "' failed: " +
                         (errbuf[0] ? std::string(errbuf) : curl_easy_strerror(rc)));
    return body;
  };
}

std::map<std::string, ManifestEntry> read_manifest(const fs::path& root) {
  std::map<std::string, ManifestEntry> entries;
  auto text = read_if_exists(root / "manifest.tsv");
  if (!text) return entries;
  std::istringstream in(*text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto t1 = line.find('\t');
    auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos)
      throw IoError("malformed manifest line " + std::to_string(line_no));
    ManifestEntry e;
    e.sha256 = line.substr(t1 + 1, t2 - t1 - 1);
    try {
      e.bytes = std::stoull(line.substr(t2 + 1));
    } catch (const std::exception&) {
      throw IoError("malformed manifest line " + std::to_string(line_no));
    }
    entries[line.substr(0, t1)] = e;
  }
  return entries;
}

void write_manifest(const fs::path& root, const std::map<std::string, ManifestEntry>& entries) {
  std::string out;
  for (const auto& [url, e] : entries) out += url + "\t" + e.sha256 + "\t" + std::to_string(e.bytes) + "\n";
  write_text_file_atomic((root / "manifest.tsv").string(), out);
}

fs::path default_cache_root() {
  if (const char* env = std::getenv("SEQTAG_CACHE"); env && *env) return fs::path(env);
  if (const char* home = std::getenv("HOME"); home && *home) return fs::path(home) / ".cache" / "seqtag";
  return fs::path(".seqtag-cache");
}

fs::path cache_location(const fs::path& root, std::string_view url) {
  std::string_view rest = url;
  if (auto scheme_end = rest.find("://"); scheme_end != std::string_view::npos)
    rest.remove_prefix(scheme_end + 3);
  std::string_view host = rest.substr(0, rest.find('/'));
  std::string_view path = host.size() < rest.size() ? rest.substr(host.size() + 1) : std::string_view{};
  if (auto q = path.find_first_of("?#"); q != std::string_view::npos) path = path.substr(0, q);
  if (auto colon = host.find(':'); colon != std::string_view::npos) host = host.substr(0, colon);
  fs::path out = root / (host.empty() ? std::string("localhost") : std::string(host));
  // Drop empty, "." and ".." components so the cache stays under root.
  std::size_t pos = 0;
  while (pos <= path.size()) {
    std::size_t slash = path.find('/', pos);
    if (slash == std::string_view::npos) slash = path.size();
    auto part = path.substr(pos, slash - pos);
    if (!part.empty() && part != "." && part != "..") out /= std::string(part);
    pos = slash + 1;
  }
  if (out.filename().empty() || out == root / (host.empty() ? "localhost" : std::string(host)))
    out /= "index";
  return out;
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw IoError("sha256 computation failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

fs::path fetch_dataset(const DatasetDescriptor& desc, const FetchOptions& options) {
  const fs::path root = desc.cache_path.empty() ? default_cache_root() : desc.cache_path;
  CacheLock lock(root);
  const fs::path target = cache_location(root, desc.source_url);
  auto manifest = read_manifest(root);

  std::optional<std::string> pinned = desc.sha256;
  if (!pinned) {
    if (auto it = manifest.find(desc.source_url); it != manifest.end()) pinned = it->second.sha256;
  }

  if (!options.refresh) {
    if (auto cached = read_if_exists(target)) {
      const std::string digest = sha256_hex(*cached);
      if (pinned && *pinned != digest) throw ChecksumMismatch(*pinned, digest);
      ManifestEntry entry{digest, cached->size()};
      if (manifest[desc.source_url] != entry) {
        manifest[desc.source_url] = entry;
        write_manifest(root, manifest);
      }
      return target;
    }
  }

  Downloader download = options.downloader ? options.downloader : curl_downloader();
  const std::string body = download(desc.source_url);
  const std::string digest = sha256_hex(body);
  if (pinned && *pinned != digest && !options.refresh) throw ChecksumMismatch(*pinned, digest);
  write_text_file_atomic(target.string(), body);
  manifest[desc.source_url] = {digest, body.size()};
  write_manifest(root, manifest);
  return target;
}

std::pair<Corpus, Corpus> split_train_test(const Corpus& corpus, std::size_t test_token_budget) {
  std::size_t cut = corpus.sentences.size();
  std::size_t used = 0;
  while (cut > 0 && used + corpus.sentences[cut - 1].size() <= test_token_budget) {
    used += corpus.sentences[cut - 1].size();
    --cut;
  }
  Corpus train, test;
  train.scheme = test.scheme = corpus.scheme;
  train.columns = test.columns = corpus.columns;
  train.sentences.assign(corpus.sentences.begin(), corpus.sentences.begin() + static_cast<std::ptrdiff_t>(cut));
  test.sentences.assign(corpus.sentences.begin() + static_cast<std::ptrdiff_t>(cut), corpus.sentences.end());
  return {std::move(train), std::move(test)};
}

}  // namespace seqtag
