#ifndef SEQTAG_INGEST_HPP
#define SEQTAG_INGEST_HPP

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "seqtag/corpus.hpp"

namespace seqtag {

// French BnF portion of the Europeana Newspapers NER corpora.
inline constexpr std::string_view kEuropeanaFrenchUrl =
    "https://raw.githubusercontent.com/EuropeanaNewspapers/ner-corpora/master/"
    "enp_FR.bnf.bio/enp_FR.bnf.bio";

struct DatasetDescriptor {
  std::string source_url;
  std::filesystem::path cache_path;    // cache root directory
  std::optional<std::string> sha256;   // pinned digest; overrides the manifest when set
};

// Returns the response body. Throws NetworkError.
using Downloader = std::function<std::string(const std::string& url)>;

// libcurl-backed downloader (http, https, file URLs).
Downloader curl_downloader();

struct FetchOptions {
  // Accept upstream changes: re-download and re-pin the digest.
  bool refresh = false;
  Downloader downloader;  // defaults to curl_downloader()
};

struct ManifestEntry {
  std::string sha256;
  std::size_t bytes = 0;

  bool operator==(const ManifestEntry&) const = default;
};

// <root>/manifest.tsv, one `url<TAB>sha256<TAB>bytes` line per dataset.
std::map<std::string, ManifestEntry> read_manifest(const std::filesystem::path& root);
void write_manifest(const std::filesystem::path& root, const std::map<std::string, ManifestEntry>& entries);

// $SEQTAG_CACHE, else $HOME/.cache/seqtag, else ./.seqtag-cache.
std::filesystem::path default_cache_root();

// <root>/<hostname>/<path>; file URLs use "localhost" as the host.
std::filesystem::path cache_location(const std::filesystem::path& root, std::string_view url);

std::string sha256_hex(std::string_view bytes);

// Throws NetworkError, ChecksumMismatch, IoError.
std::filesystem::path fetch_dataset(const DatasetDescriptor& desc, const FetchOptions& options = {});

// Test split is the longest suffix of whole sentences whose token count stays
// within the budget; train is the remaining prefix.
std::pair<Corpus, Corpus> split_train_test(const Corpus& corpus, std::size_t test_token_budget);

}  // namespace seqtag

#endif  // SEQTAG_INGEST_HPP
