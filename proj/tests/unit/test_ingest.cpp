#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "seqtag/errors.hpp"
#include "seqtag/ingest.hpp"
#include "test_support.hpp"

using namespace seqtag;
namespace fs = std::filesystem;

namespace {

const char* kUrl = "https://example.org/data/enp_FR.bio";

fs::path fresh_dir(const char* name) {
  auto dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

struct CountingDownloader {
  std::string body;
  int calls = 0;
  Downloader fn() {
    return [this](const std::string&) {
      ++calls;
      return body;
    };
  }
};

std::vector<std::size_t> lengths(const Corpus& c) {
  std::vector<std::size_t> out;
  for (const auto& s : c.sentences) out.push_back(s.size());
  return out;
}

Corpus sized(const std::vector<std::size_t>& sizes) {
  Corpus c;
  for (std::size_t n : sizes) c.sentences.push_back(Sentence{std::vector<Token>(n, Token{"w", {}, "O"})});
  return c;
}

}  // namespace

TEST_CASE("sha256 of a known vector") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("cache layout follows host and path") {
  fs::path root("/cache");
  CHECK(cache_location(root, "https://raw.githubusercontent.com/a/b/c.bio") ==
        fs::path("/cache/raw.githubusercontent.com/a/b/c.bio"));
  CHECK(cache_location(root, "file:///tmp/x.conll") == fs::path("/cache/localhost/tmp/x.conll"));
  CHECK(cache_location(root, "https://h:8443/../../etc/passwd?x=1") == fs::path("/cache/h/etc/passwd"));
}

TEST_CASE("first fetch downloads and pins; warm cache makes no calls and no writes") {
  auto root = fresh_dir("seqtag_ingest_warm");
  CountingDownloader dl{"Oui O\n"};
  FetchOptions opts;
  opts.downloader = dl.fn();
  DatasetDescriptor desc{kUrl, root, std::nullopt};

  fs::path path = fetch_dataset(desc, opts);
  CHECK(dl.calls == 1);
  CHECK(read_text_file(path.string()) == "Oui O\n");
  auto manifest = read_manifest(root);
  CHECK(manifest.at(kUrl) == ManifestEntry{sha256_hex("Oui O\n"), 6});

  auto manifest_time = fs::last_write_time(root / "manifest.tsv");
  auto data_time = fs::last_write_time(path);
  for (int i = 0; i < 2; ++i) CHECK(fetch_dataset(desc, opts) == path);
  CHECK(dl.calls == 1);
  CHECK(fs::last_write_time(root / "manifest.tsv") == manifest_time);
  CHECK(fs::last_write_time(path) == data_time);
  for (const auto& entry : fs::recursive_directory_iterator(root))
    CHECK(entry.path().extension() != ".tmp");
  fs::remove_all(root);
}

TEST_CASE("tampered cache raises ChecksumMismatch until refreshed") {
  auto root = fresh_dir("seqtag_ingest_tamper");
  CountingDownloader dl{"Oui O\n"};
  FetchOptions opts;
  opts.downloader = dl.fn();
  DatasetDescriptor desc{kUrl, root, std::nullopt};
  fs::path path = fetch_dataset(desc, opts);
  std::ofstream(path, std::ios::trunc) << "Non O\n";
  try {
    fetch_dataset(desc, opts);
    FAIL("expected ChecksumMismatch");
  } catch (const ChecksumMismatch& e) {
    CHECK(e.expected == sha256_hex("Oui O\n"));
    CHECK(e.actual == sha256_hex("Non O\n"));
  }

  dl.body = "Autre O\n";
  opts.refresh = true;
  fetch_dataset(desc, opts);
  CHECK(dl.calls == 2);
  CHECK(read_manifest(root).at(kUrl).sha256 == sha256_hex("Autre O\n"));
  fs::remove_all(root);
}

TEST_CASE("an explicit digest is enforced on download") {
  auto root = fresh_dir("seqtag_ingest_pinned");
  CountingDownloader dl{"Oui O\n"};
  FetchOptions opts;
  opts.downloader = dl.fn();
  DatasetDescriptor desc{kUrl, root, std::string(64, '0')};
  CHECK_THROWS_AS(fetch_dataset(desc, opts), ChecksumMismatch);
  CHECK_FALSE(fs::exists(cache_location(root, kUrl)));
  desc.sha256 = sha256_hex("Oui O\n");
  CHECK_NOTHROW(fetch_dataset(desc, opts));
  fs::remove_all(root);
}

TEST_CASE("libcurl fetches file URLs and reports failures") {
  auto root = fresh_dir("seqtag_ingest_curl");
  auto source = root / "source.conll";
  std::ofstream(source) << "Brandi I-PER\n";
  DatasetDescriptor desc{"file://" + source.string(), root / "cache", std::nullopt};
  fs::path path = fetch_dataset(desc);
  CHECK(read_text_file(path.string()) == "Brandi I-PER\n");

  DatasetDescriptor missing{"file://" + (root / "nope").string(), root / "cache", std::nullopt};
  CHECK_THROWS_AS(fetch_dataset(missing), NetworkError);
  fs::remove_all(root);
}

TEST_CASE("split_train_test takes the longest suffix within budget") {
  Corpus c = sized({5, 5, 5});
  auto [train0, test0] = split_train_test(c, 0);
  CHECK(test0.sentences.empty());
  CHECK(train0.sentences.size() == 3);

  auto [train7, test7] = split_train_test(c, 7);
  CHECK(lengths(test7) == std::vector<std::size_t>{5});
  CHECK(lengths(train7) == std::vector<std::size_t>{5, 5});

  Corpus mixed = sized({3, 9, 2, 4, 1});
  auto [train, test] = split_train_test(mixed, 8);
  CHECK(lengths(test) == std::vector<std::size_t>{2, 4, 1});
  std::vector<Sentence> joined = train.sentences;
  joined.insert(joined.end(), test.sentences.begin(), test.sentences.end());
  CHECK(joined == mixed.sentences);

  auto [all_train, all_test] = split_train_test(mixed, 1000);
  CHECK(all_train.sentences.empty());
  CHECK(all_test.sentences.size() == 5);
}
