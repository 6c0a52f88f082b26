#ifndef SEQTAG_ERRORS_HPP
#define SEQTAG_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace seqtag {

// Base for every failure that stems from bad input data rather than misuse
// of the command line. The CLI maps these to exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MalformedRow : public DataError {
 public:
  explicit MalformedRow(std::size_t line_no)
      : DataError("malformed row at line " + std::to_string(line_no)), line_no(line_no) {}
  std::size_t line_no;
};

class EmptyInput : public DataError {
 public:
  EmptyInput() : DataError("input contains no token rows") {}
};

class InvalidTagForScheme : public DataError {
 public:
  InvalidTagForScheme(std::size_t position, const std::string& tag)
      : DataError("tag '" + tag + "' at position " + std::to_string(position) +
                  " is not legal for the scheme"),
        position(position), tag(tag) {}
  std::size_t position;
  std::string tag;
};

class OverlappingSpans : public DataError {
 public:
  OverlappingSpans() : DataError("entity spans overlap or fall outside the sentence") {}
};

class MissingTagKey : public DataError {
 public:
  explicit MissingTagKey(const std::string& tag)
      : DataError("tag '" + tag + "' has no entry in the token distribution"), tag(tag) {}
  std::string tag;
};

class UnknownLabel : public DataError {
 public:
  explicit UnknownLabel(const std::string& label)
      : DataError("label '" + label + "' is not in the model label set"), label(label) {}
  std::string label;
};

class EmptyCorpus : public DataError {
 public:
  EmptyCorpus() : DataError("training corpus is empty") {}
};

class FormatError : public DataError {
 public:
  FormatError(std::size_t line_no, const std::string& what)
      : DataError("model format error at line " + std::to_string(line_no) + ": " + what),
        line_no(line_no) {}
  std::size_t line_no;
};

class IoError : public DataError {
 public:
  using DataError::DataError;
};

class NetworkError : public DataError {
 public:
  using DataError::DataError;
};

class ChecksumMismatch : public DataError {
 public:
  ChecksumMismatch(const std::string& expected, const std::string& actual)
      : DataError("checksum mismatch: expected " + expected + ", got " + actual +
                  " (pass --refresh to accept the new data)"),
        expected(expected), actual(actual) {}
  std::string expected;
  std::string actual;
};

class AlignmentError : public DataError {
 public:
  AlignmentError(std::size_t sentence, std::size_t position)
      : DataError("gold and predicted corpora disagree at sentence " + std::to_string(sentence) +
                  ", position " + std::to_string(position)),
        sentence(sentence), position(position) {}
  std::size_t sentence;
  std::size_t position;
};

}  // namespace seqtag

#endif  // SEQTAG_ERRORS_HPP
