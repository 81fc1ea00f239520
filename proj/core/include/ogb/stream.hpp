#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ogb/core.hpp"
#include "ogb/losses.hpp"

namespace ogb {

/// A replayable labelled sequence; round t uses loss(label_t, .).
class Stream {
 public:
  Stream() = default;
  /// Every example must carry a label. Example indices are rewritten to 0..T-1.
  Stream(std::vector<Example> examples, LossClass loss, std::string source = "memory");

  std::size_t size() const noexcept { return examples_.size(); }
  bool empty() const noexcept { return examples_.empty(); }
  const Example& operator[](std::size_t t) const { return examples_[t]; }
  const Example& at(std::size_t t) const { return examples_.at(t); }
  LossInstance loss_at(std::size_t t) const;

  const LossClass& loss() const noexcept { return loss_; }
  const std::string& source() const noexcept { return source_; }
  std::vector<Example>::const_iterator begin() const { return examples_.begin(); }
  std::vector<Example>::const_iterator end() const { return examples_.end(); }

  friend bool operator==(const Stream& a, const Stream& b) {
    return a.examples_ == b.examples_ && a.loss_ == b.loss_;
  }

 private:
  std::vector<Example> examples_;
  LossClass loss_ = LossClass::squared();
  std::string source_;
};

enum class StreamFormat { libsvm, csv };
enum class LabelRange { none, symmetric, unit };  // as-is, [-1, 1], [0, 1]

StreamFormat parse_format(const std::string& name);
LabelRange parse_label_range(const std::string& name);

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

struct ParseOptions {
  StreamFormat format = StreamFormat::libsvm;
  LabelRange range = LabelRange::none;
  LossClass loss = LossClass::squared();
};

/// Reads a libsvm (`label id:value ...`) or CSV (`label,f1,f2,...` header) stream.
///
/// Labels are mapped affinely from [lo, hi] onto the requested range, where
/// lo/hi come from a `# labels: lo hi` comment line if present and from a scan
/// of the data otherwise. Other `#` lines and blank lines are skipped. Integer
/// libsvm keys become feature ids directly; any other key is hashed by name.
/// Throws ParseError (with the 1-based line number) on malformed input and on
/// a stream without examples.
Stream parse_stream(std::istream& in, const ParseOptions& options, const std::string& source = "input");
Stream parse_stream_file(const std::string& path, const ParseOptions& options);

/// Writes a stream in the given format with full-precision numbers. Parsing the
/// output with LabelRange::none gives back an equal stream; for CSV this needs
/// named features, since integer ids are written as column names and re-hashed.
void serialize_stream(std::ostream& out, const Stream& stream, StreamFormat format);

}  // namespace ogb
