#include "ogb/stream.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

namespace ogb {

Stream::Stream(std::vector<Example> examples, LossClass loss, std::string source)
    : examples_(std::move(examples)), loss_(loss), source_(std::move(source)) {
  for (std::size_t t = 0; t < examples_.size(); ++t) {
    if (!examples_[t].label()) {
      throw std::invalid_argument("stream example " + std::to_string(t) + " has no label");
    }
    if (examples_[t].index() != t) examples_[t] = examples_[t].with_index(t);
  }
}

LossInstance Stream::loss_at(std::size_t t) const { return LossInstance(loss_, *at(t).label()); }

StreamFormat parse_format(const std::string& name) {
  if (name == "libsvm") return StreamFormat::libsvm;
  if (name == "csv") return StreamFormat::csv;
  throw std::invalid_argument("unknown stream format '" + name + "' (expected libsvm or csv)");
}

LabelRange parse_label_range(const std::string& name) {
  if (name == "none" || name.empty()) return LabelRange::none;
  if (name == "[-1,1]" || name == "-1,1" || name == "symmetric") return LabelRange::symmetric;
  if (name == "[0,1]" || name == "0,1" || name == "unit") return LabelRange::unit;
  throw std::invalid_argument("unknown label range '" + name + "' (expected [-1,1], [0,1] or none)");
}

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

std::optional<double> to_double(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<FeatureId> to_id(std::string_view s) {
  FeatureId v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string_view> tokens(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const std::size_t b = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > b) out.push_back(s.substr(b, i - b));
  }
  return out;
}

struct RawRow {
  std::size_t line = 0;
  double label = 0.0;
  Example example;
};

// Returns true for a `# labels: lo hi` header and fills the bounds.
bool label_header(std::string_view line, std::size_t number,
                  std::optional<std::pair<double, double>>& bounds) {
  line = trim(line.substr(1));
  constexpr std::string_view key = "labels:";
  if (!line.starts_with(key)) return false;
  const auto parts = tokens(line.substr(key.size()));
  if (parts.size() != 2) throw ParseError(number, "label header needs two numbers");
  const auto lo = to_double(parts[0]);
  const auto hi = to_double(parts[1]);
  if (!lo || !hi || !(*lo <= *hi)) throw ParseError(number, "bad label header bounds");
  bounds = std::make_pair(*lo, *hi);
  return true;
}

RawRow parse_libsvm_line(std::string_view line, std::size_t number) {
  const auto parts = tokens(line);
  RawRow row;
  row.line = number;
  const auto label = to_double(parts.front());
  if (!label || !std::isfinite(*label)) {
    throw ParseError(number, "non-numeric label '" + std::string(parts.front()) + "'");
  }
  row.label = *label;
  std::vector<Feature> ids;
  std::vector<std::pair<std::string, double>> named;
  bool all_ids = true;
  for (std::size_t k = 1; k < parts.size(); ++k) {
    const auto colon = parts[k].rfind(':');
    if (colon == std::string_view::npos || colon == 0) {
      throw ParseError(number, "expected key:value, got '" + std::string(parts[k]) + "'");
    }
    const auto key = parts[k].substr(0, colon);
    const auto value = to_double(parts[k].substr(colon + 1));
    if (!value || !std::isfinite(*value)) {
      throw ParseError(number, "bad feature value in '" + std::string(parts[k]) + "'");
    }
    named.emplace_back(std::string(key), *value);
    if (const auto id = to_id(key)) {
      ids.push_back({*id, *value});
    } else {
      all_ids = false;
    }
  }
  try {
    row.example = all_ids ? Example(std::move(ids)) : Example::from_named(named);
  } catch (const std::invalid_argument& e) {
    throw ParseError(number, e.what());
  }
  return row;
}

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

Stream parse_stream(std::istream& in, const ParseOptions& options, const std::string& source) {
  std::optional<std::pair<double, double>> bounds;
  std::vector<RawRow> rows;
  std::vector<std::string> header;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string_view view = trim(line);
    if (view.empty()) continue;
    if (view.front() == '#') {
      label_header(view, number, bounds);
      continue;
    }
    if (options.format == StreamFormat::libsvm) {
      rows.push_back(parse_libsvm_line(view, number));
      continue;
    }
    const auto cells = split(view, ',');
    if (header.empty()) {
      for (auto c : cells) header.emplace_back(trim(c));
      if (header.size() < 1) throw ParseError(number, "empty CSV header");
      continue;
    }
    if (cells.size() != header.size()) {
      throw ParseError(number, "expected " + std::to_string(header.size()) + " columns, got " +
                                   std::to_string(cells.size()));
    }
    RawRow row;
    row.line = number;
    const auto label = to_double(cells[0]);
    if (!label || !std::isfinite(*label)) {
      throw ParseError(number, "non-numeric label '" + std::string(trim(cells[0])) + "'");
    }
    row.label = *label;
    std::vector<std::pair<std::string, double>> named;
    for (std::size_t k = 1; k < cells.size(); ++k) {
      if (trim(cells[k]).empty()) continue;
      const auto v = to_double(cells[k]);
      if (!v || !std::isfinite(*v)) {
        throw ParseError(number, "bad value in column '" + header[k] + "'");
      }
      if (*v != 0.0) named.emplace_back(header[k], *v);
    }
    try {
      row.example = Example::from_named(named);
    } catch (const std::invalid_argument& e) {
      throw ParseError(number, e.what());
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(number, "stream contains no examples");

  double lo = 0.0, hi = 0.0;
  if (bounds) {
    std::tie(lo, hi) = *bounds;
  } else {
    lo = hi = rows.front().label;
    for (const auto& r : rows) {
      lo = std::min(lo, r.label);
      hi = std::max(hi, r.label);
    }
  }
  double target_lo = lo, target_hi = hi;
  if (options.range == LabelRange::symmetric) target_lo = -1.0, target_hi = 1.0;
  if (options.range == LabelRange::unit) target_lo = 0.0, target_hi = 1.0;
  const bool identity = options.range == LabelRange::none || (lo == target_lo && hi == target_hi);

  std::vector<Example> examples;
  examples.reserve(rows.size());
  for (std::size_t t = 0; t < rows.size(); ++t) {
    const auto& r = rows[t];
    if (bounds && (r.label < lo || r.label > hi)) {
      throw ParseError(r.line, "label outside the declared header range");
    }
    double y = r.label;
    if (!identity) {
      y = hi == lo ? 0.5 * (target_lo + target_hi)
                   : target_lo + (r.label - lo) * (target_hi - target_lo) / (hi - lo);
      y = std::clamp(y, target_lo, target_hi);
    }
    examples.push_back(r.example.with_label(Prediction{y}).with_index(t));
  }
  return Stream(std::move(examples), options.loss, source);
}

Stream parse_stream_file(const std::string& path, const ParseOptions& options) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open stream file '" + path + "'");
  return parse_stream(in, options, path);
}

void serialize_stream(std::ostream& out, const Stream& stream, StreamFormat format) {
  if (stream.empty()) throw std::invalid_argument("cannot serialize an empty stream");
  for (const auto& x : stream) {
    if (x.label()->dim() != 1) throw std::invalid_argument("only scalar labels can be serialized");
  }
  if (format == StreamFormat::libsvm) {
    for (const auto& x : stream) {
      out << format_double((*x.label())[0]);
      const auto names = x.feature_names();
      const auto feats = x.features();
      for (std::size_t k = 0; k < feats.size(); ++k) {
        out << ' ' << (names.empty() ? std::to_string(feats[k].id) : names[k]) << ':'
            << format_double(feats[k].value);
      }
      out << '\n';
    }
    return;
  }
  // CSV needs names; integer-keyed features are written as their decimal id.
  std::map<std::string, std::size_t> columns;
  auto key = [](const Example& x, std::size_t k) {
    return x.feature_names().empty() ? std::to_string(x.features()[k].id) : x.feature_names()[k];
  };
  for (const auto& x : stream) {
    for (std::size_t k = 0; k < x.features().size(); ++k) columns.emplace(key(x, k), 0);
  }
  std::size_t col = 0;
  out << "label";
  for (auto& [name, index] : columns) {
    index = col++;
    out << ',' << name;
  }
  out << '\n';
  std::vector<std::string> cells(columns.size());
  for (const auto& x : stream) {
    std::fill(cells.begin(), cells.end(), "0");
    for (std::size_t k = 0; k < x.features().size(); ++k) {
      cells[columns.at(key(x, k))] = format_double(x.features()[k].value);
    }
    out << format_double((*x.label())[0]);
    for (const auto& c : cells) out << ',' << c;
    out << '\n';
  }
}

}  // namespace ogb
