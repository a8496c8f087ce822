#include "conn/lexicon/sources.hpp"

#include <cmath>

#include "conn/core/error.hpp"
#include "conn/core/text.hpp"

namespace conn {

namespace {

void expect_fields(const std::string& path, std::size_t line, const std::vector<std::string>& f, std::size_t n) {
  if (f.size() != n)
    throw SchemaError(path, line, "expected " + std::to_string(n) + " tab-separated fields, got " + std::to_string(f.size()));
}

std::string headword(const std::string& path, std::size_t line, const std::string& raw) {
  std::string w = text::lower(text::trim(raw));
  if (w.empty()) throw SchemaError(path, line, "empty word");
  return w;
}

double finite(const std::string& path, std::size_t line, const std::string& raw) {
  const double v = text::parse_double(raw);
  if (!std::isfinite(v)) throw SchemaError(path, line, "non-finite score");
  return v;
}

}  // namespace

void read_hgi(const std::string& path, SourceSet& out) {
  text::for_each_tsv_row(path, [&](const std::vector<std::string>& f, std::size_t line) {
    expect_fields(path, line, f, 4);
    const auto pos = parse_pos(f[2]);
    if (!pos) throw SchemaError(path, line, "unknown part of speech '" + f[2] + "'");
    if (*pos == Pos::Verb) {
      ++out.skipped_rows;
      return;
    }
    HgiRecord r;
    r.word = headword(path, line, f[0]);
    r.sense = static_cast<int>(text::parse_int(f[1]));
    r.pos = *pos;
    for (const auto& c : text::split(f[3], ',')) {
      std::string t = text::lower(text::trim(c));
      if (!t.empty()) r.categories.push_back(std::move(t));
    }
    out.hgi.push_back(std::move(r));
  });
}

void read_dal(const std::string& path, SourceSet& out) {
  text::for_each_tsv_row(path, [&](const std::vector<std::string>& f, std::size_t line) {
    expect_fields(path, line, f, 2);
    out.dal.push_back({headword(path, line, f[0]), finite(path, line, f[1])});
  });
}

void read_cwn(const std::string& path, SourceSet& out) {
  text::for_each_tsv_row(path, [&](const std::vector<std::string>& f, std::size_t line) {
    expect_fields(path, line, f, 3);
    const auto pos = parse_pos(f[1]);
    if (!pos) throw SchemaError(path, line, "unknown part of speech '" + f[1] + "'");
    const double s = finite(path, line, f[2]);
    if (s < 0.0 || s > 1.0) throw SchemaError(path, line, "score outside [0,1]");
    if (*pos == Pos::Verb) {
      ++out.skipped_rows;
      return;
    }
    out.cwn.push_back({headword(path, line, f[0]), *pos, s});
  });
}

void read_nrc(const std::string& path, SourceSet& out) {
  text::for_each_tsv_row(path, [&](const std::vector<std::string>& f, std::size_t line) {
    expect_fields(path, line, f, 3);
    const std::string flag = text::trim(f[2]);
    if (flag != "0" && flag != "1") throw SchemaError(path, line, "flag must be 0 or 1");
    const auto idx = emotion_index(text::trim(f[1]));
    if (!idx) {
      // positive/negative sentiment columns are not emotions
      ++out.skipped_rows;
      return;
    }
    out.nrc.push_back({headword(path, line, f[0]), *idx, flag == "1"});
  });
}

}  // namespace conn
