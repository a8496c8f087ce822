#pragma once

#include <string>
#include <vector>

#include "conn/lexicon/aspect.hpp"

namespace conn {

// Normalized source records, one per TSV line.

struct HgiRecord {
  std::string word;
  int sense = 1;
  Pos pos = Pos::Noun;
  std::vector<std::string> categories;  // lowercased
};

struct DalRecord {
  std::string word;
  double imagery = 0.0;
};

struct CwnRecord {
  std::string word;
  Pos pos = Pos::Noun;
  double score = 0.5;  // in [0,1]
};

struct NrcRecord {
  std::string word;
  std::size_t emotion = 0;  // index into kEmotionNames
  bool flag = false;
};

struct SourceSet {
  std::vector<HgiRecord> hgi;
  std::vector<DalRecord> dal;
  std::vector<CwnRecord> cwn;
  std::vector<NrcRecord> nrc;
  /// Rows skipped while reading (unsupported POS, non-Plutchik NRC columns).
  std::size_t skipped_rows = 0;
};

// Readers throw SchemaError with file:line on malformed rows.
// hgi.tsv  word<TAB>sense<TAB>pos<TAB>cat1,cat2,...
void read_hgi(const std::string& path, SourceSet& out);
// dal.tsv  word<TAB>imagery
void read_dal(const std::string& path, SourceSet& out);
// cwn.tsv  word<TAB>pos<TAB>score
void read_cwn(const std::string& path, SourceSet& out);
// nrc.tsv  word<TAB>emotion<TAB>0|1
void read_nrc(const std::string& path, SourceSet& out);

}  // namespace conn
