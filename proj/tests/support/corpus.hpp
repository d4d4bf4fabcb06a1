#pragma once

#include <string>
#include <vector>

#include "auditcount/formula.hpp"

namespace auditcount::testsupport {

struct CorpusEntry {
  std::string file;
  std::string kind;
  int n = 0;
  std::uint64_t expected_count = 0;
  CnfFormula formula;
};

std::string data_path(const std::string& relative);
std::string read_file(const std::string& path);

/// Load tests/data/<dir> along with the frozen counts from its manifest.
std::vector<CorpusEntry> load_corpus(const std::string& dir = "corpus");

CnfFormula make_formula(int n, std::vector<Clause> clauses);

}  // namespace auditcount::testsupport
