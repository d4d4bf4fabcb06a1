#include "support/corpus.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace auditcount::testsupport {

std::string data_path(const std::string& relative) {
  return std::string(AUDITCOUNT_DATA_DIR) + "/" + relative;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<CorpusEntry> load_corpus(const std::string& dir) {
  auto manifest =
      nlohmann::json::parse(read_file(data_path(dir + "/manifest.json")));
  std::vector<CorpusEntry> out;
  for (const auto& e : manifest.at("formulas")) {
    CorpusEntry entry;
    entry.file = e.at("file").get<std::string>();
    entry.kind = e.value("kind", "");
    entry.n = e.at("n").get<int>();
    entry.expected_count = e.at("count").get<std::uint64_t>();
    entry.formula = parse_dimacs(read_file(data_path(dir + "/" + entry.file)));
    entry.formula.name = entry.file;
    out.push_back(std::move(entry));
  }
  return out;
}

CnfFormula make_formula(int n, std::vector<Clause> clauses) {
  std::string text = "p cnf " + std::to_string(n) + " " +
                     std::to_string(clauses.size()) + "\n";
  for (const Clause& cl : clauses) {
    for (int lit : cl) text += std::to_string(lit) + " ";
    text += "0\n";
  }
  return parse_dimacs(text);
}

}  // namespace auditcount::testsupport
