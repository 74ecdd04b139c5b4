#ifndef PYTS_TEST_CORPUS_HPP
#define PYTS_TEST_CORPUS_HPP

#include <fstream>
#include <sstream>
#include <string>

namespace pyts::testing {

inline std::string source_path(const std::string& rel) { return std::string(PYTS_SOURCE_DIR) + "/" + rel; }

inline std::string corpus_path(const std::string& name) { return source_path("corpus/" + name); }

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline std::string corpus(const std::string& name) { return read_text(corpus_path(name)); }

}  // namespace pyts::testing

#endif
