#include "picode/codefile.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <json.hpp>

namespace pic::io {

using nlohmann::json;

void write_text_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("rename failed: " + path);
}

void write_code_file(const std::string& path, const CodewordTable& table,
                     const CodeMetadata& meta) {
  const CodeParams& p = table.params();
  json j;
  j["version"] = 1;
  j["params"] = {{"n", p.n}, {"q_p", p.q_p}, {"q_l", p.q_l}, {"t", p.t}};
  j["composition_order"] = "suffix-lex";
  json rows = json::array();
  for (int i = 0; i < table.num_rows(); ++i) {
    json row = json::array();
    for (const Complex& z : table.row(i))
      row.push_back(json::array({z.real(), z.imag()}));
    rows.push_back(std::move(row));
  }
  j["codewords"] = std::move(rows);
  json m = json::object();
  if (meta.seed) m["seed"] = *meta.seed;
  if (meta.cost) m["cost"] = *meta.cost;
  if (meta.generator) m["generator"] = *meta.generator;
  if (!m.empty()) j["metadata"] = std::move(m);
  write_text_atomic(path, j.dump(2) + "\n");
}

CodeFile read_code_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error("malformed code file " + path + ": " + e.what());
  }
  try {
    if (j.at("version").get<int>() != 1)
      throw std::runtime_error("unsupported version");
    if (j.at("composition_order").get<std::string>() != "suffix-lex")
      throw std::runtime_error("unsupported composition order");
    const auto& jp = j.at("params");
    CodeParams p{jp.at("n").get<int>(), jp.at("q_p").get<int>(),
                 jp.at("q_l").get<int>(), jp.at("t").get<int>()};
    p.validate();
    const int dim = p.dim();
    std::vector<std::vector<Complex>> rows;
    for (const auto& jr : j.at("codewords")) {
      std::vector<Complex> row;
      for (const auto& jz : jr) {
        if (!jz.is_array() || jz.size() != 2)
          throw std::runtime_error("entries must be [re, im] pairs");
        row.emplace_back(jz[0].get<double>(), jz[1].get<double>());
      }
      if (static_cast<int>(row.size()) != dim)
        throw std::runtime_error("row length does not match C(n+q_p-1, q_p-1)");
      rows.push_back(std::move(row));
    }
    if (static_cast<int>(rows.size()) != p.q_l)
      throw std::runtime_error("codeword count does not match q_l");
    CodeFile out{CodewordTable(p, std::move(rows)), {}};
    if (j.contains("metadata")) {
      const auto& m = j.at("metadata");
      if (m.contains("seed")) out.meta.seed = m.at("seed").get<std::uint64_t>();
      if (m.contains("cost")) out.meta.cost = m.at("cost").get<double>();
      if (m.contains("generator"))
        out.meta.generator = m.at("generator").get<std::string>();
    }
    return out;
  } catch (const json::exception& e) {
    throw std::runtime_error("malformed code file " + path + ": " + e.what());
  }
}

void write_manifest(const std::string& path, const std::string& command_line,
                    std::uint64_t seed, double wall_seconds,
                    const std::vector<std::string>& outputs) {
  json j;
  j["command"] = command_line;
  j["seed"] = seed;
#ifdef PICODE_BUILD_ID
  j["build"] = PICODE_BUILD_ID;
#else
  j["build"] = "unknown";
#endif
  j["wall_seconds"] = wall_seconds;
  j["outputs"] = outputs;
  write_text_atomic(path, j.dump(2) + "\n");
}

}  // namespace pic::io
