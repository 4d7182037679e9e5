#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "picode/code_table.hpp"

namespace pic::io {

struct CodeMetadata {
  std::optional<std::uint64_t> seed;
  std::optional<double> cost;
  std::optional<std::string> generator;
};

/// Writes the JSON code format (version 1, suffix-lex composition order,
/// entries as [re, im] pairs).  The file is written atomically.
void write_code_file(const std::string& path, const CodewordTable& table,
                     const CodeMetadata& meta = {});

struct CodeFile {
  CodewordTable table;
  CodeMetadata meta;
};

/// Parses and validates a code file; throws std::runtime_error on malformed
/// input (bad version, wrong composition order, ragged rows).
CodeFile read_code_file(const std::string& path);

/// Appends nothing, replaces: one manifest per artifact-producing command.
void write_manifest(const std::string& path, const std::string& command_line,
                    std::uint64_t seed, double wall_seconds,
                    const std::vector<std::string>& outputs);

/// Atomic text-file write (temp file + rename).
void write_text_atomic(const std::string& path, const std::string& content);

}  // namespace pic::io
