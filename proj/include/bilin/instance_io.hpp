#pragma once

#include "bilin/ar.hpp"
#include "bilin/pdb.hpp"

#include <string>
#include <string_view>
#include <variant>

namespace bilin {

/// Text instance files, `format_version: 1`. See docs/instance-format.md.
/// Numbers carry 17 significant digits, so write -> parse is exact.
std::string write_instance(const PdbInstance& inst);
std::string write_instance(const ArInstance& inst);

using AnyInstance = std::variant<PdbInstance, ArInstance>;

/// Throws kParseError with a line number on malformed input.
AnyInstance parse_instance(std::string_view text);

AnyInstance read_instance_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);
std::string read_text_file(const std::string& path);

}  // namespace bilin
