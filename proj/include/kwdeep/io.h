#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "kwdeep/core.h"

namespace kwdeep {

/// Syntax or typing error in one of the text formats; line and column are 1-based.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& message);

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

// Schema file: one relation per line, `name(attr:Domain, attr:Domain^i, ...)`.
DatabaseSchema parse_schema(std::string_view text);
std::string serialize_schema(const DatabaseSchema& schema);

// Instance file: one tuple per line, `name(literal, literal, ...)`.  Domains
// come from the schema.
DatabaseInstance parse_instance(std::string_view text, const DatabaseSchema& schema);
std::string serialize_instance(const DatabaseInstance& instance);

// Comma-separated `literal:Domain` or bare `literal` items.
std::vector<Keyword> parse_keywords(std::string_view text);
KeywordQuery parse_query(std::string_view text);

std::string read_file(const std::string& path);

}  // namespace kwdeep
