#include "kwdeep/io.h"

#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>

namespace kwdeep {

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

namespace {

bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.' || c == '\'';
}

/// Cursor over a single line.
class LineScanner {
public:
    LineScanner(std::string_view line, std::size_t line_no) : line_(line), line_no_(line_no) {}

    void skip_ws() {
        while (pos_ < line_.size() && std::isspace(static_cast<unsigned char>(line_[pos_]))) ++pos_;
    }
    bool at_end() {
        skip_ws();
        return pos_ >= line_.size();
    }
    std::optional<char> peek() {
        skip_ws();
        if (pos_ >= line_.size()) return std::nullopt;
        return line_[pos_];
    }
    bool accept(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    std::string identifier(const char* what) {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < line_.size() && is_ident_char(line_[pos_])) ++pos_;
        if (start == pos_) fail(std::string("expected ") + what);
        return std::string(line_.substr(start, pos_ - start));
    }

    /// Quoted string, or bare token ending at one of `stops` (trailing spaces trimmed).
    std::string literal(std::string_view stops) {
        skip_ws();
        if (pos_ < line_.size() && line_[pos_] == '"') return quoted();
        std::size_t start = pos_;
        while (pos_ < line_.size() && stops.find(line_[pos_]) == std::string_view::npos) {
            char c = line_[pos_];
            if (c == '(' || c == ')' || c == '"') fail(std::string("unexpected '") + c + "' in literal");
            ++pos_;
        }
        std::size_t end = pos_;
        while (end > start && std::isspace(static_cast<unsigned char>(line_[end - 1]))) --end;
        if (end == start) fail("expected literal");
        return std::string(line_.substr(start, end - start));
    }

    [[noreturn]] void fail(const std::string& message) const { throw ParseError(line_no_, pos_ + 1, message); }

private:
    std::string quoted() {
        ++pos_;  // opening quote
        std::string out;
        while (pos_ < line_.size()) {
            char c = line_[pos_++];
            if (c == '"') return out;
            if (c == '\\') {
                if (pos_ >= line_.size()) break;
                char e = line_[pos_++];
                switch (e) {
                    case 'n': out += '\n'; break;
                    case 't': out += '\t'; break;
                    case '"':
                    case '\\': out += e; break;
                    default: --pos_; fail(std::string("unknown escape '\\") + e + "'");
                }
                continue;
            }
            out += c;
        }
        fail("unterminated string");
    }

    std::string_view line_;
    std::size_t line_no_;
    std::size_t pos_ = 0;
};

template <typename F>
void for_each_line(std::string_view text, F&& f) {
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        auto line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        ++line_no;
        std::size_t first = line.find_first_not_of(" \t");
        if (first != std::string_view::npos && line[first] != '#') f(line, line_no);
        if (end == text.size()) break;
        start = end + 1;
    }
}

}  // namespace

DatabaseSchema parse_schema(std::string_view text) {
    std::vector<RelationSchema> relations;
    for_each_line(text, [&](std::string_view line, std::size_t line_no) {
        LineScanner s(line, line_no);
        auto name = s.identifier("relation name");
        s.expect('(');
        std::vector<Attribute> attrs;
        if (!s.accept(')')) {
            do {
                Attribute a;
                a.name = s.identifier("attribute name");
                s.expect(':');
                a.domain = s.identifier("domain name");
                if (s.accept('^')) {
                    auto mode = s.identifier("access mode");
                    if (mode == "i") {
                        a.mode = AccessMode::input;
                    } else if (mode == "o") {
                        a.mode = AccessMode::output;
                    } else {
                        s.fail("access mode must be 'i' or 'o'");
                    }
                }
                attrs.push_back(std::move(a));
            } while (s.accept(','));
            s.expect(')');
        }
        if (!s.at_end()) s.fail("trailing characters after relation");
        relations.emplace_back(std::move(name), std::move(attrs));
    });
    return DatabaseSchema(std::move(relations));
}

std::string serialize_schema(const DatabaseSchema& schema) {
    std::ostringstream out;
    for (const auto& r : schema.relations()) {
        out << r.name() << '(';
        for (std::size_t i = 0; i < r.arity(); ++i) {
            const auto& a = r.attributes()[i];
            if (i > 0) out << ", ";
            out << a.name << ':' << a.domain;
            if (a.is_input()) out << "^i";
        }
        out << ")\n";
    }
    return out.str();
}

DatabaseInstance parse_instance(std::string_view text, const DatabaseSchema& schema) {
    DatabaseInstance instance;
    for_each_line(text, [&](std::string_view line, std::size_t line_no) {
        LineScanner s(line, line_no);
        auto name = s.identifier("relation name");
        const auto* rel = schema.find(name);
        if (rel == nullptr) s.fail("unknown relation '" + name + "'");
        s.expect('(');
        std::vector<Value> values;
        if (!s.accept(')')) {
            do {
                auto lit = s.literal(",)");
                if (values.size() >= rel->arity())
                    s.fail("too many values for '" + name + "' (arity " + std::to_string(rel->arity()) + ")");
                values.push_back(Value{rel->attributes()[values.size()].domain, std::move(lit)});
            } while (s.accept(','));
            s.expect(')');
        }
        if (values.size() != rel->arity())
            s.fail("'" + name + "' expects " + std::to_string(rel->arity()) + " values, got " +
                   std::to_string(values.size()));
        if (!s.at_end()) s.fail("trailing characters after tuple");
        instance.add(Tuple(name, std::move(values)));
    });
    return instance;
}

std::string serialize_instance(const DatabaseInstance& instance) {
    std::string out;
    for (const auto& [_, tuples] : instance.relations()) {
        for (const auto& t : tuples) {
            out += t.text();
            out += '\n';
        }
    }
    return out;
}

std::vector<Keyword> parse_keywords(std::string_view text) {
    std::vector<Keyword> out;
    LineScanner s(text, 1);
    if (s.at_end()) return out;
    do {
        Keyword k;
        k.literal = s.literal(",:");
        if (s.accept(':')) k.domain = s.identifier("domain name");
        out.push_back(std::move(k));
    } while (s.accept(','));
    if (!s.at_end()) s.fail("trailing characters after keyword list");
    return out;
}

KeywordQuery parse_query(std::string_view text) {
    auto keywords = parse_keywords(text);
    if (keywords.empty()) throw ParseError(1, 1, "empty keyword query");
    return KeywordQuery(std::move(keywords));
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace kwdeep
