#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace kwdeep {

enum class AccessMode { input, output };

/// A literal tagged with the abstract domain it belongs to.
struct Value {
    std::string domain;
    std::string literal;

    auto operator<=>(const Value&) const = default;
};

struct Attribute {
    std::string name;
    std::string domain;
    AccessMode mode = AccessMode::output;

    bool is_input() const { return mode == AccessMode::input; }
    bool operator==(const Attribute&) const = default;
};

/// A relation together with its (single) access pattern.
class RelationSchema {
public:
    RelationSchema(std::string name, std::vector<Attribute> attributes);

    const std::string& name() const { return name_; }
    const std::vector<Attribute>& attributes() const { return attributes_; }
    std::size_t arity() const { return attributes_.size(); }

    /// Positions of the input attributes, in attribute order.
    const std::vector<std::size_t>& input_positions() const { return inputs_; }
    bool is_input_free() const { return inputs_.empty(); }

    bool has_domain(const std::string& domain) const;
    bool has_output_domain(const std::string& domain) const;
    bool has_input_domain(const std::string& domain) const;
    /// True when two distinct attributes share a domain.
    bool has_repeated_domain() const;

    bool operator==(const RelationSchema& other) const {
        return name_ == other.name_ && attributes_ == other.attributes_;
    }

private:
    std::string name_;
    std::vector<Attribute> attributes_;
    std::vector<std::size_t> inputs_;
};

/// Relations plus the catalog of abstract domains.  The catalog always
/// contains every attribute domain; extra domains may be registered.
class DatabaseSchema {
public:
    DatabaseSchema() = default;
    explicit DatabaseSchema(std::vector<RelationSchema> relations,
                            std::set<std::string> extra_domains = {});

    const std::vector<RelationSchema>& relations() const { return relations_; }
    const std::set<std::string>& domains() const { return domains_; }
    std::size_t size() const { return relations_.size(); }

    const RelationSchema* find(const std::string& name) const;
    std::optional<std::size_t> index_of(const std::string& name) const;
    /// Throws std::out_of_range for unknown relations.
    const RelationSchema& at(const std::string& name) const;

    /// Domains that occur in at least one attribute.
    std::set<std::string> attribute_domains() const;

    /// Same catalog, only the named relations (schema order preserved).
    DatabaseSchema restricted_to(const std::set<std::string>& names) const;

    bool operator==(const DatabaseSchema& other) const {
        return relations_ == other.relations_ && domains_ == other.domains_;
    }

private:
    std::vector<RelationSchema> relations_;
    std::set<std::string> domains_;
    std::unordered_map<std::string, std::size_t> index_;
};

/// A tuple over a relation.  Ordered and compared by its canonical text,
/// e.g. `r1(IT, John)`.
class Tuple {
public:
    Tuple(std::string relation, std::vector<Value> values);

    const std::string& relation() const { return relation_; }
    const std::vector<Value>& values() const { return values_; }
    const std::string& text() const { return text_; }

    bool contains(const Value& v) const;
    bool contains_literal(const std::string& literal) const;

    bool operator==(const Tuple& other) const {
        return relation_ == other.relation_ && values_ == other.values_;
    }
    std::strong_ordering operator<=>(const Tuple& other) const;

private:
    std::string relation_;
    std::vector<Value> values_;
    std::string text_;
};

/// Per-relation duplicate-free tuple sets in canonical order.
class DatabaseInstance {
public:
    /// Returns false when the tuple was already present.
    bool add(Tuple t);

    const std::vector<Tuple>& tuples(const std::string& relation) const;
    const std::map<std::string, std::vector<Tuple>>& relations() const { return relations_; }
    std::vector<Tuple> all_tuples() const;
    std::size_t size() const;

    bool operator==(const DatabaseInstance&) const = default;

private:
    std::map<std::string, std::vector<Tuple>> relations_;
};

/// One value per input attribute of a relation, in attribute order.
struct Binding {
    std::string relation;
    std::vector<Value> values;

    /// Restriction of a tuple to the relation's input attributes.
    static Binding from_tuple(const RelationSchema& relation, const Tuple& t);

    std::string text() const;
    auto operator<=>(const Binding&) const = default;
};

/// Throws std::invalid_argument when the binding does not fit the relation.
void check_binding(const RelationSchema& relation, const Binding& binding);

/// A keyword literal, optionally tagged with its domain.
struct Keyword {
    std::string literal;
    std::optional<std::string> domain;

    bool typed() const { return domain.has_value(); }
    /// Typed keywords match on (domain, literal); untyped ones on the literal.
    bool matches(const Value& v) const;
    std::string text() const;

    auto operator<=>(const Keyword&) const = default;
};

class KeywordQuery {
public:
    /// Throws std::invalid_argument when empty.  Duplicates are dropped,
    /// first occurrence order is kept.
    explicit KeywordQuery(std::vector<Keyword> keywords);

    const std::vector<Keyword>& keywords() const { return keywords_; }
    std::size_t size() const { return keywords_.size(); }
    bool all_typed() const;
    bool any_untyped() const;
    std::string text() const;

private:
    std::vector<Keyword> keywords_;
};

struct ValidationReport {
    std::vector<std::string> violations;

    bool ok() const { return violations.empty(); }
};

ValidationReport validate_schema(const DatabaseSchema& schema);

/// Type-checks every tuple and enforces domain disjointness across the
/// instance and, when given, the typed keywords of the query.
ValidationReport validate_instance(const DatabaseSchema& schema, const DatabaseInstance& instance,
                                   const KeywordQuery* query = nullptr);

/// Literal as written in the text formats: bare when unambiguous, otherwise
/// double-quoted with backslash escapes.
std::string quote_literal(const std::string& literal);

/// Sorts by canonical text and removes duplicates.
void canonicalize(std::vector<Tuple>& tuples);

}  // namespace kwdeep
