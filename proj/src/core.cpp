#include "kwdeep/core.h"

#include <algorithm>
#include <cctype>

namespace kwdeep {

RelationSchema::RelationSchema(std::string name, std::vector<Attribute> attributes)
    : name_(std::move(name)), attributes_(std::move(attributes)) {
    for (std::size_t i = 0; i < attributes_.size(); ++i) {
        if (attributes_[i].is_input()) inputs_.push_back(i);
    }
}

bool RelationSchema::has_domain(const std::string& domain) const {
    return std::ranges::any_of(attributes_, [&](const Attribute& a) { return a.domain == domain; });
}

bool RelationSchema::has_output_domain(const std::string& domain) const {
    return std::ranges::any_of(
        attributes_, [&](const Attribute& a) { return !a.is_input() && a.domain == domain; });
}

bool RelationSchema::has_input_domain(const std::string& domain) const {
    return std::ranges::any_of(
        attributes_, [&](const Attribute& a) { return a.is_input() && a.domain == domain; });
}

bool RelationSchema::has_repeated_domain() const {
    for (std::size_t i = 0; i < attributes_.size(); ++i)
        for (std::size_t j = i + 1; j < attributes_.size(); ++j)
            if (attributes_[i].domain == attributes_[j].domain) return true;
    return false;
}

DatabaseSchema::DatabaseSchema(std::vector<RelationSchema> relations, std::set<std::string> extra_domains)
    : relations_(std::move(relations)), domains_(std::move(extra_domains)) {
    for (std::size_t i = 0; i < relations_.size(); ++i) {
        index_.try_emplace(relations_[i].name(), i);
        for (const auto& a : relations_[i].attributes()) domains_.insert(a.domain);
    }
}

const RelationSchema* DatabaseSchema::find(const std::string& name) const {
    auto it = index_.find(name);
    return it == index_.end() ? nullptr : &relations_[it->second];
}

std::optional<std::size_t> DatabaseSchema::index_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

const RelationSchema& DatabaseSchema::at(const std::string& name) const {
    const auto* r = find(name);
    if (r == nullptr) throw std::out_of_range("unknown relation '" + name + "'");
    return *r;
}

std::set<std::string> DatabaseSchema::attribute_domains() const {
    std::set<std::string> out;
    for (const auto& r : relations_)
        for (const auto& a : r.attributes()) out.insert(a.domain);
    return out;
}

DatabaseSchema DatabaseSchema::restricted_to(const std::set<std::string>& names) const {
    std::vector<RelationSchema> kept;
    for (const auto& r : relations_)
        if (names.contains(r.name())) kept.push_back(r);
    return DatabaseSchema(std::move(kept), domains_);
}

std::string quote_literal(const std::string& literal) {
    bool bare = !literal.empty() && literal.front() != '#';
    for (char c : literal) {
        if (std::isspace(static_cast<unsigned char>(c)) || c == ',' || c == '(' || c == ')' || c == '"' ||
            c == '\\' || c == ':') {
            bare = false;
            break;
        }
    }
    if (bare) return literal;
    std::string out = "\"";
    for (char c : literal) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    out += '"';
    return out;
}

Tuple::Tuple(std::string relation, std::vector<Value> values)
    : relation_(std::move(relation)), values_(std::move(values)) {
    text_ = relation_ + "(";
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (i > 0) text_ += ", ";
        text_ += quote_literal(values_[i].literal);
    }
    text_ += ")";
}

bool Tuple::contains(const Value& v) const { return std::ranges::find(values_, v) != values_.end(); }

bool Tuple::contains_literal(const std::string& literal) const {
    return std::ranges::any_of(values_, [&](const Value& v) { return v.literal == literal; });
}

std::strong_ordering Tuple::operator<=>(const Tuple& other) const {
    if (auto c = text_ <=> other.text_; c != 0) return c;
    if (auto c = relation_ <=> other.relation_; c != 0) return c;
    return values_ <=> other.values_;
}

bool DatabaseInstance::add(Tuple t) {
    auto& bucket = relations_[t.relation()];
    auto it = std::ranges::lower_bound(bucket, t);
    if (it != bucket.end() && *it == t) return false;
    bucket.insert(it, std::move(t));
    return true;
}

const std::vector<Tuple>& DatabaseInstance::tuples(const std::string& relation) const {
    static const std::vector<Tuple> empty;
    auto it = relations_.find(relation);
    return it == relations_.end() ? empty : it->second;
}

std::vector<Tuple> DatabaseInstance::all_tuples() const {
    std::vector<Tuple> out;
    for (const auto& [_, ts] : relations_) out.insert(out.end(), ts.begin(), ts.end());
    canonicalize(out);
    return out;
}

std::size_t DatabaseInstance::size() const {
    std::size_t n = 0;
    for (const auto& [_, ts] : relations_) n += ts.size();
    return n;
}

Binding Binding::from_tuple(const RelationSchema& relation, const Tuple& t) {
    Binding b{relation.name(), {}};
    for (auto pos : relation.input_positions()) b.values.push_back(t.values().at(pos));
    return b;
}

std::string Binding::text() const {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) out += ",";
        out += quote_literal(values[i].literal);
    }
    return out;
}

void check_binding(const RelationSchema& relation, const Binding& binding) {
    const auto& inputs = relation.input_positions();
    if (binding.values.size() != inputs.size()) {
        throw std::invalid_argument("binding for '" + relation.name() + "' has " +
                                    std::to_string(binding.values.size()) + " values, expected " +
                                    std::to_string(inputs.size()));
    }
    for (std::size_t j = 0; j < inputs.size(); ++j) {
        const auto& attr = relation.attributes()[inputs[j]];
        if (binding.values[j].domain != attr.domain) {
            throw std::invalid_argument("binding value '" + binding.values[j].literal + "' has domain " +
                                        binding.values[j].domain + ", input attribute '" + attr.name +
                                        "' of '" + relation.name() + "' expects " + attr.domain);
        }
    }
}

bool Keyword::matches(const Value& v) const {
    if (v.literal != literal) return false;
    return !domain || *domain == v.domain;
}

std::string Keyword::text() const {
    auto out = quote_literal(literal);
    if (domain) out += ":" + *domain;
    return out;
}

KeywordQuery::KeywordQuery(std::vector<Keyword> keywords) {
    for (auto& k : keywords) {
        if (std::ranges::find(keywords_, k) == keywords_.end()) keywords_.push_back(std::move(k));
    }
    if (keywords_.empty()) throw std::invalid_argument("keyword query must not be empty");
}

bool KeywordQuery::all_typed() const {
    return std::ranges::all_of(keywords_, [](const Keyword& k) { return k.typed(); });
}

bool KeywordQuery::any_untyped() const { return !all_typed(); }

std::string KeywordQuery::text() const {
    std::string out;
    for (std::size_t i = 0; i < keywords_.size(); ++i) {
        if (i > 0) out += ",";
        out += keywords_[i].text();
    }
    return out;
}

ValidationReport validate_schema(const DatabaseSchema& schema) {
    ValidationReport report;
    std::set<std::string> seen;
    for (const auto& r : schema.relations()) {
        if (!seen.insert(r.name()).second)
            report.violations.push_back("duplicate relation name '" + r.name() + "'");
        if (r.arity() == 0) report.violations.push_back("relation '" + r.name() + "' has no attributes");
        std::set<std::string> attrs;
        for (const auto& a : r.attributes()) {
            if (!attrs.insert(a.name).second)
                report.violations.push_back("duplicate attribute name '" + a.name + "' in relation '" +
                                            r.name() + "'");
            if (!schema.domains().contains(a.domain))
                report.violations.push_back("attribute '" + r.name() + "." + a.name + "' has unknown domain '" +
                                            a.domain + "'");
        }
    }
    return report;
}

ValidationReport validate_instance(const DatabaseSchema& schema, const DatabaseInstance& instance,
                                   const KeywordQuery* query) {
    ValidationReport report;
    std::map<std::string, std::string> owner;  // literal -> first domain seen
    std::set<std::string> reported;
    auto register_literal = [&](const Value& v) {
        auto [it, fresh] = owner.try_emplace(v.literal, v.domain);
        if (!fresh && it->second != v.domain && reported.insert(v.literal).second) {
            report.violations.push_back("domain disjointness: literal '" + v.literal + "' occurs under " +
                                        it->second + " and " + v.domain);
        }
    };
    for (const auto& [name, tuples] : instance.relations()) {
        const auto* rel = schema.find(name);
        if (rel == nullptr) {
            report.violations.push_back("tuples for unknown relation '" + name + "'");
            continue;
        }
        for (const auto& t : tuples) {
            if (t.values().size() != rel->arity()) {
                report.violations.push_back("tuple " + t.text() + " has arity " +
                                            std::to_string(t.values().size()) + ", expected " +
                                            std::to_string(rel->arity()));
                continue;
            }
            for (std::size_t i = 0; i < rel->arity(); ++i) {
                if (t.values()[i].domain != rel->attributes()[i].domain) {
                    report.violations.push_back("tuple " + t.text() + ": value '" + t.values()[i].literal +
                                                "' is not in domain " + rel->attributes()[i].domain);
                }
                register_literal(t.values()[i]);
            }
        }
    }
    if (query != nullptr) {
        for (const auto& k : query->keywords())
            if (k.domain) register_literal(Value{*k.domain, k.literal});
    }
    return report;
}

void canonicalize(std::vector<Tuple>& tuples) {
    std::ranges::sort(tuples);
    auto dup = std::ranges::unique(tuples);
    tuples.erase(dup.begin(), dup.end());
}

}  // namespace kwdeep
