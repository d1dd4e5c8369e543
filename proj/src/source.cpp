#include "kwdeep/source.h"

#include <algorithm>

namespace kwdeep {

InstanceBackend::InstanceBackend(std::shared_ptr<const DatabaseInstance> instance)
    : instance_(std::move(instance)) {}

std::vector<Tuple> InstanceBackend::select(const RelationSchema& relation, const Binding& binding) const {
    std::vector<Tuple> out;
    const auto& inputs = relation.input_positions();
    for (const auto& t : instance_->tuples(relation.name())) {
        bool match = true;
        for (std::size_t j = 0; j < inputs.size() && match; ++j) match = t.values()[inputs[j]] == binding.values[j];
        if (match) out.push_back(t);
    }
    return out;
}

AccessExecutor::AccessExecutor(DatabaseSchema schema, std::shared_ptr<const Backend> backend, bool caching)
    : schema_(std::move(schema)), backend_(std::move(backend)), caching_(caching) {}

AccessExecutor AccessExecutor::over(const DatabaseSchema& schema, const DatabaseInstance& instance, bool caching) {
    auto backend = std::make_shared<InstanceBackend>(std::make_shared<const DatabaseInstance>(instance));
    return AccessExecutor(schema, std::move(backend), caching);
}

std::vector<Tuple> AccessExecutor::access(const std::string& relation, const Binding& binding) {
    const auto& rel = schema_.at(relation);
    if (binding.relation != relation)
        throw std::invalid_argument("binding is for '" + binding.relation + "', not '" + relation + "'");
    check_binding(rel, binding);
    if (caching_) {
        if (auto it = cache_.find(binding); it != cache_.end()) return it->second;
    }
    auto out = backend_->select(rel, binding);
    canonicalize(out);
    log_.push_back(AccessRecord{log_.size() + 1, relation, binding, out.size()});
    attempted_.insert(binding);
    touched_.insert(relation);
    if (caching_) cache_.emplace(binding, out);
    return out;
}

bool AccessExecutor::has_accessed(const std::string& relation, const Binding& binding) const {
    return binding.relation == relation && attempted_.contains(binding);
}

bool AccessExecutor::has_accessed(const std::string& relation) const { return touched_.contains(relation); }

AccessStats AccessExecutor::stats() const {
    AccessStats s;
    for (const auto& r : schema_.relations()) s.per_relation[r.name()] = 0;
    for (const auto& rec : log_) ++s.per_relation[rec.relation];
    s.total = log_.size();
    return s;
}

std::string format_access_log(const std::vector<AccessRecord>& log) {
    std::string out;
    for (const auto& rec : log) {
        out += std::to_string(rec.seq) + '\t' + rec.relation + '\t' + rec.binding.text() + '\t' +
               std::to_string(rec.output_size) + '\n';
    }
    return out;
}

}  // namespace kwdeep
