#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "kwdeep/core.h"

namespace kwdeep {

/// Source of truth behind the access interface.  Implementations must be
/// deterministic and side-effect free.
class Backend {
public:
    virtual ~Backend() = default;
    /// Tuples of `relation` agreeing with `binding` on every input attribute.
    virtual std::vector<Tuple> select(const RelationSchema& relation, const Binding& binding) const = 0;
};

class InstanceBackend final : public Backend {
public:
    explicit InstanceBackend(std::shared_ptr<const DatabaseInstance> instance);

    std::vector<Tuple> select(const RelationSchema& relation, const Binding& binding) const override;

private:
    std::shared_ptr<const DatabaseInstance> instance_;
};

struct AccessRecord {
    std::size_t seq = 0;
    std::string relation;
    Binding binding;
    std::size_t output_size = 0;
};

struct AccessStats {
    std::map<std::string, std::size_t> per_relation;
    std::size_t total = 0;
};

/// The only way to reach tuples.  Every access is logged; with caching on,
/// a (relation, binding) pair is sent to the backend at most once.
class AccessExecutor {
public:
    AccessExecutor(DatabaseSchema schema, std::shared_ptr<const Backend> backend, bool caching = true);

    /// Convenience: in-memory backend over a copy of `instance`.
    static AccessExecutor over(const DatabaseSchema& schema, const DatabaseInstance& instance,
                               bool caching = true);

    /// Throws std::out_of_range for unknown relations and
    /// std::invalid_argument for ill-typed bindings.  Results are in
    /// canonical tuple order.
    std::vector<Tuple> access(const std::string& relation, const Binding& binding);

    bool has_accessed(const std::string& relation, const Binding& binding) const;
    bool has_accessed(const std::string& relation) const;

    const std::vector<AccessRecord>& log() const { return log_; }
    AccessStats stats() const;
    bool caching() const { return caching_; }
    const DatabaseSchema& schema() const { return schema_; }

private:
    DatabaseSchema schema_;
    std::shared_ptr<const Backend> backend_;
    bool caching_;
    std::vector<AccessRecord> log_;
    std::map<Binding, std::vector<Tuple>> cache_;
    std::set<Binding> attempted_;
    std::set<std::string> touched_;
};

/// `seq<TAB>relation<TAB>v1,v2,...<TAB>output-size`, one line per record.
std::string format_access_log(const std::vector<AccessRecord>& log);

}  // namespace kwdeep
