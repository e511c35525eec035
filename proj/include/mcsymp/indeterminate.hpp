#pragma once

#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace mcsymp {

enum class VarKind { Parameter, FormCoeff };

// Process-wide interning table for indeterminates. Ids are assigned in
// declaration order and never change; the monomial order is derived from
// them, so a fixed processing order gives fully deterministic output.
class VarTable {
public:
    static VarTable& instance() {
        static VarTable t;
        return t;
    }

    int declare(const std::string& name, VarKind kind) {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = by_name_.find(name);
        if (it != by_name_.end()) {
            if (entries_[it->second].kind != kind)
                throw std::invalid_argument("indeterminate '" + name + "' redeclared with different kind");
            return it->second;
        }
        int id = static_cast<int>(entries_.size());
        entries_.push_back({name, kind});
        by_name_.emplace(name, id);
        return id;
    }

    int lookup(const std::string& name) const {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = by_name_.find(name);
        if (it == by_name_.end()) throw std::invalid_argument("unknown indeterminate '" + name + "'");
        return it->second;
    }

    bool known(const std::string& name) const {
        std::lock_guard<std::mutex> lock(mutex_);
        return by_name_.count(name) != 0;
    }

    const std::string& name(int id) const {
        std::lock_guard<std::mutex> lock(mutex_);
        return entries_.at(id).name;
    }

    VarKind kind(int id) const {
        std::lock_guard<std::mutex> lock(mutex_);
        return entries_.at(id).kind;
    }

private:
    struct Entry {
        std::string name;
        VarKind kind;
    };
    mutable std::mutex mutex_;
    std::vector<Entry> entries_;
    std::map<std::string, int> by_name_;
};

// A named indeterminate; the id is an index into the global table.
struct Indeterminate {
    int id = -1;

    Indeterminate() = default;
    explicit Indeterminate(int i) : id(i) {}
    Indeterminate(const std::string& name, VarKind kind) : id(VarTable::instance().declare(name, kind)) {}

    const std::string& name() const { return VarTable::instance().name(id); }
    VarKind kind() const { return VarTable::instance().kind(id); }

    auto operator<=>(const Indeterminate&) const = default;
};

inline Indeterminate parameter(const std::string& name) { return Indeterminate(name, VarKind::Parameter); }
inline Indeterminate form_coeff(const std::string& name) { return Indeterminate(name, VarKind::FormCoeff); }

}  // namespace mcsymp
