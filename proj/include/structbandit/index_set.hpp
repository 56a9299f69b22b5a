#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <iterator>
#include <vector>

namespace structbandit {

/// Sorted, de-duplicated set of indices. The tag keeps arm sets and model
/// subsets from being mixed up.
template <typename Tag>
class IndexSet {
public:
    using value_type = std::size_t;
    using const_iterator = std::vector<std::size_t>::const_iterator;

    IndexSet() = default;
    IndexSet(std::initializer_list<std::size_t> init) : items_(init) { normalize(); }
    explicit IndexSet(std::vector<std::size_t> items) : items_(std::move(items)) { normalize(); }

    static IndexSet range(std::size_t count) {
        IndexSet s;
        s.items_.resize(count);
        for (std::size_t i = 0; i < count; ++i) s.items_[i] = i;
        return s;
    }

    bool contains(std::size_t i) const { return std::binary_search(items_.begin(), items_.end(), i); }
    bool empty() const { return items_.empty(); }
    std::size_t size() const { return items_.size(); }
    std::size_t front() const { return items_.front(); }
    std::size_t back() const { return items_.back(); }

    void insert(std::size_t i) {
        auto it = std::lower_bound(items_.begin(), items_.end(), i);
        if (it == items_.end() || *it != i) items_.insert(it, i);
    }
    void erase(std::size_t i) {
        auto it = std::lower_bound(items_.begin(), items_.end(), i);
        if (it != items_.end() && *it == i) items_.erase(it);
    }

    const_iterator begin() const { return items_.begin(); }
    const_iterator end() const { return items_.end(); }
    const std::vector<std::size_t>& items() const { return items_; }

    bool is_subset_of(const IndexSet& other) const {
        return std::includes(other.items_.begin(), other.items_.end(), items_.begin(), items_.end());
    }

    friend IndexSet set_union(const IndexSet& a, const IndexSet& b) {
        IndexSet r;
        std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r.items_));
        return r;
    }
    friend IndexSet set_intersection(const IndexSet& a, const IndexSet& b) {
        IndexSet r;
        std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r.items_));
        return r;
    }
    friend IndexSet set_difference(const IndexSet& a, const IndexSet& b) {
        IndexSet r;
        std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r.items_));
        return r;
    }

    friend bool operator==(const IndexSet&, const IndexSet&) = default;

private:
    void normalize() {
        std::sort(items_.begin(), items_.end());
        items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
    }

    std::vector<std::size_t> items_;
};

struct ArmTag {};
struct ModelTag {};

using ArmSet = IndexSet<ArmTag>;
using ModelSubset = IndexSet<ModelTag>;

}  // namespace structbandit
