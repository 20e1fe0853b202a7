#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <utility>
#include <vector>

namespace tspn {

/// Boundary portal grid of a d-cube cell (d = 2 or 3).  Portals live at local
/// integer coordinates c in {0..k}^d with at least one c_i in {0, k}; k = m + 1
/// where m is the number of interior portals per facet axis.
struct PortalLayout {
    int d = 2;
    int k = 2;
    std::vector<std::array<int, 3>> coords;
    std::vector<std::uint8_t> facet_mask;  // bit 2i: c_i == 0, bit 2i+1: c_i == k
    std::vector<int> index;                // (k+1)^d grid -> portal id or -1

    PortalLayout(int dim, int m);

    int size() const { return static_cast<int>(coords.size()); }
    int id_of(const std::array<int, 3>& c) const;
    int facet_count() const { return 2 * d; }
};

using PortalPair = std::pair<std::uint8_t, std::uint8_t>;

inline constexpr int kStateNothing = 0;
inline constexpr int kStateClosed = 1;

/// A multipath state: `Nothing` (tour avoids the cell), `Closed` (whole tour
/// inside) or a set of portal pairs (sorted, each portal used at most once).
struct MultipathState {
    std::vector<PortalPair> pairs;
    bool closed = false;
    bool nothing() const { return !closed && pairs.empty(); }
};

/// All admissible states of one cell for a given (d, m, r).
class StateTable {
public:
    StateTable(int d, int m, int r, bool non_crossing);

    const PortalLayout& layout() const { return layout_; }
    int r() const { return r_; }
    bool non_crossing() const { return nc_; }
    int size() const { return static_cast<int>(states_.size()); }
    const MultipathState& state(int id) const { return states_[id]; }
    /// -1 if the pair list is not an admissible state.
    int find(const std::vector<PortalPair>& sorted_pairs) const;

private:
    PortalLayout layout_;
    int r_;
    bool nc_;
    std::vector<MultipathState> states_;
    std::map<std::vector<PortalPair>, int> lookup_;
};

/// One consistent way of combining 2^d child states into a parent state.
struct Combination {
    std::uint16_t parent;
    std::array<std::uint16_t, 8> child;
};

/// The universal child-combination table for a (d, m, r, non_crossing)
/// configuration.  Independent of the actual cell, so built once and cached.
class CombinationTemplate {
public:
    static const CombinationTemplate& get(int d, int m, int r, bool non_crossing);

    CombinationTemplate(int d, int m, int r, bool non_crossing);

    const StateTable& states() const { return table_; }
    int children() const { return 1 << table_.layout().d; }
    const std::vector<Combination>& all() const { return combos_; }
    const std::vector<int>& with_parent(int parent_state) const { return by_parent_[parent_state]; }

    /// Parent-frame coordinate (doubled grid {0..2k}^d) of child j's local portal p.
    std::array<int, 3> child_point(int j, int p) const;

private:
    StateTable table_;
    std::vector<Combination> combos_;
    std::vector<std::vector<int>> by_parent_;
};

}  // namespace tspn
