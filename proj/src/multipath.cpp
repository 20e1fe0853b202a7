#include "tspn/multipath.hpp"

#include <algorithm>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace tspn {

namespace {

int ipow(int b, int e) {
    int r = 1;
    while (e-- > 0) r *= b;
    return r;
}

// Position along the square boundary, counter-clockwise from the origin.
int perimeter_pos(const std::array<int, 3>& c, int k) {
    if (c[1] == 0) return c[0];
    if (c[0] == k) return k + c[1];
    if (c[1] == k) return 3 * k - c[0];
    return 4 * k - c[1];
}

bool chords_cross(int a, int b, int c, int d) {
    if (a > b) std::swap(a, b);
    bool cin = c > a && c < b;
    bool din = d > a && d < b;
    return cin != din;
}

}  // namespace

PortalLayout::PortalLayout(int dim, int m) : d(dim), k(m + 1) {
    if (d < 2 || d > 3) throw std::invalid_argument("portal layout supports d = 2 or 3");
    if (m < 1 || (k & (k - 1)) != 0) throw std::invalid_argument("m + 1 must be a power of two (m >= 1)");
    const int side = k + 1;
    index.assign(ipow(side, d), -1);
    for (int flat = 0; flat < ipow(side, d); ++flat) {
        std::array<int, 3> c{0, 0, 0};
        int rest = flat;
        std::uint8_t mask = 0;
        for (int i = 0; i < d; ++i) {
            c[i] = rest % side;
            rest /= side;
            if (c[i] == 0) mask |= static_cast<std::uint8_t>(1u << (2 * i));
            if (c[i] == k) mask |= static_cast<std::uint8_t>(1u << (2 * i + 1));
        }
        if (mask == 0) continue;
        index[flat] = static_cast<int>(coords.size());
        coords.push_back(c);
        facet_mask.push_back(mask);
    }
    if (coords.size() > 255) throw std::invalid_argument("too many portals per cell");
}

int PortalLayout::id_of(const std::array<int, 3>& c) const {
    int flat = 0;
    for (int i = d - 1; i >= 0; --i) {
        if (c[i] < 0 || c[i] > k) return -1;
        flat = flat * (k + 1) + c[i];
    }
    return index[flat];
}

StateTable::StateTable(int d, int m, int r, bool non_crossing) : layout_(d, m), r_(r), nc_(non_crossing && d == 2) {
    if (r < 1) throw std::invalid_argument("r must be >= 1");
    states_.push_back(MultipathState{});                 // Nothing
    states_.push_back(MultipathState{{}, true});         // Closed
    lookup_[{}] = kStateNothing;

    const int P = layout_.size();
    const int F = layout_.facet_count();
    std::vector<int> chosen;
    std::vector<int> load(F, 0);
    std::vector<std::vector<int>> subsets;

    auto rec = [&](auto&& self, int i) -> void {
        if (i == P) {
            if (!chosen.empty() && chosen.size() % 2 == 0) subsets.push_back(chosen);
            return;
        }
        self(self, i + 1);
        const std::uint8_t mask = layout_.facet_mask[i];
        for (int f = 0; f < F; ++f)
            if ((mask >> f & 1) && load[f] >= r) return;
        for (int f = 0; f < F; ++f)
            if (mask >> f & 1) ++load[f];
        chosen.push_back(i);
        self(self, i + 1);
        chosen.pop_back();
        for (int f = 0; f < F; ++f)
            if (mask >> f & 1) --load[f];
    };
    rec(rec, 0);
    std::sort(subsets.begin(), subsets.end(), [](const auto& a, const auto& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });

    for (const auto& sub : subsets) {
        std::vector<PortalPair> cur;
        std::vector<bool> used(sub.size(), false);
        auto match = [&](auto&& self) -> void {
            std::size_t first = 0;
            while (first < sub.size() && used[first]) ++first;
            if (first == sub.size()) {
                if (nc_) {
                    for (std::size_t a = 0; a < cur.size(); ++a)
                        for (std::size_t b = a + 1; b < cur.size(); ++b)
                            if (chords_cross(perimeter_pos(layout_.coords[cur[a].first], layout_.k),
                                             perimeter_pos(layout_.coords[cur[a].second], layout_.k),
                                             perimeter_pos(layout_.coords[cur[b].first], layout_.k),
                                             perimeter_pos(layout_.coords[cur[b].second], layout_.k)))
                                return;
                }
                lookup_[cur] = static_cast<int>(states_.size());
                states_.push_back(MultipathState{cur, false});
                return;
            }
            used[first] = true;
            for (std::size_t j = first + 1; j < sub.size(); ++j) {
                if (used[j]) continue;
                used[j] = true;
                cur.emplace_back(static_cast<std::uint8_t>(sub[first]), static_cast<std::uint8_t>(sub[j]));
                self(self);
                cur.pop_back();
                used[j] = false;
            }
            used[first] = false;
        };
        match(match);
    }
    if (states_.size() > 65535) throw std::length_error("multipath state table exceeds 65535 states");
}

int StateTable::find(const std::vector<PortalPair>& sorted_pairs) const {
    auto it = lookup_.find(sorted_pairs);
    return it == lookup_.end() ? -1 : it->second;
}

std::array<int, 3> CombinationTemplate::child_point(int j, int p) const {
    const auto& L = table_.layout();
    std::array<int, 3> c = L.coords[p];
    for (int i = 0; i < L.d; ++i) c[i] += ((j >> i) & 1) * L.k;
    return c;
}

const CombinationTemplate& CombinationTemplate::get(int d, int m, int r, bool non_crossing) {
    static std::mutex mu;
    static std::map<std::tuple<int, int, int, bool>, std::unique_ptr<CombinationTemplate>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(d, m, r, non_crossing && d == 2);
    auto& slot = cache[key];
    if (!slot) slot = std::make_unique<CombinationTemplate>(d, m, r, non_crossing);
    return *slot;
}

CombinationTemplate::CombinationTemplate(int d, int m, int r, bool non_crossing) : table_(d, m, r, non_crossing) {
    const auto& L = table_.layout();
    const int K2 = 2 * L.k;
    const int side = K2 + 1;
    const int npts = ipow(side, d);
    const int nchild = 1 << d;
    const int S = table_.size();

    auto flat_of = [&](const std::array<int, 3>& c) {
        int f = 0;
        for (int i = d - 1; i >= 0; --i) f = f * side + c[i];
        return f;
    };
    std::vector<std::array<int, 3>> pt_coord(npts);
    std::vector<char> on_boundary(npts, 0), is_parent_portal(npts, 0);
    std::vector<std::uint8_t> pmask(npts, 0);
    for (int f = 0; f < npts; ++f) {
        int rest = f;
        bool bnd = false, even = true;
        for (int i = 0; i < d; ++i) {
            int c = rest % side;
            rest /= side;
            pt_coord[f][i] = c;
            if (c == 0) pmask[f] |= static_cast<std::uint8_t>(1u << (2 * i));
            if (c == K2) pmask[f] |= static_cast<std::uint8_t>(1u << (2 * i + 1));
            if (c == 0 || c == K2) bnd = true;
            if (c % 2) even = false;
        }
        on_boundary[f] = bnd;
        is_parent_portal[f] = bnd && even;
    }

    // child j, portal p -> parent-frame point
    std::vector<std::vector<int>> cpt(nchild, std::vector<int>(L.size()));
    std::vector<int> last(npts, -1);
    for (int j = 0; j < nchild; ++j)
        for (int p = 0; p < L.size(); ++p) {
            cpt[j][p] = flat_of(child_point(j, p));
            last[cpt[j][p]] = std::max(last[cpt[j][p]], j);
        }
    std::vector<std::vector<int>> finalize(nchild);
    for (int f = 0; f < npts; ++f)
        if (last[f] >= 0 && !on_boundary[f]) finalize[last[f]].push_back(f);

    std::vector<std::vector<int>> usable(nchild);
    for (int j = 0; j < nchild; ++j) {
        usable[j].push_back(kStateNothing);
        for (int s = 2; s < S; ++s) {
            bool ok = true;
            for (auto [a, b] : table_.state(s).pairs)
                for (int p : {a, b})
                    if (on_boundary[cpt[j][p]] && !is_parent_portal[cpt[j][p]]) ok = false;
            if (ok) usable[j].push_back(s);
        }
    }

    std::vector<int> deg(npts, 0);
    std::array<int, 6> load{};
    std::array<std::uint16_t, 8> pick{};
    std::vector<std::array<int, 2>> nb(npts);
    std::vector<int> nbn(npts, 0);

    auto emit = [&]() {
        // Trace path components from parent-boundary endpoints.
        std::fill(nbn.begin(), nbn.end(), 0);
        int edges = 0;
        for (int j = 0; j < nchild; ++j)
            for (auto [a, b] : table_.state(pick[j]).pairs) {
                int u = cpt[j][a], v = cpt[j][b];
                nb[u][nbn[u]++] = v;
                nb[v][nbn[v]++] = u;
                ++edges;
            }
        if (edges == 0) {
            combos_.push_back(Combination{kStateNothing, pick});
            return;
        }
        std::vector<PortalPair> pairs;
        int walked = 0;
        std::vector<char> seen(npts, 0);
        for (int f = 0; f < npts; ++f) {
            if (!on_boundary[f] || nbn[f] != 1 || seen[f]) continue;
            int prev = f, cur = nb[f][0];
            seen[f] = 1;
            ++walked;
            while (nbn[cur] == 2) {
                int nxt = nb[cur][0] == prev ? nb[cur][1] : nb[cur][0];
                prev = cur;
                cur = nxt;
                ++walked;
            }
            seen[cur] = 1;
            auto half = [&](int g) {
                std::array<int, 3> c{0, 0, 0};
                for (int i = 0; i < d; ++i) c[i] = pt_coord[g][i] / 2;
                return static_cast<std::uint8_t>(L.id_of(c));
            };
            std::uint8_t a = half(f), b = half(cur);
            pairs.emplace_back(std::min(a, b), std::max(a, b));
        }
        if (walked != edges) {
            // Leftover edges are cycles; only a single cycle with no open paths closes the tour.
            if (!pairs.empty()) return;
            int start = -1;
            for (int f = 0; f < npts; ++f)
                if (nbn[f] == 2) {
                    start = f;
                    break;
                }
            int prev = start, cur = nb[start][0], len = 1;
            while (cur != start) {
                int nxt = nb[cur][0] == prev ? nb[cur][1] : nb[cur][0];
                prev = cur;
                cur = nxt;
                ++len;
            }
            if (len != edges) return;
            combos_.push_back(Combination{kStateClosed, pick});
            return;
        }
        std::sort(pairs.begin(), pairs.end());
        int ps = table_.find(pairs);
        if (ps < 0) return;
        combos_.push_back(Combination{static_cast<std::uint16_t>(ps), pick});
    };

    auto dfs = [&](auto&& self, int j) -> void {
        if (j == nchild) {
            emit();
            return;
        }
        for (int s : usable[j]) {
            const auto& pairs = table_.state(s).pairs;
            bool ok = true;
            for (auto [a, b] : pairs)
                for (int p : {a, b}) {
                    int g = cpt[j][p];
                    if (++deg[g] > (on_boundary[g] ? 1 : 2)) ok = false;
                    for (int f = 0; f < 2 * d; ++f)
                        if ((pmask[g] >> f & 1) && ++load[f] > r) ok = false;
                }
            if (ok)
                for (int g : finalize[j])
                    if (deg[g] == 1) {
                        ok = false;
                        break;
                    }
            if (ok) {
                pick[j] = static_cast<std::uint16_t>(s);
                self(self, j + 1);
            }
            for (auto [a, b] : pairs)
                for (int p : {a, b}) {
                    int g = cpt[j][p];
                    --deg[g];
                    for (int f = 0; f < 2 * d; ++f)
                        if (pmask[g] >> f & 1) --load[f];
                }
        }
        pick[j] = 0;
    };
    dfs(dfs, 0);

    for (int j = 0; j < nchild; ++j) {
        std::array<std::uint16_t, 8> t{};
        t[j] = kStateClosed;
        combos_.push_back(Combination{kStateClosed, t});
    }

    by_parent_.assign(S, {});
    for (int i = 0; i < static_cast<int>(combos_.size()); ++i) by_parent_[combos_[i].parent].push_back(i);
}

}  // namespace tspn
