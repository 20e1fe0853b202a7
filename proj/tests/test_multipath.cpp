#include <doctest.h>

#include <set>

#include "tspn/multipath.hpp"

using namespace tspn;

namespace {

// (2p-1)!! perfect matchings of 2p portals
long long matchings(int points) {
    long long m = 1;
    for (int i = points - 1; i > 0; i -= 2) m *= i;
    return m;
}

// independent count of states with at most r portals per facet, crossing allowed
long long count_states(const PortalLayout& lay, int r) {
    long long total = 2;  // Nothing and Closed
    const int P = lay.size();
    for (long long mask = 1; mask < (1LL << P); ++mask) {
        int bits = __builtin_popcountll(mask);
        if (bits % 2) continue;
        std::vector<int> load(lay.facet_count(), 0);
        bool ok = true;
        for (int p = 0; p < P && ok; ++p)
            if (mask >> p & 1)
                for (int f = 0; f < lay.facet_count(); ++f)
                    if ((lay.facet_mask[p] >> f & 1) && ++load[f] > r) ok = false;
        if (ok) total += matchings(bits);
    }
    return total;
}

}  // namespace

TEST_SUITE("multipath") {
    TEST_CASE("portal layout") {
        PortalLayout lay(2, 1);
        CHECK(lay.k == 2);
        for (int p = 0; p < lay.size(); ++p) {
            CHECK(lay.id_of(lay.coords[p]) == p);
            CHECK(lay.facet_mask[p] != 0);
        }
        CHECK(lay.id_of({1, 1, 0}) == -1);
        int corners = 0;
        for (auto m : lay.facet_mask) corners += __builtin_popcount(m) == 2;
        CHECK(corners == 4);
        CHECK_THROWS(PortalLayout(4, 1));
    }

    TEST_CASE("state table matches an independent count") {
        for (int r : {1, 2}) {
            StateTable t(2, 1, r, false);
            CHECK(t.size() == count_states(t.layout(), r));
            CHECK(t.state(kStateNothing).nothing());
            CHECK(t.state(kStateClosed).closed);
        }
        StateTable t3(3, 1, 1, false);
        CHECK(t3.size() > 2);
    }

    TEST_CASE("every state is a perfect matching with bounded facet load") {
        for (bool nc : {false, true}) {
            StateTable t(2, 1, 2, nc);
            for (int s = 2; s < t.size(); ++s) {
                const auto& st = t.state(s);
                std::set<int> used;
                std::vector<int> load(4, 0);
                for (auto [a, b] : st.pairs) {
                    CHECK(a < b);
                    CHECK(used.insert(a).second);
                    CHECK(used.insert(b).second);
                    for (int p : {a, b})
                        for (int f = 0; f < 4; ++f) load[f] += t.layout().facet_mask[p] >> f & 1;
                }
                for (int l : load) CHECK(l <= 2);
                CHECK(t.find(st.pairs) == s);
            }
        }
        CHECK(StateTable(2, 1, 2, true).size() < StateTable(2, 1, 2, false).size());
        CHECK_THROWS(StateTable(2, 1, 0, false));
    }

    TEST_CASE("combination template is indexed by parent") {
        const auto& T = CombinationTemplate::get(2, 1, 1, true);
        CHECK(&T == &CombinationTemplate::get(2, 1, 1, true));
        CHECK(T.children() == 4);
        std::size_t total = 0;
        for (int p = 0; p < T.states().size(); ++p) {
            for (int c : T.with_parent(p)) CHECK(T.all()[c].parent == p);
            total += T.with_parent(p).size();
        }
        CHECK(total == T.all().size());

        // all children empty is the only way to build an empty parent from nothing
        bool all_nothing = false;
        for (int c : T.with_parent(kStateNothing)) {
            bool every = true;
            for (int j = 0; j < 4; ++j) every &= T.all()[c].child[j] == kStateNothing;
            all_nothing |= every;
        }
        CHECK(all_nothing);
        CHECK_FALSE(T.with_parent(kStateClosed).empty());

        // child portals land on the doubled parent grid
        for (int j = 0; j < 4; ++j)
            for (int p = 0; p < T.states().layout().size(); ++p) {
                auto x = T.child_point(j, p);
                for (int i = 0; i < 2; ++i) {
                    CHECK(x[i] >= 0);
                    CHECK(x[i] <= 2 * T.states().layout().k);
                }
            }
    }
}
