#include "tspn/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>

#include "tspn/oracle.hpp"
#include "tspn/stgst.hpp"

namespace tspn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t cell_seed(std::uint64_t seed, int guess, int shift) {
    return mix(mix(seed) ^ mix(static_cast<std::uint64_t>(guess) << 20 | static_cast<std::uint64_t>(shift)));
}

struct PointKey {
    bool operator()(const Vec& a, const Vec& b) const {
        return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
    }
};

}  // namespace

StitchResult stitch_and_detour(const std::vector<Tour>& tours, const DiscreteInstance& inst,
                               const std::vector<int>& uncovered) {
    StitchResult res;
    std::map<Vec, int, PointKey> ids;
    std::vector<Vec> pts;
    auto id_of = [&](const Vec& p) {
        auto [it, fresh] = ids.emplace(p, static_cast<int>(pts.size()));
        if (fresh) pts.push_back(p);
        return it->second;
    };
    std::vector<std::pair<int, int>> edges;
    for (const Tour& t : tours) {
        std::vector<int> seq;
        for (const Vec& p : t.waypoints) {
            int v = id_of(p);
            if (seq.empty() || seq.back() != v) seq.push_back(v);
        }
        while (seq.size() > 1 && seq.front() == seq.back()) seq.pop_back();
        if (seq.size() > 1)
            for (std::size_t i = 0; i < seq.size(); ++i) edges.emplace_back(seq[i], seq[(i + 1) % seq.size()]);
    }
    const int V = static_cast<int>(pts.size());
    if (V == 0) throw std::invalid_argument("stitch_and_detour: no waypoints");

    std::vector<int> comp(V);
    std::iota(comp.begin(), comp.end(), 0);
    auto find = [&](int x) {
        while (comp[x] != x) x = comp[x] = comp[comp[x]];
        return x;
    };
    for (auto [a, b] : edges) comp[find(a)] = find(b);
    std::vector<int> roots;
    std::vector<int> comp_index(V, -1);
    for (int v = 0; v < V; ++v)
        if (find(v) == v) {
            comp_index[v] = static_cast<int>(roots.size());
            roots.push_back(v);
        }
    const int C = static_cast<int>(roots.size());
    res.components = C;
    if (C > 1) {
        // closest waypoint pair between every two components, then Prim
        std::vector<std::vector<double>> w(C, std::vector<double>(C, kInf));
        std::vector<std::vector<std::pair<int, int>>> arg(C, std::vector<std::pair<int, int>>(C));
        for (int a = 0; a < V; ++a)
            for (int b = a + 1; b < V; ++b) {
                int ca = comp_index[find(a)], cb = comp_index[find(b)];
                if (ca == cb) continue;
                double d = dist(pts[a], pts[b]);
                if (d < w[ca][cb]) {
                    w[ca][cb] = w[cb][ca] = d;
                    arg[ca][cb] = {a, b};
                    arg[cb][ca] = {b, a};
                }
            }
        std::vector<char> in(C, 0);
        std::vector<double> best(C, kInf);
        std::vector<int> from(C, -1);
        best[0] = 0;
        for (int it = 0; it < C; ++it) {
            int u = -1;
            for (int x = 0; x < C; ++x)
                if (!in[x] && (u < 0 || best[x] < best[u])) u = x;
            in[u] = 1;
            if (from[u] >= 0) {
                auto [a, b] = arg[from[u]][u];
                edges.emplace_back(a, b);
                edges.emplace_back(b, a);
                res.mst_cost += w[from[u]][u];
            }
            for (int x = 0; x < C; ++x)
                if (!in[x] && w[u][x] < best[x]) {
                    best[x] = w[u][x];
                    from[x] = u;
                }
        }
    }

    // Hierholzer, then keep first occurrences
    std::vector<int> order;
    if (edges.empty()) {
        order.push_back(0);
    } else {
        std::vector<std::vector<std::pair<int, int>>> adj(V);
        for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
            adj[edges[e].first].emplace_back(edges[e].second, e);
            adj[edges[e].second].emplace_back(edges[e].first, e);
        }
        std::vector<char> used(edges.size(), 0);
        std::vector<std::size_t> ptr(V, 0);
        std::vector<int> stack = {edges[0].first}, circuit;
        while (!stack.empty()) {
            int v = stack.back();
            while (ptr[v] < adj[v].size() && used[adj[v][ptr[v]].second]) ++ptr[v];
            if (ptr[v] == adj[v].size()) {
                circuit.push_back(v);
                stack.pop_back();
            } else {
                auto [to, e] = adj[v][ptr[v]];
                used[e] = 1;
                stack.push_back(to);
            }
        }
        std::reverse(circuit.begin(), circuit.end());
        std::vector<char> seen(V, 0);
        for (int v : circuit)
            if (!seen[v]) {
                seen[v] = 1;
                order.push_back(v);
            }
    }
    for (int v : order) res.tour.push(pts[v]);

    for (int g : uncovered) {
        if (group_gap(res.tour, inst, g) <= 1e-9) continue;
        double bd = kInf;
        int bp = -1;
        std::size_t bw = 0;
        for (int p : inst.group_points[g])
            for (std::size_t i = 0; i < res.tour.size(); ++i) {
                double d = dist(inst.points[p], res.tour.waypoints[i]);
                if (d < bd) {
                    bd = d;
                    bp = p;
                    bw = i;
                }
            }
        res.tour.waypoints.insert(res.tour.waypoints.begin() + bw + 1, inst.points[bp]);
        res.tour.meta.insert(res.tour.meta.begin() + bw + 1, bp);
        ++res.detours;
        res.detour_cost += bd;
    }
    return res;
}

RunReport run_tspn(const DiscreteInstance& inst, const RunConfig& cfg) {
    if (cfg.m < 1 || cfg.shifts < 1 || !(cfg.c > 0) || cfg.node_budget == 0 || cfg.sample_cap < 1)
        throw std::invalid_argument("run_tspn: configuration values must be positive");
    if (inst.dim < 1 || inst.dim > 3) throw std::invalid_argument("run_tspn: dimension must be 1..3");
    const auto t0 = std::chrono::steady_clock::now();
    RunReport rep;
    rep.cost = kInf;

    std::vector<GuessContext> guesses = enumerate_guesses(inst);
    if (cfg.v0_smallest_group) {
        int g0 = 0;
        for (int g = 1; g < inst.n(); ++g)
            if (inst.group_points[g].size() < inst.group_points[g0].size()) g0 = g;
        std::set<int> allowed(inst.group_points[g0].begin(), inst.group_points[g0].end());
        std::erase_if(guesses, [&](const GuessContext& g) { return !allowed.count(g.v0); });
    }
    if (cfg.max_guesses > 0 && static_cast<int>(guesses.size()) > cfg.max_guesses) guesses.resize(cfg.max_guesses);

    DagOptions opt;
    opt.m = cfg.m;
    opt.r = cfg.effective_r(inst.dim);
    opt.node_budget = cfg.node_budget;

    auto consider = [&](Tour t, int record) {
        if (!tour_feasible(t, inst)) return;
        double c = tour_cost(t);
        if (c < rep.cost) {
            rep.cost = c;
            rep.tour = std::move(t);
            rep.best_record = record;
            rep.feasible = true;
            rep.detours = rep.records[record].detours;
        }
    };

    for (int gi = 0; gi < static_cast<int>(guesses.size()); ++gi) {
        const GuessContext& ctx = guesses[gi];
        RunRecord base;
        base.guess = gi;
        base.v0 = ctx.v0;
        base.R0 = ctx.R0;
        base.R = ctx.R;
        if (ctx.trivial()) {
            base.status = "trivial";
            rep.records.push_back(base);
            Tour t;
            t.push(inst.points[ctx.v0], ctx.v0);
            consider(std::move(t), static_cast<int>(rep.records.size()) - 1);
            continue;
        }
        if (cfg.prune && ctx.R0 > rep.cost) {
            base.status = "pruned";
            rep.records.push_back(base);
            continue;
        }
        PerturbedInstance pi = perturb(inst, ctx);
        for (int s = 0; s < cfg.shifts; ++s) {
            RunRecord rec = base;
            rec.shift = s;
            const std::uint64_t seed = cell_seed(cfg.seed, gi, s);
            std::mt19937_64 rng(seed);
            try {
                ShiftedQuadtree tree = build_quadtree(pi, random_shift(pi, rng));
                DpGraph h = build_dag(pi, tree, opt);
                rec.dag = h.stats();
                GroupFamily G = groups(h);
                RoundingReport rr = solve_stgst(h, G, cfg.c, seed, cfg.sample_cap);
                rec.lp_objective = rr.lp_objective;
                rec.samples = rr.samples;
                for (char u : rr.uncovered) rec.uncovered += u;

                std::set<std::vector<int>> distinct;
                std::vector<Tour> tours;
                for (const SolutionTree& t : rr.trees) {
                    if (!distinct.insert(t.nodes).second) continue;
                    tours.push_back(shortcut_to_points(unsnap(tree_to_tour(t, h), pi, inst)));
                }
                rec.distinct_trees = static_cast<int>(tours.size());
                std::vector<int> all(inst.n());
                std::iota(all.begin(), all.end(), 0);
                StitchResult st = stitch_and_detour(tours, inst, all);
                rec.detours = st.detours;
                rec.cost = tour_cost(st.tour);
                rec.status = "ok";
                rep.records.push_back(rec);
                consider(std::move(st.tour), static_cast<int>(rep.records.size()) - 1);
            } catch (const BudgetExceeded&) {
                rec.status = "budget";
                rep.records.push_back(rec);
            } catch (const Infeasible&) {
                rec.status = "infeasible";
                rep.records.push_back(rec);
            }
        }
    }
    if (!rep.feasible) throw Infeasible("run_tspn: no guess produced a feasible tour");

    if (cfg.oracle && inst.n() <= 14 && inst.N() <= 64) {
        rep.oracle_cost = held_karp_groups(inst).cost;
        rep.oracle_method = "held-karp";
    }
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

RunReport run_line_tspn(const LineInstance& inst, const RunConfig& cfg, DiscreteInstance* discrete) {
    DiscreteInstance d = discretize_lines(inst);
    RunConfig inner = cfg;
    inner.oracle = false;
    const auto t0 = std::chrono::steady_clock::now();
    RunReport rep = run_tspn(d, inner);
    rep.feasible = tour_feasible(rep.tour, inst);
    if (cfg.oracle && inst.n() <= 8) {
        rep.oracle_cost = exact_line_tspn(inst).cost;
        rep.oracle_method = "exact-line";
    }
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (discrete) *discrete = std::move(d);
    return rep;
}

}  // namespace tspn
