#include "tspn/dp_graph.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>

namespace tspn {

namespace {

std::uint64_t node_key(int cell, int state, int visit) {
    return ((static_cast<std::uint64_t>(cell) << 20) | static_cast<std::uint64_t>(state)) * 3 + (visit + 1);
}

Vec to_vec(const IPoint& x, int d) {
    Vec v(d);
    for (int i = 0; i < d; ++i) v[i] = static_cast<double>(x[i]);
    return v;
}

IPoint scaled(const IPoint& x, long long k) { return {x[0] * k, x[1] * k, x[2] * k}; }

std::vector<std::pair<Vec, Vec>> leaf_paths(const DpContext& c, int cell, int state) {
    const auto& layout = c.tmpl->states().layout();
    std::vector<std::pair<Vec, Vec>> out;
    for (auto [a, b] : c.tmpl->states().state(state).pairs)
        out.emplace_back(to_vec(portal_fine(c.tree.cells[cell], layout, a), c.tree.dim),
                         to_vec(portal_fine(c.tree.cells[cell], layout, b), c.tree.dim));
    return out;
}

std::optional<Vec> leaf_point(const DpContext& c, int cell) {
    int p = c.tree.cells[cell].point;
    if (p < 0) return std::nullopt;
    return to_vec(scaled(c.pi.pts[p].x, c.tmpl->states().layout().k), c.tree.dim);
}

LeafSolution leaf_solution(const DpContext& c, int cell, int state, int visit) {
    return solve_leaf(leaf_paths(c, cell, state), leaf_point(c, cell), visit == 1, state == kStateClosed);
}

}  // namespace

DpGraph DpGraph::from_adjacency(const std::vector<NodeKind>& kinds,
                                const std::vector<std::vector<std::pair<int, double>>>& out, int root) {
    if (kinds.size() != out.size()) throw std::invalid_argument("from_adjacency: size mismatch");
    DpGraph g;
    g.root = root;
    for (std::size_t v = 0; v < kinds.size(); ++v) {
        DpNode n;
        n.kind = kinds[v];
        n.first = static_cast<int>(g.edges.size());
        n.count = static_cast<int>(out[v].size());
        for (auto [to, cost] : out[v]) {
            if (to < 0 || to >= static_cast<int>(kinds.size())) throw std::invalid_argument("from_adjacency: bad edge");
            g.edges.push_back(DpEdge{static_cast<int>(v), to, cost});
        }
        g.nodes.push_back(n);
    }
    return g;
}

int DpGraph::find(int cell, int state, int visit) const {
    auto it = index.find(node_key(cell, state, visit));
    return it == index.end() ? -1 : it->second;
}

DagStats DpGraph::stats() const {
    DagStats s;
    s.nodes = nodes.size();
    s.edges = edges.size();
    std::vector<int> depth(nodes.size(), -1);
    auto rec = [&](auto&& self, int v) -> int {
        if (depth[v] >= 0) return depth[v];
        int best = 0;
        for (const DpEdge& e : out(v)) best = std::max(best, 1 + self(self, e.to));
        return depth[v] = best;
    };
    for (int v = 0; v < size(); ++v) {
        if (nodes[v].kind == NodeKind::Subproblem)
            ++s.subproblems;
        else
            ++s.combinations;
        s.max_out_degree = std::max(s.max_out_degree, nodes[v].count);
    }
    if (!nodes.empty()) s.height = rec(rec, root);
    return s;
}

DpGraph build_dag(const PerturbedInstance& pi, const ShiftedQuadtree& tree, const DagOptions& opt) {
    auto ctx = std::make_shared<DpContext>();
    ctx->pi = pi;
    ctx->tree = tree;
    ctx->opt = opt;
    ctx->tmpl = &CombinationTemplate::get(tree.dim, opt.m, opt.r, opt.non_crossing);
    const CombinationTemplate& T = *ctx->tmpl;
    const int S = T.states().size();
    const int nchild = T.children();
    const auto& cells = tree.cells;
    const double to_orig = pi.unit / T.states().layout().k;

    // Which states each cell can realize at all.
    std::vector<std::vector<char>> real(cells.size());
    for (int c = static_cast<int>(cells.size()) - 1; c >= 0; --c) {
        real[c].assign(S, 0);
        if (cells[c].leaf()) {
            for (int s = 2; s < S; ++s) real[c][s] = 1;
            if (cells[c].point < 0) {
                real[c][kStateNothing] = 1;
            } else {
                real[c][kStateClosed] = 1;
                real[c][kStateNothing] = !opt.tsp_mode;
            }
            continue;
        }
        for (const Combination& cb : T.all()) {
            if (real[c][cb.parent]) continue;
            bool ok = true;
            for (int j = 0; j < nchild && ok; ++j) ok = real[cells[c].child[j]][cb.child[j]];
            if (ok) real[c][cb.parent] = 1;
        }
    }
    if (!real[0][kStateClosed]) throw Infeasible("no closed tour is realizable under the given (m, r)");

    DpGraph g;
    g.ctx = ctx;
    std::deque<int> queue;
    std::unordered_map<std::uint64_t, double> leaf_cost;

    auto new_node = [&](NodeKind kind, int cell, int state, int visit) {
        if (g.nodes.size() >= opt.node_budget)
            throw BudgetExceeded("DAG node budget of " + std::to_string(opt.node_budget) + " nodes exceeded");
        DpNode n;
        n.kind = kind;
        n.cell = cell;
        n.state = state;
        n.visit = visit;
        g.nodes.push_back(n);
        return static_cast<int>(g.nodes.size()) - 1;
    };
    auto get_sub = [&](int cell, int state, int visit) {
        auto key = node_key(cell, state, visit);
        auto it = g.index.find(key);
        if (it != g.index.end()) return it->second;
        int id = new_node(NodeKind::Subproblem, cell, state, visit);
        g.index.emplace(key, id);
        if (!cells[cell].leaf()) queue.push_back(id);
        return id;
    };
    auto cost_of = [&](int cell, int state, int visit) {
        auto key = node_key(cell, state, visit);
        auto it = leaf_cost.find(key);
        if (it != leaf_cost.end()) return it->second;
        double c = leaf_solution(*ctx, cell, state, visit).cost * to_orig;
        leaf_cost.emplace(key, c);
        return c;
    };
    auto visit_options = [&](int cell, int state) -> std::vector<int> {
        if (!cells[cell].leaf()) return {-1};
        if (cells[cell].point < 0 || state == kStateNothing) return {0};
        if (state == kStateClosed || opt.tsp_mode) return {1};
        return {0, 1};
    };

    g.root = get_sub(0, kStateClosed, -1);
    struct Pending {
        int node;
        std::vector<std::pair<int, double>> kids;
    };
    while (!queue.empty()) {
        const int v = queue.front();
        queue.pop_front();
        const int cell = g.nodes[v].cell;
        const int state = g.nodes[v].state;
        std::vector<Pending> pend;
        for (int ci : T.with_parent(state)) {
            const Combination& cb = T.all()[ci];
            bool ok = true;
            for (int j = 0; j < nchild && ok; ++j) ok = real[cells[cell].child[j]][cb.child[j]];
            if (!ok) continue;
            std::vector<std::vector<int>> opts(nchild);
            for (int j = 0; j < nchild; ++j) opts[j] = visit_options(cells[cell].child[j], cb.child[j]);
            std::vector<int> pick(nchild, 0);
            while (true) {
                Pending p;
                p.node = new_node(NodeKind::Combination, cell, ci, -1);
                for (int j = 0; j < nchild; ++j) {
                    int cc = cells[cell].child[j];
                    int b = opts[j][pick[j]];
                    int to = get_sub(cc, cb.child[j], b);
                    p.kids.emplace_back(to, cells[cc].leaf() ? cost_of(cc, cb.child[j], b) : 0.0);
                }
                pend.push_back(std::move(p));
                int j = 0;
                while (j < nchild && ++pick[j] == static_cast<int>(opts[j].size())) pick[j++] = 0;
                if (j == nchild) break;
            }
        }
        g.nodes[v].first = static_cast<int>(g.edges.size());
        g.nodes[v].count = static_cast<int>(pend.size());
        for (const Pending& p : pend) g.edges.push_back(DpEdge{v, p.node, 0.0});
        for (const Pending& p : pend) {
            g.nodes[p.node].first = static_cast<int>(g.edges.size());
            g.nodes[p.node].count = static_cast<int>(p.kids.size());
            for (auto [to, c] : p.kids) g.edges.push_back(DpEdge{p.node, to, c});
        }
    }
    return g;
}

GroupFamily groups(const DpGraph& h) {
    if (!h.ctx) throw std::invalid_argument("groups: DAG has no geometric context");
    const auto& c = *h.ctx;
    GroupFamily S(c.pi.n_groups);
    for (int v = 0; v < h.size(); ++v) {
        const DpNode& n = h.nodes[v];
        if (n.kind != NodeKind::Subproblem || n.visit != 1) continue;
        int p = c.tree.cells[n.cell].point;
        if (p < 0) continue;
        for (int gi : c.pi.pts[p].groups) S[gi].push_back(v);
    }
    for (std::size_t i = 0; i < S.size(); ++i)
        if (S[i].empty()) throw Infeasible("group " + std::to_string(i) + " has no visiting leaf in the DAG");
    return S;
}

bool validate_solution_tree(const SolutionTree& t, const DpGraph& h) {
    const int n = h.size();
    std::vector<char> in_tree(n, 0);
    for (int v : t.nodes) {
        if (v < 0 || v >= n || in_tree[v]) return false;
        in_tree[v] = 1;
    }
    if (h.root < 0 || h.root >= n || !in_tree[h.root]) return false;
    std::vector<int> indeg(n, 0), outdeg(n, 0);
    std::vector<std::vector<int>> kids(n);
    for (int e : t.edges) {
        if (e < 0 || e >= static_cast<int>(h.edges.size())) return false;
        const DpEdge& E = h.edges[e];
        if (!in_tree[E.from] || !in_tree[E.to]) return false;
        ++indeg[E.to];
        ++outdeg[E.from];
        kids[E.from].push_back(E.to);
    }
    for (int v : t.nodes) {
        if (indeg[v] != (v == h.root ? 0 : 1)) return false;
        const DpNode& nd = h.nodes[v];
        if (nd.kind == NodeKind::Combination) {
            if (outdeg[v] != nd.count) return false;
        } else if (outdeg[v] != (nd.count == 0 ? 0 : 1)) {
            return false;
        }
    }
    std::vector<char> seen(n, 0);
    std::vector<int> stack{h.root};
    seen[h.root] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int w : kids[v])
            if (!seen[w]) {
                seen[w] = 1;
                ++reached;
                stack.push_back(w);
            }
    }
    return reached == t.nodes.size();
}

double tree_cost(const SolutionTree& t, const DpGraph& h) {
    double c = 0.0;
    for (int e : t.edges) c += h.edges[e].cost;
    return c;
}

SolutionTree tree_from_choice(const DpGraph& h, const std::vector<int>& choice) {
    SolutionTree t;
    std::vector<int> stack{h.root};
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        t.nodes.push_back(v);
        const DpNode& n = h.nodes[v];
        if (n.kind == NodeKind::Combination) {
            for (int e = n.first; e < n.first + n.count; ++e) {
                t.edges.push_back(e);
                stack.push_back(h.edges[e].to);
            }
        } else if (n.count > 0) {
            int e = choice[v];
            if (e < n.first || e >= n.first + n.count) throw std::invalid_argument("tree_from_choice: missing choice");
            t.edges.push_back(e);
            stack.push_back(h.edges[e].to);
        }
    }
    std::sort(t.nodes.begin(), t.nodes.end());
    std::sort(t.edges.begin(), t.edges.end());
    return t;
}

SolutionTree min_cost_tree(const DpGraph& h) {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> val(h.size(), -1.0);
    std::vector<int> choice(h.size(), -1);
    auto rec = [&](auto&& self, int v) -> double {
        if (val[v] >= 0.0) return val[v];
        const DpNode& n = h.nodes[v];
        double best = n.kind == NodeKind::Combination ? 0.0 : (n.count == 0 ? 0.0 : inf);
        for (int e = n.first; e < n.first + n.count; ++e) {
            double c = h.edges[e].cost + self(self, h.edges[e].to);
            if (n.kind == NodeKind::Combination) {
                best += c;
            } else if (c < best) {
                best = c;
                choice[v] = e;
            }
        }
        return val[v] = best;
    };
    if (rec(rec, h.root) == inf) throw Infeasible("DAG has no finite solution tree");
    return tree_from_choice(h, choice);
}

TreeTour tree_to_tour(const SolutionTree& t, const DpGraph& h) {
    if (!h.ctx) throw std::invalid_argument("tree_to_tour: DAG has no geometric context");
    if (!validate_solution_tree(t, h)) throw std::invalid_argument("tree_to_tour: invalid solution tree");
    const DpContext& c = *h.ctx;
    const auto& layout = c.tmpl->states().layout();
    const long long k = layout.k;

    struct Piece {
        std::vector<IPoint> pts;
        std::vector<int> meta;
        int leaf;
    };
    std::vector<Piece> pieces;
    int closed_piece = -1;
    for (int v : t.nodes) {
        if (!h.is_leaf(v)) continue;
        const DpNode& n = h.nodes[v];
        const Cell& cell = c.tree.cells[n.cell];
        if (n.state == kStateNothing) continue;
        IPoint P = cell.point >= 0 ? scaled(c.pi.pts[cell.point].x, k) : IPoint{0, 0, 0};
        if (n.state == kStateClosed) {
            closed_piece = static_cast<int>(pieces.size());
            pieces.push_back(Piece{{P}, {cell.point}, n.cell});
            continue;
        }
        LeafSolution sol = leaf_solution(c, n.cell, n.state, n.visit);
        const auto& pairs = c.tmpl->states().state(n.state).pairs;
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            Piece p;
            p.leaf = n.cell;
            p.pts.push_back(portal_fine(cell, layout, pairs[i].first));
            p.meta.push_back(-1);
            if (sol.detour == static_cast<int>(i)) {
                p.pts.push_back(P);
                p.meta.push_back(cell.point);
            }
            p.pts.push_back(portal_fine(cell, layout, pairs[i].second));
            p.meta.push_back(-1);
            pieces.push_back(std::move(p));
        }
    }
    if (pieces.empty()) throw std::logic_error("tree_to_tour: tree has no tour pieces");

    TreeTour out;
    auto emit = [&](const IPoint& x, int meta, int leaf) {
        out.fine.push_back(x);
        out.seg_leaf.push_back(leaf);
        out.tour.push(c.pi.to_original(to_vec(x, c.tree.dim), static_cast<double>(k)), meta);
        if (meta >= 0) out.visited.push_back(meta);
    };
    if (closed_piece >= 0) {
        if (pieces.size() != 1) throw std::logic_error("tree_to_tour: closed leaf alongside other paths");
        emit(pieces[0].pts[0], pieces[0].meta[0], pieces[0].leaf);
    } else {
        std::map<IPoint, std::vector<int>> at;
        for (int i = 0; i < static_cast<int>(pieces.size()); ++i) {
            at[pieces[i].pts.front()].push_back(i);
            at[pieces[i].pts.back()].push_back(i);
        }
        for (const auto& [x, list] : at)
            if (list.size() != 2) throw std::logic_error("tree_to_tour: portal with odd path degree");
        std::vector<char> used(pieces.size(), 0);
        int cur = 0;
        bool forward = true;
        std::size_t done = 0;
        while (true) {
            used[cur] = 1;
            ++done;
            Piece p = pieces[cur];
            if (!forward) {
                std::reverse(p.pts.begin(), p.pts.end());
                std::reverse(p.meta.begin(), p.meta.end());
            }
            for (std::size_t i = 0; i + 1 < p.pts.size(); ++i) emit(p.pts[i], p.meta[i], p.leaf);
            const IPoint& end = p.pts.back();
            const auto& list = at[end];
            int nxt = list[0] == cur ? list[1] : list[0];
            if (used[nxt]) break;
            forward = pieces[nxt].pts.front() == end;
            cur = nxt;
        }
        if (done != pieces.size()) throw std::logic_error("tree_to_tour: tree encodes more than one cycle");
    }
    std::sort(out.visited.begin(), out.visited.end());
    out.cost = tree_cost(t, h);
    return out;
}

SolutionTree tour_to_tree(const TreeTour& f, const DpGraph& h) {
    if (!h.ctx) throw std::invalid_argument("tour_to_tree: DAG has no geometric context");
    const DpContext& c = *h.ctx;
    const auto& table = c.tmpl->states();
    const auto& layout = table.layout();
    const long long k = layout.k;
    const auto& cells = c.tree.cells;
    const int d = c.tree.dim;
    const int n = static_cast<int>(f.fine.size());
    if (n == 0) throw std::invalid_argument("tour_to_tree: empty tour");

    auto in_box = [&](int cell, const IPoint& x) {
        for (int i = 0; i < d; ++i)
            if (x[i] < cells[cell].lo[i] * k || x[i] > (cells[cell].lo[i] + cells[cell].side) * k) return false;
        return true;
    };
    auto facet_name = [&](int cell, const IPoint& x) {
        for (int i = 0; i < d; ++i) {
            if (x[i] == cells[cell].lo[i] * k) return "axis " + std::to_string(i) + " low facet of cell " + std::to_string(cell);
            if (x[i] == (cells[cell].lo[i] + cells[cell].side) * k)
                return "axis " + std::to_string(i) + " high facet of cell " + std::to_string(cell);
        }
        return "interior of cell " + std::to_string(cell);
    };

    std::vector<int> leaf(n);
    for (int i = 0; i < n; ++i) {
        const IPoint& a = f.fine[i];
        const IPoint& b = f.fine[(i + 1) % n];
        int l = static_cast<int>(f.seg_leaf.size()) == n ? f.seg_leaf[i] : -1;
        if (l < 0) {
            // midpoint rule, in doubled fine units to stay integral
            IPoint mid{0, 0, 0};
            for (int j = 0; j < d; ++j) mid[j] = (a[j] + b[j]) / (2 * k);
            l = c.tree.leaf_of(mid);
        }
        if (l < 0 || l >= static_cast<int>(cells.size()) || !cells[l].leaf())
            throw std::invalid_argument("tour_to_tree: segment " + std::to_string(i) + " is outside the quadtree");
        if (!in_box(l, a) || !in_box(l, b))
            throw std::invalid_argument("tour_to_tree: segment " + std::to_string(i) + " leaves cell " +
                                        std::to_string(l) + " through " + facet_name(l, in_box(l, a) ? b : a) +
                                        " off-portal");
        leaf[i] = l;
    }

    std::vector<std::vector<int>> segs(cells.size());
    for (int i = 0; i < n; ++i)
        for (int cc = leaf[i]; cc >= 0; cc = cells[cc].parent) segs[cc].push_back(i);

    std::vector<int> state(cells.size(), kStateNothing), visit(cells.size(), -1);
    std::vector<char> in(n);
    for (int cc = 0; cc < static_cast<int>(cells.size()); ++cc) {
        if (cells[cc].leaf()) {
            visit[cc] = 0;
            int p = cells[cc].point;
            if (p >= 0)
                for (int i = 0; i < n; ++i)
                    if (f.tour.meta.size() == static_cast<std::size_t>(n) && f.tour.meta[i] == p &&
                        (leaf[i] == cc || leaf[(i - 1 + n) % n] == cc))
                        visit[cc] = 1;
        }
        if (segs[cc].empty()) continue;
        if (static_cast<int>(segs[cc].size()) == n) {
            state[cc] = kStateClosed;
            continue;
        }
        std::fill(in.begin(), in.end(), 0);
        for (int i : segs[cc]) in[i] = 1;
        std::vector<PortalPair> pairs;
        std::vector<char> used(layout.size(), 0);
        auto local = [&](const IPoint& x) {
            std::array<int, 3> lc{0, 0, 0};
            for (int j = 0; j < d; ++j) {
                long long off = x[j] - cells[cc].lo[j] * k;
                if (off % cells[cc].side != 0)
                    throw std::invalid_argument("tour_to_tree: tour crosses " + facet_name(cc, x) + " off-portal");
                lc[j] = static_cast<int>(off / cells[cc].side);
            }
            int id = layout.id_of(lc);
            if (id < 0) throw std::invalid_argument("tour_to_tree: tour crosses " + facet_name(cc, x) + " off-portal");
            if (used[id]) throw std::invalid_argument("tour_to_tree: portal used twice on " + facet_name(cc, x));
            used[id] = 1;
            return static_cast<std::uint8_t>(id);
        };
        for (int i = 0; i < n; ++i) {
            if (!in[i] || in[(i - 1 + n) % n]) continue;
            int j = i;
            while (in[(j + 1) % n]) j = (j + 1) % n;
            std::uint8_t a = local(f.fine[i]);
            std::uint8_t b = local(f.fine[(j + 1) % n]);
            pairs.emplace_back(std::min(a, b), std::max(a, b));
        }
        std::sort(pairs.begin(), pairs.end());
        int id = table.find(pairs);
        if (id < 0) {
            std::vector<int> load(layout.facet_count(), 0);
            for (auto [a, b] : pairs)
                for (int p : {a, b})
                    for (int fct = 0; fct < layout.facet_count(); ++fct)
                        if (layout.facet_mask[p] >> fct & 1) ++load[fct];
            for (int fct = 0; fct < layout.facet_count(); ++fct)
                if (load[fct] > table.r())
                    throw std::invalid_argument("tour_to_tree: tour is not (m,r)-light: axis " + std::to_string(fct / 2) +
                                                (fct % 2 ? " high" : " low") + " facet of cell " + std::to_string(cc) +
                                                " is crossed " + std::to_string(load[fct]) + " times");
            throw std::invalid_argument("tour_to_tree: crossing pattern of cell " + std::to_string(cc) +
                                        " is not an admissible state");
        }
        state[cc] = id;
    }
    if (n == 1) {
        int l = leaf[0];
        for (int cc = l; cc >= 0; cc = cells[cc].parent) state[cc] = kStateClosed;
        visit[l] = 1;
    }

    SolutionTree t;
    int root = h.find(0, state[0], -1);
    if (root != h.root) throw std::invalid_argument("tour_to_tree: tour does not close inside the root cell");
    auto rec = [&](auto&& self, int v) -> void {
        t.nodes.push_back(v);
        const DpNode& nd = h.nodes[v];
        if (nd.count == 0) return;
        const Cell& cell = cells[nd.cell];
        for (int e = nd.first; e < nd.first + nd.count; ++e) {
            const DpNode& comb = h.nodes[h.edges[e].to];
            bool match = true;
            for (int j = 0; j < comb.count && match; ++j) {
                const DpNode& ch = h.nodes[h.edges[comb.first + j].to];
                int cc = cell.child[j];
                match = ch.cell == cc && ch.state == state[cc] && (ch.visit < 0 || ch.visit == visit[cc]);
            }
            if (!match) continue;
            t.edges.push_back(e);
            t.nodes.push_back(h.edges[e].to);
            for (int j = 0; j < comb.count; ++j) {
                t.edges.push_back(comb.first + j);
                self(self, h.edges[comb.first + j].to);
            }
            return;
        }
        throw std::invalid_argument("tour_to_tree: no combination node of cell " + std::to_string(nd.cell) +
                                    " matches the tour");
    };
    rec(rec, root);
    std::sort(t.nodes.begin(), t.nodes.end());
    std::sort(t.edges.begin(), t.edges.end());
    return t;
}

Tour unsnap(const TreeTour& f, const PerturbedInstance& pi, const DiscreteInstance& inst) {
    Tour out;
    for (std::size_t i = 0; i < f.tour.size(); ++i) {
        int p = f.tour.meta[i];
        if (p < 0) {
            out.push(f.tour.waypoints[i]);
            continue;
        }
        for (int o : pi.pts[p].originals) out.push(inst.points[o], o);
    }
    return out;
}

Tour shortcut_to_points(const Tour& t) {
    Tour out;
    for (std::size_t i = 0; i < t.size(); ++i)
        if (t.meta[i] >= 0) out.push(t.waypoints[i], t.meta[i]);
    return out.empty() ? t : out;
}

DpTspResult dp_tsp(const DiscreteInstance& inst, const PerturbedInstance& pi, const ShiftedQuadtree& tree, int m, int r,
                   std::size_t node_budget) {
    DagOptions opt;
    opt.m = m;
    opt.r = r;
    opt.tsp_mode = true;
    opt.node_budget = node_budget;
    DpGraph h = build_dag(pi, tree, opt);
    SolutionTree t = min_cost_tree(h);
    TreeTour tt = tree_to_tour(t, h);
    DpTspResult res;
    res.tour = shortcut_to_points(unsnap(tt, pi, inst));
    res.cost = tour_cost(res.tour);
    res.stats = h.stats();
    res.shift = tree.shift;
    return res;
}

DpTspResult dp_tsp_best(const DiscreteInstance& inst, int m, int r, int shifts, std::uint64_t seed,
                        std::size_t node_budget) {
    PerturbedInstance pi = perturb(inst, covering_context(inst));
    std::mt19937_64 rng(seed);
    DpTspResult best;
    best.cost = std::numeric_limits<double>::infinity();
    for (int s = 0; s < std::max(1, shifts); ++s) {
        IPoint a = random_shift(pi, rng);
        DpTspResult r1 = dp_tsp(inst, pi, build_quadtree(pi, a), m, r, node_budget);
        if (r1.cost < best.cost) best = std::move(r1);
    }
    return best;
}

void dump_dag(std::ostream& out, const DpGraph& h) {
    for (int v = 0; v < h.size(); ++v) {
        const DpNode& n = h.nodes[v];
        out << "node " << v << ' ' << (n.kind == NodeKind::Subproblem ? "sub" : "comb") << ' ' << n.cell << ' '
            << n.state << ' ' << n.visit << '\n';
    }
    for (const DpEdge& e : h.edges) out << "edge " << e.from << ' ' << e.to << ' ' << e.cost << '\n';
}

}  // namespace tspn
