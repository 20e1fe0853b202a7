#include "tspn/quadtree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace tspn {

double guess_radius(const DiscreteInstance& inst, int v0) {
    double R0 = 0.0;
    for (int i = 0; i < inst.n(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (int p : inst.group_points[i]) best = std::min(best, dist(inst.points[v0], inst.points[p]));
        R0 = std::max(R0, best);
    }
    return R0;
}

std::vector<GuessContext> enumerate_guesses(const DiscreteInstance& inst) {
    std::vector<GuessContext> out;
    const int n = inst.n();
    for (int v = 0; v < inst.N(); ++v) {
        GuessContext base;
        base.v0 = v;
        base.R0 = guess_radius(inst, v);
        if (base.R0 == 0.0) {
            base.retained = {v};
            out.push_back(base);
            continue;
        }
        for (int e = static_cast<int>(std::ceil(std::log2(base.R0))) - 1;; ++e) {
            double R = std::ldexp(1.0, e);
            if (R < base.R0) continue;
            if (R > 4.0 * n * base.R0) break;
            GuessContext ctx = base;
            ctx.R = R;
            ctx.L0 = R / 2;
            for (int p = 0; p < inst.N(); ++p)
                if (dist(inst.points[v], inst.points[p]) <= R) ctx.retained.push_back(p);
            std::vector<char> seen(n, 0);
            for (int p : ctx.retained)
                for (int i : inst.members[p]) seen[i] = 1;
            if (std::count(seen.begin(), seen.end(), 1) == n) out.push_back(std::move(ctx));
        }
    }
    return out;
}

GuessContext covering_context(const DiscreteInstance& inst) {
    if (inst.N() == 0) throw std::invalid_argument("covering_context: empty instance");
    GuessContext ctx;
    ctx.v0 = 0;
    double far = 0.0;
    for (int p = 0; p < inst.N(); ++p) {
        far = std::max(far, dist(inst.points[0], inst.points[p]));
        ctx.retained.push_back(p);
    }
    ctx.R0 = far;
    ctx.R = far > 0 ? std::ldexp(1.0, static_cast<int>(std::ceil(std::log2(far)))) : 1.0;
    ctx.L0 = ctx.R / 2;
    return ctx;
}

Vec PerturbedInstance::to_original(const Vec& scaled, double scale) const {
    return origin + scaled * (unit / scale);
}

PerturbedInstance perturb(const DiscreteInstance& inst, const GuessContext& ctx) {
    if (!(ctx.R > 0.0)) throw std::invalid_argument("perturb: context has R = 0");
    if (inst.dim > 3) throw std::invalid_argument("perturb: dimension must be 2 or 3");
    PerturbedInstance pi;
    pi.dim = inst.dim;
    pi.n_groups = inst.n();
    const double N = static_cast<double>(ctx.retained.size());
    pi.g = ctx.L0 / (8.0 * N);
    pi.unit = pi.g / 8.0;
    pi.origin = inst.points[ctx.v0] - Vec::Constant(inst.dim, ctx.R);
    std::map<IPoint, int> where;
    long long hi = 0;
    for (int p : ctx.retained) {
        IPoint x{0, 0, 0};
        for (int i = 0; i < inst.dim; ++i) {
            x[i] = 8 * std::llround((inst.points[p][i] - pi.origin[i]) / pi.g);
            hi = std::max(hi, x[i]);
        }
        auto [it, fresh] = where.emplace(x, pi.size());
        if (fresh) pi.pts.push_back(PerturbedPoint{x, {}, {}});
        auto& q = pi.pts[it->second];
        q.originals.push_back(p);
        for (int gi : inst.members[p])
            if (std::find(q.groups.begin(), q.groups.end(), gi) == q.groups.end()) q.groups.push_back(gi);
    }
    for (auto& q : pi.pts) std::sort(q.groups.begin(), q.groups.end());
    pi.L = 1;
    while (pi.L <= hi) pi.L *= 2;
    return pi;
}

bool ShiftedQuadtree::contains(int cell, const IPoint& x) const {
    const Cell& c = cells[cell];
    for (int i = 0; i < dim; ++i)
        if (x[i] < c.lo[i] || x[i] >= c.lo[i] + c.side) return false;
    return true;
}

int ShiftedQuadtree::leaf_of(const IPoint& x) const {
    if (!contains(0, x)) return -1;
    int cur = 0;
    while (!cells[cur].leaf()) {
        const Cell& c = cells[cur];
        int j = 0;
        for (int i = 0; i < dim; ++i)
            if (x[i] >= c.lo[i] + c.side / 2) j |= 1 << i;
        cur = c.child[j];
    }
    return cur;
}

ShiftedQuadtree build_quadtree(const PerturbedInstance& pi, const IPoint& shift) {
    ShiftedQuadtree t;
    t.dim = pi.dim;
    t.L = pi.L;
    t.shift = shift;
    for (int i = 0; i < pi.dim; ++i)
        if (shift[i] < 0 || shift[i] >= pi.L) throw std::invalid_argument("build_quadtree: shift outside [0, L)");
    Cell root;
    for (int i = 0; i < pi.dim; ++i) root.lo[i] = -shift[i];
    root.side = 2 * pi.L;
    t.cells.push_back(root);

    std::vector<int> all(pi.size());
    for (int i = 0; i < pi.size(); ++i) all[i] = i;

    auto rec = [&](auto&& self, int id, const std::vector<int>& pts) -> void {
        t.cells[id].count = static_cast<int>(pts.size());
        t.height = std::max(t.height, t.cells[id].level);
        if ((pts.size() <= 1 && id != 0) || t.cells[id].side < 2) {
            if (pts.size() > 1) throw std::logic_error("build_quadtree: coincident perturbed points");
            t.cells[id].point = pts.empty() ? -1 : pts[0];
            return;
        }
        const int nchild = 1 << pi.dim;
        std::vector<std::vector<int>> part(nchild);
        const Cell parent = t.cells[id];
        const long long half = parent.side / 2;
        for (int p : pts) {
            int j = 0;
            for (int i = 0; i < pi.dim; ++i)
                if (pi.pts[p].x[i] >= parent.lo[i] + half) j |= 1 << i;
            part[j].push_back(p);
        }
        for (int j = 0; j < nchild; ++j) {
            Cell c;
            c.side = half;
            c.level = parent.level + 1;
            c.parent = id;
            for (int i = 0; i < pi.dim; ++i) c.lo[i] = parent.lo[i] + ((j >> i) & 1) * half;
            t.cells[id].child[j] = static_cast<int>(t.cells.size());
            t.cells.push_back(c);
        }
        for (int j = 0; j < nchild; ++j) self(self, t.cells[id].child[j], part[j]);
    };
    rec(rec, 0, all);
    return t;
}

IPoint random_shift(const PerturbedInstance& pi, std::mt19937_64& rng) {
    std::uniform_int_distribution<long long> u(0, pi.L - 1);
    IPoint a{0, 0, 0};
    for (int i = 0; i < pi.dim; ++i) a[i] = u(rng);
    return a;
}

IPoint portal_fine(const Cell& c, const PortalLayout& layout, int p) {
    IPoint x{0, 0, 0};
    for (int i = 0; i < layout.d; ++i) x[i] = c.lo[i] * layout.k + layout.coords[p][i] * c.side;
    return x;
}

std::vector<IPoint> portals(const Cell& c, const PortalLayout& layout) {
    std::vector<IPoint> out;
    for (int p = 0; p < layout.size(); ++p) out.push_back(portal_fine(c, layout, p));
    return out;
}

LeafSolution solve_leaf(const std::vector<std::pair<Vec, Vec>>& paths, const std::optional<Vec>& point, bool visit,
                        bool closed) {
    LeafSolution s;
    if (visit && !point) throw std::invalid_argument("solve_leaf: visit bit set on an empty cell");
    if (closed) {
        s.feasible = visit && point.has_value();
        s.cost = s.feasible ? 0.0 : std::numeric_limits<double>::infinity();
        return s;
    }
    for (const auto& [a, b] : paths) s.cost += dist(a, b);
    if (!visit) return s;
    if (paths.empty()) {
        s.feasible = false;
        s.cost = std::numeric_limits<double>::infinity();
        return s;
    }
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < paths.size(); ++i) {
        const auto& [a, b] = paths[i];
        double extra = dist(a, *point) + dist(*point, b) - dist(a, b);
        if (extra < best) {
            best = extra;
            s.detour = static_cast<int>(i);
        }
    }
    s.cost += best;
    return s;
}

}  // namespace tspn
