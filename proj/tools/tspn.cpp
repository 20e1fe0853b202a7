// Command line front end: instance generation, solving, verification.
#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "tspn/cube.hpp"
#include "tspn/highdim.hpp"
#include "tspn/io.hpp"
#include "tspn/oracle.hpp"
#include "tspn/pipeline.hpp"

using namespace tspn;

namespace {


void emit(const Sidecar& kv, const std::string& out) {
    write_sidecar(std::cout, kv);
    if (!out.empty()) write_sidecar(out + ".meta", kv);
}

std::string join_ints(const std::vector<int>& v) {
    std::ostringstream s;
    for (std::size_t i = 0; i < v.size(); ++i) s << (i ? " " : "") << v[i];
    return s.str();
}

void write_svg(const std::string& path, const Tour& t, const AnyInstance* inst) {
    std::vector<Vec> pts = t.waypoints;
    if (inst)
        if (auto* d = std::get_if<DiscreteInstance>(inst))
            for (const Vec& p : d->points) pts.push_back(p);
    if (pts.empty()) return;
    // first two coordinates; 3-D inputs are projected
    double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
    for (const Vec& p : pts) {
        x0 = std::min(x0, p[0]);
        x1 = std::max(x1, p[0]);
        double y = p.size() > 1 ? p[1] : 0.0;
        y0 = std::min(y0, y);
        y1 = std::max(y1, y);
    }
    double span = std::max({x1 - x0, y1 - y0, 1e-9});
    auto X = [&](const Vec& p) { return 20 + 560 * (p[0] - x0) / span; };
    auto Y = [&](const Vec& p) { return 580 - 560 * ((p.size() > 1 ? p[1] : 0.0) - y0) / span; };
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"600\" height=\"600\">\n";
    if (inst)
        if (auto* d = std::get_if<DiscreteInstance>(inst))
            for (int i = 0; i < d->N(); ++i)
                f << "<circle cx=\"" << X(d->points[i]) << "\" cy=\"" << Y(d->points[i])
                  << "\" r=\"3\" fill=\"hsl(" << (d->members[i].empty() ? 0 : d->members[i][0] * 67 % 360)
                  << ",70%,45%)\"/>\n";
    f << "<polygon fill=\"none\" stroke=\"black\" stroke-width=\"1\" points=\"";
    for (const Vec& p : t.waypoints) f << X(p) << ',' << Y(p) << ' ';
    f << "\"/>\n</svg>\n";
}

TripartiteGraph random_tripartite(int n, double p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(p);
    TripartiteGraph g;
    g.n = n;
    for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    if (coin(rng)) g.edges.emplace_back(g.id(a, i), g.id(b, j));
    return g;
}

Graph named_graph(const std::string& spec) {
    auto colon = spec.find(':');
    std::string kind = spec.substr(0, colon);
    int k = colon == std::string::npos ? 0 : std::stoi(spec.substr(colon + 1));
    if (kind == "petersen") return Graph::petersen();
    if (kind == "complete" && k > 0) return Graph::complete(k);
    if (kind == "cycle" && k > 2) return Graph::cycle(k);
    if (kind == "edge") return Graph{2, {{0, 1}}};
    throw CLI::ValidationError("--graph", "expected petersen, edge, complete:K or cycle:K");
}

Sidecar run_sidecar(const RunReport& rep, const RunConfig& cfg) {
    Sidecar kv = {{"cost", format_real(rep.cost)},
                  {"feasible", rep.feasible ? "true" : "false"},
                  {"m", std::to_string(cfg.m)},
                  {"r", std::to_string(cfg.r)},
                  {"shifts", std::to_string(cfg.shifts)},
                  {"c", format_real(cfg.c)},
                  {"seed", std::to_string(cfg.seed)},
                  {"records", std::to_string(rep.records.size())},
                  {"detours", std::to_string(rep.detours)},
                  {"seconds", format_real(rep.seconds)}};
    if (rep.best_record >= 0) {
        const RunRecord& b = rep.records[rep.best_record];
        kv.push_back({"best_guess", std::to_string(b.guess)});
        kv.push_back({"best_shift", std::to_string(b.shift)});
        kv.push_back({"best_v0", std::to_string(b.v0)});
        kv.push_back({"best_R", format_real(b.R)});
        kv.push_back({"best_dag_nodes", std::to_string(b.dag.nodes)});
        kv.push_back({"best_lp_objective", format_real(b.lp_objective)});
        kv.push_back({"best_samples", std::to_string(b.samples)});
    }
    if (rep.oracle_cost) {
        kv.push_back({"oracle", rep.oracle_method});
        kv.push_back({"oracle_cost", format_real(*rep.oracle_cost)});
        kv.push_back({"ratio", format_real(*rep.ratio())});
    }
    return kv;
}

void print_records(const RunReport& rep) {
    std::printf("%5s %5s %4s %10s %-10s %8s %10s %7s %5s %10s\n", "guess", "shift", "v0", "R", "status", "nodes", "lp",
                "samples", "miss", "cost");
    for (const RunRecord& r : rep.records)
        std::printf("%5d %5d %4d %10.4g %-10s %8zu %10.4g %7d %5d %10.6g\n", r.guess, r.shift, r.v0, r.R,
                    r.status.c_str(), r.dag.nodes, r.lp_objective, r.samples, r.uncovered, r.cost);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"TSP with neighborhoods: generators, solvers, checkers"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string out, in, tour_path, svg;
    auto solver_flags = [&](CLI::App* sc) {
        sc->add_option("--m", cfg.m, "interior portals per facet axis")->check(CLI::PositiveNumber);
        sc->add_option("--r", cfg.r, "crossings per facet (0: 2 in 2-D, 1 in 3-D)")->check(CLI::NonNegativeNumber);
        sc->add_option("--shifts", cfg.shifts, "random shifts per guess")->check(CLI::PositiveNumber);
        sc->add_option("--c", cfg.c, "rounding constant")->check(CLI::PositiveNumber);
        sc->add_option("--seed", cfg.seed, "random seed");
        sc->add_option("--budget", cfg.node_budget, "DAG node budget")->check(CLI::PositiveNumber);
        sc->add_option("--out", out, "output tour path (sidecar goes to <out>.meta)");
        sc->add_option("--svg", svg, "optional SVG plot");
    };

    // gen
    auto* gen = app.add_subcommand("gen", "generate instances");
    gen->require_subcommand(1);
    int n = 2, grid = 4, alpha = 2, dim = 2, per_group = 2, k = 2, d = 4;
    double density = 1.0, eps = 0.1, box = 10.0;
    bool gadgets = false, as_lines = false;
    std::uint64_t gseed = 1;
    std::string graph_spec = "petersen";
    auto* gcube = gen->add_subcommand("cube", "flattened-cube line construction");
    gcube->add_option("--n", n, "class size")->check(CLI::PositiveNumber);
    gcube->add_option("--density", density, "edge probability between classes (1: complete)");
    gcube->add_option("--grid", grid, "gadget grid side")->check(CLI::Range(4, 64));
    gcube->add_flag("--gadgets", gadgets, "include every gadget line in the instance");
    gcube->add_option("--seed", gseed);
    gcube->add_option("--out", out)->required();
    auto* ghigh = gen->add_subcommand("highdim", "vertex-cover line construction");
    ghigh->add_option("--graph", graph_spec, "petersen | edge | complete:K | cycle:K");
    ghigh->add_option("--eps", eps)->check(CLI::Range(1e-6, 0.1));
    ghigh->add_option("--alpha", alpha)->check(CLI::PositiveNumber);
    ghigh->add_option("--seed", gseed);
    ghigh->add_option("--out", out)->required();
    auto* grand = gen->add_subcommand("random", "uniform random instance in a box");
    grand->add_option("--n", n, "groups or lines")->check(CLI::PositiveNumber);
    grand->add_option("--dim", dim)->check(CLI::Range(1, 3));
    grand->add_option("--per-group", per_group)->check(CLI::PositiveNumber);
    grand->add_option("--box", box)->check(CLI::PositiveNumber);
    grand->add_flag("--lines", as_lines, "emit lines instead of point groups");
    grand->add_option("--seed", gseed);
    grand->add_option("--out", out)->required();
    auto* glift = gen->add_subcommand("lift", "lift a 3-D line instance to k-flats in R^d");
    glift->add_option("--in", in)->required();
    glift->add_option("--k", k)->check(CLI::PositiveNumber);
    glift->add_option("--d", d)->check(CLI::PositiveNumber);
    glift->add_option("--out", out)->required();

    auto* disc = app.add_subcommand("discretize", "line instance to discrete instance");
    disc->add_option("--in", in)->required();
    disc->add_option("--out", out)->required();

    auto* solve = app.add_subcommand("solve", "solve an instance");
    solve->require_subcommand(1);
    auto* stsp = solve->add_subcommand("tsp", "quadtree DP on all points of a discrete instance");
    auto* stspn = solve->add_subcommand("tspn", "full pipeline (lines are discretized first)");
    auto* sor = solve->add_subcommand("oracle", "exact reference solver");
    for (auto* sc : {stsp, stspn, sor}) sc->add_option("--in", in)->required();
    solver_flags(stsp);
    solver_flags(stspn);
    sor->add_option("--out", out);
    sor->add_option("--svg", svg);

    auto* verify = app.add_subcommand("verify", "check files");
    verify->require_subcommand(1);
    auto* vinst = verify->add_subcommand("instance", "parse and validate an instance");
    vinst->add_option("--in", in)->required();
    auto* vtour = verify->add_subcommand("tour", "feasibility and cost of a tour");
    vtour->add_option("--in", in)->required();
    vtour->add_option("--tour", tour_path)->required();

    auto* report = app.add_subcommand("report", "run the pipeline and print every guess/shift record");
    report->add_option("--in", in)->required();
    solver_flags(report);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*gen) {
            if (*gcube) {
                TripartiteGraph g = density >= 1.0 ? TripartiteGraph::complete(n) : random_tripartite(n, density, gseed);
                CubeConstruction c = gen_cube(g, grid);
                write_instance(out, c.instance(gadgets));
                Sidecar kv = {{"kind", "cube"},
                              {"n", std::to_string(n)},
                              {"edges", std::to_string(g.edges.size())},
                              {"delta", format_real(c.delta)},
                              {"delta_star", format_real(c.delta_star)},
                              {"sigma", format_real(c.sigma)},
                              {"q_points", std::to_string(c.Q.size())},
                              {"grid_side", std::to_string(c.grid_side)},
                              {"grid_cell", format_real(c.grid_cell)},
                              {"ball_radius", format_real(c.ball_radius)},
                              {"gadgets_included", gadgets ? "true" : "false"}};
                for (int v = 0; v < g.vertices(); ++v)
                    kv.push_back({"vertex " + std::to_string(v), format_point(c.Pbar[v])});
                for (auto [a, b] : g.edges) kv.push_back({"edge", std::to_string(a) + " " + std::to_string(b)});
                bool ok = true;
                for (const CheckResult& r : verify_cube(c)) {
                    kv.push_back({"check " + r.name, std::string(r.pass ? "pass" : "fail") + " " + format_real(r.worst)});
                    ok = ok && r.pass;
                }
                std::ofstream q(out + ".q");
                for (const Vec& p : c.Q) q << format_point(p) << '\n';
                kv.push_back({"q_file", out + ".q"});
                emit(kv, out);
                return ok ? 0 : 2;
            }
            if (*ghigh) {
                HighDimConstruction c = gen_highdim(named_graph(graph_spec), eps, alpha, gseed);
                write_instance(out, AnyInstance(c.instance()));
                Sidecar kv = {{"kind", "highdim"},
                              {"graph", graph_spec},
                              {"alpha", std::to_string(alpha)},
                              {"eps", format_real(eps)},
                              {"delta", format_real(c.delta)},
                              {"Delta", format_real(c.Delta)},
                              {"lambda", format_real(c.lambda)},
                              {"dim", std::to_string(c.dim)},
                              {"exact_simplex", c.exact_simplex ? "true" : "false"},
                              {"min_dist", format_real(c.min_dist)},
                              {"max_dist", format_real(c.max_dist)}};
                for (int v = 0; v < c.blown.n; ++v)
                    kv.push_back({"copy " + std::to_string(v / alpha) + " " + std::to_string(v % alpha),
                                  std::to_string(v)});
                emit(kv, out);
                return 0;
            }
            if (*grand) {
                std::mt19937_64 rng(gseed);
                std::uniform_real_distribution<double> U(0.0, box);
                auto point = [&](int dd) {
                    Vec p(dd);
                    for (int i = 0; i < dd; ++i) p[i] = U(rng);
                    return p;
                };
                if (as_lines) {
                    LineInstance L{3, {}};
                    std::normal_distribution<double> N(0.0, 1.0);
                    for (int i = 0; i < n; ++i) {
                        Vec dir(3);
                        dir << N(rng), N(rng), N(rng);
                        L.lines.push_back(Line::from_direction(point(3), dir));
                    }
                    write_instance(out, AnyInstance(L));
                } else {
                    std::vector<std::vector<Vec>> groups(n);
                    for (auto& g : groups)
                        for (int j = 0; j < per_group; ++j) g.push_back(point(dim));
                    write_instance(out, AnyInstance(DiscreteInstance::from_groups(dim, groups)));
                }
                emit({{"kind", as_lines ? "random-lines" : "random-discrete"}, {"n", std::to_string(n)}}, out);
                return 0;
            }
            if (*glift) {
                AnyInstance a = read_instance(in);
                auto* L = std::get_if<LineInstance>(&a);
                if (!L) throw std::invalid_argument("gen lift: input must be a LINES instance");
                write_instance(out, AnyInstance(lift_to_flats(*L, k, d)));
                emit({{"kind", "flats"}, {"k", std::to_string(k)}, {"d", std::to_string(d)}}, out);
                return 0;
            }
        }
        if (*disc) {
            AnyInstance a = read_instance(in);
            auto* L = std::get_if<LineInstance>(&a);
            if (!L) throw std::invalid_argument("discretize: input must be a LINES instance");
            DiscreteInstance D = discretize_lines(*L);
            write_instance(out, AnyInstance(D));
            emit({{"groups", std::to_string(D.n())}, {"points", std::to_string(D.N())}}, out);
            return 0;
        }
        if (*solve || *report) {
            AnyInstance a = read_instance(in);
            Tour t;
            Sidecar kv;
            bool feasible = true;
            if (*stsp) {
                auto* D = std::get_if<DiscreteInstance>(&a);
                if (!D) throw std::invalid_argument("solve tsp: input must be a DISCRETE instance");
                DpTspResult r = dp_tsp_best(*D, cfg.m, cfg.effective_r(D->dim), cfg.shifts, cfg.seed, cfg.node_budget);
                t = r.tour;
                feasible = true;
                for (int p = 0; p < D->N(); ++p)
                    feasible = feasible && std::any_of(t.waypoints.begin(), t.waypoints.end(),
                                                       [&](const Vec& w) { return dist(w, D->points[p]) <= 1e-9; });
                kv = {{"cost", format_real(r.cost)},
                      {"feasible", feasible ? "true" : "false"},
                      {"dag_nodes", std::to_string(r.stats.nodes)}};
            } else if (*sor) {
                OracleResult r;
                if (auto* D = std::get_if<DiscreteInstance>(&a)) {
                    r = held_karp_groups(*D);
                    feasible = tour_feasible(r.tour, *D);
                } else if (auto* L = std::get_if<LineInstance>(&a)) {
                    r = exact_line_tspn(*L);
                    feasible = tour_feasible(r.tour, *L);
                } else {
                    throw std::invalid_argument("solve oracle: FLATS instances are not supported");
                }
                t = r.tour;
                kv = {{"cost", format_real(r.cost)},
                      {"method", r.method},
                      {"exact", r.exact ? "true" : "false"},
                      {"feasible", feasible ? "true" : "false"},
                      {"order", join_ints(r.order)}};
            } else {
                RunReport rep;
                if (auto* D = std::get_if<DiscreteInstance>(&a)) {
                    rep = run_tspn(*D, cfg);
                } else if (auto* L = std::get_if<LineInstance>(&a)) {
                    rep = run_line_tspn(*L, cfg);
                } else {
                    throw std::invalid_argument("solve tspn: FLATS instances are not supported");
                }
                feasible = rep.feasible;
                t = rep.tour;
                kv = run_sidecar(rep, cfg);
                if (*report) print_records(rep);
            }
            if (!out.empty()) write_tour(out, t);
            if (!svg.empty()) write_svg(svg, t, &a);
            emit(kv, out);
            return feasible ? 0 : 2;
        }
        if (*verify) {
            AnyInstance a = read_instance(in);
            if (*vinst) {
                Sidecar kv;
                std::visit(
                    [&](const auto& x) {
                        kv.push_back({"dim", std::to_string(x.dim)});
                        using T = std::decay_t<decltype(x)>;
                        if constexpr (std::is_same_v<T, LineInstance>) {
                            kv.push_back({"kind", "LINES"});
                            kv.push_back({"lines", std::to_string(x.n())});
                        } else if constexpr (std::is_same_v<T, DiscreteInstance>) {
                            kv.push_back({"kind", "DISCRETE"});
                            kv.push_back({"groups", std::to_string(x.n())});
                            kv.push_back({"points", std::to_string(x.N())});
                        } else {
                            kv.push_back({"kind", "FLATS"});
                            kv.push_back({"flats", std::to_string(x.flats.size())});
                        }
                    },
                    a);
                kv.push_back({"valid", "true"});
                emit(kv, "");
                return 0;
            }
            Tour t = read_tour(tour_path);
            bool ok = std::visit([&](const auto& x) { return tour_feasible(t, x); }, a);
            emit({{"cost", format_real(t.empty() ? 0.0 : tour_cost(t))}, {"feasible", ok ? "true" : "false"}}, "");
            return ok ? 0 : 2;
        }
    } catch (const Infeasible& e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return 2;
    } catch (const BudgetExceeded& e) {
        std::cerr << "budget exceeded: " << e.what() << '\n';
        return 2;
    } catch (const std::length_error& e) {
        std::cerr << "size cap exceeded: " << e.what() << '\n';
        return 2;
    } catch (const EmbeddingFailed& e) {
        std::cerr << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
