#include "xsurv/milp.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <sstream>

namespace xsurv {

double MilpModel::milp_inf() { return std::numeric_limits<double>::infinity(); }

int MilpModel::add_var(const std::string& vname, bool binary, double lower, double upper) {
    auto [it, fresh] = var_index.emplace(vname, static_cast<int>(vars.size()));
    if (!fresh) throw ValidationError("duplicate MILP variable " + vname);
    vars.push_back(MilpVariable{vname, lower, binary ? 1.0 : upper, binary});
    return it->second;
}

int MilpModel::var(const std::string& vname) const {
    auto it = var_index.find(vname);
    if (it == var_index.end()) throw ValidationError("unknown MILP variable " + vname);
    return it->second;
}

namespace {

std::string num(NodeId n) { return std::to_string(n); }

std::string y_name(const Link& u, NodeId i, NodeId j) {
    return "y_" + num(u.a) + "_" + num(u.b) + "_" + num(i) + "_" + num(j);
}
std::string x_name(const Link& e) { return "x_" + num(e.a) + "_" + num(e.b); }
std::string g_name(const Link& e) { return "g_" + num(e.a) + "_" + num(e.b); }
std::string z_name(const Link& u) { return "z_" + num(u.a) + "_" + num(u.b); }
std::string f_name(NodeId s, NodeId t) { return "f_" + num(s) + "_" + num(t); }
std::string w_name(const Link& e, NodeId s, NodeId t) {
    return "w_" + num(e.a) + "_" + num(e.b) + "_" + num(s) + "_" + num(t);
}

// Adds the per-logical-link routing flow conservation rows over directed
// physical arcs. `z_var(u)` supplies the variable carried on the right-hand
// side for the source/sink rows, or -1 to use the constant 1.
void add_route_flow(MilpModel& model, const CrossLayerInstance& inst,
                    const std::function<int(const Link&)>& z_var) {
    for (const auto& u : inst.logical.links) {
        NodeId src = inst.node_map.at(u.a), dst = inst.node_map.at(u.b);
        for (NodeId i : inst.physical.nodes) {
            MilpConstraint c;
            c.name = "route_" + num(u.a) + "_" + num(u.b) + "_n" + num(i);
            for (const auto& [e, _] : inst.physical.failure_prob) {
                if (e.a != i && e.b != i) continue;
                NodeId j = e.a == i ? e.b : e.a;
                c.terms.push_back({1.0, model.var(y_name(u, i, j))});
                c.terms.push_back({-1.0, model.var(y_name(u, j, i))});
            }
            c.sense = '=';
            int zv = z_var(u);
            if (i == src) {
                if (zv >= 0) { c.terms.push_back({-1.0, zv}); c.rhs = 0.0; }
                else c.rhs = 1.0;
            } else if (i == dst) {
                if (zv >= 0) { c.terms.push_back({1.0, zv}); c.rhs = 0.0; }
                else c.rhs = -1.0;
            } else {
                c.rhs = 0.0;
            }
            model.constraints.push_back(std::move(c));
        }
    }
}

} // namespace

MilpModel build_milp(const CrossLayerInstance& inst, MilpObjective which,
                     const WeightModel& weights) {
    inst.validate();
    MilpModel model;
    model.name = inst.name.empty() ? "xsurv" : inst.name;
    model.root_logical = *inst.logical.nodes.begin();
    const double n_minus_1 = static_cast<double>(inst.logical.nodes.size()) - 1.0;

    // y variables exist for both formulations
    for (const auto& u : inst.logical.links)
        for (const auto& [e, _] : inst.physical.failure_prob) {
            model.add_var(y_name(u, e.a, e.b), true);
            model.add_var(y_name(u, e.b, e.a), true);
        }

    if (which == MilpObjective::MaxTree) {
        for (const auto& [e, _] : inst.physical.failure_prob) model.add_var(x_name(e), true);
        for (const auto& u : inst.logical.links) model.add_var(z_name(u), true);
        for (const auto& u : inst.logical.links) {
            model.add_var(f_name(u.a, u.b), false);
            model.add_var(f_name(u.b, u.a), false);
        }

        for (const auto& [e, _] : inst.physical.failure_prob)
            model.objective.push_back({weights.cost.at(e), model.var(x_name(e))});

        add_route_flow(model, inst, [&](const Link& u) { return model.var(z_name(u)); });

        // x marks physical links utilized by any branch route
        for (const auto& u : inst.logical.links)
            for (const auto& [e, _] : inst.physical.failure_prob) {
                MilpConstraint c;
                c.name = "use_" + num(u.a) + "_" + num(u.b) + "_" + num(e.a) + "_" + num(e.b);
                c.terms.push_back({1.0, model.var(y_name(u, e.a, e.b))});
                c.terms.push_back({1.0, model.var(y_name(u, e.b, e.a))});
                c.terms.push_back({-1.0, model.var(x_name(e))});
                c.sense = '<';
                c.rhs = 0.0;
                model.constraints.push_back(std::move(c));
            }

        // z selects a spanning tree: |V_L|-1 links carrying a feasible
        // single-commodity flow f from the root to every other node
        {
            MilpConstraint c;
            c.name = "tree_size";
            for (const auto& u : inst.logical.links)
                c.terms.push_back({1.0, model.var(z_name(u))});
            c.sense = '=';
            c.rhs = n_minus_1;
            model.constraints.push_back(std::move(c));
        }
        for (NodeId v : inst.logical.nodes) {
            if (v == model.root_logical) continue;
            MilpConstraint c;
            c.name = "tflow_n" + num(v);
            for (const auto& u : inst.logical.links) {
                if (u.a != v && u.b != v) continue;
                NodeId other = u.a == v ? u.b : u.a;
                c.terms.push_back({1.0, model.var(f_name(other, v))});
                c.terms.push_back({-1.0, model.var(f_name(v, other))});
            }
            c.sense = '=';
            c.rhs = 1.0;
            model.constraints.push_back(std::move(c));
        }
        for (const auto& u : inst.logical.links)
            for (auto [s, t] : {std::pair{u.a, u.b}, std::pair{u.b, u.a}}) {
                MilpConstraint c;
                c.name = "tcap_" + num(s) + "_" + num(t);
                c.terms.push_back({1.0, model.var(f_name(s, t))});
                c.terms.push_back({-n_minus_1, model.var(z_name(u))});
                c.sense = '<';
                c.rhs = 0.0;
                model.constraints.push_back(std::move(c));
            }
    } else {
        for (const auto& [e, _] : inst.physical.failure_prob) model.add_var(g_name(e), true);
        for (const auto& [e, _] : inst.physical.failure_prob)
            for (const auto& u : inst.logical.links) {
                model.add_var(w_name(e, u.a, u.b), false);
                model.add_var(w_name(e, u.b, u.a), false);
            }

        for (const auto& [e, _] : inst.physical.failure_prob)
            model.objective.push_back({weights.cost.at(e), model.var(g_name(e))});

        add_route_flow(model, inst, [](const Link&) { return -1; });

        // after link e fails, logical link u is usable in e's protecting
        // structure only if u's route avoids e
        for (const auto& [e, _] : inst.physical.failure_prob)
            for (const auto& u : inst.logical.links)
                for (auto [s, t] : {std::pair{u.a, u.b}, std::pair{u.b, u.a}}) {
                    MilpConstraint c;
                    c.name = "pcap_" + num(e.a) + "_" + num(e.b) + "_" + num(s) + "_" + num(t);
                    c.terms.push_back({1.0, model.var(w_name(e, s, t))});
                    c.terms.push_back({1.0, model.var(y_name(u, e.a, e.b))});
                    c.terms.push_back({1.0, model.var(y_name(u, e.b, e.a))});
                    c.sense = '<';
                    c.rhs = 1.0;
                    model.constraints.push_back(std::move(c));
                }

        // either w ships 1/(|V_L|-1) from the root to every logical node over
        // surviving logical links (e is protected), or g_e = 1
        for (const auto& [e, _] : inst.physical.failure_prob)
            for (NodeId s : inst.logical.nodes) {
                MilpConstraint c;
                const bool root = s == model.root_logical;
                const double scale = root ? 1.0 : n_minus_1;
                c.name = "pflow_" + num(e.a) + "_" + num(e.b) + "_n" + num(s);
                for (const auto& u : inst.logical.links) {
                    if (u.a != s && u.b != s) continue;
                    NodeId other = u.a == s ? u.b : u.a;
                    c.terms.push_back({scale, model.var(w_name(e, s, other))});
                    c.terms.push_back({-scale, model.var(w_name(e, other, s))});
                }
                c.terms.push_back({root ? 1.0 : -1.0, model.var(g_name(e))});
                c.sense = '=';
                c.rhs = root ? 1.0 : -1.0;
                model.constraints.push_back(std::move(c));
            }
    }
    return model;
}

namespace {

std::string fmt(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, p);
}

void append_terms(std::ostringstream& out, const MilpModel& model,
                  const std::vector<MilpTerm>& terms) {
    std::size_t line_len = 0;
    bool first = true;
    for (const auto& t : terms) {
        std::string piece;
        double mag = std::abs(t.coef);
        if (first) piece = t.coef < 0 ? "- " : "";
        else piece = t.coef < 0 ? " - " : " + ";
        if (mag != 1.0) piece += fmt(mag) + " ";
        piece += model.vars[t.var].name;
        if (line_len + piece.size() > 200) {
            out << "\n   ";
            line_len = 3;
        }
        out << piece;
        line_len += piece.size();
        first = false;
    }
    if (first) out << "0";
}

} // namespace

std::string write_lp(const MilpModel& model) {
    std::ostringstream out;
    out << "\\ Problem: " << model.name << "\n";
    out << "\\ Root logical node s_0 = " << model.root_logical << "\n";
    out << "Minimize\n obj: ";
    append_terms(out, model, model.objective);
    out << "\nSubject To\n";
    for (const auto& c : model.constraints) {
        out << " " << c.name << ": ";
        append_terms(out, model, c.terms);
        out << (c.sense == '<' ? " <= " : c.sense == '>' ? " >= " : " = ") << fmt(c.rhs) << "\n";
    }
    std::ostringstream bounds;
    for (const auto& v : model.vars) {
        if (v.binary) continue;
        if (v.lower != 0.0 || v.upper != MilpModel::milp_inf()) {
            bounds << " " << fmt(v.lower) << " <= " << v.name;
            if (v.upper != MilpModel::milp_inf()) bounds << " <= " << fmt(v.upper);
            bounds << "\n";
        }
    }
    if (!bounds.str().empty()) out << "Bounds\n" << bounds.str();
    bool any_binary = false;
    for (const auto& v : model.vars)
        if (v.binary) {
            if (!any_binary) out << "Binary\n";
            any_binary = true;
            out << " " << v.name << "\n";
        }
    out << "End\n";
    return out.str();
}

CheckReport check_solution(const MilpModel& model, const std::map<std::string, double>& values,
                           double tol) {
    CheckReport rep;
    std::vector<double> x(model.vars.size(), 0.0);
    for (const auto& [name, v] : values) {
        auto it = model.var_index.find(name);
        if (it == model.var_index.end()) {
            rep.violations.push_back("unknown variable " + name);
            continue;
        }
        x[it->second] = v;
    }
    for (std::size_t i = 0; i < model.vars.size(); ++i) {
        const auto& v = model.vars[i];
        double lower = v.lower, upper = v.binary ? 1.0 : v.upper;
        if (x[i] < lower - tol || x[i] > upper + tol)
            rep.violations.push_back(v.name + " = " + fmt(x[i]) + " outside bounds");
        if (v.binary && std::abs(x[i] - std::round(x[i])) > tol)
            rep.violations.push_back(v.name + " = " + fmt(x[i]) + " not integral");
    }
    for (const auto& c : model.constraints) {
        double lhs = 0.0;
        for (const auto& t : c.terms) lhs += t.coef * x[t.var];
        bool ok = c.sense == '<'   ? lhs <= c.rhs + tol
                  : c.sense == '>' ? lhs >= c.rhs - tol
                                   : std::abs(lhs - c.rhs) <= tol;
        if (!ok)
            rep.violations.push_back(c.name + ": lhs " + fmt(lhs) + " vs rhs " + fmt(c.rhs));
    }
    for (const auto& t : model.objective) rep.objective += t.coef * x[t.var];
    rep.feasible = rep.violations.empty();
    return rep;
}

namespace {

void set_route_arcs(std::map<std::string, double>& values, const Link& u,
                    const std::vector<NodeId>& seq) {
    for (std::size_t i = 0; i + 1 < seq.size(); ++i)
        values[y_name(u, seq[i], seq[i + 1])] = 1.0;
}

// parent map of a tree rooted at `root`, BFS over sorted adjacency
std::map<NodeId, NodeId> tree_parents(const std::set<Link>& branches, NodeId root) {
    std::map<NodeId, std::vector<NodeId>> adj;
    for (const auto& e : branches) {
        adj[e.a].push_back(e.b);
        adj[e.b].push_back(e.a);
    }
    for (auto& [n, nbrs] : adj) std::sort(nbrs.begin(), nbrs.end());
    std::map<NodeId, NodeId> parent;
    parent[root] = root;
    std::queue<NodeId> q;
    q.push(root);
    while (!q.empty()) {
        NodeId u = q.front();
        q.pop();
        for (NodeId v : adj[u])
            if (!parent.count(v)) {
                parent[v] = u;
                q.push(v);
            }
    }
    return parent;
}

} // namespace

std::map<std::string, double> milp_solution_from_mapping(const CrossLayerInstance& inst,
                                                         const SolveResult& result) {
    std::map<std::string, double> values;
    for (const auto& [u, seq] : result.mapping.routes) set_route_arcs(values, u, seq);
    for (const auto& e : result.unprotected) values[g_name(e)] = 1.0;

    const double n_minus_1 = static_cast<double>(inst.logical.nodes.size()) - 1.0;
    NodeId root = *inst.logical.nodes.begin();
    for (const auto& [e, tree_idx] : result.base_set.protected_by) {
        const auto& tree = result.base_set.trees[tree_idx];
        auto parent = tree_parents(tree.branches, root);
        for (NodeId v : inst.logical.nodes) {
            if (v == root) continue;
            // ship 1/(n-1) along the root->v tree path
            std::vector<NodeId> chain{v};
            while (chain.back() != root) chain.push_back(parent.at(chain.back()));
            for (std::size_t i = chain.size(); i-- > 1;)
                values[w_name(e, chain[i], chain[i - 1])] += 1.0 / n_minus_1;
        }
    }
    return values;
}

std::map<std::string, double> milp_solution_from_tree(const CrossLayerInstance& inst,
                                                      const TreeResult& result) {
    std::map<std::string, double> values;
    for (const auto& e : tree_links(result.tree)) values[x_name(e)] = 1.0;
    for (const auto& u : result.tree.branches) {
        values[z_name(u)] = 1.0;
        set_route_arcs(values, u, result.tree.routes.at(u));
    }
    NodeId root = *inst.logical.nodes.begin();
    auto parent = tree_parents(result.tree.branches, root);
    // subtree sizes give the flow on each parent->child logical arc
    std::map<NodeId, double> size;
    std::vector<NodeId> order; // leaves last via repeated scan
    for (const auto& [v, p] : parent) {
        (void)p;
        order.push_back(v);
        size[v] = 1.0;
    }
    // accumulate child sizes into parents, deepest first
    std::map<NodeId, int> depth;
    for (NodeId v : order) {
        int d = 0;
        NodeId u = v;
        while (parent.at(u) != u) {
            u = parent.at(u);
            ++d;
        }
        depth[v] = d;
    }
    std::sort(order.begin(), order.end(),
              [&](NodeId a, NodeId b) { return depth[a] > depth[b]; });
    for (NodeId v : order) {
        if (parent.at(v) == v) continue;
        values[f_name(parent.at(v), v)] = size[v];
        size[parent.at(v)] += size[v];
    }
    return values;
}

} // namespace xsurv
