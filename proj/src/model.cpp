#include "xsurv/model.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <queue>
#include <sstream>

namespace xsurv {

std::string link_str(const Link& e) {
    return std::to_string(e.a) + "-" + std::to_string(e.b);
}

double PhysicalNetwork::rho(const Link& e) const {
    auto it = failure_prob.find(e);
    if (it == failure_prob.end())
        throw ValidationError("unknown physical link " + link_str(e));
    return it->second;
}

NodeId NodeMapping::at(NodeId logical) const {
    auto it = assign.find(logical);
    if (it == assign.end())
        throw ValidationError("logical node " + std::to_string(logical) + " has no mapping");
    return it->second;
}

namespace {

std::map<NodeId, std::vector<NodeId>> build_adjacency(const std::set<NodeId>& nodes,
                                                      const auto& links) {
    std::map<NodeId, std::vector<NodeId>> adj;
    for (NodeId n : nodes) adj[n];
    for (const auto& e : links) {
        adj[e.a].push_back(e.b);
        adj[e.b].push_back(e.a);
    }
    for (auto& [n, nbrs] : adj) std::sort(nbrs.begin(), nbrs.end());
    return adj;
}

// BFS reachability over an adjacency map restricted to `nodes`.
bool is_connected(const std::set<NodeId>& nodes, const std::map<NodeId, std::vector<NodeId>>& adj) {
    if (nodes.size() <= 1) return true;
    std::set<NodeId> seen;
    std::queue<NodeId> q;
    q.push(*nodes.begin());
    seen.insert(*nodes.begin());
    while (!q.empty()) {
        NodeId u = q.front();
        q.pop();
        auto it = adj.find(u);
        if (it == adj.end()) continue;
        for (NodeId v : it->second)
            if (seen.insert(v).second) q.push(v);
    }
    return seen.size() == nodes.size();
}

} // namespace

std::map<NodeId, std::vector<NodeId>> PhysicalNetwork::adjacency() const {
    std::vector<Link> links;
    links.reserve(failure_prob.size());
    for (const auto& [e, _] : failure_prob) links.push_back(e);
    return build_adjacency(nodes, links);
}

std::map<NodeId, std::vector<NodeId>> LogicalNetwork::adjacency() const {
    return build_adjacency(nodes, links);
}

void CrossLayerInstance::validate() const {
    for (NodeId n : physical.nodes)
        if (n <= 0) throw ValidationError("physical node ids must be positive");
    for (NodeId n : logical.nodes)
        if (n <= 0) throw ValidationError("logical node ids must be positive");
    for (const auto& [e, p] : physical.failure_prob) {
        if (e.a == e.b) throw ValidationError("physical self-loop " + link_str(e));
        if (!physical.nodes.count(e.a) || !physical.nodes.count(e.b))
            throw ValidationError("physical link " + link_str(e) + " references undeclared node");
        if (!(p >= 0.0 && p < 1.0))
            throw ValidationError("failure probability of " + link_str(e) + " outside [0,1)");
    }
    for (const auto& e : logical.links) {
        if (e.a == e.b) throw ValidationError("logical self-loop " + link_str(e));
        if (!logical.nodes.count(e.a) || !logical.nodes.count(e.b))
            throw ValidationError("logical link " + link_str(e) + " references undeclared node");
    }
    if (!is_connected(logical.nodes, logical.adjacency()))
        throw ValidationError("logical network is not connected");

    // node map: total over V_L, injective, image inside V_P
    std::set<NodeId> image;
    for (NodeId s : logical.nodes) {
        auto it = node_map.assign.find(s);
        if (it == node_map.assign.end())
            throw ValidationError("node map is missing logical node " + std::to_string(s));
        if (!physical.nodes.count(it->second))
            throw ValidationError("node map sends " + std::to_string(s) +
                                  " to unknown physical node " + std::to_string(it->second));
        if (!image.insert(it->second).second)
            throw ValidationError("node map is not injective at physical node " +
                                  std::to_string(it->second));
    }
    for (const auto& [s, _] : node_map.assign)
        if (!logical.nodes.count(s))
            throw ValidationError("node map references unknown logical node " + std::to_string(s));
}

bool LinkMapping::total_over(const LogicalNetwork& logical) const {
    for (const auto& e : logical.links)
        if (!routes.count(e)) return false;
    return true;
}

std::set<Link> route_links(const std::vector<NodeId>& route) {
    std::set<Link> out;
    for (size_t i = 0; i + 1 < route.size(); ++i) out.insert(make_link(route[i], route[i + 1]));
    return out;
}

void validate_route(const CrossLayerInstance& inst, const Link& u, const std::vector<NodeId>& route) {
    if (route.size() < 2)
        throw ValidationError("route for " + link_str(u) + " has fewer than two nodes");
    NodeId want_a = inst.node_map.at(u.a), want_b = inst.node_map.at(u.b);
    if (route.front() != want_a || route.back() != want_b)
        throw ValidationError("route for " + link_str(u) + " does not join " +
                              std::to_string(want_a) + " and " + std::to_string(want_b));
    std::set<NodeId> seen;
    for (NodeId n : route)
        if (!seen.insert(n).second)
            throw ValidationError("route for " + link_str(u) + " repeats node " + std::to_string(n));
    for (size_t i = 0; i + 1 < route.size(); ++i)
        if (!inst.physical.has_link(make_link(route[i], route[i + 1])))
            throw ValidationError("route for " + link_str(u) + " uses missing physical link " +
                                  link_str(make_link(route[i], route[i + 1])));
}

// ---------------------------------------------------------------------------
// Instance file parsing
// ---------------------------------------------------------------------------

namespace {

enum class Section { None, Physical, Logical, NodeMap, Routes };

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

NodeId parse_node_id(const std::string& tok, int line) {
    NodeId v = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size())
        throw ParseError(line, "expected integer node id, got '" + tok + "'");
    if (v <= 0) throw ParseError(line, "node ids must be positive, got '" + tok + "'");
    return v;
}

double parse_prob(const std::string& tok, int line) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size())
        throw ParseError(line, "expected probability, got '" + tok + "'");
    if (!(v >= 0.0 && v < 1.0))
        throw ParseError(line, "failure probability must lie in [0,1), got '" + tok + "'");
    return v;
}

} // namespace

ParsedInstance parse_instance(const std::string& text) {
    CrossLayerInstance inst;
    LinkMapping mapping;
    bool have_routes_section = false;
    bool have_physical = false, have_logical = false, have_map = false;

    Section section = Section::None;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    // route lines are validated after the whole file is read (they may precede
    // nothing, but node_map could legally follow them)
    std::vector<std::tuple<int, Link, std::vector<NodeId>>> pending_routes;

    while (std::getline(in, raw)) {
        ++line;
        if (auto pos = raw.find('#'); pos != std::string::npos) raw.erase(pos);
        std::string s = trim(raw);
        if (s.empty()) continue;

        if (s.front() == '[') {
            if (s == "[physical]") { section = Section::Physical; have_physical = true; }
            else if (s == "[logical]") { section = Section::Logical; have_logical = true; }
            else if (s == "[node_map]") { section = Section::NodeMap; have_map = true; }
            else if (s == "[routes]") { section = Section::Routes; have_routes_section = true; }
            else throw ParseError(line, "unknown section '" + s + "'");
            continue;
        }

        auto toks = split_ws(s);
        if (section == Section::None) {
            if (toks[0] == "name" && toks.size() >= 2) {
                inst.name = trim(s.substr(s.find("name") + 4));
                continue;
            }
            throw ParseError(line, "content outside of any section: '" + s + "'");
        }

        switch (section) {
        case Section::Physical:
        case Section::Logical: {
            const bool phys = section == Section::Physical;
            if (toks[0] == "node") {
                if (toks.size() != 2) throw ParseError(line, "expected: node <id>");
                NodeId n = parse_node_id(toks[1], line);
                (phys ? inst.physical.nodes : inst.logical.nodes).insert(n);
            } else if (toks[0] == "link") {
                if (phys && toks.size() != 4)
                    throw ParseError(line, "expected: link <a> <b> <rho>");
                if (!phys && toks.size() != 3)
                    throw ParseError(line, "expected: link <s> <t>");
                NodeId a = parse_node_id(toks[1], line);
                NodeId b = parse_node_id(toks[2], line);
                if (a == b) throw ParseError(line, "self-loop link " + toks[1] + " " + toks[2]);
                Link e = make_link(a, b);
                if (phys) {
                    double p = parse_prob(toks[3], line);
                    if (!inst.physical.failure_prob.emplace(e, p).second)
                        throw ParseError(line, "duplicate physical link " + link_str(e));
                    inst.physical.nodes.insert(a);
                    inst.physical.nodes.insert(b);
                } else {
                    if (!inst.logical.links.insert(e).second)
                        throw ParseError(line, "duplicate logical link " + link_str(e));
                    inst.logical.nodes.insert(a);
                    inst.logical.nodes.insert(b);
                }
            } else {
                throw ParseError(line, "unknown directive '" + toks[0] + "'");
            }
            break;
        }
        case Section::NodeMap: {
            if (toks.size() != 2) throw ParseError(line, "expected: <logical-id> <physical-id>");
            NodeId s_id = parse_node_id(toks[0], line);
            NodeId p_id = parse_node_id(toks[1], line);
            if (!inst.logical.nodes.count(s_id))
                throw ParseError(line, "unknown logical node " + toks[0]);
            if (!inst.physical.nodes.count(p_id))
                throw ParseError(line, "unknown physical node " + toks[1]);
            if (!inst.node_map.assign.emplace(s_id, p_id).second)
                throw ParseError(line, "duplicate mapping for logical node " + toks[0]);
            break;
        }
        case Section::Routes: {
            auto colon = std::find(toks.begin(), toks.end(), ":");
            if (colon == toks.end() || colon - toks.begin() != 2)
                throw ParseError(line, "expected: <s> <t> : <n1> <n2> ...");
            NodeId s_id = parse_node_id(toks[0], line);
            NodeId t_id = parse_node_id(toks[1], line);
            if (s_id == t_id) throw ParseError(line, "route for self-loop " + toks[0]);
            Link u = make_link(s_id, t_id);
            if (!inst.logical.links.count(u))
                throw ParseError(line, "route for unknown logical link " + link_str(u));
            std::vector<NodeId> seq;
            for (auto it = colon + 1; it != toks.end(); ++it)
                seq.push_back(parse_node_id(*it, line));
            if (seq.size() < 2) throw ParseError(line, "route needs at least two nodes");
            pending_routes.emplace_back(line, u, std::move(seq));
            break;
        }
        default: break;
        }
    }

    if (!have_physical) throw ParseError(line, "missing [physical] section");
    if (!have_logical) throw ParseError(line, "missing [logical] section");
    if (!have_map) throw ParseError(line, "missing [node_map] section");

    try {
        inst.validate();
    } catch (const ValidationError& err) {
        throw ParseError(line, err.what());
    }

    for (auto& [rline, u, seq] : pending_routes) {
        // normalize orientation: stored from m(u.a) to m(u.b)
        if (seq.front() == inst.node_map.at(u.b) && seq.back() == inst.node_map.at(u.a))
            std::reverse(seq.begin(), seq.end());
        try {
            validate_route(inst, u, seq);
        } catch (const ValidationError& err) {
            throw ParseError(rline, err.what());
        }
        if (!mapping.routes.emplace(u, seq).second)
            throw ParseError(rline, "duplicate route for logical link " + link_str(u));
    }

    ParsedInstance out{std::move(inst), std::nullopt};
    if (have_routes_section) {
        if (!mapping.total_over(out.instance.logical))
            throw ParseError(line, "[routes] section does not cover every logical link");
        out.routes = std::move(mapping);
    }
    return out;
}

ParsedInstance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open instance file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_instance(buf.str());
}

namespace {

std::string format_double(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, p);
}

} // namespace

std::string serialize_instance(const CrossLayerInstance& inst, const LinkMapping* routes) {
    std::ostringstream out;
    if (!inst.name.empty()) out << "name " << inst.name << "\n";
    out << "[physical]\n";
    std::set<NodeId> linked;
    for (const auto& [e, _] : inst.physical.failure_prob) {
        linked.insert(e.a);
        linked.insert(e.b);
    }
    for (NodeId n : inst.physical.nodes)
        if (!linked.count(n)) out << "node " << n << "\n";
    for (const auto& [e, p] : inst.physical.failure_prob)
        out << "link " << e.a << " " << e.b << " " << format_double(p) << "\n";
    out << "[logical]\n";
    linked.clear();
    for (const auto& e : inst.logical.links) {
        linked.insert(e.a);
        linked.insert(e.b);
    }
    for (NodeId n : inst.logical.nodes)
        if (!linked.count(n)) out << "node " << n << "\n";
    for (const auto& e : inst.logical.links) out << "link " << e.a << " " << e.b << "\n";
    out << "[node_map]\n";
    for (const auto& [s, p] : inst.node_map.assign) out << s << " " << p << "\n";
    if (routes) {
        out << "[routes]\n";
        for (const auto& [u, seq] : routes->routes) {
            out << u.a << " " << u.b << " :";
            for (NodeId n : seq) out << " " << n;
            out << "\n";
        }
    }
    return out.str();
}

SurvivingSubgraph surviving_logical_subgraph(const CrossLayerInstance& inst, const LinkMapping& m,
                                             const std::set<Link>& failed) {
    SurvivingSubgraph out;
    for (const auto& u : inst.logical.links) {
        auto it = m.routes.find(u);
        if (it == m.routes.end())
            throw ValidationError("mapping is missing a route for " + link_str(u));
        bool hit = false;
        const auto& seq = it->second;
        for (size_t i = 0; i + 1 < seq.size() && !hit; ++i)
            hit = failed.count(make_link(seq[i], seq[i + 1])) != 0;
        if (!hit) out.surviving.insert(u);
    }
    out.connected = is_connected(inst.logical.nodes,
                                 build_adjacency(inst.logical.nodes, out.surviving));
    return out;
}

} // namespace xsurv
