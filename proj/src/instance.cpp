#include "npp/instance.hpp"

#include <cmath>
#include <fstream>
#include <queue>
#include <sstream>

#include "json.hpp"
#include "npp/error.hpp"

namespace npp {

namespace {

using nlohmann::json;

bool reaches_without_tolls(int nodes, const std::vector<Arc>& arcs, int from, int to) {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(nodes));
    for (const Arc& a : arcs)
        if (!a.tolled) adj[static_cast<std::size_t>(a.tail)].push_back(a.head);
    std::vector<char> seen(static_cast<std::size_t>(nodes), 0);
    std::queue<int> open;
    open.push(from);
    seen[static_cast<std::size_t>(from)] = 1;
    while (!open.empty()) {
        int u = open.front();
        open.pop();
        if (u == to) return true;
        for (int v : adj[static_cast<std::size_t>(u)])
            if (!seen[static_cast<std::size_t>(v)]) {
                seen[static_cast<std::size_t>(v)] = 1;
                open.push(v);
            }
    }
    return false;
}

std::string fmt_msg(const char* what, std::size_t i, const char* tail) {
    std::ostringstream os;
    os << what << ' ' << i << ' ' << tail;
    return os.str();
}

json number_json(double v) {
    if (std::floor(v) == v && std::fabs(v) < 9.0e15) return static_cast<std::int64_t>(v);
    return v;
}

}  // namespace

Instance::Instance(int node_count, std::vector<Arc> arcs, std::vector<Commodity> commodities,
                   std::vector<std::string> node_names)
    : node_count_(node_count),
      arcs_(std::move(arcs)),
      commodities_(std::move(commodities)),
      names_(std::move(node_names)) {
    if (node_count_ <= 0) throw ValidationError("instance needs at least one node");
    if (!names_.empty() && static_cast<int>(names_.size()) != node_count_)
        throw ValidationError("node name list does not match node count");
    if (arcs_.empty()) throw ValidationError("instance has no arcs");

    double free_total = 0.0;
    tolled_index_.assign(arcs_.size(), -1);
    for (std::size_t i = 0; i < arcs_.size(); ++i) {
        const Arc& a = arcs_[i];
        if (a.tail < 0 || a.tail >= node_count_ || a.head < 0 || a.head >= node_count_)
            throw ValidationError(fmt_msg("arc", i, "references an unknown node"));
        if (a.tail == a.head) throw ValidationError(fmt_msg("arc", i, "is a self-loop"));
        if (!std::isfinite(a.cost) || a.cost < 0.0)
            throw ValidationError(fmt_msg("arc", i, "has a negative or non-finite cost"));
        if (a.tolled) {
            tolled_index_[i] = static_cast<int>(tolled_.size());
            tolled_.push_back(static_cast<int>(i));
        } else {
            free_total += a.cost;
        }
    }
    if (tolled_.size() == arcs_.size()) throw ValidationError("every arc is tolled");
    toll_cap_ = free_total + 1.0;

    for (std::size_t k = 0; k < commodities_.size(); ++k) {
        const Commodity& c = commodities_[k];
        if (c.origin < 0 || c.origin >= node_count_ || c.destination < 0 || c.destination >= node_count_)
            throw ValidationError(fmt_msg("commodity", k, "references an unknown node"));
        if (c.origin == c.destination)
            throw ValidationError(fmt_msg("commodity", k, "has equal origin and destination"));
        if (!std::isfinite(c.demand) || c.demand <= 0.0)
            throw ValidationError(fmt_msg("commodity", k, "has a non-positive demand"));
        if (!reaches_without_tolls(node_count_, arcs_, c.origin, c.destination))
            throw ValidationError(fmt_msg("commodity", k, "has no toll-free path"));
    }

    out_offsets_.assign(static_cast<std::size_t>(node_count_) + 1, 0);
    for (const Arc& a : arcs_) ++out_offsets_[static_cast<std::size_t>(a.tail) + 1];
    for (std::size_t v = 0; v < static_cast<std::size_t>(node_count_); ++v)
        out_offsets_[v + 1] += out_offsets_[v];
    out_list_.resize(arcs_.size());
    std::vector<int> fill(out_offsets_.begin(), out_offsets_.end() - 1);
    for (std::size_t i = 0; i < arcs_.size(); ++i)
        out_list_[static_cast<std::size_t>(fill[static_cast<std::size_t>(arcs_[i].tail)]++)] = static_cast<int>(i);
}

std::span<const int> Instance::out_arcs(int node) const {
    auto b = static_cast<std::size_t>(out_offsets_.at(static_cast<std::size_t>(node)));
    auto e = static_cast<std::size_t>(out_offsets_.at(static_cast<std::size_t>(node) + 1));
    return std::span<const int>(out_list_).subspan(b, e - b);
}

std::string Instance::node_label(int node) const {
    if (!names_.empty()) return names_.at(static_cast<std::size_t>(node));
    return std::to_string(node);
}

bool Instance::unit_demand() const noexcept {
    for (const Commodity& c : commodities_)
        if (c.demand != 1.0) return false;
    return true;
}

Instance parse_instance(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text.begin(), json_text.end());
    } catch (const json::parse_error& e) {
        throw ParseError(e.what(), e.byte);
    }
    try {
        int nodes = 0;
        std::vector<std::string> names;
        const json& jn = doc.at("nodes");
        if (jn.is_array()) {
            for (const json& n : jn) names.push_back(n.is_string() ? n.get<std::string>() : n.dump());
            nodes = static_cast<int>(names.size());
        } else {
            nodes = jn.get<int>();
        }
        std::vector<Arc> arcs;
        for (const json& a : doc.at("arcs")) {
            arcs.push_back(Arc{a.at("tail").get<int>(), a.at("head").get<int>(), a.at("cost").get<double>(),
                               a.value("tolled", false)});
        }
        std::vector<Commodity> commodities;
        for (const json& c : doc.at("commodities")) {
            commodities.push_back(Commodity{c.at("origin").get<int>(), c.at("destination").get<int>(),
                                            c.value("demand", 1.0)});
        }
        return Instance(nodes, std::move(arcs), std::move(commodities), std::move(names));
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed instance: ") + e.what());
    }
}

Instance load_instance(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_instance(buf.str());
}

std::string instance_to_json(const Instance& instance) {
    json doc;
    if (instance.node_names().empty()) {
        doc["nodes"] = instance.node_count();
    } else {
        doc["nodes"] = json::array();
        for (const std::string& n : instance.node_names()) doc["nodes"].push_back(n);
    }
    doc["arcs"] = json::array();
    for (const Arc& a : instance.arcs())
        doc["arcs"].push_back({{"tail", a.tail}, {"head", a.head}, {"cost", number_json(a.cost)}, {"tolled", a.tolled}});
    doc["commodities"] = json::array();
    for (const Commodity& c : instance.commodities())
        doc["commodities"].push_back(
            {{"origin", c.origin}, {"destination", c.destination}, {"demand", number_json(c.demand)}});
    return doc.dump(2);
}

void save_instance(const Instance& instance, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << instance_to_json(instance) << '\n';
}

GridConfig parse_grid_config(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text.begin(), json_text.end());
    } catch (const json::parse_error& e) {
        throw ParseError(e.what(), e.byte);
    }
    GridConfig cfg;
    try {
        cfg.tolled_fraction = doc.value("tolled_fraction", cfg.tolled_fraction);
        cfg.cost_min = doc.value("cost_min", cfg.cost_min);
        cfg.cost_max = doc.value("cost_max", cfg.cost_max);
        cfg.toll_cost_min = doc.value("toll_cost_min", cfg.toll_cost_min);
        cfg.toll_cost_max = doc.value("toll_cost_max", cfg.toll_cost_max);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed generator config: ") + e.what());
    }
    if (!(cfg.tolled_fraction >= 0.0 && cfg.tolled_fraction < 1.0))
        throw ValidationError("tolled_fraction must lie in [0, 1)");
    if (cfg.cost_min < 0 || cfg.cost_min > cfg.cost_max || cfg.toll_cost_min < 0 ||
        cfg.toll_cost_min > cfg.toll_cost_max)
        throw ValidationError("cost ranges must be non-negative and ordered");
    return cfg;
}

}  // namespace npp
