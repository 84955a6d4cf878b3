#include "ringcut/io.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace ringcut {

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

class LineParser {
public:
    LineParser(const std::string& path, int line_no, const std::string& line)
        : path_(path), line_no_(line_no), stream_(line) {}

    std::string word() {
        std::string w;
        if (!(stream_ >> w)) fail("unexpected end of line");
        return w;
    }
    long long integer() {
        long long v;
        if (!(stream_ >> v)) fail("expected an integer");
        return v;
    }
    double real() {
        double v;
        if (!(stream_ >> v)) fail("expected a number");
        return v;
    }
    void done() {
        std::string rest;
        if (stream_ >> rest) fail("trailing content '" + rest + "'");
    }
    [[noreturn]] void fail(const std::string& msg) const {
        throw GraphError(path_ + ":" + std::to_string(line_no_) + ": " + msg);
    }

private:
    const std::string& path_;
    int line_no_;
    std::istringstream stream_;
};

std::string strip_comment(const std::string& line) {
    auto pos = line.find('#');
    return pos == std::string::npos ? line : line.substr(0, pos);
}

bool blank(const std::string& s) {
    for (char c : s)
        if (c != ' ' && c != '\t' && c != '\r') return false;
    return true;
}

}  // namespace

PlanarGraph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw GraphError("cannot open " + path);

    std::map<long long, Point> nodes;
    std::vector<Edge> edges;
    std::optional<Point> center;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = strip_comment(raw);
        if (blank(line)) continue;
        LineParser p(path, line_no, line);
        std::string kind = p.word();
        if (kind == "node") {
            long long id = p.integer();
            double x = p.real(), y = p.real();
            p.done();
            if (!nodes.emplace(id, Point{x, y}).second)
                p.fail("duplicate node id " + std::to_string(id));
        } else if (kind == "edge") {
            long long u = p.integer(), v = p.integer();
            double w = p.real();
            p.done();
            edges.push_back(
                {static_cast<NodeId>(u), static_cast<NodeId>(v), w});
        } else if (kind == "center") {
            double x = p.real(), y = p.real();
            p.done();
            center = Point{x, y};
        } else {
            p.fail("unknown record '" + kind + "'");
        }
    }
    if (nodes.empty()) throw GraphError(path + ": no nodes");

    std::vector<Point> coords;
    coords.reserve(nodes.size());
    long long expect = 0;
    for (const auto& [id, pt] : nodes) {
        if (id != expect)
            throw GraphError(path + ": node ids must be dense 0..n-1 (missing " +
                             std::to_string(expect) + ")");
        coords.push_back(pt);
        ++expect;
    }
    try {
        return PlanarGraph(std::move(coords), std::move(edges), center);
    } catch (const GraphError& e) {
        throw GraphError(path + ": " + e.what());
    }
}

void save_graph(const std::string& path, const PlanarGraph& g) {
    std::ofstream out(path);
    if (!out) throw GraphError("cannot open " + path + " for writing");
    for (int v = 0; v < g.node_count(); ++v)
        out << "node " << v << ' ' << format_double(g.nodes()[v].x) << ' '
            << format_double(g.nodes()[v].y) << '\n';
    for (const Edge& e : g.edges())
        out << "edge " << e.u << ' ' << e.v << ' ' << format_double(e.w)
            << '\n';
    out << "center " << format_double(g.center().x) << ' '
        << format_double(g.center().y) << '\n';
    if (!out) throw GraphError("failed writing " + path);
}

void save_partition(const std::string& path, const Partition& p,
                    std::optional<double> nc) {
    std::ofstream out(path);
    if (!out) throw GraphError("cannot open " + path + " for writing");
    out << "k " << p.k << '\n';
    for (std::size_t v = 0; v < p.assignment.size(); ++v)
        out << "block " << v << ' ' << p.assignment[v] << '\n';
    if (nc.has_value()) out << "nc " << format_double(*nc) << '\n';
    if (!out) throw GraphError("failed writing " + path);
}

LoadedPartition load_partition(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw GraphError("cannot open " + path);

    LoadedPartition result;
    std::map<long long, int> blocks;
    int k = -1;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = strip_comment(raw);
        if (blank(line)) continue;
        LineParser p(path, line_no, line);
        std::string kind = p.word();
        if (kind == "k") {
            k = static_cast<int>(p.integer());
            p.done();
        } else if (kind == "block") {
            long long node = p.integer();
            long long idx = p.integer();
            p.done();
            if (!blocks.emplace(node, static_cast<int>(idx)).second)
                p.fail("duplicate node " + std::to_string(node));
        } else if (kind == "nc") {
            result.nc = p.real();
            p.done();
        } else {
            p.fail("unknown record '" + kind + "'");
        }
    }
    if (blocks.empty()) throw GraphError(path + ": no block lines");

    Partition part;
    part.assignment.resize(blocks.size());
    long long expect = 0;
    for (const auto& [node, idx] : blocks) {
        if (node != expect)
            throw GraphError(path + ": node ids must be dense 0..n-1");
        part.assignment[expect] = idx;
        ++expect;
    }
    part.k = k >= 0 ? k : *std::max_element(part.assignment.begin(),
                                            part.assignment.end()) +
                              1;
    part.validate(static_cast<int>(part.assignment.size()));
    result.partition = std::move(part);
    return result;
}

void save_plant(const std::string& path, const Partition& p) {
    std::ofstream out(path);
    if (!out) throw GraphError("cannot open " + path + " for writing");
    for (std::size_t v = 0; v < p.assignment.size(); ++v)
        out << "block " << v << ' ' << p.assignment[v] << '\n';
    if (p.provenance.has_value()) {
        out << "# radii";
        for (double r : p.provenance->radii) out << ' ' << format_double(r);
        out << "\n# angles";
        for (double a : p.provenance->angles) out << ' ' << format_double(a);
        out << '\n';
    }
    if (!out) throw GraphError("failed writing " + path);
}

Partition load_plant(const std::string& path) {
    return load_partition(path).partition;
}

}  // namespace ringcut
