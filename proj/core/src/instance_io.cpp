#include "tokcol/instance_io.hpp"

#include <array>
#include <fstream>
#include <sstream>

#include "tokcol/errors.hpp"

namespace tokcol {

namespace {

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  std::string f;
  while (is >> f) out.push_back(f);
  return out;
}

std::string strip_comment(const std::string& line) {
  auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

int to_int(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(std::string("instance: bad ") + what + " '" + s + "'");
  }
}

}  // namespace

std::string emit_instance(const Instance& inst) {
  const Topology& t = inst.topo;
  const TokenAssignment& a = inst.tokens;
  std::ostringstream os;
  os << t.n << ' ' << a.total() << ' ' << a.L << '\n';
  auto port_of = [&](int v, int peer) {
    for (int i = 0; i < t.degree(v); ++i)
      if (t.ports[v][i].node == peer) return i;
    throw InvalidParameterError("emit: port map misses an edge");
  };
  for (auto [u, v] : t.edges)
    os << u << ' ' << v << ' ' << port_of(u, v) + 1 << ' ' << port_of(v, u) + 1 << '\n';
  for (int v = 0; v < t.n; ++v) {
    os << v << ':';
    for (const Token& tok : a.at[v]) os << ' ' << tok.to_hex();
    os << '\n';
  }
  return os.str();
}

Instance parse_instance(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  std::vector<std::vector<std::string>> rows;
  while (std::getline(is, line)) {
    auto f = fields(strip_comment(line));
    if (!f.empty()) rows.push_back(std::move(f));
  }
  if (rows.empty() || rows[0].size() != 3)
    throw ParseError("instance: missing 'n k L' header");
  int n = to_int(rows[0][0], "n");
  int k = to_int(rows[0][1], "k");
  int L = to_int(rows[0][2], "L");
  if (n < 1 || k < 0 || L < 1) throw ParseError("instance: header values out of range");

  std::vector<std::array<int, 4>> edges;
  std::vector<int> next_port(n, 0);
  int edge_fields = 0;  // 2 or 4 once seen
  std::vector<std::vector<Token>> at(n);
  std::vector<char> seen_node(n, 0);

  for (std::size_t r = 1; r < rows.size(); ++r) {
    auto& f = rows[r];
    bool node_line = !f[0].empty() && f[0].back() == ':';
    if (node_line) {
      int v = to_int(f[0].substr(0, f[0].size() - 1), "node index");
      if (v < 0 || v >= n) throw ParseError("instance: node index out of range");
      if (seen_node[v]) throw ParseError("instance: duplicate token line for a node");
      seen_node[v] = 1;
      int width = (L + 3) / 4;
      for (std::size_t i = 1; i < f.size(); ++i) {
        if (static_cast<int>(f[i].size()) != width)
          throw ParseError("instance: token hex width must be ceil(L/4) digits");
        try {
          at[v].push_back(BitString::from_hex(f[i], L));
        } catch (const std::exception& e) {
          throw ParseError(std::string("instance: bad token: ") + e.what());
        }
      }
    } else {
      if (f.size() != 2 && f.size() != 4)
        throw ParseError("instance: edge lines take 'u v' or 'u v pu pv'");
      if (edge_fields == 0) edge_fields = static_cast<int>(f.size());
      if (edge_fields != static_cast<int>(f.size()))
        throw ParseError("instance: mixed edge line forms");
      int u = to_int(f[0], "edge endpoint");
      int v = to_int(f[1], "edge endpoint");
      if (u < 0 || u >= n || v < 0 || v >= n || u == v)
        throw ParseError("instance: edge endpoints out of range");
      int pu, pv;
      if (f.size() == 4) {
        pu = to_int(f[2], "port") - 1;
        pv = to_int(f[3], "port") - 1;
        if (pu < 0 || pv < 0) throw ParseError("instance: ports are 1-based");
      } else {
        pu = next_port[u]++;
        pv = next_port[v]++;
      }
      edges.push_back({u, v, pu, pv});
    }
  }
  for (int v = 0; v < n; ++v)
    if (!seen_node[v]) throw ParseError("instance: missing token line for a node");

  Instance inst;
  try {
    inst.topo = from_edges_with_ports(n, edges);
  } catch (const InvalidParameterError& e) {
    throw ParseError(std::string("instance: ") + e.what());
  }
  inst.tokens.L = L;
  inst.tokens.at = std::move(at);
  if (inst.tokens.total() != k)
    throw ParseError("instance: header k does not match the token lines");
  return inst;
}

std::string emit_correspondence(const std::vector<int>& map_to_base) {
  std::ostringstream os;
  for (std::size_t j = 0; j < map_to_base.size(); ++j)
    os << j << ' ' << map_to_base[j] << '\n';
  return os.str();
}

std::vector<int> parse_correspondence(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  std::vector<int> out;
  while (std::getline(is, line)) {
    auto f = fields(strip_comment(line));
    if (f.empty()) continue;
    if (f.size() != 2) throw ParseError("correspondence: lines take 'cover base'");
    int j = to_int(f[0], "cover node");
    int b = to_int(f[1], "base node");
    if (j != static_cast<int>(out.size()))
      throw ParseError("correspondence: cover nodes must appear in order");
    out.push_back(b);
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << content;
}

}  // namespace tokcol
