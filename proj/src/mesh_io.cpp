#include "cfem/mesh_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace cfem {

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct LineReader {
  std::istream& in;
  std::size_t number = 0;

  std::string next(const char* what) {
    std::string line;
    while (std::getline(in, line)) {
      ++number;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") != std::string::npos) return line;
    }
    throw ParseError(std::string("unexpected end of file, expected ") + what, number + 1);
  }
};

std::vector<std::string> split(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  for (std::string tok; ss >> tok;) out.push_back(tok);
  return out;
}

double parse_double(const std::string& s, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("invalid number '" + s + "'", line);
  }
}

Index parse_index(const std::string& s, std::size_t line) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
    throw ParseError("invalid index '" + s + "'", line);
  }
  try {
    return static_cast<Index>(std::stoull(s));
  } catch (const std::exception&) {
    throw ParseError("index out of range '" + s + "'", line);
  }
}

std::string after_prefix(const std::string& tok, const std::string& prefix, std::size_t line) {
  if (tok.rfind(prefix, 0) != 0) throw ParseError("expected '" + prefix + "...', got '" + tok + "'", line);
  return tok.substr(prefix.size());
}

}  // namespace

void write_mesh(const CubicMesh& mesh, std::ostream& out) {
  out << "cfem-mesh v1\n";
  out << "nodes " << mesh.nodes.size() << " elements " << mesh.elements.size() << "\n";
  for (Index i = 0; i < mesh.nodes.size(); ++i) {
    const auto& tag = mesh.node_tags[i];
    out << i << ' ' << format_double(mesh.nodes[i].x()) << ' ' << format_double(mesh.nodes[i].y())
        << ' ' << (tag.empty() ? "-" : tag) << '\n';
  }
  for (Index e = 0; e < mesh.elements.size(); ++e) {
    out << e;
    for (Index n : mesh.elements[e]) out << ' ' << n;
    const auto& c = mesh.curved[e];
    if (c) {
      out << " curved:" << c->local_edge << " arc:" << c->arc << '\n';
    } else {
      out << " curved:- arc:-\n";
    }
  }
  for (Index a = 0; a < mesh.arcs.size(); ++a) {
    out << "arc " << a << ' ' << format_double(mesh.arcs[a].center.x()) << ' '
        << format_double(mesh.arcs[a].center.y()) << ' ' << format_double(mesh.arcs[a].radius) << '\n';
  }
}

void write_mesh(const CubicMesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  write_mesh(mesh, out);
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

CubicMesh read_mesh(std::istream& in) {
  LineReader r{in};
  if (r.next("header") != "cfem-mesh v1") throw ParseError("expected header 'cfem-mesh v1'", r.number);

  auto counts = split(r.next("counts line"));
  if (counts.size() != 4 || counts[0] != "nodes" || counts[2] != "elements") {
    throw ParseError("expected 'nodes N elements E'", r.number);
  }
  const Index n_nodes = parse_index(counts[1], r.number);
  const Index n_elems = parse_index(counts[3], r.number);

  CubicMesh mesh;
  mesh.nodes.reserve(n_nodes);
  mesh.node_tags.reserve(n_nodes);
  for (Index i = 0; i < n_nodes; ++i) {
    auto tok = split(r.next("node line"));
    if (tok.size() != 4) throw ParseError("node line needs 'id x y tag'", r.number);
    if (parse_index(tok[0], r.number) != i) throw ParseError("node ids must be consecutive from 0", r.number);
    mesh.nodes.emplace_back(parse_double(tok[1], r.number), parse_double(tok[2], r.number));
    mesh.node_tags.push_back(tok[3] == "-" ? std::string() : tok[3]);
  }

  std::vector<std::pair<Index, std::size_t>> arc_refs;  // (arc id, line)
  mesh.elements.reserve(n_elems);
  for (Index e = 0; e < n_elems; ++e) {
    auto tok = split(r.next("element line"));
    if (tok.size() != 13) {
      throw ParseError("element line needs an id, 10 node ids, curved:<edge|-> and arc:<id|->", r.number);
    }
    if (parse_index(tok[0], r.number) != e) throw ParseError("element ids must be consecutive from 0", r.number);
    std::array<Index, 10> ids{};
    for (int k = 0; k < 10; ++k) {
      ids[k] = parse_index(tok[1 + k], r.number);
      if (ids[k] >= n_nodes) {
        throw MeshError("element " + std::to_string(e) + " references missing node " + std::to_string(ids[k]));
      }
    }
    mesh.elements.push_back(ids);
    const auto edge = after_prefix(tok[11], "curved:", r.number);
    const auto arc = after_prefix(tok[12], "arc:", r.number);
    if ((edge == "-") != (arc == "-")) throw ParseError("curved and arc fields must both be set or both '-'", r.number);
    if (edge == "-") {
      mesh.curved.push_back(std::nullopt);
    } else {
      const Index local = parse_index(edge, r.number);
      if (local > 2) throw ParseError("curved edge must be 0, 1 or 2", r.number);
      const Index arc_id = parse_index(arc, r.number);
      mesh.curved.push_back(CurvedEdge{static_cast<int>(local), arc_id});
      arc_refs.emplace_back(arc_id, r.number);
    }
  }

  std::string line;
  while (std::getline(in, line)) {
    ++r.number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto tok = split(line);
    if (tok.empty()) continue;
    if (tok.size() != 5 || tok[0] != "arc") throw ParseError("arc line needs 'arc id cx cy r'", r.number);
    if (parse_index(tok[1], r.number) != mesh.arcs.size()) {
      throw ParseError("arc ids must be consecutive from 0", r.number);
    }
    const double radius = parse_double(tok[4], r.number);
    if (!(radius > 0.0)) throw ParseError("arc radius must be positive", r.number);
    mesh.arcs.push_back(Arc{Point(parse_double(tok[2], r.number), parse_double(tok[3], r.number)), radius});
  }
  for (const auto& [id, at] : arc_refs) {
    if (id >= mesh.arcs.size()) {
      throw MeshError("element on line " + std::to_string(at) + " references missing arc " + std::to_string(id));
    }
  }
  // Vertices are numbered before edge and interior nodes.
  for (const auto& el : mesh.elements) {
    for (int k = 0; k < 3; ++k) mesh.vertex_count = std::max(mesh.vertex_count, el[k] + 1);
  }
  return mesh;
}

CubicMesh read_mesh(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  return read_mesh(in);
}

}  // namespace cfem
