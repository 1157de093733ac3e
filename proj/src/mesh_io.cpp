#include "ariis/mesh_io.hpp"

#include <algorithm>
#include <boost/archive/iterators/base64_from_binary.hpp>
#include <boost/archive/iterators/binary_from_base64.hpp>
#include <boost/archive/iterators/transform_width.hpp>
#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <set>
#include <sstream>
#include <unordered_map>

#include "ariis/error.hpp"

namespace ariis {

TagMap default_tag_map() {
  TagMap m;
  m.names = {{"inlet", BoundaryTag::Inlet}, {"outlet", BoundaryTag::Outlet}, {"wall", BoundaryTag::Wall}};
  m.ids = {{1, BoundaryTag::Inlet}, {2, BoundaryTag::Outlet}, {3, BoundaryTag::Wall}};
  return m;
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Collects tets and tagged triangles with arbitrary node ids, then compacts
// the vertex numbering to the nodes used by tets.
struct MeshBuilder {
  std::unordered_map<long long, Vec3> nodes;
  std::vector<std::array<long long, 4>> tets;
  std::vector<std::pair<std::array<long long, 3>, BoundaryTag>> tris;

  TetMesh build() {
    if (tets.empty()) throw MeshError("mesh contains no tetrahedra");
    std::unordered_map<long long, int> index;
    std::vector<Vec3> vertices;
    std::vector<Cell> cells;
    cells.reserve(tets.size());
    auto lookup = [&](long long id) {
      auto [it, fresh] = index.emplace(id, static_cast<int>(vertices.size()));
      if (fresh) {
        const auto n = nodes.find(id);
        if (n == nodes.end()) throw MeshError("element references missing node " + std::to_string(id));
        vertices.push_back(n->second);
      }
      return it->second;
    };
    for (const auto& t : tets) cells.push_back({lookup(t[0]), lookup(t[1]), lookup(t[2]), lookup(t[3])});
    std::vector<BoundaryFace> faces;
    std::set<std::array<int, 3>> seen;
    for (const auto& [t, tag] : tris) {
      std::array<int, 3> f{};
      for (int k = 0; k < 3; ++k) {
        const auto it = index.find(t[k]);
        if (it == index.end()) throw MeshError("tagged face is not a boundary face of the cell complex");
        f[k] = it->second;
      }
      auto key = f;
      std::sort(key.begin(), key.end());
      if (!seen.insert(key).second) continue;
      faces.push_back({f, tag, -1});
    }
    return TetMesh(std::move(vertices), std::move(cells), std::move(faces));
  }
};

[[noreturn]] void non_tet() { throw MeshError("non-tetrahedral cell"); }

int gmsh_node_count(int type) {
  switch (type) {
    case 1: return 2;
    case 2: return 3;
    case 3: return 4;
    case 4: return 4;
    case 5: return 8;
    case 6: return 6;
    case 7: return 5;
    case 15: return 1;
    default: return -1;
  }
}

bool gmsh_is_volume_non_tet(int type) { return type == 3 || type == 5 || type == 6 || type == 7; }

std::optional<BoundaryTag> resolve(const TagMap& tags, const std::map<int, std::string>& names, int phys) {
  if (const auto n = names.find(phys); n != names.end()) {
    if (const auto t = tags.names.find(n->second); t != tags.names.end()) return t->second;
  }
  if (const auto t = tags.ids.find(phys); t != tags.ids.end()) return t->second;
  return std::nullopt;
}

void expect(std::istream& in, const std::string& token) {
  std::string s;
  if (!(in >> s) || s != token) throw MeshError("Gmsh parse error: expected " + token);
}

template <class T>
T next(std::istream& in, const char* what) {
  T v{};
  if (!(in >> v)) throw MeshError(std::string("Gmsh parse error: bad ") + what);
  return v;
}

void skip_section(std::istream& in, const std::string& name) {
  const std::string end = "$End" + name.substr(1);
  std::string s;
  while (in >> s) {
    if (s == end) return;
  }
  throw MeshError("Gmsh parse error: unterminated section " + name);
}

std::map<int, std::string> read_physical_names(std::istream& in) {
  std::map<int, std::string> names;
  const int n = next<int>(in, "physical name count");
  for (int i = 0; i < n; ++i) {
    next<int>(in, "physical dimension");
    const int tag = next<int>(in, "physical tag");
    std::string name;
    in >> std::quoted(name);
    names[tag] = name;
  }
  expect(in, "$EndPhysicalNames");
  return names;
}

void read_gmsh2(std::istream& in, const TagMap& tags, MeshBuilder& mb, std::map<int, std::string>& names) {
  std::string s;
  while (in >> s) {
    if (s == "$PhysicalNames") {
      names = read_physical_names(in);
    } else if (s == "$Nodes") {
      const long long n = next<long long>(in, "node count");
      for (long long i = 0; i < n; ++i) {
        const long long id = next<long long>(in, "node id");
        Vec3 x;
        x.x = next<double>(in, "coordinate");
        x.y = next<double>(in, "coordinate");
        x.z = next<double>(in, "coordinate");
        mb.nodes[id] = x;
      }
      expect(in, "$EndNodes");
    } else if (s == "$Elements") {
      const long long n = next<long long>(in, "element count");
      for (long long i = 0; i < n; ++i) {
        next<long long>(in, "element id");
        const int type = next<int>(in, "element type");
        const int ntags = next<int>(in, "tag count");
        std::vector<int> etags(ntags);
        for (auto& t : etags) t = next<int>(in, "element tag");
        if (gmsh_is_volume_non_tet(type)) non_tet();
        const int nn = gmsh_node_count(type);
        if (nn < 0) throw MeshError("unsupported Gmsh element type " + std::to_string(type));
        std::vector<long long> v(nn);
        for (auto& x : v) x = next<long long>(in, "element node");
        if (type == 4) {
          mb.tets.push_back({v[0], v[1], v[2], v[3]});
        } else if (type == 2 && !etags.empty()) {
          if (auto tag = resolve(tags, names, etags[0])) mb.tris.push_back({{v[0], v[1], v[2]}, *tag});
        }
      }
      expect(in, "$EndElements");
    } else if (!s.empty() && s[0] == '$' && s.rfind("$End", 0) != 0) {
      skip_section(in, s);
    }
  }
}

void read_gmsh4(std::istream& in, const TagMap& tags, MeshBuilder& mb, std::map<int, std::string>& names) {
  std::map<int, std::vector<int>> surface_phys;  // surface entity -> physical tags
  std::string s;
  while (in >> s) {
    if (s == "$PhysicalNames") {
      names = read_physical_names(in);
    } else if (s == "$Entities") {
      int count[4];
      for (int& c : count) c = next<int>(in, "entity count");
      for (int dim = 0; dim < 4; ++dim) {
        for (int e = 0; e < count[dim]; ++e) {
          const int tag = next<int>(in, "entity tag");
          const int nbox = dim == 0 ? 3 : 6;
          for (int k = 0; k < nbox; ++k) next<double>(in, "entity box");
          const int np = next<int>(in, "physical tag count");
          std::vector<int> phys(np);
          for (auto& p : phys) p = next<int>(in, "physical tag");
          if (dim == 2) surface_phys[tag] = phys;
          if (dim > 0) {
            const int nb = next<int>(in, "bounding entity count");
            for (int k = 0; k < nb; ++k) next<int>(in, "bounding entity");
          }
        }
      }
      expect(in, "$EndEntities");
    } else if (s == "$Nodes") {
      const long long blocks = next<long long>(in, "node block count");
      next<long long>(in, "node count");
      next<long long>(in, "min node tag");
      next<long long>(in, "max node tag");
      for (long long b = 0; b < blocks; ++b) {
        next<int>(in, "entity dimension");
        next<int>(in, "entity tag");
        const int parametric = next<int>(in, "parametric flag");
        const long long n = next<long long>(in, "block node count");
        if (parametric) throw MeshError("parametric Gmsh nodes are not supported");
        std::vector<long long> ids(n);
        for (auto& id : ids) id = next<long long>(in, "node tag");
        for (long long i = 0; i < n; ++i) {
          Vec3 x;
          x.x = next<double>(in, "coordinate");
          x.y = next<double>(in, "coordinate");
          x.z = next<double>(in, "coordinate");
          mb.nodes[ids[i]] = x;
        }
      }
      expect(in, "$EndNodes");
    } else if (s == "$Elements") {
      const long long blocks = next<long long>(in, "element block count");
      next<long long>(in, "element count");
      next<long long>(in, "min element tag");
      next<long long>(in, "max element tag");
      for (long long b = 0; b < blocks; ++b) {
        const int dim = next<int>(in, "entity dimension");
        const int entity = next<int>(in, "entity tag");
        const int type = next<int>(in, "element type");
        const long long n = next<long long>(in, "block element count");
        if (gmsh_is_volume_non_tet(type)) non_tet();
        const int nn = gmsh_node_count(type);
        if (nn < 0) throw MeshError("unsupported Gmsh element type " + std::to_string(type));
        std::optional<BoundaryTag> tag;
        if (dim == 2) {
          if (const auto it = surface_phys.find(entity); it != surface_phys.end()) {
            for (int p : it->second) {
              if ((tag = resolve(tags, names, p))) break;
            }
          }
        }
        for (long long i = 0; i < n; ++i) {
          next<long long>(in, "element tag");
          std::vector<long long> v(nn);
          for (auto& x : v) x = next<long long>(in, "element node");
          if (type == 4) {
            mb.tets.push_back({v[0], v[1], v[2], v[3]});
          } else if (type == 2 && tag) {
            mb.tris.push_back({{v[0], v[1], v[2]}, *tag});
          }
        }
      }
      expect(in, "$EndElements");
    } else if (!s.empty() && s[0] == '$' && s.rfind("$End", 0) != 0) {
      skip_section(in, s);
    }
  }
}

// --- VTU -------------------------------------------------------------------

std::size_t vtk_type_size(const std::string& type) {
  if (type == "Float64" || type == "Int64" || type == "UInt64") return 8;
  if (type == "Float32" || type == "Int32" || type == "UInt32") return 4;
  if (type == "Int16" || type == "UInt16") return 2;
  if (type == "Int8" || type == "UInt8") return 1;
  throw MeshError("unsupported VTK data type " + type);
}

double vtk_value(const unsigned char* p, const std::string& type) {
  auto get = [p](auto v) {
    std::memcpy(&v, p, sizeof(v));
    return static_cast<double>(v);
  };
  if (type == "Float64") return get(double{});
  if (type == "Float32") return get(float{});
  if (type == "Int64") return get(std::int64_t{});
  if (type == "UInt64") return get(std::uint64_t{});
  if (type == "Int32") return get(std::int32_t{});
  if (type == "UInt32") return get(std::uint32_t{});
  if (type == "Int16") return get(std::int16_t{});
  if (type == "UInt16") return get(std::uint16_t{});
  if (type == "Int8") return get(std::int8_t{});
  return get(std::uint8_t{});
}

std::vector<double> decode_array(const boost::property_tree::ptree& node, std::size_t header_bytes) {
  const std::string type = node.get<std::string>("<xmlattr>.type");
  const std::string format = node.get<std::string>("<xmlattr>.format", "ascii");
  std::string text = node.get_value<std::string>();
  std::vector<double> out;
  if (format == "ascii") {
    std::istringstream ss(text);
    double v;
    while (ss >> v) out.push_back(v);
    return out;
  }
  if (format != "binary") throw MeshError("unsupported VTK data format " + format);
  text.erase(std::remove_if(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); }), text.end());
  const std::size_t header_chars = 4 * ((header_bytes + 2) / 3);
  if (text.size() < header_chars) throw MeshError("truncated binary data array");
  std::vector<unsigned char> raw;
  std::size_t offset = 0;
  if (header_bytes % 3 != 0 && text[header_chars - 1] == '=') {
    raw = base64_decode(text.substr(header_chars));
  } else {
    raw = base64_decode(text);
    offset = header_bytes;
  }
  const std::size_t size = vtk_type_size(type);
  if (raw.size() < offset) throw MeshError("truncated binary data array");
  const std::size_t n = (raw.size() - offset) / size;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(vtk_value(raw.data() + offset + i * size, type));
  return out;
}

const boost::property_tree::ptree* find_array(const boost::property_tree::ptree& parent, const std::string& name) {
  for (const auto& [key, child] : parent) {
    if (key == "DataArray" && child.get<std::string>("<xmlattr>.Name", "") == name) return &child;
  }
  return nullptr;
}

template <class T>
void append_binary(std::ostringstream& os, const std::vector<T>& data) {
  const std::uint64_t bytes = data.size() * sizeof(T);
  os << base64_encode(&bytes, sizeof(bytes)) << base64_encode(data.data(), bytes);
}

template <class T>
void write_array(std::ostringstream& os, const std::string& type, const std::string& name, int components,
                 const std::vector<T>& data, VtuFormat format) {
  os << "        <DataArray type=\"" << type << "\" Name=\"" << name << "\"";
  if (components > 1) os << " NumberOfComponents=\"" << components << "\"";
  os << " format=\"" << (format == VtuFormat::Ascii ? "ascii" : "binary") << "\">\n";
  if (format == VtuFormat::Ascii) {
    os << "          ";
    for (std::size_t i = 0; i < data.size(); ++i) {
      if constexpr (std::is_floating_point_v<T>) {
        os << std::setprecision(17) << data[i];
      } else {
        os << static_cast<long long>(data[i]);
      }
      os << ((i + 1) % 12 == 0 ? "\n          " : " ");
    }
    os << "\n";
  } else {
    os << "          ";
    append_binary(os, data);
    os << "\n";
  }
  os << "        </DataArray>\n";
}

}  // namespace

std::string base64_encode(const void* data, std::size_t bytes) {
  using namespace boost::archive::iterators;
  using It = base64_from_binary<transform_width<const char*, 6, 8>>;
  const char* p = static_cast<const char*>(data);
  std::string out(It(p), It(p + bytes));
  out.append((3 - bytes % 3) % 3, '=');
  return out;
}

std::vector<unsigned char> base64_decode(const std::string& text) {
  using namespace boost::archive::iterators;
  using It = transform_width<binary_from_base64<std::string::const_iterator>, 8, 6>;
  std::string s = text;
  const std::size_t pad = static_cast<std::size_t>(std::count(s.end() - std::min<std::size_t>(2, s.size()), s.end(), '='));
  std::replace(s.end() - static_cast<std::ptrdiff_t>(pad), s.end(), '=', 'A');
  std::vector<unsigned char> out;
  try {
    for (It it(s.begin()), end(s.end()); it != end; ++it) out.push_back(static_cast<unsigned char>(*it));
  } catch (const std::exception&) {
    throw MeshError("invalid base64 data");
  }
  const std::size_t valid = s.size() / 4 * 3 - pad;
  if (out.size() > valid) out.resize(valid);
  return out;
}

TetMesh read_gmsh(const std::string& path, const TagMap& tags) {
  const std::string text = read_file(path);
  std::istringstream in(text);
  std::string s;
  if (!(in >> s) || s != "$MeshFormat") throw MeshError("Gmsh parse error: missing $MeshFormat in " + path);
  const std::string version = next<std::string>(in, "version");
  const int file_type = next<int>(in, "file type");
  next<int>(in, "data size");
  if (file_type != 0) throw MeshError("binary Gmsh files are not supported");
  // Some writers append a binary endianness marker; none for ASCII.
  expect(in, "$EndMeshFormat");
  MeshBuilder mb;
  std::map<int, std::string> names;
  if (version.rfind("2.", 0) == 0) {
    read_gmsh2(in, tags, mb, names);
  } else if (version.rfind("4.1", 0) == 0) {
    read_gmsh4(in, tags, mb, names);
  } else {
    throw MeshError("unsupported Gmsh format version " + version);
  }
  return mb.build();
}

TetMesh read_vtu(const std::string& path, const TagMap& tags) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    std::istringstream in(read_file(path));
    pt::read_xml(in, tree);
  } catch (const pt::xml_parser_error& e) {
    throw MeshError(std::string("VTU parse error: ") + e.what());
  }
  try {
    const auto& file = tree.get_child("VTKFile");
    const std::string header = file.get<std::string>("<xmlattr>.header_type", "UInt32");
    const std::size_t hb = vtk_type_size(header);
    if (file.get<std::string>("<xmlattr>.byte_order", "LittleEndian") != "LittleEndian") {
      throw MeshError("big-endian VTU files are not supported");
    }
    const auto& piece = file.get_child("UnstructuredGrid.Piece");
    const std::size_t npts = piece.get<std::size_t>("<xmlattr>.NumberOfPoints");
    const std::size_t ncells = piece.get<std::size_t>("<xmlattr>.NumberOfCells");
    const auto& points = piece.get_child("Points");
    const auto coords = decode_array(points.get_child("DataArray"), hb);
    if (coords.size() != 3 * npts) throw MeshError("VTU point array has the wrong size");
    const auto& cells = piece.get_child("Cells");
    const auto* conn_node = find_array(cells, "connectivity");
    const auto* off_node = find_array(cells, "offsets");
    const auto* type_node = find_array(cells, "types");
    if (!conn_node || !off_node || !type_node) throw MeshError("VTU cells section is incomplete");
    const auto conn = decode_array(*conn_node, hb);
    const auto offsets = decode_array(*off_node, hb);
    const auto types = decode_array(*type_node, hb);
    if (offsets.size() != ncells || types.size() != ncells) throw MeshError("VTU cell arrays have the wrong size");
    std::vector<double> tag_values;
    if (const auto cd = piece.get_child_optional("CellData")) {
      if (const auto* a = find_array(*cd, tags.vtu_field)) tag_values = decode_array(*a, hb);
    }
    MeshBuilder mb;
    for (std::size_t i = 0; i < npts; ++i) {
      mb.nodes[static_cast<long long>(i)] = {coords[3 * i], coords[3 * i + 1], coords[3 * i + 2]};
    }
    std::size_t begin = 0;
    for (std::size_t c = 0; c < ncells; ++c) {
      const auto end = static_cast<std::size_t>(offsets[c]);
      const int type = static_cast<int>(types[c]);
      if (end < begin || end > conn.size()) throw MeshError("VTU offsets are inconsistent");
      std::vector<long long> v;
      for (std::size_t k = begin; k < end; ++k) v.push_back(static_cast<long long>(conn[k]));
      begin = end;
      if (type == 9 || type == 12 || type == 13 || type == 14) non_tet();
      if (type == 10) {
        if (v.size() != 4) throw MeshError("VTU tetra with wrong node count");
        mb.tets.push_back({v[0], v[1], v[2], v[3]});
      } else if (type == 5) {
        if (v.size() != 3) throw MeshError("VTU triangle with wrong node count");
        if (c < tag_values.size()) {
          if (const auto it = tags.ids.find(static_cast<int>(tag_values[c])); it != tags.ids.end()) {
            mb.tris.push_back({{v[0], v[1], v[2]}, it->second});
          }
        }
      } else if (type != 1 && type != 3) {
        throw MeshError("unsupported VTK cell type " + std::to_string(type));
      }
    }
    return mb.build();
  } catch (const pt::ptree_error& e) {
    throw MeshError(std::string("VTU parse error: ") + e.what());
  }
}

TetMesh import_mesh(const std::string& path, const TagMap& tags) {
  if (!std::filesystem::exists(path)) throw IoError("mesh file not found: " + path);
  const std::string ext = std::filesystem::path(path).extension().string();
  if (ext == ".msh") return read_gmsh(path, tags);
  if (ext == ".vtu") return read_vtu(path, tags);
  throw MeshError("unknown mesh file extension '" + ext + "'");
}

void write_gmsh22(const std::string& path, const TetMesh& mesh) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n";
  out << "$PhysicalNames\n4\n2 1 \"inlet\"\n2 2 \"outlet\"\n2 3 \"wall\"\n3 4 \"fluid\"\n$EndPhysicalNames\n";
  out << "$Nodes\n" << mesh.num_vertices() << "\n" << std::setprecision(17);
  const auto x = mesh.vertices();
  for (std::size_t i = 0; i < x.size(); ++i) out << i + 1 << ' ' << x[i].x << ' ' << x[i].y << ' ' << x[i].z << '\n';
  out << "$EndNodes\n$Elements\n" << mesh.boundary_faces().size() + mesh.num_cells() << "\n";
  std::size_t id = 1;
  for (const auto& f : mesh.boundary_faces()) {
    const int t = static_cast<int>(f.tag);
    out << id++ << " 2 2 " << t << ' ' << t;
    for (int v : f.vertices) out << ' ' << v + 1;
    out << '\n';
  }
  for (const auto& c : mesh.cells()) {
    out << id++ << " 4 2 4 4";
    for (int v : c) out << ' ' << v + 1;
    out << '\n';
  }
  out << "$EndElements\n";
  if (!out) throw IoError("write failed: " + path);
}

void write_vtu(const std::string& path, const TetMesh& mesh, std::span<const VtuField> point_fields,
               std::span<const VtuField> cell_fields, VtuFormat format, bool with_boundary, double time) {
  const std::size_t nv = mesh.num_vertices();
  const std::size_t nt = mesh.num_cells();
  const std::size_t nf = with_boundary ? mesh.boundary_faces().size() : 0;
  const std::size_t nc = nt + nf;

  std::ostringstream os;
  os << "<?xml version=\"1.0\"?>\n"
     << "<VTKFile type=\"UnstructuredGrid\" version=\"1.0\" byte_order=\"LittleEndian\" header_type=\"UInt64\">\n"
     << "  <UnstructuredGrid>\n";
  if (time >= 0.0) {
    os << "    <FieldData>\n";
    write_array(os, "Float64", "TIME", 1, std::vector<double>{time}, VtuFormat::Ascii);
    os << "    </FieldData>\n";
  }
  os << "    <Piece NumberOfPoints=\"" << nv << "\" NumberOfCells=\"" << nc << "\">\n";

  os << "      <PointData>\n";
  for (const auto& f : point_fields) {
    if (f.data.size() != nv * static_cast<std::size_t>(f.components)) {
      throw IoError("point field '" + f.name + "' has the wrong size");
    }
    write_array(os, "Float64", f.name, f.components, std::vector<double>(f.data.begin(), f.data.end()), format);
  }
  os << "      </PointData>\n      <CellData>\n";
  for (const auto& f : cell_fields) {
    if (f.data.size() != nt * static_cast<std::size_t>(f.components)) {
      throw IoError("cell field '" + f.name + "' has the wrong size");
    }
    std::vector<double> v(f.data.begin(), f.data.end());
    v.resize(nc * f.components, 0.0);
    write_array(os, "Float64", f.name, f.components, v, format);
  }
  if (with_boundary) {
    std::vector<std::int32_t> tag(nc, 0);
    for (std::size_t i = 0; i < nf; ++i) tag[nt + i] = static_cast<std::int32_t>(mesh.boundary_faces()[i].tag);
    write_array(os, "Int32", "boundary_tag", 1, tag, format);
  }
  os << "      </CellData>\n      <Points>\n";
  std::vector<double> coords(3 * nv);
  const auto x = mesh.vertices();
  for (std::size_t i = 0; i < nv; ++i) {
    coords[3 * i] = x[i].x;
    coords[3 * i + 1] = x[i].y;
    coords[3 * i + 2] = x[i].z;
  }
  write_array(os, "Float64", "Points", 3, coords, format);
  os << "      </Points>\n      <Cells>\n";
  std::vector<std::int64_t> conn, offsets;
  std::vector<std::uint8_t> types;
  conn.reserve(4 * nt + 3 * nf);
  for (const auto& c : mesh.cells()) {
    conn.insert(conn.end(), c.begin(), c.end());
    offsets.push_back(static_cast<std::int64_t>(conn.size()));
    types.push_back(10);
  }
  for (std::size_t i = 0; i < nf; ++i) {
    const auto& f = mesh.boundary_faces()[i].vertices;
    conn.insert(conn.end(), f.begin(), f.end());
    offsets.push_back(static_cast<std::int64_t>(conn.size()));
    types.push_back(5);
  }
  write_array(os, "Int64", "connectivity", 1, conn, format);
  write_array(os, "Int64", "offsets", 1, offsets, format);
  write_array(os, "UInt8", "types", 1, types, format);
  os << "      </Cells>\n    </Piece>\n  </UnstructuredGrid>\n</VTKFile>\n";

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << os.str();
  if (!out) throw IoError("write failed: " + path);
}

void export_mesh_vtu(const std::string& path, const TetMesh& mesh, VtuFormat format) {
  write_vtu(path, mesh, {}, {}, format, true);
}

}  // namespace ariis
