#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "ariis/mesh.hpp"

namespace ariis {

/// Resolution of file-level boundary markers to BoundaryTag. Gmsh physical
/// groups are looked up by name first, then by number; VTU files carry a
/// numeric cell array named `vtu_field`.
struct TagMap {
  std::map<std::string, BoundaryTag> names;
  std::map<int, BoundaryTag> ids;
  std::string vtu_field = "boundary_tag";
};

/// inlet/outlet/wall by name, 1/2/3 by number.
TagMap default_tag_map();

TetMesh read_gmsh(const std::string& path, const TagMap& tags = default_tag_map());
TetMesh read_vtu(const std::string& path, const TagMap& tags = default_tag_map());
/// Dispatches on the extension (.msh or .vtu).
TetMesh import_mesh(const std::string& path, const TagMap& tags = default_tag_map());

/// Gmsh 2.2 ASCII with physical groups 1 inlet, 2 outlet, 3 wall, 4 fluid.
void write_gmsh22(const std::string& path, const TetMesh& mesh);

enum class VtuFormat { Ascii, Binary };

struct VtuField {
  std::string name;
  int components = 1;
  std::span<const double> data;
};

/// Unstructured-grid file of the current coordinates. Point fields have one
/// tuple per vertex, cell fields one per tet. With `with_boundary` the
/// boundary triangles are appended as cells and a `boundary_tag` cell array
/// (0 on tets) is written; cell fields are then padded with zeros.
void write_vtu(const std::string& path, const TetMesh& mesh, std::span<const VtuField> point_fields,
               std::span<const VtuField> cell_fields, VtuFormat format, bool with_boundary = false,
               double time = -1.0);

/// Mesh only, with boundary tags, readable by read_vtu.
void export_mesh_vtu(const std::string& path, const TetMesh& mesh, VtuFormat format = VtuFormat::Binary);

/// base64 helpers used by the binary VTU encoding.
std::string base64_encode(const void* data, std::size_t bytes);
std::vector<unsigned char> base64_decode(const std::string& text);

}  // namespace ariis
