#pragma once

#include "ac1/almost_c1.hpp"

#include <iosfwd>
#include <map>
#include <memory>
#include <string>

namespace ac1 {

// Raw quad OBJ content: positions and 0-based faces, unused vertices removed.
struct ObjData {
  std::vector<Vec3> positions;
  std::vector<Quad> faces;
  std::vector<int> obj_index;  // 0-based OBJ index of each kept vertex
};

// Reads "v" and "f" lines. Face tokens may be "i", "i/t", "i//n" or "i/t/n";
// negative indices count from the end. Faces must have exactly 4 vertices.
ObjData read_obj(std::istream& in);

// Sidecar content: designated corners and per-vertex normals.
struct Sidecar {
  std::vector<int> corners;
  std::map<int, Vec3> normals;
};

Sidecar read_sidecar(std::istream& in);

// A validated mesh plus the normals it came with.
struct LoadedMesh {
  std::shared_ptr<const QuadMesh> mesh;
  std::map<int, Vec3> normals;
  std::string name;
};

// `source` is a file path or a fixture: "disk:MU", "grid:NXxNY", "mixed".
// Sidecar vertex ids refer to the OBJ numbering (1-based, before compaction).
LoadedMesh load_mesh(const std::string& source, const std::string& sidecar_path = "");

// Writes the mesh in the same OBJ dialect; `positions` overrides the mesh positions.
void write_obj(std::ostream& out, const QuadMesh& mesh, const std::vector<Vec3>* positions = nullptr);

// Surface points at the mesh vertices.
std::vector<Vec3> vertex_surface_points(const SplineSpace& space, const Geometry& geometry);

// Extraction table as JSON text (per-face records with row-major matrices).
std::string extraction_json(const ExtractionTable& table);

// Space dump: extraction records plus one record per extraordinary vertex.
std::string space_json(const SplineSpace& space, const Geometry& geometry);

// 17 significant digits.
std::string format_double(double v);

}  // namespace ac1
