#include "ac1/io.hpp"

#include "ac1/evaluation.hpp"

#include <json.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace ac1 {

namespace {

[[noreturn]] void parse_fail(int line, const std::string& msg) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + msg);
}

bool parse_int(std::string_view s, long& out) {
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

bool parse_real(const std::string& s, double& out) {
  try {
    size_t used = 0;
    out = std::stod(s, &used);
    return used == s.size();
  } catch (const std::exception&) {
    return false;
  }
}

std::vector<int> parse_int_list(const std::string& text, const std::string& what) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, 'x')) {
    long v = 0;
    if (!parse_int(tok, v)) throw Error(ErrorCode::ParseError, "bad " + what + " '" + text + "'");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

void write_matrix(std::ostream& out, const Eigen::Matrix4d& c, int n) {
  out << '[';
  for (int j = 0; j <= n; ++j)
    for (int k = 0; k <= n; ++k) out << (j || k ? "," : "") << format_double(c(j, k));
  out << ']';
}

std::string quoted(const std::string& s) { return nlohmann::json(s).dump(); }

void write_faces(std::ostream& out, const ExtractionTable& table) {
  out << "  \"faces\": [\n";
  for (size_t f = 0; f < table.faces.size(); ++f) {
    const FaceRecord& rec = table.faces[f];
    out << "    {\"face_id\": " << f << ", \"kind\": \"" << (rec.extraordinary ? "extraordinary" : "regular")
        << "\", \"degree_index\": " << rec.degree_index << ", \"dofs\": [";
    for (size_t i = 0; i < rec.entries.size(); ++i) out << (i ? "," : "") << rec.entries[i].dof;
    out << "], \"matrices\": [";
    for (size_t i = 0; i < rec.entries.size(); ++i) {
      if (i) out << ',';
      write_matrix(out, rec.entries[i].coeffs, rec.degree_index);
    }
    out << "]}" << (f + 1 < table.faces.size() ? "," : "") << '\n';
  }
  out << "  ]";
}

void write_header(std::ostream& out, const ExtractionTable& table) {
  out << "  \"ordering\": \"matrices[i] holds the coefficients of dofs[i]; entry (j,k) sits at j*(n+1)+k, "
         "j along u, k along v, n = degree_index\",\n";
  out << "  \"dofs\": [";
  for (size_t i = 0; i < table.dofs.size(); ++i) out << (i ? "," : "") << quoted(table.dofs[i].str());
  out << "],\n";
}

std::string vec_json(const Vec3& v, int dim) {
  std::string s = "[";
  for (int d = 0; d < dim; ++d) s += (d ? "," : "") + format_double(v[d]);
  return s + "]";
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ObjData read_obj(std::istream& in) {
  std::vector<Vec3> pos;
  std::vector<std::array<long, 4>> raw;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "v") {
      std::string t;
      std::vector<double> c;
      while (ls >> t) {
        double x = 0;
        if (!parse_real(t, x)) parse_fail(lineno, "bad coordinate '" + t + "'");
        c.push_back(x);
      }
      if (c.size() < 2) parse_fail(lineno, "vertex needs at least two coordinates");
      pos.emplace_back(c[0], c[1], c.size() > 2 ? c[2] : 0.0);
    } else if (tag == "f") {
      std::vector<long> idx;
      std::string t;
      while (ls >> t) {
        long v = 0;
        if (!parse_int(std::string_view(t).substr(0, t.find('/')), v) || v == 0)
          parse_fail(lineno, "bad face index '" + t + "'");
        const long n = static_cast<long>(pos.size());
        const long r = v > 0 ? v - 1 : n + v;
        if (r < 0 || r >= n) parse_fail(lineno, "face index out of range '" + t + "'");
        idx.push_back(r);
      }
      if (idx.size() != 4) parse_fail(lineno, "face has " + std::to_string(idx.size()) + " vertices, expected 4");
      raw.push_back({idx[0], idx[1], idx[2], idx[3]});
    }
    // Other records (vt, vn, o, g, s, usemtl, ...) carry no topology and are ignored.
  }
  if (raw.empty()) throw Error(ErrorCode::ParseError, "no quad faces");
  std::vector<int> remap(pos.size(), -1);
  ObjData out;
  for (const auto& q : raw) {
    Quad f{};
    for (int m = 0; m < 4; ++m) {
      int& r = remap[q[m]];
      if (r < 0) {
        r = static_cast<int>(out.positions.size());
        out.positions.push_back(pos[q[m]]);
        out.obj_index.push_back(static_cast<int>(q[m]));
      }
      f[m] = r;
    }
    out.faces.push_back(f);
  }
  return out;
}

Sidecar read_sidecar(std::istream& in) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("sidecar: ") + e.what());
  }
  Sidecar out;
  try {
    if (!j.is_object()) throw Error(ErrorCode::ParseError, "sidecar must be a JSON object");
    if (j.contains("corners"))
      for (const auto& c : j.at("corners")) out.corners.push_back(c.get<int>());
    if (j.contains("normals"))
      for (const auto& [key, val] : j.at("normals").items()) {
        long id = 0;
        if (!parse_int(key, id)) throw Error(ErrorCode::ParseError, "sidecar: bad vertex id '" + key + "'");
        const auto v = val.get<std::vector<double>>();
        if (v.size() != 3) throw Error(ErrorCode::ParseError, "sidecar: normal needs 3 components");
        out.normals[static_cast<int>(id)] = Vec3(v[0], v[1], v[2]);
      }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("sidecar: ") + e.what());
  }
  return out;
}

LoadedMesh load_mesh(const std::string& source, const std::string& sidecar_path) {
  LoadedMesh out;
  out.name = source;
  const auto colon = source.find(':');
  const std::string head = source.substr(0, colon);
  if (head == "disk" && colon != std::string::npos) {
    const auto v = parse_int_list(source.substr(colon + 1), "valence");
    if (v.size() != 1) throw Error(ErrorCode::ParseError, "expected disk:MU");
    out.mesh = std::make_shared<const QuadMesh>(disk_mesh(v[0]));
  } else if (head == "grid" && colon != std::string::npos) {
    const auto v = parse_int_list(source.substr(colon + 1), "grid size");
    if (v.size() != 2) throw Error(ErrorCode::ParseError, "expected grid:NXxNY");
    out.mesh = std::make_shared<const QuadMesh>(grid_mesh(v[0], v[1]));
  } else if (source == "mixed") {
    out.mesh = std::make_shared<const QuadMesh>(mixed_mesh());
  } else {
    std::ifstream in(source);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + source + "'");
    ObjData obj = read_obj(in);
    Sidecar side;
    if (!sidecar_path.empty()) {
      std::ifstream sc(sidecar_path);
      if (!sc) throw Error(ErrorCode::ParseError, "cannot open '" + sidecar_path + "'");
      side = read_sidecar(sc);
    }
    std::map<int, int> obj_to_mesh;
    for (size_t i = 0; i < obj.obj_index.size(); ++i) obj_to_mesh[obj.obj_index[i]] = static_cast<int>(i);
    auto translate = [&](int id) {
      const auto it = obj_to_mesh.find(id - 1);
      if (it == obj_to_mesh.end())
        throw Error(ErrorCode::InvalidArgument, "sidecar vertex " + std::to_string(id) + " is not a mesh vertex");
      return it->second;
    };
    std::vector<int> corners;
    for (int c : side.corners) corners.push_back(translate(c));
    for (const auto& [id, n] : side.normals) out.normals[translate(id)] = n;
    const int nv = static_cast<int>(obj.positions.size());
    out.mesh = std::make_shared<const QuadMesh>(build_mesh(nv, obj.faces, corners, obj.positions));
  }
  return out;
}

void write_obj(std::ostream& out, const QuadMesh& mesh, const std::vector<Vec3>* positions) {
  const std::vector<Vec3>& pos = positions ? *positions : mesh.positions();
  if (static_cast<int>(pos.size()) != mesh.num_vertices())
    throw Error(ErrorCode::InvalidArgument, "mesh has no vertex positions");
  for (const auto& p : pos)
    out << "v " << format_double(p.x()) << ' ' << format_double(p.y()) << ' ' << format_double(p.z()) << '\n';
  for (const auto& q : mesh.faces())
    out << "f " << q[0] + 1 << ' ' << q[1] + 1 << ' ' << q[2] + 1 << ' ' << q[3] + 1 << '\n';
}

std::vector<Vec3> vertex_surface_points(const SplineSpace& space, const Geometry& geometry) {
  const QuadMesh& mesh = space.topo();
  std::vector<Vec3> out(mesh.num_vertices(), Vec3::Zero());
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    const int f = mesh.vertex_faces(v).front();
    const int m = mesh.local_index(f, v);
    out[v] = eval_geometry(space.table, geometry.points, f, anchored_param(m, 0.0, 0.0)).x;
  }
  return out;
}

std::string extraction_json(const ExtractionTable& table) {
  std::ostringstream out;
  out << "{\n";
  write_header(out, table);
  write_faces(out, table);
  out << "\n}\n";
  return out.str();
}

std::string space_json(const SplineSpace& space, const Geometry& geometry) {
  std::ostringstream out;
  out << "{\n";
  write_header(out, space.table);
  out << "  \"mode\": \"" << (space.mode == SpaceMode::Template ? "template" : "geometric") << "\",\n";
  out << "  \"eliminated\": [";
  for (size_t i = 0; i < space.eliminated.size(); ++i) out << (i ? "," : "") << quoted(space.eliminated[i].str());
  out << "],\n";
  out << "  \"control_points\": [";
  for (size_t i = 0; i < geometry.points.size(); ++i) out << (i ? "," : "") << vec_json(geometry.points[i], 3);
  out << "],\n";
  write_faces(out, space.table);
  out << ",\n  \"evs\": [\n";
  for (size_t i = 0; i < space.evs.size(); ++i) {
    const EvData& ev = space.evs[i];
    const auto n = geometry.ev_normals.find(ev.vertex);
    out << "    {\"ev\": " << ev.vertex << ", \"valence\": " << ev.valence
        << ", \"boundary\": " << (ev.boundary ? "true" : "false") << ", \"triangle\": [";
    for (int c = 0; c < 3; ++c)
      out << (c ? "," : "") << '[' << format_double(ev.triangle.v[c].x()) << ','
          << format_double(ev.triangle.v[c].y()) << ']';
    out << "], \"normal\": " << vec_json(n != geometry.ev_normals.end() ? n->second : ev.frame.n, 3) << "}"
        << (i + 1 < space.evs.size() ? "," : "") << '\n';
  }
  out << "  ]\n}\n";
  return out.str();
}

}  // namespace ac1
