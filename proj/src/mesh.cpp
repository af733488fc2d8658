#include "ac1/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>
#include <set>

namespace ac1 {

namespace {

std::vector<int> collect(const std::vector<bool>& flags) {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(flags.size()); ++i)
    if (flags[i]) out.push_back(i);
  return out;
}

std::vector<int> collect_not(const std::vector<bool>& flags) {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(flags.size()); ++i)
    if (!flags[i]) out.push_back(i);
  return out;
}

Quad flipped(const Quad& q) { return {q[0], q[3], q[2], q[1]}; }

Quad anchored(const Quad& q) {
  int m = static_cast<int>(std::min_element(q.begin(), q.end()) - q.begin());
  return {q[m], q[(m + 1) % 4], q[(m + 2) % 4], q[(m + 3) % 4]};
}

struct DisjointSet {
  std::vector<int> parent;
  explicit DisjointSet(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

// Flips faces so that adjacent faces traverse shared edges in opposite directions.
void orient_faces(std::vector<Quad>& faces, const std::vector<Vec3>& positions) {
  const int nf = static_cast<int>(faces.size());
  std::map<std::pair<int, int>, std::vector<int>> edge_faces;
  for (int f = 0; f < nf; ++f)
    for (int m = 0; m < 4; ++m) {
      int a = faces[f][m], b = faces[f][(m + 1) % 4];
      auto& list = edge_faces[{std::min(a, b), std::max(a, b)}];
      list.push_back(f);
      if (list.size() > 2)
        throw Error(ErrorCode::NonManifoldEdge,
                    "edge (" + std::to_string(a) + "," + std::to_string(b) + ") has more than two faces");
    }

  auto traverses = [&](int f, int a, int b) {
    for (int m = 0; m < 4; ++m)
      if (faces[f][m] == a && faces[f][(m + 1) % 4] == b) return true;
    return false;
  };

  std::vector<int> component(nf, -1);
  int ncomp = 0;
  for (int seed = 0; seed < nf; ++seed) {
    if (component[seed] >= 0) continue;
    std::queue<int> queue;
    queue.push(seed);
    component[seed] = ncomp;
    while (!queue.empty()) {
      int f = queue.front();
      queue.pop();
      for (int m = 0; m < 4; ++m) {
        int a = faces[f][m], b = faces[f][(m + 1) % 4];
        for (int g : edge_faces[{std::min(a, b), std::max(a, b)}]) {
          if (g == f) continue;
          if (component[g] < 0) {
            if (traverses(g, a, b)) faces[g] = flipped(faces[g]);
            component[g] = ncomp;
            queue.push(g);
          } else if (traverses(g, a, b)) {
            throw Error(ErrorCode::InconsistentOrientation, "mesh component is not orientable");
          }
        }
      }
    }
    ++ncomp;
  }

  // With positions, make each component counter-clockwise in the xy projection.
  if (positions.empty()) return;
  std::vector<double> area(ncomp, 0.0);
  for (int f = 0; f < nf; ++f) {
    const auto& q = faces[f];
    double a = 0.0;
    for (int m = 0; m < 4; ++m) {
      const Vec3& p = positions[q[m]];
      const Vec3& r = positions[q[(m + 1) % 4]];
      a += p.x() * r.y() - r.x() * p.y();
    }
    area[component[f]] += 0.5 * a;
  }
  for (int f = 0; f < nf; ++f)
    if (area[component[f]] < 0.0) faces[f] = flipped(faces[f]);
}

void check_hanging_nodes(const QuadMesh& mesh) {
  if (!mesh.has_positions()) return;
  const auto& pos = mesh.positions();
  const auto& cls = mesh.classification();
  std::vector<int> bverts = cls.boundary_vertices();
  for (int e : cls.boundary_edges()) {
    const auto& edge = mesh.edge(e);
    const Vec3 a = pos[edge.v0], b = pos[edge.v1];
    const Vec3 d = b - a;
    const double len2 = d.squaredNorm();
    if (len2 == 0.0) continue;
    for (int v : bverts) {
      if (v == edge.v0 || v == edge.v1) continue;
      const Vec3 p = pos[v] - a;
      const double t = p.dot(d) / len2;
      if (t <= 1e-9 || t >= 1.0 - 1e-9) continue;
      if ((p - t * d).squaredNorm() <= 1e-20 * len2)
        throw Error(ErrorCode::HangingNode,
                    "vertex " + std::to_string(v) + " lies inside boundary edge " + std::to_string(e));
    }
  }
}

}  // namespace

std::vector<int> MeshClassification::boundary_vertices() const { return collect(boundary_vertex); }
std::vector<int> MeshClassification::interior_vertices() const { return collect_not(boundary_vertex); }
std::vector<int> MeshClassification::boundary_edges() const { return collect(boundary_edge); }
std::vector<int> MeshClassification::interior_edges() const { return collect_not(boundary_edge); }
std::vector<int> MeshClassification::corner_vertices() const { return collect(corner_vertex); }
std::vector<int> MeshClassification::extraordinary_vertices() const { return collect(extraordinary_vertex); }
std::vector<int> MeshClassification::spoke_edges() const { return collect(spoke_edge); }
std::vector<int> MeshClassification::extraordinary_faces() const { return collect(extraordinary_face); }

int QuadMesh::find_edge(int a, int b) const {
  if (a < 0 || a >= num_vertices()) return -1;
  for (int e : vertex_edges_[a]) {
    const auto& edge = edges_[e];
    if ((edge.v0 == a && edge.v1 == b) || (edge.v0 == b && edge.v1 == a)) return e;
  }
  return -1;
}

int QuadMesh::local_index(int f, int v) const {
  for (int m = 0; m < 4; ++m)
    if (faces_[f][m] == v) return m;
  return -1;
}

int QuadMesh::neighbor(int f, int m) const {
  const auto& edge = edges_[face_edges_[f][m]];
  if (edge.num_faces < 2) return -1;
  return edge.faces[0] == f ? edge.faces[1] : edge.faces[0];
}

QuadMesh build_mesh(int num_vertices, const std::vector<Quad>& input_faces,
                    const std::vector<int>& designated_corners, const std::vector<Vec3>& positions) {
  if (!positions.empty() && static_cast<int>(positions.size()) != num_vertices)
    throw Error(ErrorCode::InvalidArgument, "position count does not match vertex count");
  if (input_faces.empty()) throw Error(ErrorCode::InvalidFace, "mesh has no faces");

  std::vector<Quad> faces = input_faces;
  std::vector<bool> used(num_vertices, false);
  std::set<Quad> seen;
  for (const auto& q : faces) {
    for (int v : q)
      if (v < 0 || v >= num_vertices) throw Error(ErrorCode::InvalidFace, "vertex id out of range");
    Quad sorted = q;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw Error(ErrorCode::InvalidFace, "face repeats a vertex");
    if (!seen.insert(sorted).second) throw Error(ErrorCode::DuplicateFace, "two faces share all four vertices");
    for (int v : q) used[v] = true;
  }
  for (int v = 0; v < num_vertices; ++v)
    if (!used[v]) throw Error(ErrorCode::InvalidFace, "vertex " + std::to_string(v) + " is not used by any face");

  orient_faces(faces, positions);
  for (auto& q : faces) q = anchored(q);

  QuadMesh mesh;
  mesh.faces_ = std::move(faces);
  mesh.positions_ = positions;
  const int nf = mesh.num_faces();
  mesh.face_edges_.assign(nf, {-1, -1, -1, -1});
  mesh.vertex_faces_.assign(num_vertices, {});
  mesh.vertex_edges_.assign(num_vertices, {});

  std::map<std::pair<int, int>, int> edge_id;
  for (int f = 0; f < nf; ++f) {
    for (int m = 0; m < 4; ++m) {
      int a = mesh.faces_[f][m], b = mesh.faces_[f][(m + 1) % 4];
      mesh.vertex_faces_[a].push_back(f);
      auto key = std::make_pair(std::min(a, b), std::max(a, b));
      auto it = edge_id.find(key);
      int e;
      if (it == edge_id.end()) {
        e = static_cast<int>(mesh.edges_.size());
        edge_id.emplace(key, e);
        MeshEdge edge;
        edge.v0 = key.first;
        edge.v1 = key.second;
        mesh.edges_.push_back(edge);
        mesh.vertex_edges_[key.first].push_back(e);
        mesh.vertex_edges_[key.second].push_back(e);
      } else {
        e = it->second;
      }
      auto& edge = mesh.edges_[e];
      edge.faces[edge.num_faces] = f;
      edge.local[edge.num_faces] = m;
      ++edge.num_faces;
      mesh.face_edges_[f][m] = e;
    }
  }

  // Kissing vertices: the faces around each vertex must form one fan through interior edges.
  for (int v = 0; v < num_vertices; ++v) {
    const auto& vf = mesh.vertex_faces_[v];
    DisjointSet ds(static_cast<int>(vf.size()));
    auto slot = [&](int f) { return static_cast<int>(std::find(vf.begin(), vf.end(), f) - vf.begin()); };
    for (int e : mesh.vertex_edges_[v]) {
      const auto& edge = mesh.edges_[e];
      if (edge.num_faces == 2) ds.unite(slot(edge.faces[0]), slot(edge.faces[1]));
    }
    for (int i = 1; i < static_cast<int>(vf.size()); ++i)
      if (ds.find(i) != ds.find(0))
        throw Error(ErrorCode::KissingVertex, "faces around vertex " + std::to_string(v) + " are not connected");
  }

  std::vector<int> corners = designated_corners;
  std::sort(corners.begin(), corners.end());
  corners.erase(std::unique(corners.begin(), corners.end()), corners.end());
  for (int c : corners)
    if (c < 0 || c >= num_vertices) throw Error(ErrorCode::InvalidArgument, "designated corner out of range");
  mesh.designated_corners_ = std::move(corners);
  mesh.cls_ = classify(mesh);
  check_hanging_nodes(mesh);
  return mesh;
}

MeshClassification classify(const QuadMesh& mesh) {
  MeshClassification cls;
  const int nv = mesh.num_vertices(), ne = mesh.num_edges(), nf = mesh.num_faces();
  cls.valence.assign(nv, 0);
  cls.boundary_vertex.assign(nv, false);
  cls.boundary_edge.assign(ne, false);
  cls.corner_vertex.assign(nv, false);
  cls.extraordinary_vertex.assign(nv, false);
  cls.spoke_edge.assign(ne, false);
  cls.extraordinary_face.assign(nf, false);

  for (int v = 0; v < nv; ++v) cls.valence[v] = static_cast<int>(mesh.vertex_faces(v).size());
  for (int e = 0; e < ne; ++e) {
    const auto& edge = mesh.edge(e);
    if (edge.num_faces == 1) {
      cls.boundary_edge[e] = true;
      cls.boundary_vertex[edge.v0] = true;
      cls.boundary_vertex[edge.v1] = true;
    }
  }
  for (int v = 0; v < nv; ++v) {
    if (cls.valence[v] == 1) cls.corner_vertex[v] = true;
    cls.extraordinary_vertex[v] = cls.boundary_vertex[v] ? cls.valence[v] > 2 : cls.valence[v] != 4;
  }
  for (int c : mesh.designated_corners()) {
    if (!cls.boundary_vertex[c])
      throw Error(ErrorCode::DesignatedCornerNotOnBoundary, "vertex " + std::to_string(c) + " is interior");
    cls.corner_vertex[c] = true;
  }
  for (int e = 0; e < ne; ++e) {
    const auto& edge = mesh.edge(e);
    cls.spoke_edge[e] = cls.extraordinary_vertex[edge.v0] || cls.extraordinary_vertex[edge.v1];
  }
  for (int f = 0; f < nf; ++f)
    for (int v : mesh.face(f))
      if (cls.extraordinary_vertex[v]) cls.extraordinary_face[f] = true;
  return cls;
}

std::vector<RingEntry> one_ring(const QuadMesh& mesh, int v) {
  if (v < 0 || v >= mesh.num_vertices()) throw Error(ErrorCode::InvalidArgument, "vertex out of range");
  const auto& vf = mesh.vertex_faces(v);
  const bool boundary = mesh.classification().boundary_vertex[v];
  int start = *std::min_element(vf.begin(), vf.end());
  if (boundary) {
    start = -1;
    for (int f : vf) {
      int m = mesh.local_index(f, v);
      if (mesh.neighbor(f, m) < 0) {
        start = f;
        break;
      }
    }
  }
  std::vector<RingEntry> ring;
  int f = start;
  while (f >= 0) {
    int m = mesh.local_index(f, v);
    ring.push_back({f, m});
    // The next face counter-clockwise lies across the incoming edge (m-1 -> m).
    int next = mesh.neighbor(f, (m + 3) % 4);
    if (next == start || static_cast<int>(ring.size()) > static_cast<int>(vf.size())) break;
    f = next;
  }
  return ring;
}

std::pair<QuadMesh, RefinementMap> refine_topology(const QuadMesh& mesh) {
  const int nv = mesh.num_vertices(), ne = mesh.num_edges(), nf = mesh.num_faces();
  RefinementMap map;
  map.edge_vertex_offset = nv;
  map.face_vertex_offset = nv + ne;
  map.vertex_carry.resize(nv);
  std::iota(map.vertex_carry.begin(), map.vertex_carry.end(), 0);

  std::vector<Vec3> pos;
  if (mesh.has_positions()) {
    pos = mesh.positions();
    for (const auto& edge : mesh.edges()) pos.push_back(0.5 * (mesh.positions()[edge.v0] + mesh.positions()[edge.v1]));
    for (const auto& q : mesh.faces()) {
      Vec3 c = Vec3::Zero();
      for (int v : q) c += mesh.positions()[v];
      pos.push_back(0.25 * c);
    }
  }

  std::vector<Quad> faces;
  faces.reserve(4 * nf);
  for (int f = 0; f < nf; ++f) {
    const auto& q = mesh.face(f);
    const int center = map.face_vertex_offset + f;
    for (int m = 0; m < 4; ++m) {
      int mid_out = map.edge_vertex_offset + mesh.face_edge(f, m);
      int mid_in = map.edge_vertex_offset + mesh.face_edge(f, (m + 3) % 4);
      faces.push_back({q[m], mid_out, center, mid_in});
      map.parent_face.push_back({f, m});
    }
  }
  QuadMesh fine = build_mesh(nv + ne + nf, faces, mesh.designated_corners(), pos);

  map.parent_edge.assign(fine.num_edges(), std::nullopt);
  for (int e = 0; e < ne; ++e) {
    const auto& edge = mesh.edge(e);
    if (edge.num_faces != 1) continue;
    const int f = edge.faces[0], m = edge.local[0];
    const int mid = map.edge_vertex_offset + e;
    const int start = mesh.face(f)[m], end = mesh.face(f)[(m + 1) % 4];
    map.parent_edge[fine.find_edge(start, mid)] = RefinementMap::EdgeParent{e, 0};
    map.parent_edge[fine.find_edge(mid, end)] = RefinementMap::EdgeParent{e, 1};
  }
  return {std::move(fine), std::move(map)};
}

std::pair<int, int> anchored_index(int m, int a, int b, int n) {
  switch (m & 3) {
    case 0: return {a, b};
    case 1: return {n - b, a};
    case 2: return {n - a, n - b};
    default: return {b, n - a};
  }
}

Vec2 anchored_param(int m, double s, double t) {
  switch (m & 3) {
    case 0: return {s, t};
    case 1: return {1.0 - t, s};
    case 2: return {1.0 - s, 1.0 - t};
    default: return {t, 1.0 - s};
  }
}

Vec2 to_anchored_param(int m, const Vec2& xi) {
  switch (m & 3) {
    case 0: return {xi.x(), xi.y()};
    case 1: return {xi.y(), 1.0 - xi.x()};
    case 2: return {1.0 - xi.x(), 1.0 - xi.y()};
    default: return {1.0 - xi.y(), xi.x()};
  }
}

Vec2 edge_param(int m, double t) { return anchored_param(m, t, 0.0); }

Vec2 edge_inward(int m) {
  switch (m & 3) {
    case 0: return {0.0, 1.0};
    case 1: return {-1.0, 0.0};
    case 2: return {0.0, -1.0};
    default: return {1.0, 0.0};
  }
}

Vec2 edge_tangent(int m) {
  switch (m & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

QuadMesh disk_mesh(int mu) {
  if (mu < 3) throw Error(ErrorCode::UnsupportedValence, "disk_mesh needs valence >= 3");
  const double pi = std::acos(-1.0);
  const double outer = 1.0 / std::cos(pi / mu);
  std::vector<Vec3> pos(2 * mu + 1, Vec3::Zero());
  for (int i = 0; i < mu; ++i) {
    const double a = 2.0 * pi * i / mu, b = 2.0 * pi * (i + 0.5) / mu;
    pos[1 + i] = Vec3(std::cos(a), std::sin(a), 0.0);
    pos[1 + mu + i] = Vec3(outer * std::cos(b), outer * std::sin(b), 0.0);
  }
  std::vector<Quad> faces;
  for (int i = 0; i < mu; ++i) faces.push_back({0, 1 + i, 1 + mu + i, 1 + (i + 1) % mu});
  return build_mesh(2 * mu + 1, faces, {}, pos);
}

QuadMesh grid_mesh(int nx, int ny) {
  if (nx < 1 || ny < 1) throw Error(ErrorCode::InvalidArgument, "grid needs at least one face");
  std::vector<Vec3> pos;
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) pos.emplace_back(i, j, 0.0);
  auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  std::vector<Quad> faces;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) faces.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
  return build_mesh(static_cast<int>(pos.size()), faces, {}, pos);
}

QuadMesh split_polygons(const std::vector<Vec3>& points, const std::vector<std::vector<int>>& polygons,
                        const std::vector<int>& designated_corners) {
  std::vector<Vec3> pos = points;
  std::map<std::pair<int, int>, int> midpoint;
  auto mid = [&](int a, int b) {
    auto key = std::make_pair(std::min(a, b), std::max(a, b));
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    int id = static_cast<int>(pos.size());
    pos.push_back(0.5 * (points[a] + points[b]));
    midpoint.emplace(key, id);
    return id;
  };
  std::vector<Quad> faces;
  for (const auto& poly : polygons) {
    const int k = static_cast<int>(poly.size());
    if (k < 3) throw Error(ErrorCode::InvalidFace, "polygon with fewer than three vertices");
    Vec3 c = Vec3::Zero();
    for (int v : poly) c += points[v];
    const int center = static_cast<int>(pos.size());
    pos.push_back(c / k);
    for (int i = 0; i < k; ++i)
      faces.push_back({poly[i], mid(poly[i], poly[(i + 1) % k]), center, mid(poly[(i + k - 1) % k], poly[i])});
  }
  return build_mesh(static_cast<int>(pos.size()), faces, designated_corners, pos);
}

QuadMesh mixed_mesh() {
  const std::vector<Vec3> pts = {
      {0.0, 0.0, 0.0},    // 0: shared by all three polygons, on the boundary
      {1.0, 0.0, 0.0},    // 1
      {0.5, 0.866, 0.0},  // 2
      {-0.5, 0.866, 0.0}, // 3
      {-1.0, 0.0, 0.0},   // 4
      {0.0, 1.6, 0.0},    // 5
      {1.6, 0.6, 0.0},    // 6
      {1.2, 1.5, 0.0},    // 7
  };
  const std::vector<std::vector<int>> polys = {{0, 3, 4}, {0, 2, 5, 3}, {0, 1, 6, 7, 2}};
  return split_polygons(pts, polys);
}

}  // namespace ac1
