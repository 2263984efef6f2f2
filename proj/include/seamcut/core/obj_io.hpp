#pragma once

#include "seamcut/core/mesh.hpp"

#include <charconv>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace seamcut {

class ParseError : public MeshError {
public:
    ParseError(const std::string& msg, int line) : MeshError("line " + std::to_string(line) + ": " + msg) {}
};

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r'))
            ++i;
        size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r')
            ++j;
        if (j > i)
            out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

inline double parse_double(std::string_view tok, int line) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size())
        throw ParseError("malformed number '" + std::string(tok) + "'", line);
    return v;
}

inline long parse_int(std::string_view tok, int line) {
    long v = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size())
        throw ParseError("malformed integer '" + std::string(tok) + "'", line);
    return v;
}

// v, v/vt, v//vn, v/vt/vn
struct ObjCorner {
    long v = 0;
    long vt = 0;  // 0 = absent
};

inline ObjCorner parse_obj_corner(std::string_view tok, int line) {
    ObjCorner c;
    size_t s1 = tok.find('/');
    if (s1 == std::string_view::npos) {
        c.v = parse_int(tok, line);
        return c;
    }
    c.v = parse_int(tok.substr(0, s1), line);
    std::string_view rest = tok.substr(s1 + 1);
    size_t s2 = rest.find('/');
    std::string_view vt_tok = s2 == std::string_view::npos ? rest : rest.substr(0, s2);
    if (!vt_tok.empty())
        c.vt = parse_int(vt_tok, line);
    return c;
}

}  // namespace detail

inline Mesh parse_obj(const std::string& bytes, const std::string& name = "") {
    Mesh mesh;
    mesh.name = name;
    std::vector<Vec2> uvs;
    std::vector<std::array<long, 3>> face_vt;
    bool any_vt_face = false;

    std::istringstream in(bytes);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string_view sv(raw);
        if (auto h = sv.find('#'); h != std::string_view::npos)
            sv = sv.substr(0, h);
        auto toks = detail::split_ws(sv);
        if (toks.empty())
            continue;
        if (toks[0] == "v") {
            if (toks.size() < 4)
                throw ParseError("vertex record needs 3 coordinates", line);
            mesh.vertices.emplace_back(detail::parse_double(toks[1], line),
                                       detail::parse_double(toks[2], line),
                                       detail::parse_double(toks[3], line));
        } else if (toks[0] == "vt") {
            if (toks.size() < 3)
                throw ParseError("vt record needs 2 coordinates", line);
            uvs.emplace_back(detail::parse_double(toks[1], line), detail::parse_double(toks[2], line));
        } else if (toks[0] == "f") {
            if (toks.size() != 4)
                throw ParseError("only triangular faces are supported (got " +
                                     std::to_string(toks.size() - 1) + " corners)",
                                 line);
            std::array<int, 3> tri;
            std::array<long, 3> vt;
            for (int c = 0; c < 3; ++c) {
                auto corner = detail::parse_obj_corner(toks[c + 1], line);
                if (corner.v < 1 || corner.v > static_cast<long>(mesh.vertices.size()))
                    throw ParseError("vertex index out of range", line);
                if (corner.vt < 0 || corner.vt > static_cast<long>(uvs.size()))
                    throw ParseError("texture index out of range", line);
                tri[c] = static_cast<int>(corner.v - 1);
                vt[c] = corner.vt;
                if (corner.vt)
                    any_vt_face = true;
            }
            if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2])
                throw ParseError("repeated vertex in face", line);
            mesh.faces.push_back(tri);
            face_vt.push_back(vt);
        }
        // vn, o, g, s, usemtl, mtllib: ignored
    }
    if (mesh.faces.empty())
        throw MeshError("OBJ has no faces");
    if (any_vt_face) {
        mesh.corner_uvs.resize(mesh.faces.size());
        for (size_t f = 0; f < mesh.faces.size(); ++f)
            for (int c = 0; c < 3; ++c)
                mesh.corner_uvs[f][c] = face_vt[f][c] ? uvs[face_vt[f][c] - 1] : Vec2::Zero();
    }
    build_edges(mesh);
    return mesh;
}

namespace detail {

inline std::string fmt_double(double v) {
    char buf[32];
    int n = std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf, n);
}

}  // namespace detail

/// Writes an OBJ. When `with_uvs` and the mesh carries corner UVs, emits
/// deduplicated `vt` records and `f v/vt` faces, so seams reappear as UV
/// discontinuities on re-parse.
inline std::string write_obj(const Mesh& mesh, bool with_uvs = true) {
    std::string out;
    out.reserve(mesh.vertex_count() * 40 + mesh.face_count() * 24);
    if (!mesh.name.empty())
        out += "o " + mesh.name + "\n";
    for (const auto& p : mesh.vertices)
        out += "v " + detail::fmt_double(p.x()) + " " + detail::fmt_double(p.y()) + " " +
               detail::fmt_double(p.z()) + "\n";

    bool emit_uvs = with_uvs && mesh.has_uvs();
    std::vector<std::array<long, 3>> face_vt;
    if (emit_uvs) {
        face_vt.resize(mesh.faces.size());
        std::map<std::tuple<int, double, double>, long> uv_id;
        std::vector<Vec2> uvs;
        for (int f = 0; f < mesh.face_count(); ++f) {
            for (int c = 0; c < 3; ++c) {
                const Vec2& uv = mesh.corner_uvs[f][c];
                std::tuple<int, double, double> key{mesh.faces[f][c], uv.x(), uv.y()};
                auto [it, inserted] = uv_id.try_emplace(key, static_cast<long>(uvs.size()) + 1);
                if (inserted)
                    uvs.push_back(uv);
                face_vt[f][c] = it->second;
            }
        }
        for (const auto& uv : uvs)
            out += "vt " + detail::fmt_double(uv.x()) + " " + detail::fmt_double(uv.y()) + "\n";
    }
    for (int f = 0; f < mesh.face_count(); ++f) {
        out += 'f';
        for (int c = 0; c < 3; ++c) {
            out += ' ';
            out += std::to_string(mesh.faces[f][c] + 1);
            if (emit_uvs) {
                out += '/';
                out += std::to_string(face_vt[f][c]);
            }
        }
        out += '\n';
    }
    return out;
}

}  // namespace seamcut
